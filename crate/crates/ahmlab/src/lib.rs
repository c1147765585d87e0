//! ahmlab — numerical tensor calculus on chart-described almost Hermitian
//! manifolds.
//!
//! The crate builds the canonical (Chern-type) and Levi-Civita connections
//! of an almost Hermitian structure in a smooth unitary (1,0)-frame, computes
//! torsion, curvature, their covariant derivatives and Ricci contractions by
//! nested finite differences, classifies structures into the generalized
//! Kaehler hierarchy, and verifies a catalog of curvature identities as
//! tolerance-checked residuals over a built-in zoo of example manifolds.
//!
//! Entry points:
//! * [`zoo`] — built-in structures (`flat_cn`, `round_s2`, `s6_nearly_kahler`,
//!   `hopf_surface`, `random_torus`);
//! * [`tables::Engine`] — per-point connection/curvature tables;
//! * [`classify::classify`] — generalized-Kaehler classification;
//! * [`suite::run_suite`] — the identity suite;
//! * [`report`] — JSON/CSV/human serialization and the dual-path crosscheck.
//!
//! See the `examples/` directory for one runnable example per capability.

pub mod chart;
pub mod classify;
pub mod connection;
pub mod covariant;
pub mod error;
pub mod fd;
pub mod frame;
pub mod identities;
pub mod report;
pub mod structure;
pub mod suite;
pub mod tables;
pub mod zoo;

pub use chart::{Chart, ComplexVectorField, Domain, Point, RealVectorField};
pub use classify::{classify, ClassificationReport, Label};
pub use connection::ConnectionKind;
pub use error::{GeomError, Result};
pub use fd::{FdConfig, Scheme};
pub use frame::UnitaryFrame;
pub use structure::{check_structure, nijenhuis, type_decompose, AlmostHermitian};
pub use suite::{run_suite, Selection, SuiteReport};
pub use tables::Engine;
