//! Generalized-Kaehler classification from torsion residuals.
//!
//! Each class is decided by the pointwise vanishing of specific torsion
//! components of the canonical connection, aggregated with per-point AND:
//! one bad point fails a label. A strictness flag separates clear failures
//! (residual above 10x tolerance) from numerically ambiguous ones.

use ndarray::Array3;
use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::chart::Point;
use crate::connection::ConnectionKind;
use crate::error::{GeomError, Result};
use crate::structure::check_structure;
use crate::tables::Engine;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Kahler,
    Hermitian,
    Quasi,
    Almost,
    Nearly,
}

impl Label {
    pub fn all() -> [Label; 5] {
        [
            Label::Kahler,
            Label::Hermitian,
            Label::Quasi,
            Label::Almost,
            Label::Nearly,
        ]
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Label::Kahler => "kahler",
            Label::Hermitian => "hermitian",
            Label::Quasi => "quasi",
            Label::Almost => "almost",
            Label::Nearly => "nearly",
        }
    }
}

/// Per-criterion residuals, maximized over sample points.
#[derive(Debug, Clone, Serialize)]
pub struct ClassResiduals {
    /// max |tau_{ij}^{kbar}| — vanishes iff Hermitian.
    pub hermitian: f64,
    /// max over all torsion components — vanishes iff Kaehler.
    pub kahler: f64,
    /// max |tau_{ij}^k| — vanishes iff quasi-Kaehler.
    pub quasi: f64,
    /// max cyclic sum |tau_{ij}^{kbar} + tau_{ki}^{jbar} + tau_{jk}^{ibar}|.
    pub almost_cyclic: f64,
    /// max |tau_{ij}^{kbar} - tau_{jk}^{ibar}|.
    pub nearly_sym: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassificationReport {
    pub residuals: ClassResiduals,
    /// Labels whose residuals pass at tolerance on every point.
    pub labels: Vec<Label>,
    /// Labels failing clearly (residual > 10 * tol).
    pub strict_failures: Vec<Label>,
    /// Labels in the ambiguous band [tol, 10*tol).
    pub inconclusive: Vec<Label>,
    pub tolerance: f64,
    pub sample_count: usize,
}

impl ClassificationReport {
    pub fn passes(&self, label: Label) -> bool {
        self.labels.contains(&label)
    }

    /// Strictly non-Kaehler: the Kaehler residual fails decisively.
    pub fn strictly_non_kahler(&self) -> bool {
        self.strict_failures.contains(&Label::Kahler)
    }
}

/// Residuals of one torsion table.
pub fn residuals_from_torsion(tau: &Array3<C64>, n: usize) -> ClassResiduals {
    let mut hermitian = 0.0f64;
    let mut kahler = 0.0f64;
    let mut quasi = 0.0f64;
    let mut almost_cyclic = 0.0f64;
    let mut nearly_sym = 0.0f64;

    for x in tau.iter() {
        kahler = kahler.max(x.norm());
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let t_anti = tau[[i, j, n + k]];
                let t_hol = tau[[i, j, k]];
                hermitian = hermitian.max(t_anti.norm());
                quasi = quasi.max(t_hol.norm());
                let cyc = tau[[i, j, n + k]] + tau[[k, i, n + j]] + tau[[j, k, n + i]];
                almost_cyclic = almost_cyclic.max(cyc.norm());
                let nk = tau[[i, j, n + k]] - tau[[j, k, n + i]];
                nearly_sym = nearly_sym.max(nk.norm());
            }
        }
    }

    ClassResiduals {
        hermitian,
        kahler,
        quasi,
        almost_cyclic,
        nearly_sym,
    }
}

/// Classify a structure from canonical-torsion residuals at sample points.
pub fn classify(engine: &Engine, points: &[Point], tol: f64) -> Result<ClassificationReport> {
    if points.is_empty() {
        return Err(GeomError::BadParameter(
            "classification needs at least one sample point".into(),
        ));
    }
    let n = engine.half_dim();
    let mut acc: Option<ClassResiduals> = None;
    for p in points {
        let diag = check_structure(&engine.structure, p, 1e-8);
        if !diag.pass {
            return Err(GeomError::InvalidStructure {
                point: p.iter().copied().collect(),
                detail: format!("{diag:?}"),
            });
        }
        let tau = engine.torsion_at(ConnectionKind::Canonical, p)?;
        let r = residuals_from_torsion(&tau, n);
        acc = Some(match acc {
            None => r,
            Some(a) => ClassResiduals {
                hermitian: a.hermitian.max(r.hermitian),
                kahler: a.kahler.max(r.kahler),
                quasi: a.quasi.max(r.quasi),
                almost_cyclic: a.almost_cyclic.max(r.almost_cyclic),
                nearly_sym: a.nearly_sym.max(r.nearly_sym),
            },
        });
    }
    let res = acc.unwrap();

    // Label criteria. Monotonicity (Kaehler implies everything) holds
    // structurally: the Kaehler residual dominates every other residual.
    let label_residual = |label: Label| -> f64 {
        match label {
            Label::Kahler => res.kahler,
            Label::Hermitian => res.hermitian,
            Label::Quasi => res.quasi,
            Label::Almost => res.quasi.max(res.almost_cyclic),
            Label::Nearly => res.quasi.max(res.nearly_sym),
        }
    };

    let mut labels = Vec::new();
    let mut strict_failures = Vec::new();
    let mut inconclusive = Vec::new();
    for label in Label::all() {
        let r = label_residual(label);
        if r < tol {
            labels.push(label);
        } else if r > 10.0 * tol {
            strict_failures.push(label);
        } else {
            inconclusive.push(label);
        }
    }
    // Kaehler implies every other class; make the hierarchy structural.
    if labels.contains(&Label::Kahler) {
        labels = Label::all().to_vec();
        strict_failures.clear();
        inconclusive.clear();
    }

    Ok(ClassificationReport {
        residuals: res,
        labels,
        strict_failures,
        inconclusive,
        tolerance: tol,
        sample_count: points.len(),
    })
}
