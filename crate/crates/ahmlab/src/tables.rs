//! Per-point geometry tables: torsion, curvature, their covariant
//! derivatives, and the Ricci/scalar contractions, for both connections.
//!
//! Derivative levels: connection coefficients differentiate metric/frame
//! data at `cfg.step`; curvature and nabla-tau differentiate the coefficient
//! field at `cfg.step_second`; nabla-R differentiates the curvature field at
//! `cfg.step_third` with a 4th-order stencil.

use ndarray::{Array3, Array4, Array5};
use num_complex::Complex64 as C64;

use crate::chart::Point;
use crate::connection::{
    curvature_from, gamma_from_stencil, stencil_data, ConnectionAt, ConnectionKind,
};
use crate::error::Result;
use crate::fd::FdConfig;
use crate::frame::{bar, UnitaryFrame};
use crate::structure::{AlmostHermitian, CMat};

/// Evaluation engine binding a structure, a frame field and an FD config.
#[derive(Clone)]
pub struct Engine {
    pub structure: AlmostHermitian,
    pub frame: UnitaryFrame,
    pub cfg: FdConfig,
}

/// Ricci and scalar contractions of both curvature tables.
#[derive(Debug, Clone)]
pub struct RicciScalarTable {
    /// First Ricci of the canonical connection, R'_{AB} (2n x 2n).
    pub ricci_first: CMat,
    /// Second Ricci R''_{i jbar} (n x n).
    pub ricci_second: CMat,
    /// Complex Ricci of Levi-Civita, R^L_{i jbar} (n x n).
    pub ricci_lc_complex: CMat,
    /// Holomorphic Ricci of Levi-Civita, R^L_{ij} (n x n).
    pub ricci_lc_holo: CMat,
    /// Canonical scalar curvature S^c.
    pub s_canonical: C64,
    /// Star-scalar curvature S^* of Levi-Civita.
    pub s_star: C64,
}

/// Everything the identity suite needs at one point.
pub struct PointTables {
    pub n: usize,
    pub point: Point,
    pub basis: CMat,
    /// Canonical torsion, raised components tau[[c,d,a]] = tau^a_{cd}.
    pub torsion: Option<Array3<C64>>,
    /// Covariant torsion derivatives dtau[[c,d,a,e]] = tau^a_{cd;e}.
    pub torsion_derivs: Option<Array4<C64>>,
    /// Canonical curvature R_{abcd}.
    pub curv_canonical: Option<Array4<C64>>,
    /// Levi-Civita curvature R^L_{abcd}.
    pub curv_lc: Option<Array4<C64>>,
    /// Covariant curvature derivatives dr[[a,b,c,d,e]] = R_{abcd;e} (canonical).
    pub curv_canonical_derivs: Option<Array5<C64>>,
    pub ricci: Option<RicciScalarTable>,
}

impl Engine {
    pub fn new(structure: AlmostHermitian, frame: UnitaryFrame, cfg: FdConfig) -> Self {
        Engine {
            structure,
            frame,
            cfg,
        }
    }

    pub fn dim(&self) -> usize {
        self.structure.dim()
    }

    pub fn half_dim(&self) -> usize {
        self.structure.half_dim()
    }

    /// Connection coefficients at a point.
    pub fn connection_at(&self, kind: ConnectionKind, p: &Point) -> Result<ConnectionAt> {
        let data = stencil_data(&self.structure, &self.frame, &self.cfg, p)?;
        Ok(gamma_from_stencil(kind, &data, self.half_dim()))
    }

    /// Torsion table at a point.
    pub fn torsion_at(&self, kind: ConnectionKind, p: &Point) -> Result<Array3<C64>> {
        Ok(self.connection_at(kind, p)?.torsion())
    }

    /// Coefficient-field and torsion-field derivatives along every axis at
    /// the second level, plus the center connection.
    fn second_level(
        &self,
        kind: ConnectionKind,
        p: &Point,
    ) -> Result<(ConnectionAt, Array4<C64>, Array4<C64>)> {
        let dim = self.dim();
        let h = self.cfg.step_second;
        let st = self.cfg.stencil(h);

        let center = self.connection_at(kind, p)?;

        // dgamma_ax[[axis; c,b,a]], dtau_ax likewise.
        let mut dgamma_ax = vec![Array3::<C64>::zeros((dim, dim, dim)); dim];
        let mut dtau_ax = vec![Array3::<C64>::zeros((dim, dim, dim)); dim];
        for axis in 0..dim {
            for &(off, w) in &st {
                let mut q = p.clone();
                q[axis] += off * h;
                let conn_q = self.connection_at(kind, &q)?;
                let tau_q = conn_q.torsion();
                let wc = C64::new(w, 0.0);
                for c in 0..dim {
                    for b in 0..dim {
                        for a in 0..dim {
                            dgamma_ax[axis][[c, b, a]] += conn_q.gamma[[c, b, a]] * wc;
                            dtau_ax[axis][[c, b, a]] += tau_q[[c, b, a]] * wc;
                        }
                    }
                }
            }
        }

        // Contract coordinate partials with frame directions:
        // dgamma_dir[[e, c, b, a]] = e_e(Gamma^a_{cb}).
        let mut dgamma_dir = Array4::<C64>::zeros((dim, dim, dim, dim));
        let mut dtau_dir = Array4::<C64>::zeros((dim, dim, dim, dim));
        for e in 0..dim {
            for axis in 0..dim {
                let coeff = center.basis[(axis, e)];
                for c in 0..dim {
                    for b in 0..dim {
                        for a in 0..dim {
                            dgamma_dir[[e, c, b, a]] += coeff * dgamma_ax[axis][[c, b, a]];
                            dtau_dir[[e, c, b, a]] += coeff * dtau_ax[axis][[c, b, a]];
                        }
                    }
                }
            }
        }

        Ok((center, dgamma_dir, dtau_dir))
    }

    /// Full curvature table R_{abcd} at a point.
    pub fn curvature_at(&self, kind: ConnectionKind, p: &Point) -> Result<Array4<C64>> {
        let (center, dgamma_dir, _) = self.second_level(kind, p)?;
        Ok(curvature_from(&center, &dgamma_dir, self.half_dim()))
    }

    /// Covariant torsion derivatives tau^a_{cd;e} for the canonical connection.
    pub fn torsion_derivatives_at(&self, p: &Point) -> Result<Array4<C64>> {
        let (center, _, dtau_dir) = self.second_level(ConnectionKind::Canonical, p)?;
        Ok(covariant_tau(&center, &dtau_dir, self.half_dim()))
    }

    /// Curvature and covariant torsion derivatives in one pass (shares the
    /// second-level stencil).
    pub fn curvature_and_torsion_derivs(
        &self,
        kind: ConnectionKind,
        p: &Point,
    ) -> Result<(Array4<C64>, Array3<C64>, Array4<C64>, ConnectionAt)> {
        let (center, dgamma_dir, dtau_dir) = self.second_level(kind, p)?;
        let n = self.half_dim();
        let r = curvature_from(&center, &dgamma_dir, n);
        let tau = center.torsion();
        let dtau = covariant_tau(&center, &dtau_dir, n);
        Ok((r, tau, dtau, center))
    }

    /// Covariant curvature derivatives R_{abcd;e}.
    pub fn curvature_derivatives_at(
        &self,
        kind: ConnectionKind,
        p: &Point,
    ) -> Result<Array5<C64>> {
        let dim = self.dim();
        let st = self.cfg.stencil_third();
        let h = self.cfg.step_third;

        let center = self.connection_at(kind, p)?;
        let r_center = self.curvature_at(kind, p)?;

        // The differenced curvature field is evaluated with widened inner
        // steps; the lower-level rounding noise would otherwise be amplified
        // by 1/step_third right up to the tolerance.
        let inner = Engine {
            structure: self.structure.clone(),
            frame: self.frame.clone(),
            cfg: self.cfg.third_level_inner(),
        };
        let mut dr_ax = vec![Array4::<C64>::zeros((dim, dim, dim, dim)); dim];
        for axis in 0..dim {
            for &(off, w) in &st {
                let mut q = p.clone();
                q[axis] += off * h;
                let rq = inner.curvature_at(kind, &q)?;
                let wc = C64::new(w, 0.0);
                dr_ax[axis].zip_mut_with(&rq, |acc, &val| *acc += val * wc);
            }
        }

        let mut dr = Array5::<C64>::zeros((dim, dim, dim, dim, dim));
        for e in 0..dim {
            // e_e(R_{abcd})
            let mut dir = Array4::<C64>::zeros((dim, dim, dim, dim));
            for axis in 0..dim {
                let coeff = center.basis[(axis, e)];
                dir.zip_mut_with(&dr_ax[axis], |acc, &val| *acc += val * coeff);
            }
            for a in 0..dim {
                for b in 0..dim {
                    for c in 0..dim {
                        for d in 0..dim {
                            let mut v = dir[[a, b, c, d]];
                            for f in 0..dim {
                                v -= center.gamma[[e, a, f]] * r_center[[f, b, c, d]];
                                v -= center.gamma[[e, b, f]] * r_center[[a, f, c, d]];
                                v -= center.gamma[[e, c, f]] * r_center[[a, b, f, d]];
                                v -= center.gamma[[e, d, f]] * r_center[[a, b, c, f]];
                            }
                            dr[[a, b, c, d, e]] = v;
                        }
                    }
                }
            }
        }
        Ok(dr)
    }

    /// Ricci and scalar contractions from both curvature tables.
    pub fn ricci_from(&self, r_can: &Array4<C64>, r_lc: &Array4<C64>) -> RicciScalarTable {
        let n = self.half_dim();
        let dim = 2 * n;

        let mut ricci_first = CMat::zeros(dim, dim);
        for a in 0..dim {
            for b in 0..dim {
                let mut acc = C64::new(0.0, 0.0);
                for l in 0..n {
                    acc += r_can[[l, n + l, a, b]];
                }
                ricci_first[(a, b)] = acc;
            }
        }

        let mut ricci_second = CMat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = C64::new(0.0, 0.0);
                for l in 0..n {
                    acc += r_can[[i, n + j, l, n + l]];
                }
                ricci_second[(i, j)] = acc;
            }
        }

        let mut ricci_lc_complex = CMat::zeros(n, n);
        let mut ricci_lc_holo = CMat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let mut acc_c = C64::new(0.0, 0.0);
                let mut acc_h = C64::new(0.0, 0.0);
                for l in 0..n {
                    acc_c += r_lc[[l, i, n + j, n + l]] + r_lc[[n + l, i, n + j, l]];
                    acc_h += r_lc[[l, i, j, n + l]] + r_lc[[n + l, i, j, l]];
                }
                ricci_lc_complex[(i, j)] = acc_c;
                ricci_lc_holo[(i, j)] = acc_h;
            }
        }

        let mut s_canonical = C64::new(0.0, 0.0);
        let mut s_star = C64::new(0.0, 0.0);
        for l in 0..n {
            for m in 0..n {
                s_canonical += r_can[[l, n + l, m, n + m]];
                s_star += r_lc[[l, n + l, m, n + m]];
            }
        }

        RicciScalarTable {
            ricci_first,
            ricci_second,
            ricci_lc_complex,
            ricci_lc_holo,
            s_canonical,
            s_star,
        }
    }

    /// Compute every table the identity suite can consume at one point.
    pub fn tables_at(&self, p: &Point) -> Result<PointTables> {
        let (r_can, tau, dtau, center) =
            self.curvature_and_torsion_derivs(ConnectionKind::Canonical, p)?;
        let r_lc = self.curvature_at(ConnectionKind::LeviCivita, p)?;
        let dr_can = self.curvature_derivatives_at(ConnectionKind::Canonical, p)?;
        let ricci = self.ricci_from(&r_can, &r_lc);
        Ok(PointTables {
            n: self.half_dim(),
            point: p.clone(),
            basis: center.basis,
            torsion: Some(tau),
            torsion_derivs: Some(dtau),
            curv_canonical: Some(r_can),
            curv_lc: Some(r_lc),
            curv_canonical_derivs: Some(dr_can),
            ricci: Some(ricci),
        })
    }
}

/// Covariant derivative of the torsion tensor:
/// tau^a_{cd;e} = e_e(tau^a_{cd}) + Gamma^a_{ef} tau^f_{cd}
///             - Gamma^f_{ec} tau^a_{fd} - Gamma^f_{ed} tau^a_{cf}.
fn covariant_tau(center: &ConnectionAt, dtau_dir: &Array4<C64>, n: usize) -> Array4<C64> {
    let dim = 2 * n;
    let tau = center.torsion();
    let mut out = Array4::<C64>::zeros((dim, dim, dim, dim));
    for c in 0..dim {
        for d in 0..dim {
            for a in 0..dim {
                for e in 0..dim {
                    let mut v = dtau_dir[[e, c, d, a]];
                    for f in 0..dim {
                        v += center.gamma[[e, f, a]] * tau[[c, d, f]];
                        v -= center.gamma[[e, c, f]] * tau[[f, d, a]];
                        v -= center.gamma[[e, d, f]] * tau[[c, f, a]];
                    }
                    out[[c, d, a, e]] = v;
                }
            }
        }
    }
    out
}

/// max |x| over an array of complex entries.
pub fn max_abs<D: ndarray::Dimension>(arr: &ndarray::Array<C64, D>) -> f64 {
    arr.iter().fold(0.0f64, |m, x| m.max(x.norm()))
}

/// bar() re-export for table consumers.
pub fn conj_index(a: usize, n: usize) -> usize {
    bar(a, n)
}
