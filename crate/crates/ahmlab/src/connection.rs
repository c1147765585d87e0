//! Connection coefficients in a unitary frame.
//!
//! Two connections are built from the same per-point stencil data:
//!
//! * the Levi-Civita connection, through the Koszul formula evaluated on
//!   complexified frame fields;
//! * the canonical connection, assembled in closed form from its defining
//!   conditions: type preservation, vanishing (1,1)-torsion, and metric
//!   compatibility along (1,0) directions. Building it from the definition
//!   (rather than as a torsion correction of Levi-Civita) keeps the two
//!   constructions independent, so their comparison identities are genuine
//!   cross-checks.
//!
//! Indices run over the complexified frame basis (e_1..e_n, conj e_1..conj
//! e_n) with barred indices stored at n..2n. Coefficients are stored as
//! gamma[[c, b, a]] = Gamma^a_{cb}, i.e. nabla_{e_c} e_b = Gamma^a_{cb} e_a.

use ndarray::{Array3, Array4};
use num_complex::Complex64 as C64;

use crate::chart::{CVec, Point};
use crate::error::Result;
use crate::fd::{checked_stencil, FdConfig};
use crate::frame::{bar, UnitaryFrame};
use crate::structure::{AlmostHermitian, CMat};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConnectionKind {
    LeviCivita,
    Canonical,
}

/// Frame, metric and their first derivatives at a point.
pub struct StencilData {
    /// Basis columns at p (2n x 2n).
    pub basis: CMat,
    /// Gram matrix gram[(a,b)] = g_C(e_a, e_b) at p.
    pub gram: CMat,
    /// Coordinate partials of the basis, one matrix per axis.
    pub dbasis: Vec<CMat>,
    /// Coordinate partials of the Gram matrix, one per axis.
    pub dgram: Vec<CMat>,
    /// Metric at p, complexified.
    pub metric: CMat,
}

impl StencilData {
    /// Directional derivative of the Gram entry (y,z) along frame column c.
    pub fn dgram_along(&self, c: usize, y: usize, z: usize) -> C64 {
        let dim = self.basis.nrows();
        let mut acc = C64::new(0.0, 0.0);
        for a in 0..dim {
            acc += self.basis[(a, c)] * self.dgram[a][(y, z)];
        }
        acc
    }

    /// Coordinate components of [e_c, e_d] at p.
    pub fn bracket(&self, c: usize, d: usize) -> CVec {
        let dim = self.basis.nrows();
        let mut out = CVec::zeros(dim);
        for a in 0..dim {
            let xc = self.basis[(a, c)];
            let xd = self.basis[(a, d)];
            for k in 0..dim {
                out[k] += xc * self.dbasis[a][(k, d)] - xd * self.dbasis[a][(k, c)];
            }
        }
        out
    }

    /// Pairing g_C(w, e_z) for a coordinate-space vector w.
    pub fn lower(&self, w: &CVec, z: usize) -> C64 {
        let dim = self.basis.nrows();
        let mut acc = C64::new(0.0, 0.0);
        for a in 0..dim {
            for b in 0..dim {
                acc += w[a] * self.metric[(a, b)] * self.basis[(b, z)];
            }
        }
        acc
    }
}

/// Connection coefficients and bracket components at one point.
pub struct ConnectionAt {
    pub kind: ConnectionKind,
    /// gamma[[c, b, a]] = Gamma^a_{cb}.
    pub gamma: Array3<C64>,
    /// bracket_comp[[c, d, e]]: frame components of [e_c, e_d].
    pub bracket_comp: Array3<C64>,
    /// bracket_lower[[c, d, a]] = g_C([e_c, e_d], e_a).
    pub bracket_lower: Array3<C64>,
    pub basis: CMat,
}

impl ConnectionAt {
    /// Torsion components tau[[c, d, a]] = tau^a_{cd}
    /// from tau(e_c, e_d) = nabla_c e_d - nabla_d e_c - [e_c, e_d].
    pub fn torsion(&self) -> Array3<C64> {
        let dim = self.basis.nrows();
        let mut tau = Array3::zeros((dim, dim, dim));
        for c in 0..dim {
            for d in 0..dim {
                for a in 0..dim {
                    tau[[c, d, a]] = self.gamma[[c, d, a]]
                        - self.gamma[[d, c, a]]
                        - self.bracket_comp[[c, d, a]];
                }
            }
        }
        tau
    }
}

/// Collect frame/metric stencil data at p using the first-level step.
pub fn stencil_data(
    s: &AlmostHermitian,
    frame: &UnitaryFrame,
    cfg: &FdConfig,
    p: &Point,
) -> Result<StencilData> {
    let dim = s.dim();
    let h = cfg.step;
    let st = cfg.stencil(h);

    let basis = frame.basis_at(p)?;
    let g_re = s.g_at(p);
    let mut metric = CMat::zeros(dim, dim);
    for a in 0..dim {
        for b in 0..dim {
            metric[(a, b)] = C64::new(g_re[(a, b)], 0.0);
        }
    }
    let gram_of = |b: &CMat, gm: &CMat| -> CMat { b.transpose() * gm * b };
    let gram = gram_of(&basis, &metric);

    let mut dbasis = Vec::with_capacity(dim);
    let mut dgram = Vec::with_capacity(dim);
    for axis in 0..dim {
        checked_stencil(&s.chart, p, axis, h, &st)?;
        let mut db = CMat::zeros(dim, dim);
        let mut dgm = CMat::zeros(dim, dim);
        for &(off, w) in &st {
            let mut q = p.clone();
            q[axis] += off * h;
            let bq = frame.basis_at(&q)?;
            let gq_re = s.g_at(&q);
            let mut gq = CMat::zeros(dim, dim);
            for a in 0..dim {
                for b in 0..dim {
                    gq[(a, b)] = C64::new(gq_re[(a, b)], 0.0);
                }
            }
            let gramq = gram_of(&bq, &gq);
            let wc = C64::new(w, 0.0);
            db += bq * wc;
            dgm += gramq * wc;
        }
        dbasis.push(db);
        dgram.push(dgm);
    }

    Ok(StencilData {
        basis,
        gram,
        dbasis,
        dgram,
        metric,
    })
}

/// Assemble connection coefficients from stencil data.
pub fn gamma_from_stencil(kind: ConnectionKind, data: &StencilData, n: usize) -> ConnectionAt {
    let dim = 2 * n;

    // All pairwise brackets and their pairings/components.
    let mut bracket_lower = Array3::<C64>::zeros((dim, dim, dim));
    let mut bracket_comp = Array3::<C64>::zeros((dim, dim, dim));
    for c in 0..dim {
        for d in 0..dim {
            if d < c {
                for a in 0..dim {
                    bracket_lower[[c, d, a]] = -bracket_lower[[d, c, a]];
                    bracket_comp[[c, d, a]] = -bracket_comp[[d, c, a]];
                }
                continue;
            }
            let br = data.bracket(c, d);
            for a in 0..dim {
                bracket_lower[[c, d, a]] = data.lower(&br, a);
            }
            for a in 0..dim {
                bracket_comp[[c, d, a]] = bracket_lower[[c, d, bar(a, n)]];
            }
        }
    }

    let mut gamma = Array3::<C64>::zeros((dim, dim, dim));
    match kind {
        ConnectionKind::LeviCivita => {
            // 2 <D_{e_c} e_b, e_a> = e_c<e_b,e_a> + e_b<e_c,e_a> - e_a<e_c,e_b>
            //   + <[e_c,e_b],e_a> - <[e_c,e_a],e_b> - <[e_b,e_a],e_c>
            for c in 0..dim {
                for b in 0..dim {
                    for a_low in 0..dim {
                        let k = data.dgram_along(c, b, a_low)
                            + data.dgram_along(b, c, a_low)
                            - data.dgram_along(a_low, c, b)
                            + bracket_lower[[c, b, a_low]]
                            - bracket_lower[[c, a_low, b]]
                            - bracket_lower[[b, a_low, c]];
                        // raised index a with <e_a, e_{bar a}> = 1
                        gamma[[c, b, bar(a_low, n)]] = k * C64::new(0.5, 0.0);
                    }
                }
            }
        }
        ConnectionKind::Canonical => {
            for k in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        // metric compatibility along e_k with (b): nabla_{e_k} conj e_j = [e_k, conj e_j]^{(0,1)}
                        gamma[[k, i, j]] =
                            data.dgram_along(k, i, n + j) - bracket_lower[[k, n + j, i]];
                        // (1,1)-torsion = 0: nabla_{conj e_k} e_i = -[e_i, conj e_k]^{(1,0)}
                        gamma[[n + k, i, j]] = -bracket_lower[[i, n + k, n + j]];
                        // conjugates
                        gamma[[k, n + i, n + j]] = bracket_lower[[k, n + i, j]];
                    }
                }
            }
            for k in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        gamma[[n + k, n + i, n + j]] = gamma[[k, i, j]].conj();
                    }
                }
            }
            // Type-mixing coefficients stay exactly zero.
        }
    }

    ConnectionAt {
        kind,
        gamma,
        bracket_comp,
        bracket_lower,
        basis: data.basis.clone(),
    }
}

/// Residual diagnostics for a connection at a point.
pub struct ConnectionResiduals {
    /// max |nabla g| component over all frame directions.
    pub metric_compat: f64,
    /// Levi-Civita: max torsion component. Canonical: max mixed (1,1) torsion.
    pub torsion_defect: f64,
}

pub fn connection_residuals(data: &StencilData, conn: &ConnectionAt, n: usize) -> ConnectionResiduals {
    let dim = 2 * n;
    let mut metric_compat = 0.0f64;
    for c in 0..dim {
        for a in 0..dim {
            for b in 0..dim {
                let mut v = data.dgram_along(c, a, b);
                for e in 0..dim {
                    v -= conn.gamma[[c, a, e]] * data.gram[(e, b)];
                    v -= conn.gamma[[c, b, e]] * data.gram[(a, e)];
                }
                metric_compat = metric_compat.max(v.norm());
            }
        }
    }

    let tau = conn.torsion();
    let mut torsion_defect = 0.0f64;
    match conn.kind {
        ConnectionKind::LeviCivita => {
            for x in tau.iter() {
                torsion_defect = torsion_defect.max(x.norm());
            }
        }
        ConnectionKind::Canonical => {
            // mixed-type arguments only
            for i in 0..n {
                for j in 0..n {
                    for a in 0..dim {
                        torsion_defect = torsion_defect.max(tau[[i, n + j, a]].norm());
                    }
                }
            }
        }
    }

    ConnectionResiduals {
        metric_compat,
        torsion_defect,
    }
}

/// Curvature components R_{abcd} = <R(e_c,e_d) e_a, e_b> from the
/// coefficient field: derivative of Gamma plus Gamma*Gamma plus bracket term.
pub fn curvature_from(
    conn: &ConnectionAt,
    dgamma_dir: &Array4<C64>, // dgamma_dir[[e, c, b, a]] = e_e(Gamma^a_{cb})
    n: usize,
) -> Array4<C64> {
    let dim = 2 * n;
    let mut r = Array4::<C64>::zeros((dim, dim, dim, dim));
    for b_low in 0..dim {
        for c in 0..dim {
            for d in 0..dim {
                for a_raised in 0..dim {
                    // coefficient of e_{a_raised} in R(e_c, e_d) e_{b_low}
                    let mut v = dgamma_dir[[c, d, b_low, a_raised]]
                        - dgamma_dir[[d, c, b_low, a_raised]];
                    for e in 0..dim {
                        v += conn.gamma[[d, b_low, e]] * conn.gamma[[c, e, a_raised]]
                            - conn.gamma[[c, b_low, e]] * conn.gamma[[d, e, a_raised]]
                            - conn.bracket_comp[[c, d, e]] * conn.gamma[[e, b_low, a_raised]];
                    }
                    // lower: R_{a, bar(a_raised), c, d} entry
                    r[[b_low, bar(a_raised, n), c, d]] = v;
                }
            }
        }
    }
    r
}
