//! Smooth local unitary (1,0)-frames.
//!
//! A frame field is determined by a fixed list of n seed vectors per chart
//! region: at every point the seeds are projected to their (1,0) parts and
//! orthonormalized by complex Gram-Schmidt with respect to the Hermitian
//! pairing g_C(u, conj v). Fixing the seeds (rather than re-seeding per
//! point) makes the map p -> e_i(p) a C^2 function wherever the pivots stay
//! above the degeneracy threshold, which is what lets us differentiate frame
//! components numerically.

use num_complex::Complex64 as C64;

use crate::chart::{ComplexVectorField, CVec, Point};
use crate::error::{GeomError, Result};
use crate::structure::{AlmostHermitian, CMat};

pub const PIVOT_THRESHOLD: f64 = 1e-8;

/// A unitary (1,0)-frame field: J e_i = i e_i and g_C(e_i, conj e_j) = delta.
#[derive(Clone)]
pub struct UnitaryFrame {
    structure: AlmostHermitian,
    seeds: Vec<CVec>,
}

impl UnitaryFrame {
    /// Frame from an explicit seed basis (n complexified tangent vectors).
    pub fn from_seeds(structure: AlmostHermitian, seeds: Vec<CVec>) -> Self {
        assert_eq!(seeds.len(), structure.half_dim(), "need n seed vectors");
        UnitaryFrame { structure, seeds }
    }

    /// Default seed basis: the first n coordinate directions.
    pub fn standard(structure: AlmostHermitian) -> Self {
        let dim = structure.dim();
        let n = structure.half_dim();
        let seeds = (0..n)
            .map(|k| {
                let mut v = CVec::zeros(dim);
                v[k] = C64::new(1.0, 0.0);
                v
            })
            .collect();
        UnitaryFrame { structure, seeds }
    }

    pub fn structure(&self) -> &AlmostHermitian {
        &self.structure
    }

    pub fn seeds(&self) -> &[CVec] {
        &self.seeds
    }

    /// Evaluate the full complexified basis at a point: a 2n x 2n matrix
    /// whose columns are (e_1, ..., e_n, conj e_1, ..., conj e_n).
    pub fn basis_at(&self, p: &Point) -> Result<CMat> {
        let dim = self.structure.dim();
        let n = dim / 2;
        let g = self.structure.g_at(p);
        let j = self.structure.j_at(p);

        // h(u, v) = u^T G conj(v): Hermitian inner product on (1,0) vectors.
        let herm = |u: &CVec, v: &CVec| -> C64 {
            let mut acc = C64::new(0.0, 0.0);
            for a in 0..dim {
                for b in 0..dim {
                    acc += u[a] * C64::new(g[(a, b)], 0.0) * v[b].conj();
                }
            }
            acc
        };

        let project = |v: &CVec| -> CVec {
            // (v - i J v)/2
            let mut jv = CVec::zeros(dim);
            for a in 0..dim {
                let mut acc = C64::new(0.0, 0.0);
                for b in 0..dim {
                    acc += C64::new(j[(a, b)], 0.0) * v[b];
                }
                jv[a] = acc;
            }
            (v - jv * C64::new(0.0, 1.0)) * C64::new(0.5, 0.0)
        };

        let mut frame: Vec<CVec> = Vec::with_capacity(n);
        for (index, seed) in self.seeds.iter().enumerate() {
            let mut w = project(seed);
            // Two Gram-Schmidt passes keep unitarity at machine precision.
            for _ in 0..2 {
                for e in &frame {
                    let c = herm(&w, e);
                    w -= e * c;
                }
            }
            let norm2 = herm(&w, &w).re;
            let pivot = norm2.max(0.0).sqrt();
            if pivot < PIVOT_THRESHOLD {
                return Err(GeomError::DegenerateSeed {
                    index,
                    pivot,
                    threshold: PIVOT_THRESHOLD,
                });
            }
            w /= C64::new(pivot, 0.0);
            frame.push(w);
        }

        let mut basis = CMat::zeros(dim, dim);
        for (k, e) in frame.iter().enumerate() {
            for a in 0..dim {
                basis[(a, k)] = e[a];
                basis[(a, n + k)] = e[a].conj();
            }
        }
        Ok(basis)
    }

    /// The frame column A as a complexified vector field (for brackets).
    pub fn field(&self, index: usize) -> ComplexVectorField {
        let frame = self.clone();
        ComplexVectorField::new(move |q: &Point| {
            let b = frame
                .basis_at(q)
                .expect("frame evaluation inside a stencil failed");
            b.column(index).into_owned()
        })
    }

    /// Pairings lower(w)[A] = g_C(w, e_A) against every basis column at p.
    pub fn lower(&self, p: &Point, basis: &CMat, w: &CVec) -> CVec {
        let g = self.structure.g_at(p);
        let dim = w.len();
        let mut gw = CVec::zeros(dim);
        for a in 0..dim {
            let mut acc = C64::new(0.0, 0.0);
            for b in 0..dim {
                acc += C64::new(g[(a, b)], 0.0) * w[b];
            }
            gw[a] = acc;
        }
        let mut out = CVec::zeros(dim);
        for col in 0..dim {
            let mut acc = C64::new(0.0, 0.0);
            for a in 0..dim {
                acc += basis[(a, col)] * gw[a];
            }
            out[col] = acc;
        }
        out
    }

    /// Frame components of w: w = sum_A comp[A] e_A.
    /// In a unitary frame comp[A] = lower(w)[bar(A)].
    pub fn components(&self, p: &Point, basis: &CMat, w: &CVec) -> CVec {
        let lowered = self.lower(p, basis, w);
        let dim = w.len();
        let n = dim / 2;
        let mut out = CVec::zeros(dim);
        for a in 0..dim {
            out[a] = lowered[(a + n) % dim];
        }
        out
    }

    /// Max unitarity residual max_{ij} |g_C(e_i, conj e_j) - delta_ij| at p.
    pub fn unitarity_residual(&self, p: &Point) -> Result<f64> {
        let basis = self.basis_at(p)?;
        let n = self.structure.half_dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            let ei = basis.column(i).into_owned();
            for j in 0..n {
                let ej_bar = basis.column(n + j).into_owned();
                let v = self.structure.pair(p, &ei, &ej_bar);
                let expect = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((v - C64::new(expect, 0.0)).norm());
            }
        }
        Ok(worst)
    }
}

/// Conjugate index: bar(i) = i + n mod 2n.
#[inline]
pub fn bar(a: usize, n: usize) -> usize {
    (a + n) % (2 * n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DVector;
    use crate::chart::Chart;
    use crate::structure::{standard_j, RMat};

    fn flat(n: usize) -> AlmostHermitian {
        let dim = 2 * n;
        let chart = Chart::boxed("flat", dim, vec![-2.0; dim], vec![2.0; dim]);
        let j0 = standard_j(n);
        AlmostHermitian::new(chart, move |_| j0.clone(), move |_| RMat::identity(dim, dim))
    }

    #[test]
    fn flat_frame_is_standard() {
        let s = flat(2);
        let f = UnitaryFrame::standard(s);
        let p = DVector::zeros(4);
        let b = f.basis_at(&p).unwrap();
        // e_k = (dx_k - i dy_k)/sqrt(2)
        let r = 1.0 / 2.0f64.sqrt();
        assert!((b[(0, 0)] - C64::new(r, 0.0)).norm() < 1e-14);
        assert!((b[(2, 0)] - C64::new(0.0, -r)).norm() < 1e-14);
        assert!((b[(1, 1)] - C64::new(r, 0.0)).norm() < 1e-14);
        assert!((b[(3, 1)] - C64::new(0.0, -r)).norm() < 1e-14);
    }

    #[test]
    fn frame_is_unitary_and_type_pure() {
        let s = flat(3);
        let f = UnitaryFrame::standard(s.clone());
        let p = DVector::from_vec(vec![0.1, 0.2, 0.3, -0.1, -0.2, -0.3]);
        assert!(f.unitarity_residual(&p).unwrap() < 1e-12);
        let b = f.basis_at(&p).unwrap();
        // J e_i = i e_i
        let j = s.j_at(&p);
        for k in 0..3 {
            let e = b.column(k).into_owned();
            let mut je = CVec::zeros(6);
            for a in 0..6 {
                for c in 0..6 {
                    je[a] += C64::new(j[(a, c)], 0.0) * e[c];
                }
            }
            assert!((je - e * C64::new(0.0, 1.0)).norm() < 1e-13);
        }
    }

    #[test]
    fn degenerate_seed_is_reported() {
        let s = flat(1);
        // Seed in the (0,1) span: dx + i dy has zero (1,0) part.
        let mut seed = CVec::zeros(2);
        seed[0] = C64::new(1.0, 0.0);
        seed[1] = C64::new(0.0, 1.0);
        let f = UnitaryFrame::from_seeds(s, vec![seed]);
        let p = DVector::zeros(2);
        match f.basis_at(&p) {
            Err(GeomError::DegenerateSeed { index: 0, .. }) => {}
            other => panic!("expected degenerate seed error, got {other:?}"),
        }
    }

    #[test]
    fn components_roundtrip() {
        let s = flat(2);
        let f = UnitaryFrame::standard(s);
        let p = DVector::zeros(4);
        let b = f.basis_at(&p).unwrap();
        let mut w = CVec::zeros(4);
        w[0] = C64::new(0.3, -0.2);
        w[1] = C64::new(1.0, 0.5);
        w[2] = C64::new(-0.4, 0.0);
        w[3] = C64::new(0.0, 2.0);
        let comp = f.components(&p, &b, &w);
        let mut back = CVec::zeros(4);
        for a in 0..4 {
            back += b.column(a) * comp[a];
        }
        assert!((back - w).norm() < 1e-13);
    }
}
