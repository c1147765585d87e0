//! Almost Hermitian structures on a chart: an almost complex structure J and
//! a compatible Riemannian metric g, both given as evaluable matrix fields,
//! plus the pointwise diagnostics that validate them.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::chart::{
    lie_bracket_c, Chart, ComplexVectorField, CVec, Point, RealVectorField,
};
use crate::error::Result;
use crate::fd::FdConfig;

pub type RMat = DMatrix<f64>;
pub type CMat = DMatrix<C64>;

/// A chart together with J and g fields.
#[derive(Clone)]
pub struct AlmostHermitian {
    pub chart: Chart,
    j: Arc<dyn Fn(&Point) -> RMat + Send + Sync>,
    g: Arc<dyn Fn(&Point) -> RMat + Send + Sync>,
    /// Optional label describing the expected class of a zoo entry.
    pub expected_class: Option<String>,
}

impl AlmostHermitian {
    pub fn new<J, G>(chart: Chart, j: J, g: G) -> Self
    where
        J: Fn(&Point) -> RMat + Send + Sync + 'static,
        G: Fn(&Point) -> RMat + Send + Sync + 'static,
    {
        AlmostHermitian {
            chart,
            j: Arc::new(j),
            g: Arc::new(g),
            expected_class: None,
        }
    }

    pub fn j_at(&self, p: &Point) -> RMat {
        (self.j)(p)
    }

    pub fn g_at(&self, p: &Point) -> RMat {
        (self.g)(p)
    }

    pub fn dim(&self) -> usize {
        self.chart.dim
    }

    /// Complex dimension n.
    pub fn half_dim(&self) -> usize {
        self.chart.dim / 2
    }

    /// The metric extended complex-bilinearly: g_C(u, v) = u^T G v.
    pub fn pair(&self, p: &Point, u: &CVec, v: &CVec) -> C64 {
        let g = self.g_at(p);
        let mut acc = C64::new(0.0, 0.0);
        for a in 0..u.len() {
            for b in 0..v.len() {
                acc += u[a] * C64::new(g[(a, b)], 0.0) * v[b];
            }
        }
        acc
    }

    /// Fundamental 2-form omega(X, Y) = g(JX, Y) at a point.
    pub fn fundamental_form(&self, p: &Point, x: &DVector<f64>, y: &DVector<f64>) -> f64 {
        let jx = self.j_at(p) * x;
        (jx.transpose() * self.g_at(p) * y)[(0, 0)]
    }
}

/// Residuals of the defining conditions of an almost Hermitian structure.
#[derive(Debug, Clone, Serialize)]
pub struct StructureDiagnostics {
    /// max |(J^2 + I)_{ab}|
    pub j_squared: f64,
    /// max |(g - g^T)_{ab}|
    pub g_symmetry: f64,
    /// Smallest eigenvalue of g (must be positive).
    pub spd_margin: f64,
    /// max |(J^T g J - g)_{ab}|
    pub compatibility: f64,
    pub pass: bool,
}

/// Evaluate all structure residuals at a point.
pub fn check_structure(s: &AlmostHermitian, p: &Point, tol: f64) -> StructureDiagnostics {
    let dim = s.dim();
    let j = s.j_at(p);
    let g = s.g_at(p);

    let jj = &j * &j + RMat::identity(dim, dim);
    let j_squared = jj.iter().fold(0.0f64, |m, x| m.max(x.abs()));

    let sym = &g - g.transpose();
    let g_symmetry = sym.iter().fold(0.0f64, |m, x| m.max(x.abs()));

    let gs = (&g + g.transpose()) * 0.5;
    let spd_margin = gs
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .fold(f64::INFINITY, |m, &x| m.min(x));

    let comp = j.transpose() * &g * &j - &g;
    let compatibility = comp.iter().fold(0.0f64, |m, x| m.max(x.abs()));

    let spd_defect = (-spd_margin).max(0.0);
    let pass = j_squared < tol && g_symmetry < tol && compatibility < tol && spd_defect < tol
        && spd_margin > 0.0;

    StructureDiagnostics {
        j_squared,
        g_symmetry,
        spd_margin,
        compatibility,
        pass,
    }
}

/// Split a complexified tangent vector into its (1,0) and (0,1) parts:
/// v10 = (v - i J v)/2, v01 = (v + i J v)/2.
pub fn type_decompose(s: &AlmostHermitian, p: &Point, v: &CVec) -> (CVec, CVec) {
    let j = s.j_at(p);
    let mut jv = CVec::zeros(v.len());
    for a in 0..v.len() {
        let mut acc = C64::new(0.0, 0.0);
        for b in 0..v.len() {
            acc += C64::new(j[(a, b)], 0.0) * v[b];
        }
        jv[a] = acc;
    }
    let i = C64::new(0.0, 1.0);
    let half = C64::new(0.5, 0.0);
    let v10 = (v - jv.clone() * i) * half;
    let v01 = (v + jv * i) * half;
    (v10, v01)
}

/// Nijenhuis tensor N(X,Y) = [JX,JY] - J[JX,Y] - J[X,JY] - [X,Y] on real fields.
pub fn nijenhuis(
    s: &AlmostHermitian,
    x: &RealVectorField,
    y: &RealVectorField,
    p: &Point,
    cfg: &FdConfig,
) -> Result<DVector<f64>> {
    let cx = x.complexified();
    let cy = y.complexified();
    let n = nijenhuis_c(s, &cx, &cy, p, cfg)?;
    Ok(n.map(|z| z.re))
}

/// Complex-bilinear Nijenhuis tensor on complexified fields.
pub fn nijenhuis_c(
    s: &AlmostHermitian,
    x: &ComplexVectorField,
    y: &ComplexVectorField,
    p: &Point,
    cfg: &FdConfig,
) -> Result<CVec> {
    let apply_j = |f: &ComplexVectorField| -> ComplexVectorField {
        let f = f.clone();
        let s = s.clone();
        ComplexVectorField::new(move |q: &Point| {
            let j = s.j_at(q);
            let v = f.eval(q);
            let mut out = CVec::zeros(v.len());
            for a in 0..v.len() {
                let mut acc = C64::new(0.0, 0.0);
                for b in 0..v.len() {
                    acc += C64::new(j[(a, b)], 0.0) * v[b];
                }
                out[a] = acc;
            }
            out
        })
    };
    let jx = apply_j(x);
    let jy = apply_j(y);
    let chart = &s.chart;

    let b_jxjy = lie_bracket_c(&jx, &jy, chart, p, cfg)?;
    let b_jxy = lie_bracket_c(&jx, y, chart, p, cfg)?;
    let b_xjy = lie_bracket_c(x, &jy, chart, p, cfg)?;
    let b_xy = lie_bracket_c(x, y, chart, p, cfg)?;

    let jp = s.j_at(p);
    let mul_j = |v: &CVec| -> CVec {
        let mut out = CVec::zeros(v.len());
        for a in 0..v.len() {
            let mut acc = C64::new(0.0, 0.0);
            for b in 0..v.len() {
                acc += C64::new(jp[(a, b)], 0.0) * v[b];
            }
            out[a] = acc;
        }
        out
    };

    Ok(b_jxjy - mul_j(&b_jxy) - mul_j(&b_xjy) - b_xy)
}

/// Standard flat structure on R^{2n} with coordinates (x_1..x_n, y_1..y_n):
/// J x_k = y_k, g = identity.
pub fn standard_j(n: usize) -> RMat {
    let mut j = RMat::zeros(2 * n, 2 * n);
    for k in 0..n {
        j[(n + k, k)] = 1.0;
        j[(k, n + k)] = -1.0;
    }
    j
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::Chart;

    fn flat(n: usize) -> AlmostHermitian {
        let dim = 2 * n;
        let chart = Chart::boxed("flat", dim, vec![-2.0; dim], vec![2.0; dim]);
        let j0 = standard_j(n);
        AlmostHermitian::new(chart, move |_| j0.clone(), move |_| RMat::identity(dim, dim))
    }

    #[test]
    fn flat_structure_is_clean() {
        let s = flat(2);
        let p = DVector::from_vec(vec![0.1, 0.2, -0.1, 0.3]);
        let d = check_structure(&s, &p, 1e-12);
        assert!(d.pass, "{d:?}");
        assert!(d.j_squared < 1e-14);
        assert!(d.g_symmetry < 1e-14);
        assert!(d.compatibility < 1e-14);
        assert!((d.spd_margin - 1.0).abs() < 1e-14);
    }

    #[test]
    fn scaled_j_fails_with_expected_residual() {
        let n = 2;
        let dim = 2 * n;
        let chart = Chart::boxed("bad", dim, vec![-2.0; dim], vec![2.0; dim]);
        let j0 = standard_j(n) * 1.01;
        let s = AlmostHermitian::new(chart, move |_| j0.clone(), move |_| RMat::identity(dim, dim));
        let p = DVector::zeros(dim);
        let d = check_structure(&s, &p, 1e-6);
        assert!(!d.pass);
        // (1.01)^2 - 1 = 0.0201
        assert!((d.j_squared - 0.0201).abs() < 1e-10, "{}", d.j_squared);
    }

    #[test]
    fn type_decompose_flat() {
        let s = flat(1);
        let p = DVector::zeros(2);
        let mut v = CVec::zeros(2);
        v[0] = C64::new(1.0, 0.0); // dx_1
        let (v10, v01) = type_decompose(&s, &p, &v);
        // v10 = (dx_1 - i dy_1)/2
        assert!((v10[0] - C64::new(0.5, 0.0)).norm() < 1e-15);
        assert!((v10[1] - C64::new(0.0, -0.5)).norm() < 1e-15);
        assert!((v10.clone() + v01 - v).norm() < 1e-15);
    }

    #[test]
    fn type_decompose_idempotent() {
        let s = flat(2);
        let p = DVector::zeros(4);
        let mut v = CVec::zeros(4);
        v[0] = C64::new(0.3, 0.4);
        v[2] = C64::new(-1.0, 0.2);
        let (v10, _) = type_decompose(&s, &p, &v);
        let (w10, w01) = type_decompose(&s, &p, &v10);
        assert!((w10 - v10).norm() < 1e-14);
        assert!(w01.norm() < 1e-14);
    }

    #[test]
    fn fundamental_form_flat_and_antisymmetric() {
        let s = flat(1);
        let p = DVector::zeros(2);
        let dx = DVector::from_vec(vec![1.0, 0.0]);
        let dy = DVector::from_vec(vec![0.0, 1.0]);
        // J dx = dy, so omega(dx, dy) = g(dy, dy) = 1.
        assert!((s.fundamental_form(&p, &dx, &dy) - 1.0).abs() < 1e-14);
        // omega(X, X) = 0 by compatibility antisymmetry.
        let x = DVector::from_vec(vec![0.7, -0.4]);
        assert!(s.fundamental_form(&p, &x, &x).abs() < 1e-14);
    }

    #[test]
    fn nijenhuis_vanishes_on_flat() {
        let s = flat(2);
        let p = DVector::from_vec(vec![0.1, -0.2, 0.3, 0.0]);
        let x = RealVectorField::new(|q: &Point| {
            DVector::from_vec(vec![q[0] * q[1], q[2], q[3] * q[3], 1.0])
        });
        let y = RealVectorField::new(|q: &Point| {
            DVector::from_vec(vec![q[1], q[0] * q[0], 0.5, q[2] * q[0]])
        });
        let n = nijenhuis(&s, &x, &y, &p, &FdConfig::default()).unwrap();
        assert!(n.norm() < 1e-9, "N = {n:?}");
    }

    #[test]
    fn nijenhuis_depends_only_on_pointwise_values() {
        // Two extensions of the same tangent vectors at p give the same N(p)
        // up to discretization error.
        let s = flat(2);
        let p = DVector::from_vec(vec![0.2, 0.1, -0.1, 0.4]);
        let cfg = FdConfig::with_base_step(1e-3);
        let x1 = RealVectorField::new(|_q: &Point| DVector::from_vec(vec![1.0, 2.0, 0.5, -1.0]));
        let p0 = p.clone();
        let x2 = RealVectorField::new(move |q: &Point| {
            // same value at p, different first derivatives
            let d = q - &p0;
            DVector::from_vec(vec![
                1.0 + d[0] * 3.0,
                2.0 - d[1],
                0.5 + d[2] * d[2] + d[1],
                -1.0 + d[3] * 2.0,
            ])
        });
        let y = RealVectorField::new(|q: &Point| {
            DVector::from_vec(vec![q[1], -q[0], q[3] * q[2], 0.3])
        });
        let n1 = nijenhuis(&s, &x1, &y, &p, &cfg).unwrap();
        let n2 = nijenhuis(&s, &x2, &y, &p, &cfg).unwrap();
        assert!(
            (n1 - n2).norm() < 10.0 * cfg.step * cfg.step,
            "tensoriality violated"
        );
    }
}
