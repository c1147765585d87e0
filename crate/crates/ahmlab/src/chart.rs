//! Real coordinate charts: domains, points and evaluable vector fields.
//!
//! All geometry in this crate is chart-local. A chart is a region of R^{2n}
//! together with a membership test; fields are plain closures on points and
//! are assumed C^3 on the chart interior.

use std::fmt;
use std::sync::Arc;

use nalgebra::DVector;
use num_complex::Complex64 as C64;

use crate::error::{GeomError, Result};
use crate::fd::{checked_stencil, FdConfig};

/// A point in chart coordinates.
pub type Point = DVector<f64>;

pub type CVec = DVector<C64>;

/// Chart domain: where fields may be evaluated.
#[derive(Debug, Clone)]
pub enum Domain {
    /// All of R^dim (periodic structures).
    All,
    /// Axis-aligned open box.
    Box { lo: Vec<f64>, hi: Vec<f64> },
    /// Open ball of given radius around the origin.
    Ball { radius: f64 },
    /// Open spherical shell around the origin.
    Shell { inner: f64, outer: f64 },
}

impl Domain {
    pub fn contains(&self, p: &Point) -> bool {
        match self {
            Domain::All => true,
            Domain::Box { lo, hi } => p
                .iter()
                .enumerate()
                .all(|(i, &x)| x > lo[i] && x < hi[i]),
            Domain::Ball { radius } => p.norm() < *radius,
            Domain::Shell { inner, outer } => {
                let r = p.norm();
                r > *inner && r < *outer
            }
        }
    }
}

/// A coordinate chart of even real dimension.
#[derive(Clone)]
pub struct Chart {
    pub dim: usize,
    pub domain: Domain,
    pub label: String,
}

impl fmt::Debug for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Chart({}, dim {})", self.label, self.dim)
    }
}

impl Chart {
    pub fn new(label: &str, dim: usize, domain: Domain) -> Self {
        assert!(dim >= 2 && dim % 2 == 0, "chart dimension must be even and >= 2");
        Chart {
            dim,
            domain,
            label: label.to_string(),
        }
    }

    pub fn boxed(label: &str, dim: usize, lo: Vec<f64>, hi: Vec<f64>) -> Self {
        Chart::new(label, dim, Domain::Box { lo, hi })
    }

    pub fn contains(&self, p: &Point) -> bool {
        p.len() == self.dim && self.domain.contains(p)
    }

    /// Half the complex dimension, n = dim / 2.
    pub fn half_dim(&self) -> usize {
        self.dim / 2
    }
}

/// A real vector field given by its coordinate components.
#[derive(Clone)]
pub struct RealVectorField {
    f: Arc<dyn Fn(&Point) -> DVector<f64> + Send + Sync>,
}

impl RealVectorField {
    pub fn new<F: Fn(&Point) -> DVector<f64> + Send + Sync + 'static>(f: F) -> Self {
        RealVectorField { f: Arc::new(f) }
    }

    /// The a-th coordinate field.
    pub fn coordinate(dim: usize, a: usize) -> Self {
        RealVectorField::new(move |_p| {
            let mut v = DVector::zeros(dim);
            v[a] = 1.0;
            v
        })
    }

    pub fn eval(&self, p: &Point) -> DVector<f64> {
        (self.f)(p)
    }

    pub fn complexified(&self) -> ComplexVectorField {
        let f = self.f.clone();
        ComplexVectorField::new(move |p| f(p).map(|x| C64::new(x, 0.0)))
    }
}

/// A complexified vector field (section of TM (x) C in coordinate components).
#[derive(Clone)]
pub struct ComplexVectorField {
    f: Arc<dyn Fn(&Point) -> CVec + Send + Sync>,
}

impl ComplexVectorField {
    pub fn new<F: Fn(&Point) -> CVec + Send + Sync + 'static>(f: F) -> Self {
        ComplexVectorField { f: Arc::new(f) }
    }

    pub fn constant(v: CVec) -> Self {
        ComplexVectorField::new(move |_| v.clone())
    }

    pub fn eval(&self, p: &Point) -> CVec {
        (self.f)(p)
    }
}

/// Lie bracket [X,Y]^k = X^a d_a Y^k - Y^a d_a X^k of real fields.
pub fn lie_bracket(
    x: &RealVectorField,
    y: &RealVectorField,
    chart: &Chart,
    p: &Point,
    cfg: &FdConfig,
) -> Result<DVector<f64>> {
    let xv = x.eval(p);
    let yv = y.eval(p);
    if xv.len() != chart.dim || yv.len() != chart.dim {
        return Err(GeomError::DimensionMismatch {
            expected: chart.dim,
            got: xv.len().max(yv.len()),
        });
    }
    let mut out = DVector::zeros(chart.dim);
    let h = cfg.step;
    let stencil = cfg.stencil(h);
    for a in 0..chart.dim {
        checked_stencil(chart, p, a, h, &stencil)?;
        let mut dy = DVector::zeros(chart.dim);
        let mut dx = DVector::zeros(chart.dim);
        for &(off, w) in &stencil {
            let mut q = p.clone();
            q[a] += off * h;
            dy += y.eval(&q) * w;
            dx += x.eval(&q) * w;
        }
        out += dy * xv[a] - dx * yv[a];
    }
    Ok(out)
}

/// Lie bracket of complexified fields (complex-bilinear extension).
pub fn lie_bracket_c(
    x: &ComplexVectorField,
    y: &ComplexVectorField,
    chart: &Chart,
    p: &Point,
    cfg: &FdConfig,
) -> Result<CVec> {
    let xv = x.eval(p);
    let yv = y.eval(p);
    let mut out = CVec::zeros(chart.dim);
    let h = cfg.step;
    let stencil = cfg.stencil(h);
    for a in 0..chart.dim {
        checked_stencil(chart, p, a, h, &stencil)?;
        let mut dy = CVec::zeros(chart.dim);
        let mut dx = CVec::zeros(chart.dim);
        for &(off, w) in &stencil {
            let mut q = p.clone();
            q[a] += off * h;
            dy += y.eval(&q) * C64::new(w, 0.0);
            dx += x.eval(&q) * C64::new(w, 0.0);
        }
        out += dy * xv[a] - dx * yv[a];
    }
    Ok(out)
}
