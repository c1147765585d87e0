//! Finite-difference stencils for scalar and vector fields on chart domains.
//!
//! Everything downstream (connection coefficients, curvature, covariant
//! derivatives) is built by differentiating black-box fields, so the step
//! sizes here set the accuracy budget of the whole pipeline. First
//! derivatives of the metric and frame use `step`; quantities obtained by
//! differentiating those (curvature, covariant torsion derivatives) use
//! `step_second`; a third level (`step_third`, always a wide 4th-order
//! stencil) is used for curvature derivatives. Keeping each level roughly an
//! order of magnitude above the one below it stops floating-point noise from
//! being amplified through the nesting.

use serde::{Deserialize, Serialize};

use crate::chart::{Chart, Point};
use crate::error::{GeomError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    /// 2-point central difference, O(h^2).
    Central2,
    /// 4-point central difference, O(h^4).
    Central4,
}

/// Finite-difference configuration shared by the whole pipeline.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct FdConfig {
    /// Base step for first derivatives of metric, frame and brackets.
    pub step: f64,
    pub scheme: Scheme,
    /// Richardson-extrapolate the base scheme (promotes Central2 to O(h^4)).
    pub richardson: bool,
    /// Step for derivatives of connection-level quantities (curvature, nabla-tau).
    pub step_second: f64,
    /// Step for derivatives of curvature-level quantities (nabla-R).
    pub step_third: f64,
}

impl Default for FdConfig {
    fn default() -> Self {
        FdConfig {
            step: 1e-5,
            scheme: Scheme::Central2,
            richardson: false,
            step_second: 1e-4,
            step_third: 5e-4,
        }
    }
}

impl FdConfig {
    /// Config with all three levels scaled from a base step, keeping the
    /// default 1 : 10 : 50 ratios.
    pub fn with_base_step(step: f64) -> Self {
        FdConfig {
            step,
            step_second: 10.0 * step,
            step_third: 50.0 * step,
            ..FdConfig::default()
        }
    }

    /// High-accuracy variant: 4th-order stencils with steps sized so that
    /// rounding amplification through two nesting levels stays near 1e-9.
    pub fn high_accuracy() -> Self {
        FdConfig {
            step: 3e-4,
            scheme: Scheme::Central4,
            richardson: false,
            step_second: 3e-3,
            step_third: 1.5e-2,
        }
    }

    /// Offset/weight pairs for d/dx at the given step under the configured
    /// first/second-level scheme. Offsets are in units of `h`.
    pub fn stencil(&self, h: f64) -> Vec<(f64, f64)> {
        match (self.scheme, self.richardson) {
            (Scheme::Central2, false) => vec![(-1.0, -0.5 / h), (1.0, 0.5 / h)],
            // Richardson on central-2: (4 D(h/2) - D(h)) / 3.
            (Scheme::Central2, true) => vec![
                (-1.0, 1.0 / (6.0 * h)),
                (-0.5, -8.0 / (6.0 * h)),
                (0.5, 8.0 / (6.0 * h)),
                (1.0, -1.0 / (6.0 * h)),
            ],
            (Scheme::Central4, _) => vec![
                (-2.0, 1.0 / (12.0 * h)),
                (-1.0, -8.0 / (12.0 * h)),
                (1.0, 8.0 / (12.0 * h)),
                (2.0, -1.0 / (12.0 * h)),
            ],
        }
    }

    /// Third-level stencil: always central-4 regardless of `scheme`.
    pub fn stencil_third(&self) -> Vec<(f64, f64)> {
        let h = self.step_third;
        vec![
            (-2.0, 1.0 / (12.0 * h)),
            (-1.0, -8.0 / (12.0 * h)),
            (1.0, 8.0 / (12.0 * h)),
            (2.0, -1.0 / (12.0 * h)),
        ]
    }

    /// Maximum reach (in chart units) of the first-level stencil.
    pub fn reach(&self) -> f64 {
        2.0 * self.step
    }

    /// Config for curvature evaluations placed inside a third-level stencil:
    /// the inner steps widen by 10x so rounding noise from the lower levels
    /// is not amplified through the outermost difference.
    pub fn third_level_inner(&self) -> FdConfig {
        FdConfig {
            step: self.step * 10.0,
            step_second: self.step_second * 10.0,
            ..*self
        }
    }
}

/// Checks the 2*step boundary margin along `axis` and returns the stencil.
pub fn checked_stencil(
    chart: &Chart,
    p: &Point,
    axis: usize,
    h: f64,
    offsets: &[(f64, f64)],
) -> Result<()> {
    let reach = 2.0 * h;
    for sign in [-1.0, 1.0] {
        let mut q = p.clone();
        q[axis] += sign * reach;
        if !chart.contains(&q) {
            return Err(GeomError::BoundaryMargin { axis, reach });
        }
    }
    // Also check the actual stencil points (relevant for predicate domains).
    for &(off, _) in offsets {
        let mut q = p.clone();
        q[axis] += off * h;
        if !chart.contains(&q) {
            return Err(GeomError::BoundaryMargin { axis, reach });
        }
    }
    Ok(())
}

/// Central-difference partial derivative of a scalar field.
pub fn partial_scalar<F: Fn(&Point) -> f64>(
    f: F,
    chart: &Chart,
    p: &Point,
    axis: usize,
    cfg: &FdConfig,
) -> Result<f64> {
    let h = cfg.step;
    let stencil = cfg.stencil(h);
    checked_stencil(chart, p, axis, h, &stencil)?;
    let mut acc = 0.0;
    for (off, w) in stencil {
        let mut q = p.clone();
        q[axis] += off * h;
        acc += w * f(&q);
    }
    Ok(acc)
}

/// Central-difference partial derivative of a tuple-valued field.
pub fn partial_vector<F: Fn(&Point) -> nalgebra::DVector<f64>>(
    f: F,
    chart: &Chart,
    p: &Point,
    axis: usize,
    cfg: &FdConfig,
) -> Result<nalgebra::DVector<f64>> {
    let h = cfg.step;
    let stencil = cfg.stencil(h);
    checked_stencil(chart, p, axis, h, &stencil)?;
    let mut acc = nalgebra::DVector::zeros(f(p).len());
    for (off, w) in stencil {
        let mut q = p.clone();
        q[axis] += off * h;
        acc += f(&q) * w;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::Chart;
    use nalgebra::DVector;

    fn unit_box(dim: usize) -> Chart {
        Chart::boxed("box", dim, vec![-1.0; dim], vec![1.0; dim])
    }

    #[test]
    fn quadratic_is_exact_with_central2() {
        let chart = Chart::boxed("box", 2, vec![-2.0, -2.0], vec![2.0, 2.0]);
        let p = DVector::from_vec(vec![1.0f64, 0.0]);
        let d = partial_scalar(|x| x[0] * x[0], &chart, &p, 0, &FdConfig::default()).unwrap();
        assert!((d - 2.0).abs() < 1e-9, "d={d}");
    }

    #[test]
    fn constant_derivative_is_zero() {
        let chart = unit_box(4);
        let p = DVector::from_vec(vec![0.1, 0.2, -0.3, 0.0]);
        for axis in 0..4 {
            let d = partial_scalar(|_| 42.0, &chart, &p, axis, &FdConfig::default()).unwrap();
            assert!(d.abs() < 1e-12);
        }
    }

    #[test]
    fn sine_derivative_at_origin() {
        let chart = unit_box(2);
        let p = DVector::from_vec(vec![0.0, 0.0]);
        let d = partial_scalar(|x| x[1].sin(), &chart, &p, 1, &FdConfig::default()).unwrap();
        assert!((d - 1.0).abs() < 1e-9);
    }

    #[test]
    fn central4_and_richardson_are_fourth_order() {
        let chart = unit_box(2);
        let p = DVector::from_vec(vec![0.3f64, 0.0]);
        let exact = (0.3f64).cos();
        for cfg in [
            FdConfig {
                scheme: Scheme::Central4,
                step: 1e-2,
                ..FdConfig::default()
            },
            FdConfig {
                richardson: true,
                step: 1e-2,
                ..FdConfig::default()
            },
        ] {
            let d = partial_scalar(|x| x[0].sin(), &chart, &p, 0, &cfg).unwrap();
            // O(h^4) at h=1e-2 leaves ~1e-9 truncation.
            assert!((d - exact).abs() < 1e-8, "err={}", (d - exact).abs());
        }
    }

    #[test]
    fn boundary_margin_is_enforced() {
        let chart = unit_box(2);
        let p = DVector::from_vec(vec![1.0 - 1e-6, 0.0]);
        let err = partial_scalar(|x| x[0], &chart, &p, 0, &FdConfig::default());
        assert!(matches!(err, Err(GeomError::BoundaryMargin { axis: 0, .. })));
        // Fine along the other axis.
        assert!(partial_scalar(|x| x[1], &chart, &p, 1, &FdConfig::default()).is_ok());
    }

    #[test]
    fn vector_field_derivative() {
        let chart = unit_box(2);
        let p = DVector::from_vec(vec![0.2, 0.1]);
        let d = partial_vector(
            |x| DVector::from_vec(vec![x[0] * x[1], x[1] * x[1]]),
            &chart,
            &p,
            1,
            &FdConfig::default(),
        )
        .unwrap();
        assert!((d[0] - 0.2).abs() < 1e-9);
        assert!((d[1] - 0.2).abs() < 1e-9);
    }
}
