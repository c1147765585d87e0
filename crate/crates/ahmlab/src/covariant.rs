//! Covariant differentiation of arbitrary (complexified) vector fields.
//!
//! These operators expand a field in the unitary frame, differentiate the
//! component functions numerically and add the coefficient terms. They are
//! deliberately independent of the per-point tensor tables: nesting them
//! re-derives curvature and torsion through a second computational path,
//! which is what the raw Bianchi checks exercise.

use num_complex::Complex64 as C64;

use crate::chart::{lie_bracket_c, ComplexVectorField, CVec, Point};
use crate::connection::ConnectionKind;
use crate::error::Result;
use crate::fd::checked_stencil;
use crate::tables::Engine;

/// nabla_X Y at p. Component derivatives of Y use step `h` (pass
/// `cfg.step` for plain fields, `cfg.step_second` when Y is itself a
/// first-derivative quantity).
pub fn nabla_at(
    engine: &Engine,
    kind: ConnectionKind,
    x: &ComplexVectorField,
    y: &ComplexVectorField,
    p: &Point,
    h: f64,
) -> Result<CVec> {
    let dim = engine.dim();
    let conn = engine.connection_at(kind, p)?;
    let frame = &engine.frame;

    let xv = x.eval(p);
    let x_comp = frame.components(p, &conn.basis, &xv);
    let y_comp_p = frame.components(p, &conn.basis, &y.eval(p));

    // Coordinate partials of the frame components of Y.
    let st = engine.cfg.stencil(h);
    let mut dy = vec![CVec::zeros(dim); dim];
    for axis in 0..dim {
        checked_stencil(&engine.structure.chart, p, axis, h, &st)?;
        for &(off, w) in &st {
            let mut q = p.clone();
            q[axis] += off * h;
            let bq = frame.basis_at(&q)?;
            let yq = frame.components(&q, &bq, &y.eval(&q));
            dy[axis] += yq * C64::new(w, 0.0);
        }
    }

    let mut out_comp = CVec::zeros(dim);
    for a_idx in 0..dim {
        // X(y^A) = sum_a X^a d_a y^A  (coordinate components of X)
        let mut v = C64::new(0.0, 0.0);
        for axis in 0..dim {
            v += xv[axis] * dy[axis][a_idx];
        }
        // + x^C y^B Gamma^A_{CB}
        for c in 0..dim {
            for b in 0..dim {
                v += x_comp[c] * y_comp_p[b] * conn.gamma[[c, b, a_idx]];
            }
        }
        out_comp[a_idx] = v;
    }

    let mut out = CVec::zeros(dim);
    for a_idx in 0..dim {
        out += conn.basis.column(a_idx) * out_comp[a_idx];
    }
    Ok(out)
}

/// nabla_X Y as a field (panics on evaluation failure inside stencils).
pub fn nabla_field(
    engine: &Engine,
    kind: ConnectionKind,
    x: &ComplexVectorField,
    y: &ComplexVectorField,
    h: f64,
) -> ComplexVectorField {
    let engine = engine.clone();
    let x = x.clone();
    let y = y.clone();
    ComplexVectorField::new(move |q: &Point| {
        nabla_at(&engine, kind, &x, &y, q, h).expect("covariant derivative inside stencil failed")
    })
}

/// Torsion on fields: tau(X,Y) = nabla_X Y - nabla_Y X - [X,Y] at p.
pub fn torsion_raw(
    engine: &Engine,
    kind: ConnectionKind,
    x: &ComplexVectorField,
    y: &ComplexVectorField,
    p: &Point,
) -> Result<CVec> {
    let h = engine.cfg.step;
    let a = nabla_at(engine, kind, x, y, p, h)?;
    let b = nabla_at(engine, kind, y, x, p, h)?;
    let br = lie_bracket_c(x, y, &engine.structure.chart, p, &engine.cfg)?;
    Ok(a - b - br)
}

/// Torsion applied to tangent vectors at p (constant-coefficient extensions;
/// tau is tensorial, so the extension does not matter).
pub fn torsion_point(
    engine: &Engine,
    kind: ConnectionKind,
    v: &CVec,
    w: &CVec,
    p: &Point,
) -> Result<CVec> {
    let fv = ComplexVectorField::constant(v.clone());
    let fw = ComplexVectorField::constant(w.clone());
    let h = engine.cfg.step;
    let a = nabla_at(engine, kind, &fv, &fw, p, h)?;
    let b = nabla_at(engine, kind, &fw, &fv, p, h)?;
    Ok(a - b)
}

/// Curvature operator on fields through nested covariant derivatives:
/// R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_{[X,Y]} Z.
pub fn curvature_op_raw(
    engine: &Engine,
    kind: ConnectionKind,
    x: &ComplexVectorField,
    y: &ComplexVectorField,
    z: &ComplexVectorField,
    p: &Point,
) -> Result<CVec> {
    let h1 = engine.cfg.step;
    let h2 = engine.cfg.step_second;

    let nyz = nabla_field(engine, kind, y, z, h1);
    let nxz = nabla_field(engine, kind, x, z, h1);
    let t1 = nabla_at(engine, kind, x, &nyz, p, h2)?;
    let t2 = nabla_at(engine, kind, y, &nxz, p, h2)?;

    let br = lie_bracket_c(x, y, &engine.structure.chart, p, &engine.cfg)?;
    let br_const = ComplexVectorField::constant(br);
    let t3 = nabla_at(engine, kind, &br_const, z, p, h1)?;

    Ok(t1 - t2 - t3)
}

/// <u, v> with the complex-bilinear metric at p.
pub fn pair(engine: &Engine, p: &Point, u: &CVec, v: &CVec) -> C64 {
    engine.structure.pair(p, u, v)
}

/// Seeded real polynomial vector fields of degree two (complexified), used
/// by the raw Bianchi checks and the connection-comparison test. The
/// coefficients are scaled so components stay O(1) over coordinate values up
/// to ~2 pi, keeping nested-difference noise proportionate.
pub fn random_poly_fields(dim: usize, seed: u64, count: usize) -> Vec<ComplexVectorField> {
    use rand::distributions::{Distribution, Uniform};
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let uni = Uniform::new(-1.0f64, 1.0);
    let lin = 1.0 / (7.0 * dim as f64);
    let quad = lin * lin;
    (0..count)
        .map(|_| {
            let c0: Vec<f64> = (0..dim).map(|_| uni.sample(&mut rng)).collect();
            let c1: Vec<f64> = (0..dim * dim).map(|_| lin * uni.sample(&mut rng)).collect();
            let c2: Vec<f64> = (0..dim * dim * dim)
                .map(|_| quad * uni.sample(&mut rng))
                .collect();
            ComplexVectorField::new(move |q: &Point| {
                let mut v = CVec::zeros(dim);
                for k in 0..dim {
                    let mut x = c0[k];
                    for a in 0..dim {
                        x += c1[k * dim + a] * q[a];
                        for b in 0..dim {
                            x += c2[(k * dim + a) * dim + b] * q[a] * q[b];
                        }
                    }
                    v[k] = C64::new(x, 0.0);
                }
                v
            })
        })
        .collect()
}

/// Residual of the Levi-Civita/canonical comparison on three fields:
/// <D_Y X, Z> - <nabla_Y X, Z>
///   - (1/2)(<tau(X,Y),Z> + <tau(Y,Z),X> - <tau(Z,X),Y>).
pub fn comparison_lemma_residual(
    engine: &Engine,
    x: &ComplexVectorField,
    y: &ComplexVectorField,
    z: &ComplexVectorField,
    p: &Point,
) -> Result<f64> {
    let h = engine.cfg.step;
    let (xp, yp, zp) = (x.eval(p), y.eval(p), z.eval(p));
    let lhs = pair(engine, p, &nabla_at(engine, ConnectionKind::LeviCivita, y, x, p, h)?, &zp);
    let mut rhs = pair(
        engine,
        p,
        &nabla_at(engine, ConnectionKind::Canonical, y, x, p, h)?,
        &zp,
    );
    let kind = ConnectionKind::Canonical;
    let t_xy = torsion_point(engine, kind, &xp, &yp, p)?;
    let t_yz = torsion_point(engine, kind, &yp, &zp, p)?;
    let t_zx = torsion_point(engine, kind, &zp, &xp, p)?;
    rhs += (pair(engine, p, &t_xy, &zp) + pair(engine, p, &t_yz, &xp)
        - pair(engine, p, &t_zx, &yp))
        * 0.5;
    Ok((lhs - rhs).norm() / (1.0 + lhs.norm().max(rhs.norm())))
}
