// Temporary development probe; will be replaced by real examples.
use ahmlab::connection::ConnectionKind;
use ahmlab::fd::FdConfig;
use ahmlab::tables::{max_abs, Engine};
use ahmlab::zoo;

fn main() -> ahmlab::Result<()> {
    let cfg = FdConfig::default();

    // flat: everything ~ 0
    let entry = zoo::flat_cn(2)?;
    let engine = Engine::new(entry.structure.clone(), entry.frame(), cfg);
    let p = entry.sample_points(1, 7)[0].clone();
    let tau = engine.torsion_at(ConnectionKind::Canonical, &p)?;
    let r = engine.curvature_at(ConnectionKind::Canonical, &p)?;
    println!("flat: |tau| = {:.3e}, |R| = {:.3e}", max_abs(&tau), max_abs(&r));

    // S2 radius 1: R^L_{1 1* 1 1*} = 1
    for radius in [1.0f64, 2.0] {
        let entry = zoo::round_s2(radius)?;
        let engine = Engine::new(entry.structure.clone(), entry.frame(), cfg);
        for p in entry.sample_points(3, 1) {
            let rl = engine.curvature_at(ConnectionKind::LeviCivita, &p)?;
            let hsc = rl[[0, 1, 0, 1]];
            println!(
                "s2 r={radius}: R^L(1,1*,1,1*) = {:.6} + {:.2e} i (expect {:.4})",
                hsc.re,
                hsc.im,
                1.0 / (radius * radius)
            );
        }
    }

    // S2: canonical equals LC (Kahler): torsion ~ 0
    let entry = zoo::round_s2(1.0)?;
    let engine = Engine::new(entry.structure.clone(), entry.frame(), cfg);
    let p = entry.sample_points(1, 3)[0].clone();
    let tau = engine.torsion_at(ConnectionKind::Canonical, &p)?;
    println!("s2: |tau| = {:.3e}", max_abs(&tau));

    // Hopf: Hermitian (tau_anti ~ 0), not quasi (tau_hol != 0)
    let entry = zoo::hopf_surface()?;
    let engine = Engine::new(entry.structure.clone(), entry.frame(), cfg);
    let p = entry.sample_points(1, 5)[0].clone();
    let tau = engine.torsion_at(ConnectionKind::Canonical, &p)?;
    let n = 2;
    let mut anti = 0.0f64;
    let mut hol = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                anti = anti.max(tau[[i, j, n + k]].norm());
                hol = hol.max(tau[[i, j, k]].norm());
            }
        }
    }
    println!("hopf: |tau_anti| = {anti:.3e}, |tau_hol| = {hol:.3e}");

    // S6: nearly Kahler: tau_hol ~ 0, tau_anti = c * sgn, |c| = sqrt(2)
    let entry = zoo::s6_nearly_kahler()?;
    let engine = Engine::new(entry.structure.clone(), entry.frame(), cfg);
    let p = entry.sample_points(1, 11)[0].clone();
    let diag = ahmlab::check_structure(&entry.structure, &p, 1e-10);
    println!("s6 structure: {diag:?}");
    let tau = engine.torsion_at(ConnectionKind::Canonical, &p)?;
    let n = 3;
    let mut hol = 0.0f64;
    let mut nk = 0.0f64;
    let mut norm2 = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                hol = hol.max(tau[[i, j, k]].norm());
                nk = nk.max((tau[[i, j, n + k]] - tau[[j, k, n + i]]).norm());
                norm2 += tau[[i, j, n + k]].norm_sqr();
            }
        }
    }
    println!("s6: |tau_hol| = {hol:.3e}, NK-sym residual = {nk:.3e}, |tau|^2 = {norm2:.6} (expect 12)");
    println!("s6: tau(1,2,3*) = {:?}", tau[[0, 1, n + 2]]);

    // S6 Levi-Civita curvature vs constant curvature 1
    let rl = engine.curvature_at(ConnectionKind::LeviCivita, &p)?;
    let mut worst = 0.0f64;
    let dim = 6;
    let gram = |a: usize, b: usize| -> f64 {
        if (a + 3) % 6 == b { 1.0 } else { 0.0 }
    };
    for a in 0..dim {
        for b in 0..dim {
            for c in 0..dim {
                for d in 0..dim {
                    let expect = gram(d, a) * gram(c, b) - gram(c, a) * gram(d, b);
                    worst = worst.max((rl[[a, b, c, d]].re - expect).abs().max(rl[[a, b, c, d]].im.abs()));
                }
            }
        }
    }
    println!("s6: max |R^L - const-curv-1 oracle| = {worst:.3e}");
    Ok(())
}
