// Temporary probe for the scalar-gap and convergence-order criteria.
use ahmlab::fd::FdConfig;
use ahmlab::identities::{run_identity, IdentityCtx};
use ahmlab::tables::Engine;
use ahmlab::zoo;

fn main() -> ahmlab::Result<()> {
    // Kahler gap on round_s2 at default vs high accuracy.
    for (label, cfg) in [
        ("default", FdConfig::default()),
        ("high-acc", FdConfig::high_accuracy()),
    ] {
        let entry = zoo::round_s2(1.0)?;
        let engine = Engine::new(entry.structure.clone(), entry.frame(), cfg);
        for p in entry.sample_points(3, 13) {
            let tables = engine.tables_at(&p)?;
            let ric = tables.ricci.as_ref().unwrap();
            println!(
                "s2 {label}: S^c = {:+.3e}, S^* = {:+.3e}, gap = {:+.3e}",
                ric.s_canonical.re,
                ric.s_star.re,
                (ric.s_star - ric.s_canonical).re
            );
        }
    }

    // Convergence of GEN-B2 on the torus under step halving.
    let entry = zoo::random_torus(2, 42, 0.1)?;
    let mut residuals = Vec::new();
    for step in [2e-3, 1e-3, 5e-4, 2.5e-4] {
        let cfg = FdConfig::with_base_step(step);
        let engine = Engine::new(entry.structure.clone(), entry.frame(), cfg);
        let mut worst = 0.0f64;
        for p in entry.sample_points(3, 42) {
            let tables = engine.tables_at(&p)?;
            let ctx = IdentityCtx {
                engine: &engine,
                tables: &tables,
                point_index: 0,
                raw_seed: 42,
            };
            worst = worst.max(run_identity("GEN-B2", &ctx)?.residual);
        }
        residuals.push((step, worst));
        println!("torus GEN-B2 at base step {step:.1e}: residual {worst:.4e}");
    }
    for w in residuals.windows(2) {
        println!(
            "ratio {:.1e} -> {:.1e}: {:.2}",
            w[0].0,
            w[1].0,
            w[0].1 / w[1].1
        );
    }
    Ok(())
}
