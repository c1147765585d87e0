// Temporary development probe for derivative-level quantities.
use ahmlab::connection::ConnectionKind;
use ahmlab::fd::FdConfig;
use ahmlab::identities::{run_identity, IdentityCtx};
use ahmlab::report::run_crosscheck;
use ahmlab::suite::{run_suite, Selection};
use ahmlab::tables::{max_abs, Engine};
use ahmlab::zoo;
use std::time::Instant;

fn main() -> ahmlab::Result<()> {
    let cfg = FdConfig::default();

    // S6 nabla-tau (Kirichenko) and canonical Ricci
    let entry = zoo::s6_nearly_kahler()?;
    let engine = Engine::new(entry.structure.clone(), entry.frame(), cfg);
    let p = entry.sample_points(1, 11)[0].clone();
    let t0 = Instant::now();
    let dtau = engine.torsion_derivatives_at(&p)?;
    println!("s6: max |nabla tau| = {:.3e}  ({:?})", max_abs(&dtau), t0.elapsed());

    let t0 = Instant::now();
    let tables = engine.tables_at(&p)?;
    println!("s6: tables_at took {:?}", t0.elapsed());
    let ric = tables.ricci.as_ref().unwrap();
    let mut worst = 0.0f64;
    for i in 0..3 {
        for j in 0..3 {
            worst = worst.max(ric.ricci_first[(i, 3 + j)].norm());
        }
    }
    println!("s6: max |R'_(i jbar)| = {worst:.3e} (expect ~0)");
    println!(
        "s6: S^c = {:.6} (expect 0), S^* = {:.6} (expect 3)",
        ric.s_canonical.re, ric.s_star.re
    );
    println!(
        "s6: R^L_(i ibar) diag = {:.6} {:.6} {:.6} (expect 5)",
        ric.ricci_lc_complex[(0, 0)].re,
        ric.ricci_lc_complex[(1, 1)].re,
        ric.ricci_lc_complex[(2, 2)].re
    );

    // identity spot checks on S6
    for code in ["CMP-1", "CMP-1NK", "CMP-2", "CMP-2NK", "CMP-3", "CMP-3NK", "NK-6", "PROP-NK", "RIC-NK", "KIRI", "GEN-B8", "NK-7", "GEN-B9", "SCAL"] {
        let ctx = IdentityCtx { engine: &engine, tables: &tables, point_index: 0, raw_seed: 42 };
        let t0 = Instant::now();
        let r = run_identity(code, &ctx)?;
        println!("s6 {code}: residual {:.3e} (tol {:.0e}) {:?} ({:?})", r.residual, r.tolerance, r.status, t0.elapsed());
    }

    // random torus: the GEN family
    let entry = zoo::random_torus(2, 42, 0.1)?;
    let engine = Engine::new(entry.structure.clone(), entry.frame(), cfg);
    let p = entry.sample_points(1, 42)[0].clone();
    let t0 = Instant::now();
    let tables = engine.tables_at(&p)?;
    println!("torus: tables_at took {:?}", t0.elapsed());
    for code in ["GEN-B1", "GEN-B2", "GEN-B3", "GEN-B4", "GEN-B5", "GEN-B6", "GEN-B7", "GEN-B8", "GEN-B9", "CMP-1", "CMP-2", "CMP-3", "RAW-B1", "RAW-B2"] {
        let ctx = IdentityCtx { engine: &engine, tables: &tables, point_index: 0, raw_seed: 42 };
        let t0 = Instant::now();
        let r = run_identity(code, &ctx)?;
        println!("torus {code}: residual {:.3e} (tol {:.0e}) {:?} ({:?})", r.residual, r.tolerance, r.status, t0.elapsed());
    }

    // crosscheck on all entries
    for name in ["flat_cn", "round_s2", "hopf_surface", "s6_nearly_kahler", "random_torus"] {
        let entry = zoo::by_name(name, 2, 1.0, 42, 0.1)?;
        let engine = Engine::new(entry.structure.clone(), entry.frame(), cfg);
        let pts = entry.sample_points(2, 42);
        let t0 = Instant::now();
        let r = run_crosscheck(&engine, name, &pts, 42)?;
        println!(
            "crosscheck {name}: mixed {:.2e} homix {:.2e} holo {:.2e} ({:?})",
            r.mixed, r.holo_mixed, r.holo, t0.elapsed()
        );
    }

    // hopf suite quick: HERM identities
    let entry = zoo::hopf_surface()?;
    let engine = Engine::new(entry.structure.clone(), entry.frame(), cfg);
    let pts = entry.sample_points(2, 3);
    let t0 = Instant::now();
    let rep = run_suite(&engine, "hopf_surface", &pts, &Selection::parse("HERM-1,HERM-2,HERM-3,HERM-4,HERM-5,HERM-6,HERM-7,CMP-1HERM,CMP-2HERM,CMP-3HERM,GEN-B1"), 1e-6, 3)?;
    for s in &rep.summary {
        println!("hopf {}: {:.3e} {:?}", s.code, s.max_residual, s.status);
    }
    println!("hopf suite took {:?}", t0.elapsed());
    Ok(())
}
