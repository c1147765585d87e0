//! Suite aggregation: classification-gated evaluation of the identity
//! catalog over sampled points, with per-code summaries.

use serde::Serialize;

use crate::chart::Point;
use crate::classify::{classify, ClassificationReport, Label};
use crate::connection::ConnectionKind;
use crate::error::Result;
use crate::fd::FdConfig;
use crate::identities::{
    find_spec, run_identity, Applicability, IdentityCtx, IdentityResult, IdentitySpec, Need,
    Status, CATALOG, SCAL_EQ_GATE,
};
use crate::tables::{Engine, PointTables};

#[derive(Debug, Clone)]
pub enum Selection {
    All,
    Codes(Vec<String>),
}

impl Selection {
    pub fn parse(spec: &str) -> Selection {
        if spec.trim().eq_ignore_ascii_case("all") {
            Selection::All
        } else {
            Selection::Codes(
                spec.split(',')
                    .map(|s| s.trim().to_string())
                    .filter(|s| !s.is_empty())
                    .collect(),
            )
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Meta {
    pub version: String,
    pub seed: u64,
    pub fd: FdConfig,
}

#[derive(Debug, Clone, Serialize)]
pub struct CodeSummary {
    pub code: String,
    pub max_residual: f64,
    pub tolerance: f64,
    pub status: Status,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub meta: Meta,
    pub structure: String,
    pub classification: ClassificationReport,
    pub identities: Vec<IdentityResult>,
    pub summary: Vec<CodeSummary>,
    pub overall_pass: bool,
}

fn resolve_selection(selection: &Selection) -> Result<Vec<&'static IdentitySpec>> {
    match selection {
        Selection::All => Ok(CATALOG.iter().collect()),
        Selection::Codes(codes) => codes.iter().map(|c| find_spec(c)).collect(),
    }
}

fn union_needs(specs: &[&'static IdentitySpec]) -> Vec<Need> {
    let mut needs = Vec::new();
    for spec in specs {
        for need in spec.needs {
            if !needs.contains(need) {
                needs.push(*need);
            }
        }
    }
    needs
}

/// Build only the tables the selected identities require.
fn tables_for(engine: &Engine, p: &Point, needs: &[Need]) -> Result<PointTables> {
    let wants = |n: Need| needs.contains(&n);
    let need_canonical = wants(Need::Torsion)
        || wants(Need::TorsionDerivs)
        || wants(Need::CurvCanonical)
        || wants(Need::Ricci)
        || wants(Need::Raw);
    let need_lc = wants(Need::CurvLc) || wants(Need::Ricci);
    let need_dr = wants(Need::CurvDerivs);

    let mut torsion = None;
    let mut torsion_derivs = None;
    let mut curv_canonical = None;
    let mut basis = None;
    if need_canonical {
        let (r, tau, dtau, center) =
            engine.curvature_and_torsion_derivs(ConnectionKind::Canonical, p)?;
        torsion = Some(tau);
        torsion_derivs = Some(dtau);
        curv_canonical = Some(r);
        basis = Some(center.basis);
    }
    let curv_lc = if need_lc {
        Some(engine.curvature_at(ConnectionKind::LeviCivita, p)?)
    } else {
        None
    };
    let curv_canonical_derivs = if need_dr {
        Some(engine.curvature_derivatives_at(ConnectionKind::Canonical, p)?)
    } else {
        None
    };
    let ricci = match (&curv_canonical, &curv_lc) {
        (Some(rc), Some(rl)) if wants(Need::Ricci) => Some(engine.ricci_from(rc, rl)),
        _ => None,
    };
    let basis = match basis {
        Some(b) => b,
        None => engine.frame.basis_at(p)?,
    };
    Ok(PointTables {
        n: engine.half_dim(),
        point: p.clone(),
        basis,
        torsion,
        torsion_derivs,
        curv_canonical,
        curv_lc,
        curv_canonical_derivs,
        ricci,
    })
}

/// Run the selected identities over the sample points.
///
/// Classification runs first and gates applicability; inapplicable selected
/// codes are reported with not-applicable status and do not affect the
/// overall verdict. Identity failures are reported, never raised.
pub fn run_suite(
    engine: &Engine,
    structure_name: &str,
    points: &[Point],
    selection: &Selection,
    class_tol: f64,
    seed: u64,
) -> Result<SuiteReport> {
    let classification = classify(engine, points, class_tol)?;
    let specs = resolve_selection(selection)?;
    let needs = union_needs(&specs);
    let n = engine.half_dim();

    let tables: Vec<PointTables> = points
        .iter()
        .map(|p| tables_for(engine, p, &needs))
        .collect::<Result<_>>()?;

    // SCAL-EQ gate: quasi-Kaehler and the scalar gap below threshold at
    // every sampled point.
    let scal_eq_applicable = classification.passes(Label::Quasi)
        && !tables.is_empty()
        && tables.iter().all(|t| match &t.ricci {
            Some(r) => (r.s_star - r.s_canonical).norm() < SCAL_EQ_GATE,
            // Gap unknown without the Ricci table; treat as not applicable.
            None => false,
        });

    let applicable = |spec: &IdentitySpec| -> bool {
        match spec.applicability {
            Applicability::All => true,
            Applicability::Hermitian => classification.passes(Label::Hermitian),
            Applicability::Quasi => classification.passes(Label::Quasi),
            Applicability::Almost => classification.passes(Label::Almost),
            Applicability::Nearly => classification.passes(Label::Nearly),
            Applicability::NearlyDim6 => {
                classification.passes(Label::Nearly)
                    && n == 3
                    && classification.strictly_non_kahler()
            }
            Applicability::KahlerEquality => scal_eq_applicable,
        }
    };

    let mut identities = Vec::new();
    let mut summary = Vec::new();
    let mut overall_pass = true;

    for spec in &specs {
        if !applicable(spec) {
            identities.push(IdentityResult {
                code: spec.code.to_string(),
                point_index: 0,
                point: Vec::new(),
                residual: 0.0,
                tolerance: spec.tolerance,
                pass: true,
                status: Status::NotApplicable,
                worst_indices: Vec::new(),
            });
            summary.push(CodeSummary {
                code: spec.code.to_string(),
                max_residual: 0.0,
                tolerance: spec.tolerance,
                status: Status::NotApplicable,
            });
            continue;
        }
        let mut code_max = 0.0f64;
        let mut code_pass = true;
        for (idx, t) in tables.iter().enumerate() {
            let ctx = IdentityCtx {
                engine,
                tables: t,
                point_index: idx,
                raw_seed: seed ^ 0x5eed_cafe,
            };
            let result = run_identity(spec.code, &ctx)?;
            code_max = code_max.max(result.residual);
            code_pass &= result.pass;
            identities.push(result);
        }
        overall_pass &= code_pass;
        summary.push(CodeSummary {
            code: spec.code.to_string(),
            max_residual: code_max,
            tolerance: spec.tolerance,
            status: if code_pass { Status::Pass } else { Status::Fail },
        });
    }

    Ok(SuiteReport {
        meta: Meta {
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed,
            fd: engine.cfg,
        },
        structure: structure_name.to_string(),
        classification,
        identities,
        summary,
        overall_pass,
    })
}
