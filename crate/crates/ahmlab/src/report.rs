//! Report serialization (JSON, CSV, human tables) and the dual-path
//! curvature crosscheck.

use serde::Serialize;

use crate::chart::Point;
use crate::classify::ClassificationReport;
use crate::connection::ConnectionKind;
use crate::error::Result;
use crate::identities::{
    rl_holo_from_canonical, rl_homix_from_canonical, rl_mixed_from_canonical, Status,
};
use crate::suite::{Meta, SuiteReport};
use crate::tables::{Engine, PointTables};
use crate::zoo::zoo_catalog;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
    Human,
}

impl OutputFormat {
    pub fn parse(s: &str) -> Option<OutputFormat> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Some(OutputFormat::Json),
            "csv" => Some(OutputFormat::Csv),
            "human" => Some(OutputFormat::Human),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassifyOutput {
    pub meta: Meta,
    pub structure: String,
    pub classification: ClassificationReport,
}

/// Max absolute discrepancy per reconstructed component family.
#[derive(Debug, Clone, Serialize)]
pub struct CrosscheckReport {
    pub meta: Meta,
    pub structure: String,
    /// R^L_{i jbar k lbar} family.
    pub mixed: f64,
    /// R^L_{i j k lbar} family.
    pub holo_mixed: f64,
    /// R^L_{i j k l} family.
    pub holo: f64,
    pub max_discrepancy: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub points: usize,
}

/// Compare the directly computed Levi-Civita curvature against its
/// reconstruction from canonical curvature, torsion and torsion derivatives.
pub fn crosscheck_tables(tables: &PointTables) -> (f64, f64, f64) {
    let n = tables.n;
    let rl = tables.curv_lc.as_ref().expect("curv_lc required");
    let mut mixed = 0.0f64;
    let mut holo_mixed = 0.0f64;
    let mut holo = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let d1 = (rl[[i, n + j, k, n + l]] - rl_mixed_from_canonical(tables, i, j, k, l))
                        .norm();
                    let d2 =
                        (rl[[i, j, k, n + l]] - rl_homix_from_canonical(tables, i, j, k, l)).norm();
                    let d3 = (rl[[i, j, k, l]] - rl_holo_from_canonical(tables, i, j, k, l)).norm();
                    mixed = mixed.max(d1);
                    holo_mixed = holo_mixed.max(d2);
                    holo = holo.max(d3);
                }
            }
        }
    }
    (mixed, holo_mixed, holo)
}

pub const CROSSCHECK_TOL: f64 = 1e-4;

pub fn run_crosscheck(
    engine: &Engine,
    structure_name: &str,
    points: &[Point],
    seed: u64,
) -> Result<CrosscheckReport> {
    let mut mixed = 0.0f64;
    let mut holo_mixed = 0.0f64;
    let mut holo = 0.0f64;
    for p in points {
        let (r_can, tau, dtau, center) =
            engine.curvature_and_torsion_derivs(ConnectionKind::Canonical, p)?;
        let r_lc = engine.curvature_at(ConnectionKind::LeviCivita, p)?;
        let tables = PointTables {
            n: engine.half_dim(),
            point: p.clone(),
            basis: center.basis,
            torsion: Some(tau),
            torsion_derivs: Some(dtau),
            curv_canonical: Some(r_can),
            curv_lc: Some(r_lc),
            curv_canonical_derivs: None,
            ricci: None,
        };
        let (d1, d2, d3) = crosscheck_tables(&tables);
        mixed = mixed.max(d1);
        holo_mixed = holo_mixed.max(d2);
        holo = holo.max(d3);
    }
    let max_discrepancy = mixed.max(holo_mixed).max(holo);
    Ok(CrosscheckReport {
        meta: Meta {
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed,
            fd: engine.cfg,
        },
        structure: structure_name.to_string(),
        mixed,
        holo_mixed,
        holo,
        max_discrepancy,
        tolerance: CROSSCHECK_TOL,
        pass: max_discrepancy < CROSSCHECK_TOL,
        points: points.len(),
    })
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)?)
}

/// CSV flattening of a suite report: one row per (code, point).
pub fn suite_to_csv(report: &SuiteReport) -> String {
    let mut out = String::from("code,point_index,residual,tolerance,status,worst_indices,point\n");
    for r in &report.identities {
        let status = match r.status {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::NotApplicable => "not-applicable",
        };
        let worst = r.worst_indices.join(";");
        let point = r
            .point
            .iter()
            .map(|x| format!("{x}"))
            .collect::<Vec<_>>()
            .join(";");
        out.push_str(&format!(
            "{},{},{:e},{:e},{},{},{}\n",
            r.code, r.point_index, r.residual, r.tolerance, status, worst, point
        ));
    }
    out
}

/// Human-readable per-code table, worst residual first.
pub fn suite_to_human(report: &SuiteReport) -> String {
    let mut rows = report.summary.clone();
    rows.sort_by(|a, b| {
        b.max_residual
            .partial_cmp(&a.max_residual)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.code.cmp(&b.code))
    });
    let mut out = String::new();
    out.push_str(&format!(
        "structure: {}   points: {}   labels: [{}]\n",
        report.structure,
        report.classification.sample_count,
        report
            .classification
            .labels
            .iter()
            .map(|l| l.as_str())
            .collect::<Vec<_>>()
            .join(", ")
    ));
    out.push_str(&format!(
        "{:<12} {:>14} {:>10}   {}\n",
        "code", "max residual", "tol", "status"
    ));
    for row in rows {
        let status = match row.status {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::NotApplicable => "not-applicable",
        };
        out.push_str(&format!(
            "{:<12} {:>14.3e} {:>10.1e}   {}\n",
            row.code, row.max_residual, row.tolerance, status
        ));
    }
    out.push_str(&format!(
        "overall: {}\n",
        if report.overall_pass { "PASS" } else { "FAIL" }
    ));
    out
}

pub fn crosscheck_to_human(report: &CrosscheckReport) -> String {
    format!(
        "structure: {}   points: {}\n\
         R^L(i,j*,k,l*) reconstruction discrepancy: {:.3e}\n\
         R^L(i,j,k,l*)  reconstruction discrepancy: {:.3e}\n\
         R^L(i,j,k,l)   reconstruction discrepancy: {:.3e}\n\
         max: {:.3e}   tol: {:.1e}   {}\n",
        report.structure,
        report.points,
        report.mixed,
        report.holo_mixed,
        report.holo,
        report.max_discrepancy,
        report.tolerance,
        if report.pass { "PASS" } else { "FAIL" }
    )
}

pub fn classify_to_human(output: &ClassifyOutput) -> String {
    let c = &output.classification;
    let mut out = format!(
        "structure: {}   points: {}   tol: {:.1e}\n",
        output.structure, c.sample_count, c.tolerance
    );
    out.push_str(&format!(
        "residuals: hermitian {:.3e}  kahler {:.3e}  quasi {:.3e}  almost {:.3e}  nearly {:.3e}\n",
        c.residuals.hermitian,
        c.residuals.kahler,
        c.residuals.quasi,
        c.residuals.almost_cyclic,
        c.residuals.nearly_sym
    ));
    out.push_str(&format!(
        "labels: [{}]\n",
        c.labels.iter().map(|l| l.as_str()).collect::<Vec<_>>().join(", ")
    ));
    if !c.strict_failures.is_empty() {
        out.push_str(&format!(
            "strictly not: [{}]\n",
            c.strict_failures
                .iter()
                .map(|l| l.as_str())
                .collect::<Vec<_>>()
                .join(", ")
        ));
    }
    if !c.inconclusive.is_empty() {
        out.push_str(&format!(
            "inconclusive: [{}]\n",
            c.inconclusive
                .iter()
                .map(|l| l.as_str())
                .collect::<Vec<_>>()
                .join(", ")
        ));
    }
    out
}

/// Zoo listing in the requested format.
pub fn zoo_listing(format: OutputFormat) -> String {
    #[derive(Serialize)]
    struct Entry {
        name: &'static str,
        expected_labels: Vec<&'static str>,
        params: Vec<crate::zoo::ZooParam>,
    }
    let entries: Vec<Entry> = zoo_catalog()
        .into_iter()
        .map(|(name, labels, params)| Entry {
            name,
            expected_labels: labels.iter().map(|l| l.as_str()).collect(),
            params,
        })
        .collect();
    match format {
        OutputFormat::Json | OutputFormat::Csv => {
            serde_json::to_string_pretty(&entries).expect("zoo listing serialization")
        }
        OutputFormat::Human => {
            let mut out = String::new();
            for e in entries {
                out.push_str(&format!(
                    "{:<18} labels: [{}]\n",
                    e.name,
                    e.expected_labels.join(", ")
                ));
                for p in e.params {
                    out.push_str(&format!(
                        "    --{:<10} {:<18} (default {})\n",
                        p.name, p.kind, p.default
                    ));
                }
            }
            out
        }
    }
}
