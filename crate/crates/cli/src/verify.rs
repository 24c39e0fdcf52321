use std::io;
use std::process::ExitCode;

use chrono::{SecondsFormat, Utc};
use clap::ValueEnum;
use entcap_core::spectral::pipeline_capacity;
use entcap_core::sums::identity_grid;
use entcap_core::{capacity, capacity_hs, identity_residual, quad_moments, EnsembleKind, EnsembleSpec};
use serde::Serialize;
use serde_json::{json, Value};

use crate::record::TOOL_VERSION;

pub const IDENTITY_TOL: f64 = 1e-12;
pub const ORACLE_TOL: f64 = 1e-7;
pub const PIPELINE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Identities,
    Oracle,
    Pipeline,
    All,
}

#[derive(Debug, Serialize)]
struct Check {
    name: String,
    params: Value,
    residual: f64,
    tolerance: f64,
    pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

impl Check {
    fn from_result(name: String, params: Value, tolerance: f64, residual: entcap_core::Result<f64>) -> Self {
        match residual {
            Ok(r) => Self { name, params, residual: r, tolerance, pass: r <= tolerance, error: None },
            Err(e) => Self { name, params, residual: f64::NAN, tolerance, pass: false, error: Some(e.to_string()) },
        }
    }
}

#[derive(Serialize)]
struct Report {
    suite: Suite,
    tool_version: &'static str,
    timestamp: String,
    total: usize,
    failed: usize,
    passed: bool,
    checks: Vec<Check>,
}

fn identities() -> Vec<Check> {
    identity_grid()
        .into_iter()
        .map(|case| {
            let params = serde_json::to_value(case).expect("identity cases serialize");
            let name = format!("identity {}", case.id());
            Check::from_result(name, params, IDENTITY_TOL, identity_residual(case).map(|r| r.residual))
        })
        .collect()
}

fn oracle() -> Vec<Check> {
    let mut checks = Vec::new();
    for kind in [EnsembleKind::HilbertSchmidt, EnsembleKind::BuresHall] {
        for m in 2..=3 {
            for d in 0..=3 {
                let spec = EnsembleSpec::new(m, m + d, kind).expect("valid grid");
                let residual = quad_moments(spec).and_then(|q| Ok((q.mean_capacity - capacity(spec)?).abs()));
                checks.push(Check::from_result(
                    format!("closed form vs simplex quadrature ({kind})"),
                    json!(spec),
                    ORACLE_TOL,
                    residual,
                ));
            }
        }
    }
    checks
}

fn pipeline() -> Vec<Check> {
    let mut checks = Vec::new();
    for m in 2..=10 {
        for n in m..=10 {
            let spec = EnsembleSpec::hilbert_schmidt(m, n).expect("valid grid");
            let residual = pipeline_capacity(spec).and_then(|p| Ok((p - capacity_hs(spec)?).abs()));
            checks.push(Check::from_result("E[T2] pipeline vs closed form".into(), json!(spec), PIPELINE_TOL, residual));
        }
    }
    checks
}

pub fn run(suite: Suite) -> anyhow::Result<ExitCode> {
    let mut checks = Vec::new();
    if matches!(suite, Suite::Identities | Suite::All) {
        checks.extend(identities());
    }
    if matches!(suite, Suite::Oracle | Suite::All) {
        checks.extend(oracle());
    }
    if matches!(suite, Suite::Pipeline | Suite::All) {
        checks.extend(pipeline());
    }
    let failed = checks.iter().filter(|c| !c.pass).count();
    let report = Report {
        suite,
        tool_version: TOOL_VERSION,
        timestamp: Utc::now().to_rfc3339_opts(SecondsFormat::Secs, true),
        total: checks.len(),
        failed,
        passed: failed == 0,
        checks,
    };
    serde_json::to_writer_pretty(io::stdout().lock(), &report)?;
    println!();
    if failed == 0 {
        eprintln!("verify: all {} checks passed", report.total);
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("verify: {failed} of {} checks failed:", report.total);
        for c in report.checks.iter().filter(|c| !c.pass) {
            eprintln!("  {} {}: residual {:e} > {:e}{}", c.name, c.params, c.residual, c.tolerance,
                c.error.as_deref().map(|e| format!(" ({e})")).unwrap_or_default());
        }
        Ok(ExitCode::FAILURE)
    }
}
