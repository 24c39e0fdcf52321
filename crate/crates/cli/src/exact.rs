use std::io::{self, Write};
use std::process::ExitCode;

use entcap_core::{asymptotic_capacity, capacity, CapacityReport, EnsembleKind, EnsembleSpec};

use crate::dims::DimRange;
use crate::record::{write_json, ExactStats, RunRecord, TOOL_VERSION};
use crate::Format;

fn pairs(m: DimRange, n: Option<DimRange>, offset: Option<u32>) -> Vec<(u32, u32)> {
    match (n, offset) {
        (Some(n), _) => m.iter().flat_map(|m| n.iter().map(move |n| (m, n))).collect(),
        (None, offset) => {
            let d = offset.unwrap_or(0);
            m.iter().map(|m| (m, m.saturating_add(d))).collect()
        }
    }
}

pub fn run(kind: EnsembleKind, m: DimRange, n: Option<DimRange>, offset: Option<u32>, format: Format) -> anyhow::Result<ExitCode> {
    let mut reports = Vec::new();
    for (m, n) in pairs(m, n, offset) {
        let spec = EnsembleSpec::new(m, n, kind)?;
        reports.push(CapacityReport::new(spec)?);
    }
    let stdout = io::stdout();
    let mut out = stdout.lock();
    if format.json {
        let records: Vec<RunRecord> = reports
            .iter()
            .map(|r| RunRecord { exact: Some(ExactStats::from(r)), ..RunRecord::new("exact", r.spec) })
            .collect();
        write_json(&mut out, &records)?;
    } else if format.csv {
        let mut w = csv::Writer::from_writer(&mut out);
        w.write_record([
            "command", "ensemble", "m", "n", "mean_capacity", "mean_s1", "var_s1", "mean_s2", "annealed_capacity",
            "tool_version",
        ])?;
        for r in &reports {
            w.write_record([
                "exact".to_string(),
                r.spec.kind().to_string(),
                r.spec.m().to_string(),
                r.spec.n().to_string(),
                r.mean_capacity.to_string(),
                r.mean_s1.to_string(),
                r.var_s1.to_string(),
                r.mean_s2.to_string(),
                r.annealed_capacity.to_string(),
                TOOL_VERSION.to_string(),
            ])?;
        }
        w.flush()?;
    } else {
        writeln!(out, "{:>3} {:>5} {:>5} {:>18} {:>18} {:>18} {:>18} {:>18}", "ens", "m", "n", "mean_capacity", "mean_s1", "var_s1", "mean_s2", "annealed")?;
        for r in &reports {
            writeln!(
                out,
                "{:>3} {:>5} {:>5} {:>18.15} {:>18.15} {:>18.15} {:>18.15} {:>18.15}",
                r.spec.kind(),
                r.spec.m(),
                r.spec.n(),
                r.mean_capacity,
                r.mean_s1,
                r.var_s1,
                r.mean_s2,
                r.annealed_capacity
            )?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

pub fn limit(kind: EnsembleKind, delta: bool, m: Option<u32>, n: Option<u32>) -> anyhow::Result<ExitCode> {
    let limit = asymptotic_capacity(kind);
    if delta {
        let (m, n) = (m.unwrap_or(0), n.unwrap_or(0));
        let spec = EnsembleSpec::new(m, n, kind)?;
        println!("{:.15e}", capacity(spec)? - limit);
    } else {
        println!("{limit:.15}");
    }
    Ok(ExitCode::SUCCESS)
}
