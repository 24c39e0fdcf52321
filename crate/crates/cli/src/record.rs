//! Output records. JSON carries the full run record including a timestamp;
//! CSV rows carry everything needed to re-run the command but no
//! wall-clock data, so seeded runs are byte-identical.

use std::io::Write;

use chrono::{SecondsFormat, Utc};
use entcap_core::{CapacityReport, EnsembleSpec, MCEstimate};
use serde::Serialize;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// The five exact statistics, flattened into the JSON record.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ExactStats {
    pub mean_capacity: f64,
    pub mean_s1: f64,
    pub var_s1: f64,
    pub mean_s2: f64,
    pub annealed_capacity: f64,
}

impl From<&CapacityReport> for ExactStats {
    fn from(r: &CapacityReport) -> Self {
        Self {
            mean_capacity: r.mean_capacity,
            mean_s1: r.mean_s1,
            var_s1: r.var_s1,
            mean_s2: r.mean_s2,
            annealed_capacity: r.annealed_capacity,
        }
    }
}

/// Chain settings echoed next to an estimate.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SamplerSettings {
    pub sampler: &'static str,
    pub chains: u32,
    pub burn_in: u32,
    pub thinning: u32,
    pub step_scale: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunRecord {
    pub command: &'static str,
    pub tool_version: &'static str,
    pub timestamp: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub spec: EnsembleSpec,
    #[serde(flatten, skip_serializing_if = "Option::is_none")]
    pub exact: Option<ExactStats>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub settings: Option<SamplerSettings>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub estimate: Option<MCEstimate>,
}

impl RunRecord {
    pub fn new(command: &'static str, spec: EnsembleSpec) -> Self {
        Self {
            command,
            tool_version: TOOL_VERSION,
            timestamp: Utc::now().to_rfc3339_opts(SecondsFormat::Secs, true),
            seed: None,
            spec,
            exact: None,
            settings: None,
            estimate: None,
        }
    }
}

/// One JSON document: an object for a single record, an array otherwise.
pub fn write_json<W: Write>(out: W, records: &[RunRecord]) -> anyhow::Result<()> {
    let mut out = out;
    if let [single] = records {
        serde_json::to_writer_pretty(&mut out, single)?;
    } else {
        serde_json::to_writer_pretty(&mut out, records)?;
    }
    writeln!(out)?;
    Ok(())
}
