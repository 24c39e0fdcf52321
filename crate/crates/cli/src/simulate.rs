use std::io::{self, Write};
use std::process::ExitCode;

use entcap_core::{estimate, ChainConfig, EnsembleKind, EnsembleSpec, MCEstimate, Observable, SamplerKind};

use crate::record::{write_json, RunRecord, SamplerSettings, TOOL_VERSION};
use crate::Format;

/// Split-R̂ at or above this fails the run (exit code 3).
pub const RHAT_LIMIT: f64 = 1.05;

pub struct Request {
    pub ensemble: EnsembleKind,
    pub m: u32,
    pub n: u32,
    pub samples: u64,
    pub seed: u64,
    pub sampler: Option<SamplerKind>,
    pub chains: u32,
    pub observables: Vec<Observable>,
    pub burn_in: u32,
    pub thinning: Option<u32>,
    pub step_scale: f64,
    pub format: Format,
}

pub fn default_sampler(kind: EnsembleKind) -> SamplerKind {
    match kind {
        EnsembleKind::HilbertSchmidt => SamplerKind::Matrix,
        EnsembleKind::BuresHall => SamplerKind::Mcmc,
    }
}

pub fn run(req: Request) -> anyhow::Result<ExitCode> {
    let spec = EnsembleSpec::new(req.m, req.n, req.ensemble)?;
    let sampler = req.sampler.unwrap_or_else(|| default_sampler(req.ensemble));
    let cfg = ChainConfig {
        n_samples: req.samples,
        burn_in: req.burn_in,
        thinning: req.thinning.unwrap_or(req.m),
        step_scale: req.step_scale,
        seed: req.seed,
        n_chains: req.chains,
    };
    let settings = SamplerSettings {
        sampler: match sampler {
            SamplerKind::Matrix => "matrix",
            SamplerKind::Mcmc => "mcmc",
        },
        chains: cfg.n_chains,
        burn_in: cfg.burn_in,
        thinning: cfg.thinning,
        step_scale: cfg.step_scale,
    };
    let mut estimates = Vec::new();
    for &obs in &req.observables {
        estimates.push(estimate(spec, obs, &cfg, sampler)?);
    }
    let failed: Vec<&MCEstimate> = estimates.iter().filter(|e| e.diagnostics.split_rhat.is_nan() || e.diagnostics.split_rhat >= RHAT_LIMIT).collect();

    let stdout = io::stdout();
    let mut out = stdout.lock();
    if req.format.json {
        let records: Vec<RunRecord> = estimates
            .iter()
            .map(|e| RunRecord {
                seed: Some(req.seed),
                settings: Some(settings),
                estimate: Some(e.clone()),
                ..RunRecord::new("simulate", spec)
            })
            .collect();
        write_json(&mut out, &records)?;
    } else if req.format.csv {
        let mut w = csv::Writer::from_writer(&mut out);
        w.write_record([
            "command", "ensemble", "m", "n", "observable", "mean", "std_error", "samples", "seed", "sampler", "sampler_id",
            "chains", "burn_in", "thinning", "step_scale", "acceptance_rate", "split_rhat", "effective_samples",
            "tool_version",
        ])?;
        for e in &estimates {
            w.write_record([
                "simulate".to_string(),
                spec.kind().to_string(),
                spec.m().to_string(),
                spec.n().to_string(),
                e.observable.to_string(),
                e.mean.to_string(),
                e.std_error.to_string(),
                e.n_samples.to_string(),
                e.seed.to_string(),
                settings.sampler.to_string(),
                e.sampler_id.clone(),
                settings.chains.to_string(),
                settings.burn_in.to_string(),
                settings.thinning.to_string(),
                settings.step_scale.to_string(),
                e.diagnostics.acceptance_rate.map(|a| a.to_string()).unwrap_or_default(),
                e.diagnostics.split_rhat.to_string(),
                e.diagnostics.effective_samples.to_string(),
                TOOL_VERSION.to_string(),
            ])?;
        }
        w.flush()?;
    } else {
        for e in &estimates {
            write!(
                out,
                "{spec} {:<5} = {:.8} ± {:.2e}  (n = {}, seed = {}, {}, split-R^ = {:.4}",
                e.observable, e.mean, e.std_error, e.n_samples, e.seed, e.sampler_id, e.diagnostics.split_rhat
            )?;
            if let Some(a) = e.diagnostics.acceptance_rate {
                write!(out, ", acceptance = {a:.3}")?;
            }
            writeln!(out, ")")?;
        }
    }
    for e in &estimates {
        for w in &e.diagnostics.warnings {
            eprintln!("warning: {}: {w}", e.observable);
        }
    }
    if failed.is_empty() {
        Ok(ExitCode::SUCCESS)
    } else {
        for e in failed {
            eprintln!(
                "diagnostics failure: {} split-R^ = {:.4} >= {RHAT_LIMIT}; chains have not converged",
                e.observable, e.diagnostics.split_rhat
            );
        }
        Ok(ExitCode::from(3))
    }
}
