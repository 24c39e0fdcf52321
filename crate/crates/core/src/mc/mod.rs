//! Monte-Carlo estimates of entropy and capacity moments.
//!
//! Two samplers are available: exact draws from Wishart matrices (Hilbert-
//! Schmidt only) and a Metropolis chain on the joint eigenvalue density
//! (both ensembles). Work is split into `n_chains` independent chains, each
//! with its own ChaCha8 stream, run in parallel and merged in chain order, so
//! results do not depend on the thread count.

mod matrix;
mod mcmc;
pub mod stats;

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ensemble::{EnsembleKind, EnsembleSpec};
use crate::error::{Error, Result};
use crate::spectrum::{spectrum_stats, Spectrum};

pub use matrix::sample_hs_matrix;
pub use mcmc::{sample_eigen_mcmc, EigenChain};
use stats::{block_jackknife, effective_sample_size, split_rhat, RunningMoments};

/// Acceptance rates outside this band attach a warning to the estimate.
pub const ACCEPTANCE_BAND: (f64, f64) = (0.1, 0.6);
/// Number of contiguous blocks for the jackknife error of `VarS1`.
const JACKKNIFE_BLOCKS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChainConfig {
    /// Total number of spectra, split as evenly as possible across chains.
    pub n_samples: u64,
    /// Sweeps discarded at the start of each chain.
    pub burn_in: u32,
    /// Sweeps between retained states (one sweep updates every coordinate).
    pub thinning: u32,
    pub step_scale: f64,
    pub seed: u64,
    pub n_chains: u32,
}

impl Default for ChainConfig {
    fn default() -> Self {
        Self { n_samples: 100_000, burn_in: 10_000, thinning: 1, step_scale: 0.35, seed: 0, n_chains: 4 }
    }
}

impl ChainConfig {
    /// Defaults with thinning of `m` sweeps.
    pub fn for_spec(spec: EnsembleSpec) -> Self {
        Self { thinning: spec.m(), ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_samples < 1 {
            return Err(Error::Config("n_samples must be at least 1".into()));
        }
        if self.thinning < 1 {
            return Err(Error::Config("thinning must be at least 1".into()));
        }
        if !(self.step_scale > 0.0 && self.step_scale.is_finite()) {
            return Err(Error::Config(format!("step_scale must be positive, got {}", self.step_scale)));
        }
        if self.n_chains < 1 {
            return Err(Error::Config("n_chains must be at least 1".into()));
        }
        Ok(())
    }

    /// Samples assigned to chain `c`; the first `n_samples mod n_chains`
    /// chains take one extra.
    fn chain_samples(&self, c: u32) -> u64 {
        let k = u64::from(self.n_chains);
        self.n_samples / k + u64::from(u64::from(c) < self.n_samples % k)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Observable {
    S1,
    S2,
    C,
    VarS1,
}

impl fmt::Display for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::S1 => "S1",
            Self::S2 => "S2",
            Self::C => "C",
            Self::VarS1 => "VarS1",
        })
    }
}

impl FromStr for Observable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "s1" => Ok(Self::S1),
            "s2" => Ok(Self::S2),
            "c" | "capacity" => Ok(Self::C),
            "vars1" | "var-s1" => Ok(Self::VarS1),
            _ => Err(Error::Config(format!("unknown observable '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SamplerKind {
    Matrix,
    Mcmc,
}

impl SamplerKind {
    pub fn id(self) -> &'static str {
        match self {
            Self::Matrix => "wishart-eigen",
            Self::Mcmc => "mcmc-logrw",
        }
    }
}

impl fmt::Display for SamplerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Matrix => "matrix",
            Self::Mcmc => "mcmc",
        })
    }
}

impl FromStr for SamplerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "matrix" => Ok(Self::Matrix),
            "mcmc" => Ok(Self::Mcmc),
            _ => Err(Error::Config(format!("unknown sampler '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    /// Post-burn-in acceptance rate over all chains (MCMC only).
    pub acceptance_rate: Option<f64>,
    pub split_rhat: f64,
    pub effective_samples: f64,
    /// Largest single-spectrum capacity seen.
    pub max_capacity: f64,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MCEstimate {
    pub observable: Observable,
    pub mean: f64,
    pub std_error: f64,
    pub n_samples: u64,
    pub seed: u64,
    pub sampler_id: String,
    pub diagnostics: Diagnostics,
}

struct ChainOutput {
    values: Vec<f64>,
    max_capacity: f64,
    proposed_accepted: Option<f64>,
}

fn run_chain(
    spec: EnsembleSpec,
    observable: Observable,
    cfg: &ChainConfig,
    sampler: SamplerKind,
    chain: u32,
) -> Result<ChainOutput> {
    let count = cfg.chain_samples(chain);
    let mut values = Vec::with_capacity(count as usize);
    let mut max_capacity: f64 = 0.0;
    let mut record = |s: Spectrum| {
        s.debug_check();
        let st = spectrum_stats(&s);
        max_capacity = max_capacity.max(st.capacity);
        values.push(match observable {
            Observable::S1 | Observable::VarS1 => st.s1,
            Observable::S2 => st.s2,
            Observable::C => st.capacity,
        });
    };
    let acceptance = match sampler {
        SamplerKind::Matrix => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(u64::from(chain));
            for _ in 0..count {
                record(sample_hs_matrix(spec, &mut rng)?);
            }
            None
        }
        SamplerKind::Mcmc => {
            let mut it = sample_eigen_mcmc(spec, cfg, chain, count)?;
            for s in it.by_ref() {
                record(s?);
            }
            Some(it.acceptance_rate())
        }
    };
    Ok(ChainOutput { values, max_capacity, proposed_accepted: acceptance })
}

fn variance_of(it: &mut dyn Iterator<Item = f64>) -> f64 {
    it.collect::<RunningMoments>().variance()
}

/// Monte-Carlo estimate of `observable` under `spec`.
///
/// For `S1`, `S2` and `C` the result is the sample mean with standard error
/// `σ/√n_eff`, where `n_eff` is `n_samples` for the matrix sampler and the
/// summed per-chain initial-positive-sequence ESS for MCMC. For `VarS1` it is
/// the unbiased sample variance of `S₁`, with a block-jackknife error.
pub fn estimate(spec: EnsembleSpec, observable: Observable, cfg: &ChainConfig, sampler: SamplerKind) -> Result<MCEstimate> {
    cfg.validate()?;
    if sampler == SamplerKind::Matrix && spec.kind() != EnsembleKind::HilbertSchmidt {
        return Err(Error::Config("the matrix sampler only supports the Hilbert-Schmidt ensemble".into()));
    }
    let outputs: Vec<ChainOutput> = (0..cfg.n_chains)
        .into_par_iter()
        .map(|c| run_chain(spec, observable, cfg, sampler, c))
        .collect::<Result<_>>()?;

    let mut pooled = RunningMoments::default();
    for out in &outputs {
        let chain: RunningMoments = out.values.iter().copied().collect();
        pooled.merge(&chain);
    }
    let n = pooled.count();
    let chains: Vec<Vec<f64>> = outputs.iter().map(|o| o.values.clone()).collect();
    let effective = match sampler {
        SamplerKind::Matrix => n as f64,
        SamplerKind::Mcmc => chains.iter().map(|c| effective_sample_size(c)).sum::<f64>().min(n as f64),
    };
    let (mean, std_error) = match observable {
        Observable::VarS1 => {
            let all: Vec<f64> = chains.concat();
            (pooled.variance(), block_jackknife(&all, JACKKNIFE_BLOCKS, variance_of))
        }
        _ => (pooled.mean(), (pooled.variance() / effective).sqrt()),
    };
    let rhat = split_rhat(&chains);

    let mut warnings = Vec::new();
    let acceptance_rate = if sampler == SamplerKind::Mcmc {
        let total: f64 = outputs
            .iter()
            .map(|o| o.proposed_accepted.unwrap_or(0.0) * o.values.len() as f64)
            .sum();
        let rate = total / n as f64;
        if spec.m() > 1 && !(ACCEPTANCE_BAND.0..=ACCEPTANCE_BAND.1).contains(&rate) {
            warnings.push(format!(
                "acceptance rate {rate:.3} outside [{}, {}]; consider adjusting step_scale",
                ACCEPTANCE_BAND.0, ACCEPTANCE_BAND.1
            ));
        }
        Some(rate)
    } else {
        None
    };
    let max_capacity = outputs.iter().map(|o| o.max_capacity).fold(0.0, f64::max);

    Ok(MCEstimate {
        observable,
        mean,
        std_error,
        n_samples: n,
        seed: cfg.seed,
        sampler_id: sampler.id().to_string(),
        diagnostics: Diagnostics { acceptance_rate, split_rhat: rhat, effective_samples: effective, max_capacity, warnings },
    })
}
