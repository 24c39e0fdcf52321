//! Metropolis random walk on the unnormalized eigenvalues `x ∈ (0, ∞)^m`,
//! moving one coordinate at a time in `y = ln x`.
//!
//! The trace of `x` factors out of both joint densities, so the normalized
//! spectrum `x / Σx` has the fixed-trace law.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::ensemble::{EnsembleKind, EnsembleSpec};
use crate::error::{Error, Result};
use crate::spectrum::Spectrum;

use super::ChainConfig;

/// One chain of the eigenvalue sampler. Burn-in runs on the first call to
/// `next`; afterwards every item is separated by `thinning` sweeps.
pub struct EigenChain {
    kind: EnsembleKind,
    exponent: f64,
    step: f64,
    y: Vec<f64>,
    x: Vec<f64>,
    rng: ChaCha8Rng,
    burn_in: u32,
    thinning: u32,
    remaining: u64,
    proposed: u64,
    accepted: u64,
    started: bool,
}

impl EigenChain {
    pub fn new(spec: EnsembleSpec, cfg: &ChainConfig, chain: u32, samples: u64) -> Result<Self> {
        cfg.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(u64::from(chain));
        let m = spec.m() as usize;
        // Dispersed start around the typical eigenvalue scale.
        let scale = (spec.n() as f64).ln();
        let y: Vec<f64> = (0..m).map(|_| scale + rng.sample::<f64, _>(StandardNormal)).collect();
        let x = y.iter().map(|v| v.exp()).collect();
        Ok(Self {
            kind: spec.kind(),
            exponent: spec.weight_exponent(),
            step: cfg.step_scale,
            y,
            x,
            rng,
            burn_in: cfg.burn_in,
            thinning: cfg.thinning,
            remaining: samples,
            proposed: 0,
            accepted: 0,
            started: false,
        })
    }

    /// Change of the log target when coordinate `i` moves to `y_new`.
    fn log_ratio(&self, i: usize, y_new: f64, x_new: f64) -> f64 {
        let x_old = self.x[i];
        let mut delta = (self.exponent + 1.0) * (y_new - self.y[i]) - (x_new - x_old);
        for (j, &xj) in self.x.iter().enumerate() {
            if j == i {
                continue;
            }
            delta += 2.0 * ((x_new - xj).abs().ln() - (x_old - xj).abs().ln());
            if self.kind == EnsembleKind::BuresHall {
                delta -= (x_new + xj).ln() - (x_old + xj).ln();
            }
        }
        delta
    }

    fn sweep(&mut self) {
        for i in 0..self.y.len() {
            let z: f64 = self.rng.sample(StandardNormal);
            let y_new = self.y[i] + self.step * z;
            let x_new = y_new.exp();
            let log_ratio = self.log_ratio(i, y_new, x_new);
            self.proposed += 1;
            // NaN (coincident eigenvalues) compares false and is rejected.
            let u: f64 = self.rng.random();
            if log_ratio >= 0.0 || u.ln() < log_ratio {
                self.y[i] = y_new;
                self.x[i] = x_new;
                self.accepted += 1;
            }
        }
    }

    /// Fraction of accepted single-coordinate proposals after burn-in.
    pub fn acceptance_rate(&self) -> f64 {
        if self.proposed == 0 {
            0.0
        } else {
            self.accepted as f64 / self.proposed as f64
        }
    }
}

impl Iterator for EigenChain {
    type Item = Result<Spectrum>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.remaining == 0 {
            return None;
        }
        if !self.started {
            self.started = true;
            for _ in 0..self.burn_in {
                self.sweep();
            }
            self.proposed = 0;
            self.accepted = 0;
        }
        for _ in 0..self.thinning {
            self.sweep();
        }
        self.remaining -= 1;
        Some(Spectrum::from_unnormalized(self.x.clone()).map_err(|e| Error::Spectrum(e.to_string())))
    }
}

/// Spectra from chain `chain` of the eigenvalue sampler, `samples` of them.
pub fn sample_eigen_mcmc(spec: EnsembleSpec, cfg: &ChainConfig, chain: u32, samples: u64) -> Result<EigenChain> {
    EigenChain::new(spec, cfg, chain, samples)
}
