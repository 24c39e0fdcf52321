use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Eigenvalues below this contribute nothing to `λ ln λ` and `λ ln² λ`.
pub const ZERO_FLOOR: f64 = 1e-300;

const NORMALIZATION_TOL: f64 = 1e-12;
/// Solver noise tolerated below zero before a value is rejected.
const NEGATIVE_TOL: f64 = 1e-12;

/// A normalized entanglement spectrum, stored in descending order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    values: Vec<f64>,
}

impl Spectrum {
    /// Sorts, clamps tiny negatives (down to −1e-12 relative to the total)
    /// to zero, and renormalizes to unit sum.
    pub fn from_unnormalized(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Spectrum("empty spectrum".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Spectrum("non-finite eigenvalue".into()));
        }
        let total: f64 = values.iter().sum();
        if !(total > 0.0) {
            return Err(Error::Spectrum(format!("nonpositive trace {total}")));
        }
        for v in values.iter_mut() {
            if *v < 0.0 {
                if *v < -NEGATIVE_TOL * total {
                    return Err(Error::Spectrum(format!("negative eigenvalue {v}")));
                }
                *v = 0.0;
            }
        }
        let total: f64 = values.iter().sum();
        values.iter_mut().for_each(|v| *v /= total);
        values.sort_by(|a, b| b.total_cmp(a));
        Ok(Self { values })
    }

    /// Accepts only spectra that are already nonnegative and sum to one
    /// within 1e-12; the order is normalized to descending.
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Spectrum("empty spectrum".into()));
        }
        if values.iter().any(|&v| !(v >= 0.0) || !v.is_finite()) {
            return Err(Error::Spectrum("eigenvalues must be finite and nonnegative".into()));
        }
        let total: f64 = values.iter().sum();
        if (total - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::Spectrum(format!("eigenvalues sum to {total}, not 1")));
        }
        values.sort_by(|a, b| b.total_cmp(a));
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub(crate) fn debug_check(&self) {
        debug_assert!(self.values.iter().all(|&v| v >= 0.0));
        debug_assert!((self.values.iter().sum::<f64>() - 1.0).abs() <= NORMALIZATION_TOL);
        debug_assert!(self.values.windows(2).all(|w| w[0] >= w[1]));
    }

    pub fn stats(&self) -> SpectrumStats {
        spectrum_stats(self)
    }
}

/// Von Neumann entropy `S₁`, `S₂ = Σ λ ln² λ` and capacity `C = S₂ − S₁²`
/// of one spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumStats {
    pub s1: f64,
    pub s2: f64,
    pub capacity: f64,
}

pub fn spectrum_stats(s: &Spectrum) -> SpectrumStats {
    let (mut s1, mut s2) = (0.0, 0.0);
    for &l in s.values() {
        if l < ZERO_FLOOR {
            continue;
        }
        let ln = l.ln();
        s1 -= l * ln;
        s2 += l * ln * ln;
    }
    // The two-pass variance form is exact for a point mass, where S₂ − S₁²
    // would leave rounding noise of either sign.
    let mut capacity = 0.0;
    for &l in s.values() {
        if l < ZERO_FLOOR {
            continue;
        }
        let dev = -l.ln() - s1;
        capacity += l * dev * dev;
    }
    SpectrumStats { s1, s2, capacity }
}
