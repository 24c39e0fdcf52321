//! Closed-form entanglement statistics for the Hilbert-Schmidt and
//! Bures-Hall ensembles.
//!
//! For `m = 1` the spectrum is the single value 1, so entropy, its variance
//! and the capacity are identically zero; the public functions return an
//! exact `0.0` there instead of the rounding residue of the general formula.

use serde::{Deserialize, Serialize};

use crate::ensemble::{EnsembleKind, EnsembleSpec};
use crate::error::{domain, Error, Result};
use crate::specfun::{digamma, trigamma, PI_SQUARED};
use crate::sums::{psi_sum, PsiParams};

/// Mean statistics of one ensemble at fixed dimensions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CapacityReport {
    pub spec: EnsembleSpec,
    pub mean_capacity: f64,
    pub mean_s1: f64,
    pub var_s1: f64,
    pub mean_s2: f64,
    pub annealed_capacity: f64,
}

impl CapacityReport {
    pub fn new(spec: EnsembleSpec) -> Result<Self> {
        let mean_capacity = capacity(spec)?;
        let mean_s1 = mean_s1(spec);
        let var_s1 = var_s1(spec);
        Ok(Self {
            spec,
            mean_capacity,
            mean_s1,
            var_s1,
            mean_s2: mean_capacity + var_s1 + mean_s1 * mean_s1,
            annealed_capacity: mean_capacity + var_s1,
        })
    }
}

/// Average capacity under the ensemble named by `spec`.
pub fn capacity(spec: EnsembleSpec) -> Result<f64> {
    match spec.kind() {
        EnsembleKind::HilbertSchmidt => capacity_hs(spec),
        EnsembleKind::BuresHall => capacity_bh(spec),
    }
}

/// Average capacity over the Hilbert-Schmidt ensemble,
/// Ψ_{0,α} + a₀ψ₁(m+α+1) + a₁(ψ₀(m+α+1) − ψ₀(α+1)) + a₂.
pub fn capacity_hs(spec: EnsembleSpec) -> Result<f64> {
    spec.require(EnsembleKind::HilbertSchmidt)?;
    if spec.m() == 1 {
        return Ok(0.0);
    }
    Ok(capacity_hs_formula(spec.m(), spec.alpha()))
}

pub(crate) fn capacity_hs_formula(m: u32, alpha: u32) -> f64 {
    let (mf, a) = (f64::from(m), f64::from(alpha));
    let a0 = (mf - 1.0) * (mf + a - 1.0) / (mf * (mf + a) + 1.0);
    let a1 = a * (2.0 * mf + a - 1.0) / (mf * (mf + a));
    let a2 = -mf * (7.0 * mf * mf + 6.0 * a * mf - 4.0 * mf - 2.0 * a + 5.0)
        / (4.0 * (mf + a) * (mf * mf + a * mf + 1.0))
        - 1.0;
    let psi = psi_sum(PsiParams::new(m, 0.0, a).expect("a = 0 <= b = alpha"));
    psi + a0 * trigamma(mf + a + 1.0) + a1 * (digamma(mf + a + 1.0) - digamma(a + 1.0)) + a2
}

/// Fully reduced Hilbert-Schmidt capacity for dimension differences
/// α ∈ {0, 1, 2}.
pub fn capacity_hs_special(m: u32, alpha: u32) -> Result<f64> {
    if m < 1 {
        return Err(Error::Dimensions(format!("m must be >= 1, got {m}")));
    }
    let mf = f64::from(m);
    let m2 = mf * mf;
    let base = PI_SQUARED / 3.0;
    let value = match alpha {
        0 => {
            -(mf + 1.0).powi(2) / (m2 + 1.0) * trigamma(mf + 1.0)
                - (11.0 * m2 - 4.0 * mf + 9.0) / (4.0 * (m2 + 1.0))
                + base
        }
        1 => {
            -(mf + 1.0) * (mf + 2.0) / (m2 + mf + 1.0) * trigamma(mf + 2.0)
                - (11.0 * m2 + 7.0 * mf + 12.0) / (4.0 * (m2 + mf + 1.0))
                + base
        }
        2 => {
            -(mf + 3.0) / (mf + 1.0) * trigamma(mf + 3.0)
                + 2.0 * (digamma(mf + 3.0) - digamma(3.0)) / (mf * (mf + 1.0) * (mf + 2.0))
                - (11.0 * m2 + 29.0 * mf + 28.0) / (4.0 * (mf + 1.0) * (mf + 2.0))
                + base
        }
        other => return domain(format!("no reduced closed form for alpha = {other} (only 0, 1, 2)")),
    };
    Ok(value)
}

/// Average capacity over the Bures-Hall ensemble,
/// Ψ_{0,β} + Ψ_{2β,β} + b₀ψ₁(m+β+1) + b₁(ψ₀(m+β+1) − ψ₀(β+1)) + b₂.
pub fn capacity_bh(spec: EnsembleSpec) -> Result<f64> {
    spec.require(EnsembleKind::BuresHall)?;
    if spec.m() == 1 {
        return Ok(0.0);
    }
    capacity_bh_formula(spec.m(), spec.n())
}

pub(crate) fn capacity_bh_formula(m: u32, n: u32) -> Result<f64> {
    let mf = f64::from(m);
    let beta = f64::from(n - m) - 0.5;
    // m + 2β = 2n − m − 1 is an integer because 2β is odd.
    let upper = 2 * n - m - 1;
    let cross = PsiParams::new(m, 2.0 * beta, beta)?;
    assert_eq!(cross.upper(), upper, "upper limit of Psi_(2beta,beta) must be m + 2beta");
    let b0 = 2.0 * (mf - 1.0) * (mf + beta) * (mf + 2.0 * beta)
        / ((2.0 * mf + 2.0 * beta + 1.0) * (mf * mf + 2.0 * beta * mf + mf + 2.0))
        + 1.0;
    let b1 = 2.0 * beta * beta / (mf * (mf + 2.0 * beta + 1.0));
    let b2 = -PI_SQUARED / 2.0 - 1.0;
    let psi = psi_sum(PsiParams::new(m, 0.0, beta)?) + psi_sum(cross);
    Ok(psi
        + b0 * trigamma(mf + beta + 1.0)
        + b1 * (digamma(mf + beta + 1.0) - digamma(beta + 1.0))
        + b2)
}

/// E[S₁], the average von Neumann entropy.
pub fn mean_s1(spec: EnsembleSpec) -> f64 {
    if spec.m() == 1 {
        return 0.0;
    }
    mean_s1_formula(spec)
}

fn mean_s1_formula(spec: EnsembleSpec) -> f64 {
    let (m, n) = (f64::from(spec.m()), f64::from(spec.n()));
    match spec.kind() {
        EnsembleKind::HilbertSchmidt => digamma(m * n + 1.0) - digamma(n) - (m + 1.0) / (2.0 * n),
        EnsembleKind::BuresHall => digamma(m * n - m * m / 2.0 + 1.0) - digamma(n + 0.5),
    }
}

/// V[S₁], the variance of the von Neumann entropy.
pub fn var_s1(spec: EnsembleSpec) -> f64 {
    if spec.m() == 1 {
        return 0.0;
    }
    var_s1_formula(spec).max(0.0)
}

fn var_s1_formula(spec: EnsembleSpec) -> f64 {
    let (m, n) = (f64::from(spec.m()), f64::from(spec.n()));
    match spec.kind() {
        EnsembleKind::HilbertSchmidt => {
            -trigamma(m * n + 1.0) + (m + n) / (m * n + 1.0) * trigamma(n)
                - (m + 1.0) * (m + 2.0 * n + 1.0) / (4.0 * n * n * (m * n + 1.0))
        }
        EnsembleKind::BuresHall => {
            -trigamma(m * n - m * m / 2.0 + 1.0)
                + (2.0 * n * (2.0 * n + m) - m * m + 1.0) / (2.0 * n * (2.0 * m * n - m * m + 2.0))
                    * trigamma(n + 0.5)
        }
    }
}

/// Annealed capacity E[S₂] − E[S₁]², which exceeds the average capacity by
/// exactly V[S₁].
pub fn annealed_capacity(spec: EnsembleSpec) -> Result<f64> {
    Ok(capacity(spec)? + var_s1(spec))
}

/// Large-dimension limit of the average capacity at fixed `n − m`:
/// π²/3 − 11/4 (HS) and π²/6 − 1 (BH).
pub fn asymptotic_capacity(kind: EnsembleKind) -> f64 {
    match kind {
        EnsembleKind::HilbertSchmidt => PI_SQUARED / 3.0 - 11.0 / 4.0,
        EnsembleKind::BuresHall => PI_SQUARED / 6.0 - 1.0,
    }
}

/// Converts E[T₂] over the induced (trace-free) ensemble into E[S₂] over the
/// fixed-trace one:
/// E[S₂] = E[T₂]/d + 2ψ₀(d+1)E[S₁] − ψ₀²(d+1) − ψ₁(d+1).
pub fn s2_from_t2(mean_t2: f64, mean_s1: f64, spec: EnsembleSpec) -> Result<f64> {
    let d = spec.trace_dim();
    if d < 1.0 {
        return Err(Error::Dimensions(format!(
            "trace shape d = {d} < 1 for {spec}; the induced ensemble is degenerate"
        )));
    }
    let p0 = digamma(d + 1.0);
    Ok(mean_t2 / d + 2.0 * p0 * mean_s1 - p0 * p0 - trigamma(d + 1.0))
}

const CMAX_GRID: usize = 10_000;
const CMAX_XTOL: f64 = 1e-10;

/// Capacity of the two-level spectrum `(1 − x, x/(m−1), ..., x/(m−1))`.
pub fn two_level_capacity(m: u32, x: f64) -> f64 {
    let lm = f64::from(m - 1).ln();
    let t = lm - (1.0 - x).ln() + x.ln();
    (1.0 - x) * x * t * t
}

/// Maximizer `x` and maximum of [`two_level_capacity`] over `(0, 1)`.
pub fn cmax_argmax(m: u32) -> Result<(f64, f64)> {
    if m < 2 {
        return Err(Error::Dimensions(format!("maximal capacity needs m >= 2, got {m}")));
    }
    let f = |x: f64| two_level_capacity(m, x);
    let h = 1.0 / (CMAX_GRID as f64 + 1.0);
    let best = (1..=CMAX_GRID)
        .map(|i| i as f64 * h)
        .max_by(|&a, &b| f(a).total_cmp(&f(b)))
        .expect("grid is nonempty");
    let (mut lo, mut hi) = ((best - h).max(f64::MIN_POSITIVE), (best + h).min(1.0 - f64::EPSILON));
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = hi - ratio * (hi - lo);
    let mut d = lo + ratio * (hi - lo);
    let (mut fc, mut fd) = (f(c), f(d));
    while hi - lo > CMAX_XTOL {
        if fc > fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - ratio * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + ratio * (hi - lo);
            fd = f(d);
        }
    }
    let x = 0.5 * (lo + hi);
    Ok((x, f(x)))
}

/// Largest capacity any `m`-level spectrum can reach.
pub fn cmax(m: u32) -> Result<f64> {
    cmax_argmax(m).map(|(_, v)| v)
}
