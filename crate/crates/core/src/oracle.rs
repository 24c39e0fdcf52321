//! Brute-force moments of the fixed-trace eigenvalue densities for `m = 2`
//! and `m = 3`, by direct quadrature over the probability simplex.
//!
//! No orthogonal polynomials or summation identities are involved, so these
//! numbers are an independent check on the closed forms.
//!
//! Integrable endpoint singularities (`λ^β` with `β = −1/2`) are removed by
//! substitution before integrating:
//! * `m = 2`: `λ₂ = u²/2`, `u ∈ [0, 1]`;
//! * `m = 3`: `λ_a = sin²(πs/2)`, and the remaining mass split by
//!   `v = sin²(πw/2)`, which absorbs `x^{−1/2}(1 − x)^{−1/2}` at both ends.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::ensemble::{EnsembleKind, EnsembleSpec};
use crate::error::{Error, Result};
use crate::quad::{integrate, integrate_vec, QuadOptions};
use crate::spectrum::ZERO_FLOOR;

/// Moments of `S₁`, `S₂` and the capacity from one set of quadrature weights.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureResult {
    pub mean_s1: f64,
    pub mean_s1_sq: f64,
    pub mean_s2: f64,
    /// `mean_s2 − mean_s1_sq`
    pub mean_capacity: f64,
    /// Integral of the unnormalized weight in the substituted coordinates.
    pub normalization: f64,
    /// Largest change of any moment when the quadrature tolerance is halved.
    pub est_error: f64,
}

/// Error target for `m = 2`.
pub const TARGET_M2: f64 = 1e-9;
/// Error target for `m = 3`.
pub const TARGET_M3: f64 = 1e-7;

pub fn quad_moments(spec: EnsembleSpec) -> Result<QuadratureResult> {
    let (base, target) = match spec.m() {
        2 => (1e-12, TARGET_M2),
        3 => (1e-11, TARGET_M3),
        m => return Err(Error::Dimensions(format!("simplex oracle supports m in {{2, 3}}, got m = {m}"))),
    };
    let coarse = raw_moments(spec, 1.0, 2.0 * base)?;
    let fine = raw_moments(spec, 1.0, base)?;
    let est_error = [
        fine.mean_s1 - coarse.mean_s1,
        fine.mean_s1_sq - coarse.mean_s1_sq,
        fine.mean_s2 - coarse.mean_s2,
    ]
    .iter()
    .fold(0.0_f64, |acc, d| acc.max(d.abs()));
    if est_error > target {
        return Err(Error::Quadrature { achieved: est_error, target });
    }
    Ok(QuadratureResult { est_error, ..fine })
}

/// Moments with the weight multiplied by `scale`, integrated to relative
/// tolerance `tol`.
pub(crate) fn raw_moments(spec: EnsembleSpec, scale: f64, tol: f64) -> Result<QuadratureResult> {
    let sums = match spec.m() {
        2 => {
            let e = spec.weight_exponent();
            let opts = QuadOptions::tolerance(0.0, tol);
            integrate_vec(|u| two_level_integrand(e, u).map(|v| v * scale), &[0.0, 0.5, 1.0], opts)?.value
        }
        3 => simplex3(spec, scale, tol)?,
        m => return Err(Error::Dimensions(format!("simplex oracle supports m in {{2, 3}}, got m = {m}"))),
    };
    let z = sums[0];
    let (s1, s1sq, s2) = (sums[1] / z, sums[2] / z, sums[3] / z);
    Ok(QuadratureResult {
        mean_s1: s1,
        mean_s1_sq: s1sq,
        mean_s2: s2,
        mean_capacity: s2 - s1sq,
        normalization: z,
        est_error: 0.0,
    })
}

fn xlnx(l: f64) -> (f64, f64) {
    if l < ZERO_FLOOR {
        (0.0, 0.0)
    } else {
        let ln = l.ln();
        (l * ln, l * ln * ln)
    }
}

fn observables(lambdas: &[f64], w: f64) -> [f64; 4] {
    let (mut s1, mut s2) = (0.0, 0.0);
    for &l in lambdas {
        let (a, b) = xlnx(l);
        s1 -= a;
        s2 += b;
    }
    [w, w * s1, w * s1 * s1, w * s2]
}

/// `m = 2`: λ₁ = 1 − u²/2, λ₂ = u²/2; weight (λ₁ − λ₂)² (λ₁λ₂)^e times the
/// Jacobian of λ₁ = (1 + t)/2, t = 1 − u². The Bures-Hall factor 1/(λ₁+λ₂)
/// is identically one.
fn two_level_integrand(e: f64, u: f64) -> [f64; 4] {
    let small = 0.5 * u * u;
    let large = 1.0 - small;
    let t = 1.0 - u * u;
    // (λ₁λ₂)^e dλ₁ = (u²(2 − u²)/4)^e · u du
    let w = t * t * u.powf(2.0 * e + 1.0) * (0.25 * (2.0 - u * u)).powf(e);
    observables(&[large, small], w)
}

/// Unnormalized weight of the larger eigenvalue `λ₁ ∈ [1/2, 1]` for `m = 2`.
pub fn two_level_weight(spec: EnsembleSpec, lambda1: f64) -> f64 {
    let e = spec.weight_exponent();
    (2.0 * lambda1 - 1.0).powi(2) * (lambda1 * (1.0 - lambda1)).powf(e)
}

/// Probability of `λ₁` falling into each of `bins` equal bins on `[1/2, 1]`
/// for `m = 2`.
pub fn two_level_bin_probabilities(spec: EnsembleSpec, bins: usize) -> Result<Vec<f64>> {
    if spec.m() != 2 {
        return Err(Error::Dimensions(format!("two-level density needs m = 2, got {spec}")));
    }
    let e = spec.weight_exponent();
    // λ₁ = 1 − u²/2 maps u ∈ [0, 1] onto [1, 1/2]; bin edges pulled back.
    let edge = |i: usize| (2.0 * (1.0 - (0.5 + 0.5 * i as f64 / bins as f64))).max(0.0).sqrt();
    let opts = QuadOptions::tolerance(1e-14, 1e-12);
    let mut probs = Vec::with_capacity(bins);
    for i in 0..bins {
        let (hi, lo) = (edge(i), edge(i + 1));
        let (p, _) = integrate(|u| two_level_integrand(e, u)[0], &[lo, hi], opts)?;
        probs.push(p);
    }
    let total: f64 = probs.iter().sum();
    probs.iter_mut().for_each(|p| *p /= total);
    Ok(probs)
}

/// Integrand in (s, w) for the full (unordered) 2-simplex.
fn simplex3_integrand(kind: EnsembleKind, e: f64, s: f64, w: f64) -> [f64; 4] {
    let (sa, ca) = (FRAC_PI_2 * s).sin_cos();
    let (sv, cv) = (FRAC_PI_2 * w).sin_cos();
    let x = sa * sa;
    let rest = ca * ca;
    let v = sv * sv;
    let la = x;
    let lb = rest * v;
    let lc = rest * cv * cv;
    // dλ_a dλ_b = (π/2)² sin(πs) sin(πw) (1 − x) ds dw
    let jac = FRAC_PI_2 * FRAC_PI_2 * (PI * s).sin() * (PI * w).sin() * rest;
    let vand = (la - lb) * (la - lc) * (lb - lc);
    let mut weight = vand * vand * (la * lb * lc).powf(e) * jac;
    if kind == EnsembleKind::BuresHall {
        weight /= (la + lb) * (la + lc) * (lb + lc);
    }
    if !weight.is_finite() {
        weight = 0.0;
    }
    observables(&[la, lb, lc], weight)
}

fn simplex3(spec: EnsembleSpec, scale: f64, tol: f64) -> Result<[f64; 4]> {
    let kind = spec.kind();
    let e = spec.weight_exponent();
    let inner_opts = QuadOptions::tolerance(0.0, 0.1 * tol);
    let outer_opts = QuadOptions::tolerance(0.0, tol);
    let failure = std::cell::Cell::new(None);
    let outer = integrate_vec(
        |s| match integrate_vec(|w| simplex3_integrand(kind, e, s, w), &[0.0, 0.5, 1.0], inner_opts) {
            Ok(r) => r.value.map(|v| v * scale),
            Err(err) => {
                failure.set(Some(err));
                [0.0; 4]
            }
        },
        &[0.0, 0.25, 0.5, 0.75, 1.0],
        outer_opts,
    )?;
    if let Some(err) = failure.take() {
        return Err(err);
    }
    Ok(outer.value)
}
