//! Gamma-family special functions on the positive real axis.
//!
//! `polygamma` shifts its argument upward with the recurrence
//! ψ_j(x+1) = ψ_j(x) + (−1)^j j!/x^{j+1} until `x >= 10`, then sums eight
//! terms of the Bernoulli asymptotic series. `polygamma_exact` evaluates the
//! finite-sum forms that hold at integer and half-integer arguments and is
//! kept as an independent reference.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_606_512_090_082_4;

/// π².
pub const PI_SQUARED: f64 = 9.869_604_401_089_358_618_834_490_999_876;

const LN_2: f64 = std::f64::consts::LN_2;
const HALF_LN_2PI: f64 = 0.918_938_533_204_672_741_780_329_736_406;

const ASYMPTOTIC_THRESHOLD: f64 = 10.0;

/// B_2, B_4, ..., B_16.
const BERNOULLI: [f64; 8] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
];

/// A positive integer or half-integer, stored as twice its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HalfInt {
    twice: u32,
}

impl HalfInt {
    pub fn new(twice: u32) -> Result<Self> {
        if twice == 0 {
            return domain("half-integer argument must be positive");
        }
        Ok(Self { twice })
    }

    /// The integer `l >= 1`.
    pub fn integer(l: u32) -> Result<Self> {
        Self::new(2 * l)
    }

    /// The half-integer `l + 1/2`, `l >= 0`.
    pub fn half_above(l: u32) -> Self {
        Self { twice: 2 * l + 1 }
    }

    pub fn twice(self) -> u32 {
        self.twice
    }

    pub fn is_integer(self) -> bool {
        self.twice.is_multiple_of(2)
    }

    pub fn value(self) -> f64 {
        f64::from(self.twice) / 2.0
    }
}

/// Digamma (`order = 0`) or trigamma (`order = 1`) of a positive real.
pub fn polygamma(order: u32, x: f64) -> Result<f64> {
    if order > 1 {
        return domain(format!("polygamma order {order} not supported (only 0 and 1)"));
    }
    if !(x > 0.0) || !x.is_finite() {
        return domain(format!("polygamma argument must be positive and finite, got {x}"));
    }
    Ok(polygamma_shifted(order, x))
}

/// ψ₀(x) for `x > 0`. Panics outside the domain; use [`polygamma`] for a
/// checked version.
pub fn digamma(x: f64) -> f64 {
    assert!(x > 0.0, "digamma argument must be positive, got {x}");
    polygamma_shifted(0, x)
}

/// ψ₁(x) for `x > 0`. Panics outside the domain.
pub fn trigamma(x: f64) -> f64 {
    assert!(x > 0.0, "trigamma argument must be positive, got {x}");
    polygamma_shifted(1, x)
}

/// Polygamma at any real argument that is not a pole (`0, −1, −2, ...`).
/// The upward recurrence is valid across the negative axis as well.
pub(crate) fn polygamma_real(order: u32, x: f64) -> Result<f64> {
    if order > 1 {
        return domain(format!("polygamma order {order} not supported (only 0 and 1)"));
    }
    if !x.is_finite() || (x <= 0.0 && x == x.round()) {
        return domain(format!("polygamma pole or non-finite argument {x}"));
    }
    Ok(polygamma_shifted(order, x))
}

fn polygamma_shifted(order: u32, mut x: f64) -> f64 {
    let mut acc = 0.0;
    while x < ASYMPTOTIC_THRESHOLD {
        if order == 0 {
            acc -= 1.0 / x;
        } else {
            acc += 1.0 / (x * x);
        }
        x += 1.0;
    }
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    if order == 0 {
        // ln x − 1/(2x) − Σ B_{2l} / (2l x^{2l})
        let mut series = 0.0;
        let mut pow = inv2;
        for (l, b) in BERNOULLI.iter().enumerate() {
            series += b / (2.0 * (l as f64 + 1.0)) * pow;
            pow *= inv2;
        }
        acc + x.ln() - 0.5 * inv - series
    } else {
        // (1 + 2x)/(2x²) + Σ B_{2l} / x^{2l+1}
        let mut series = 0.0;
        let mut pow = inv2 * inv;
        for b in BERNOULLI.iter() {
            series += b * pow;
            pow *= inv2;
        }
        acc + inv + 0.5 * inv2 + series
    }
}

/// Finite-sum polygamma at an integer or half-integer argument.
pub fn polygamma_exact(order: u32, x: HalfInt) -> Result<f64> {
    if order > 1 {
        return domain(format!("polygamma order {order} not supported (only 0 and 1)"));
    }
    let twice = x.twice();
    if twice == 0 {
        return domain("polygamma_exact argument must be positive");
    }
    let value = if x.is_integer() {
        let l = u64::from(twice / 2);
        match order {
            0 => -EULER_GAMMA + (1..l).map(|k| 1.0 / k as f64).sum::<f64>(),
            _ => PI_SQUARED / 6.0 - (1..l).map(|k| 1.0 / (k * k) as f64).sum::<f64>(),
        }
    } else {
        let l = u64::from(twice / 2);
        match order {
            0 => {
                -EULER_GAMMA - 2.0 * LN_2
                    + 2.0 * (0..l).map(|k| 1.0 / (2 * k + 1) as f64).sum::<f64>()
            }
            _ => {
                PI_SQUARED / 2.0
                    - 3.0 * (1..l).map(|k| 1.0 / (k * k) as f64).sum::<f64>()
                    - 4.0 * (l..2 * l).map(|k| 1.0 / (k * k) as f64).sum::<f64>()
            }
        }
    };
    Ok(value)
}

/// ln Γ(x) for `x > 0`.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return domain(format!("ln_gamma argument must be positive and finite, got {x}"));
    }
    Ok(ln_gamma_positive(x))
}

pub(crate) fn ln_gamma_positive(mut x: f64) -> f64 {
    let mut prod = 1.0;
    while x < ASYMPTOTIC_THRESHOLD {
        prod *= x;
        x += 1.0;
    }
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    // Stirling: Σ B_{2k} / (2k(2k−1) x^{2k−1})
    let mut series = 0.0;
    let mut pow = inv;
    for (l, b) in BERNOULLI.iter().enumerate() {
        let k2 = 2.0 * (l as f64 + 1.0);
        series += b / (k2 * (k2 - 1.0)) * pow;
        pow *= inv2;
    }
    (x - 0.5) * x.ln() - x + HALF_LN_2PI + series - prod.ln()
}

/// Γ(x) for `x > 0`.
/// `(ln|Γ(x)|, sign Γ(x))` on the whole real line, `None` at the poles.
pub(crate) fn ln_gamma_signed(x: f64) -> Option<(f64, f64)> {
    if x > 0.0 {
        return Some((ln_gamma_positive(x), 1.0));
    }
    if !x.is_finite() || x == x.round() {
        return None;
    }
    // Γ(x) Γ(1 − x) = π / sin(πx)
    let sin = (std::f64::consts::PI * x).sin();
    Some((std::f64::consts::PI.ln() - sin.abs().ln() - ln_gamma_positive(1.0 - x), sin.signum()))
}

pub(crate) fn gamma_positive(x: f64) -> f64 {
    ln_gamma_positive(x).exp()
}
