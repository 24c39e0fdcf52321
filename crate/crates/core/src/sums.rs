//! Factorial-ratio sums over `1/k^j` and the summation identities that
//! reduce them to polygamma values.
//!
//! Factorials of real argument are `Γ(x + 1)`. Every identity is exposed as
//! a two-sided check: the left side by brute-force summation, the right side
//! by its closed form.

use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::specfun::{digamma, ln_gamma_positive, ln_gamma_signed, polygamma_real, trigamma};

const INTEGRALITY_TOL: f64 = 1e-9;

/// Parameters `(m, a, b)` of Ψ_{a,b}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PsiParams {
    m: u32,
    a: f64,
    b: f64,
    upper: u32,
}

impl PsiParams {
    /// Requires `m + a` to be a nonnegative integer (the upper summation
    /// limit) and no factorial argument `m + b − k`, `k ≤ m + a`, nor `m + b`
    /// itself, to be a negative integer. For integer `b − a` that means
    /// `b − a > −1`; non-integer offsets only meet finite gamma values.
    pub fn new(m: u32, a: f64, b: f64) -> Result<Self> {
        if m < 1 {
            return domain("Psi sum needs m >= 1");
        }
        if !a.is_finite() || !b.is_finite() {
            return domain("Psi sum offsets must be finite");
        }
        let top = f64::from(m) + a;
        let upper = top.round();
        if (top - upper).abs() > INTEGRALITY_TOL || upper < 0.0 {
            return domain(format!("m + a = {top} is not a nonnegative integer"));
        }
        let gap = b - a;
        let integral_gap = (gap - gap.round()).abs() <= INTEGRALITY_TOL;
        if upper >= 1.0 && integral_gap && !(gap > -1.0) {
            return domain(format!("factorial argument m + b - k reaches a pole: b - a = {gap} <= -1"));
        }
        let mb = f64::from(m) + b;
        if mb <= -1.0 && (mb - mb.round()).abs() <= INTEGRALITY_TOL {
            return domain(format!("(m + b)! has a pole at m + b = {mb}"));
        }
        Ok(Self { m, a, b, upper: upper as u32 })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// Upper summation limit `m + a`.
    pub fn upper(&self) -> u32 {
        self.upper
    }
}

/// Ψ_{a,b} = 2(m+a)!/(m+b)! Σ_{k=1}^{m+a} (m+b−k)!/(m+a−k)! / k².
///
/// When every factorial argument is nonnegative the terms are positive and
/// each factorial ratio is the exponential of a log-gamma difference. When
/// `m + b − k` runs below zero (as in Ψ_{2β,β} with β ≥ 3/2) the tail
/// alternates with terms many orders of magnitude above the result; for
/// half-integer `b − a` the sum is then evaluated exactly in big-integer
/// arithmetic and rounded once.
pub fn psi_sum(p: PsiParams) -> f64 {
    let m = f64::from(p.m);
    let lowest = m + p.b - f64::from(p.upper) + 1.0;
    let twice_c = 2.0 * (m + p.b);
    if p.upper >= 1 && lowest < 0.0 && (twice_c - twice_c.round()).abs() <= INTEGRALITY_TOL {
        return psi_sum_exact(p.upper, twice_c.round() as i64);
    }
    let signed = |x: f64| ln_gamma_signed(x).expect("poles excluded by PsiParams");
    let top_a = ln_gamma_positive(m + p.a + 1.0);
    let (top_b, sign_b) = signed(m + p.b + 1.0);
    let mut sum = 0.0;
    for k in 1..=p.upper {
        let kf = f64::from(k);
        let (num, sign) = signed(m + p.b - kf + 1.0);
        let log_ratio = top_a - top_b + num - ln_gamma_positive(m + p.a - kf + 1.0);
        sum += sign * sign_b * log_ratio.exp() / (kf * kf);
    }
    2.0 * sum
}

/// Exact Ψ for upper limit `u` and `2(m + b) = twice_c`, using
/// t_k = 2 Π_{i<k} 2(u − i) / (Π_{i<k} (twice_c − 2i) · k²)
/// over the common denominator Π_{i<u}(twice_c − 2i) · lcm(1..u)².
fn psi_sum_exact(u: u32, twice_c: i64) -> f64 {
    let factor = |i: u32| BigInt::from(twice_c - 2 * i64::from(i));
    let mut lcm = BigInt::one();
    for k in 1..=u {
        lcm = lcm.lcm(&BigInt::from(k));
    }
    let lcm_sq = &lcm * &lcm;
    // suffix[k] = Π_{i=k}^{u−1} (twice_c − 2i), k = 1..=u
    let mut suffix = vec![BigInt::one(); u as usize + 1];
    for k in (1..u).rev() {
        suffix[k as usize] = &suffix[k as usize + 1] * factor(k);
    }
    let q_total = &suffix[1] * factor(0);
    let mut prefix = BigInt::one();
    let mut num = BigInt::zero();
    for k in 1..=u {
        prefix *= 2 * (u - k + 1);
        let k_sq = BigInt::from(u64::from(k) * u64::from(k));
        num += &prefix * &suffix[k as usize] * (&lcm_sq / k_sq);
    }
    2.0 * bigint_ratio(&num, &(q_total * lcm_sq))
}

/// `num / den` correctly rounded up to one unit of truncation.
fn bigint_ratio(num: &BigInt, den: &BigInt) -> f64 {
    if num.is_zero() {
        return 0.0;
    }
    let sign = if (num.sign() == Sign::Minus) == (den.sign() == Sign::Minus) { 1.0 } else { -1.0 };
    let (n, d) = (num.magnitude(), den.magnitude());
    let shift = d.bits() as i64 - n.bits() as i64 + 64;
    let q = if shift >= 0 { (n << shift as u64) / d } else { n / (d << (-shift) as u64) };
    let mantissa = q.to_f64().expect("quotient has about 64 bits");
    sign * mantissa * 2f64.powi(-(shift as i32))
}

/// Ψ_{a,b} through its terminating ₄F₃(1,1,1,1−m−a; 2,2,1−m−b; 1) form.
pub fn psi_sum_4f3(p: PsiParams) -> Result<f64> {
    let m = f64::from(p.m);
    if p.upper == 0 {
        return Ok(0.0);
    }
    let f = terminating_hypergeometric(&[1.0, 1.0, 1.0, 1.0 - m - p.a], &[2.0, 2.0, 1.0 - m - p.b])?;
    Ok(2.0 * (m + p.a) / (m + p.b) * f)
}

/// Unit-argument value of a generalized hypergeometric series that
/// terminates because one upper parameter is a nonpositive integer.
pub fn terminating_hypergeometric(upper: &[f64], lower: &[f64]) -> Result<f64> {
    let terms = upper
        .iter()
        .filter(|&&u| u <= 0.0 && (u - u.round()).abs() < INTEGRALITY_TOL)
        .map(|&u| (-u.round()) as u64 + 1)
        .min()
        .ok_or_else(|| Error::Domain("series does not terminate: no nonpositive integer upper parameter".into()))?;

    let mut term = 1.0;
    let mut sum = 1.0;
    for j in 0..terms - 1 {
        let jf = j as f64;
        let mut ratio = 1.0 / (jf + 1.0);
        for &u in upper {
            ratio *= u + jf;
        }
        for &l in lower {
            let denom = l + jf;
            if denom.abs() < INTEGRALITY_TOL {
                return domain(format!(
                    "lower parameter {l} reaches zero at term {} before the series terminates",
                    j + 1
                ));
            }
            ratio /= denom;
        }
        term *= ratio;
        sum += term;
    }
    Ok(sum)
}

/// Σ_{k=1}^{m} ψ₀(k + c)/k, the basis sum that does not reduce to closed form
/// for general `c`.
pub fn basis_sum(m: u32, c: f64) -> Result<f64> {
    if !(1.0 + c > 0.0) {
        return domain(format!("basis sum argument k + c = {} is not positive", 1.0 + c));
    }
    Ok((1..=m).map(|k| digamma(f64::from(k) + c) / f64::from(k)).sum())
}

/// Which summation identity to audit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum IdentityId {
    A1,
    A2,
    A3,
    A4,
    #[serde(rename = "A_ab")]
    Aab,
    #[serde(rename = "A_b")]
    Ab,
}

impl IdentityId {
    pub const ALL: [IdentityId; 6] = [Self::A1, Self::A2, Self::A3, Self::A4, Self::Aab, Self::Ab];
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Self::A1 => "A1",
            Self::A2 => "A2",
            Self::A3 => "A3",
            Self::A4 => "A4",
            Self::Aab => "A_ab",
            Self::Ab => "A_b",
        };
        f.write_str(s)
    }
}

/// An identity together with the parameters it is evaluated at.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "id")]
pub enum IdentityCase {
    /// Σ (n−k)!/(m−k)! = n!/(m−1)! · 1/(n−m+1)
    A1 { m: u32, n: u32 },
    /// Σ (n−k)!/(m−k)!/k = n!/m! (ψ₀(n+1) − ψ₀(n−m+1))
    A2 { m: u32, n: u32 },
    /// Σ (n−k)!/(m−k)!/k² in terms of the basis sum; needs `n > m`.
    A3 { m: u32, n: u32 },
    /// Σ ψ₀(k+a)/(k+a)
    A4 { m: u32, a: f64 },
    /// Exchange of the shifts in Σ ψ₀(k+a)/(k+b), `a != b`.
    #[serde(rename = "A_ab")]
    Aab { m: u32, a: f64, b: f64 },
    /// Σ_{k=1}^{2β} ψ₀(k−β)/k for β a positive half-integer, given as `2β`.
    #[serde(rename = "A_b")]
    Ab { twice_beta: u32 },
}

impl IdentityCase {
    pub fn id(&self) -> IdentityId {
        match self {
            Self::A1 { .. } => IdentityId::A1,
            Self::A2 { .. } => IdentityId::A2,
            Self::A3 { .. } => IdentityId::A3,
            Self::A4 { .. } => IdentityId::A4,
            Self::Aab { .. } => IdentityId::Aab,
            Self::Ab { .. } => IdentityId::Ab,
        }
    }
}

/// Both sides of an identity and their relative disagreement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdentityResidual {
    pub case: IdentityCase,
    pub lhs: f64,
    pub rhs: f64,
    /// `|lhs − rhs| / max(1, |rhs|)`
    pub residual: f64,
}

/// (n−k)!/(m−k)! as an exact integer product, `k <= m <= n`.
fn falling_ratio(n: u32, m: u32, k: u32) -> f64 {
    (m - k + 1..=n - k).map(f64::from).product()
}

/// n!/m! for `m <= n`.
fn factorial_ratio(n: u32, m: u32) -> f64 {
    (m + 1..=n).map(f64::from).product()
}

fn check_mn(m: u32, n: u32) -> Result<()> {
    if m < 1 || n < m {
        return domain(format!("identity needs 1 <= m <= n, got m = {m}, n = {n}"));
    }
    Ok(())
}

fn check_offset(name: &str, v: f64) -> Result<()> {
    if !(v >= 0.0) || !v.is_finite() {
        return domain(format!("identity offset {name} must be a nonnegative real, got {v}"));
    }
    Ok(())
}

/// Evaluates both sides of a summation identity.
pub fn identity_residual(case: IdentityCase) -> Result<IdentityResidual> {
    let (lhs, rhs) = match case {
        IdentityCase::A1 { m, n } => {
            check_mn(m, n)?;
            let lhs: f64 = (1..=m).map(|k| falling_ratio(n, m, k)).sum();
            let rhs = factorial_ratio(n, m - 1) / f64::from(n - m + 1);
            (lhs, rhs)
        }
        IdentityCase::A2 { m, n } => {
            check_mn(m, n)?;
            let lhs: f64 = (1..=m).map(|k| falling_ratio(n, m, k) / f64::from(k)).sum();
            let (mf, nf) = (f64::from(m), f64::from(n));
            let rhs = factorial_ratio(n, m) * (digamma(nf + 1.0) - digamma(nf - mf + 1.0));
            (lhs, rhs)
        }
        IdentityCase::A3 { m, n } => {
            check_mn(m, n)?;
            if n == m {
                return domain("A3 contains psi0(n - m), which is singular at n = m");
            }
            let lhs: f64 = (1..=m)
                .map(|k| falling_ratio(n, m, k) / f64::from(k * k))
                .sum();
            let (mf, nf) = (f64::from(m), f64::from(n));
            let basis: f64 = (1..=m)
                .map(|k| digamma(f64::from(k) + nf - mf) / f64::from(k))
                .sum();
            let d = nf - mf;
            let tail = 0.5
                * (trigamma(d + 1.0) - trigamma(nf + 1.0) + digamma(d + 1.0).powi(2)
                    - digamma(nf + 1.0).powi(2))
                + digamma(d)
                    * (digamma(nf + 1.0) - digamma(mf + 1.0) - digamma(d + 1.0) + digamma(1.0));
            let rhs = factorial_ratio(n, m) * (basis + tail);
            (lhs, rhs)
        }
        IdentityCase::A4 { m, a } => {
            check_offset("a", a)?;
            let lhs: f64 = (1..=m)
                .map(|k| {
                    let x = f64::from(k) + a;
                    digamma(x) / x
                })
                .sum();
            let top = a + f64::from(m) + 1.0;
            let rhs = 0.5
                * (trigamma(top) - trigamma(a + 1.0) + digamma(top).powi(2)
                    - digamma(a + 1.0).powi(2));
            (lhs, rhs)
        }
        IdentityCase::Aab { m, a, b } => {
            check_offset("a", a)?;
            check_offset("b", b)?;
            if a == b {
                return domain("A_ab needs a != b");
            }
            let lhs: f64 = (1..=m)
                .map(|k| digamma(f64::from(k) + a) / (f64::from(k) + b))
                .sum();
            let swapped: f64 = (1..=m)
                .map(|k| digamma(f64::from(k) + b) / (f64::from(k) + a))
                .sum();
            let mf = f64::from(m);
            let (am, bm) = (digamma(a + mf + 1.0), digamma(b + mf + 1.0));
            let (a1, b1) = (digamma(a + 1.0), digamma(b + 1.0));
            let rhs = -swapped + am * bm - a1 * b1 + (am - bm - a1 + b1) / (a - b);
            (lhs, rhs)
        }
        IdentityCase::Ab { twice_beta } => {
            if twice_beta % 2 == 0 {
                return domain(format!(
                    "A_b needs a positive half-integer beta, got {}",
                    f64::from(twice_beta) / 2.0
                ));
            }
            let beta = f64::from(twice_beta) / 2.0;
            let mut lhs = 0.0;
            for k in 1..=twice_beta {
                lhs += polygamma_real(0, f64::from(k) - beta)? / f64::from(k);
            }
            let rhs = 0.5 * trigamma(beta + 1.0)
                + digamma(beta + 1.0) * (digamma(2.0 * beta + 1.0) - digamma(1.0))
                - 1.5 * trigamma(1.0);
            (lhs, rhs)
        }
    };
    Ok(IdentityResidual {
        case,
        lhs,
        rhs,
        residual: (lhs - rhs).abs() / rhs.abs().max(1.0),
    })
}

/// Offsets used for the A4 and A_ab parameter grids.
pub const OFFSET_GRID: [f64; 5] = [0.0, 0.5, 1.0, 2.5, 7.0];

/// The audit grid: A1, A2 for 1 ≤ m ≤ n ≤ 30, A3 for m < n ≤ 30, A4 and
/// A_ab for m ≤ 30 over [`OFFSET_GRID`], and A_b for 2β = 1, 3, …, 19.
pub fn identity_grid() -> Vec<IdentityCase> {
    let mut cases = Vec::new();
    for m in 1..=30u32 {
        for n in m..=30u32 {
            cases.push(IdentityCase::A1 { m, n });
            cases.push(IdentityCase::A2 { m, n });
            if n > m {
                cases.push(IdentityCase::A3 { m, n });
            }
        }
        for &a in &OFFSET_GRID {
            cases.push(IdentityCase::A4 { m, a });
            for &b in OFFSET_GRID.iter().filter(|&&b| b != a) {
                cases.push(IdentityCase::Aab { m, a, b });
            }
        }
    }
    cases.extend((1..=19).step_by(2).map(|twice_beta| IdentityCase::Ab { twice_beta }));
    cases
}
