//! Laguerre-polynomial route to E[T₂] over the induced Hilbert-Schmidt
//! ensemble: the one-point density, Schrödinger's integral identity and its
//! log² generalization, and the resolved closed forms 𝒜_{m−1,m−1} and
//! 𝒜_{m−2,m}.

use serde::{Deserialize, Serialize};

use crate::ensemble::{EnsembleKind, EnsembleSpec};
use crate::error::{domain, Error, Result};
use crate::exact::{mean_s1, s2_from_t2, var_s1};
use crate::quad::{integrate, log_spaced_breaks, QuadOptions};
use crate::specfun::{digamma, gamma_positive, ln_gamma_positive, polygamma_real, trigamma};
use crate::sums::{psi_sum, PsiParams};

/// Degree `k` and order `α > −1` of a generalized Laguerre polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LaguerreParams {
    degree: u32,
    order: f64,
}

impl LaguerreParams {
    pub fn new(degree: u32, order: f64) -> Result<Self> {
        if !(order > -1.0) || !order.is_finite() {
            return domain(format!("Laguerre order must exceed -1, got {order}"));
        }
        Ok(Self { degree, order })
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn order(&self) -> f64 {
        self.order
    }
}

/// L_k^{(α)}(x) by the three-term recurrence
/// (k+1) L_{k+1} = (2k + 1 + α − x) L_k − (k + α) L_{k−1}.
pub fn laguerre(p: LaguerreParams, x: f64) -> f64 {
    laguerre_run(p.degree, p.order, x).1
}

/// (L_{k−1}, L_k, L_{k+1}) in one pass, with L_{−1} = 0.
fn laguerre_run(k: u32, order: f64, x: f64) -> (f64, f64, f64) {
    let (mut prev, mut cur) = (0.0, 1.0);
    for j in 0..=k {
        let jf = f64::from(j);
        let next = ((2.0 * jf + 1.0 + order - x) * cur - (jf + order) * prev) / (jf + 1.0);
        if j == k {
            return (prev, cur, next);
        }
        prev = cur;
        cur = next;
    }
    unreachable!()
}

/// Density of one (unordered) eigenvalue of the induced Hilbert-Schmidt
/// ensemble:
/// (m−1)!/(m+α−1)! · x^α e^{−x} [(L_{m−1}^{(α+1)})² − L_{m−2}^{(α+1)} L_m^{(α+1)}].
pub fn p_hs_density(spec: EnsembleSpec, x: f64) -> Result<f64> {
    spec.require(EnsembleKind::HilbertSchmidt)?;
    if !(x >= 0.0) {
        return domain(format!("eigenvalue density needs x >= 0, got {x}"));
    }
    Ok(density_unchecked(spec.m(), spec.alpha(), x))
}

fn density_unchecked(m: u32, alpha: u32, x: f64) -> f64 {
    let (mf, a) = (f64::from(m), f64::from(alpha));
    let log_norm = ln_gamma_positive(mf) - ln_gamma_positive(mf + a);
    let weight = if x == 0.0 {
        if alpha == 0 {
            log_norm.exp()
        } else {
            return 0.0;
        }
    } else {
        (log_norm + a * x.ln() - x).exp()
    };
    let (lm2, lm1, lm) = laguerre_run(m - 1, a + 1.0, x);
    weight * (lm1 * lm1 - lm2 * lm)
}

/// C(x, j) for real `x`: x(x−1)…(x−j+1)/j!.
fn binomial_real(x: f64, j: u32) -> f64 {
    let mut v = 1.0;
    for i in 0..j {
        v *= (x - f64::from(i)) / f64::from(i + 1);
    }
    v
}

fn schrodinger_terms(q: f64, a: f64, b: f64, s: u32, t: u32) -> impl Iterator<Item = (u32, f64)> {
    (0..=s.min(t)).map(move |k| {
        let term = binomial_real(q - a, s - k) * binomial_real(q - b, t - k)
            * gamma_positive(q + 1.0 + f64::from(k))
            / gamma_positive(f64::from(k) + 1.0);
        (k, term)
    })
}

fn sign(s: u32, t: u32) -> f64 {
    if (s + t).is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// ∫₀^∞ x^q e^{−x} L_s^{(a)}(x) L_t^{(b)}(x) dx
/// = (−1)^{s+t} Σ_k C(q−a, s−k) C(q−b, t−k) Γ(q+1+k)/k!.
pub fn schrodinger_integral(q: f64, a: f64, b: f64, s: u32, t: u32) -> Result<f64> {
    if !(q > -1.0) {
        return domain(format!("Schrodinger integral needs q > -1, got {q}"));
    }
    Ok(sign(s, t) * schrodinger_terms(q, a, b, s, t).map(|(_, v)| v).sum::<f64>())
}

/// ∫₀^∞ x^q e^{−x} ln² x L_s^{(a)}(x) L_t^{(b)}(x) dx, the second
/// q-derivative of [`schrodinger_integral`]: each term is weighted by
/// Ω₀² + Ω₁ with
/// Ω_j = ψ_j(q+1+k) + ψ_j(q−a+1) + ψ_j(q−b+1) − ψ_j(q−a−s+1+k) − ψ_j(q−b−t+1+k).
///
/// Parameter sets where any of these arguments is a pole are rejected.
pub fn schrodinger_log2_integral(q: f64, a: f64, b: f64, s: u32, t: u32) -> Result<f64> {
    if !(q > -1.0) {
        return domain(format!("Schrodinger integral needs q > -1, got {q}"));
    }
    let omega = |j: u32, k: f64| -> Result<f64> {
        let psi = |x: f64| {
            polygamma_real(j, x).map_err(|_| {
                Error::DegenerateParameters(format!(
                    "psi_{j}({x}) is a pole at q={q}, a={a}, b={b}, s={s}, t={t}"
                ))
            })
        };
        Ok(psi(q + 1.0 + k)? + psi(q - a + 1.0)? + psi(q - b + 1.0)?
            - psi(q - a - f64::from(s) + 1.0 + k)?
            - psi(q - b - f64::from(t) + 1.0 + k)?)
    };
    let mut sum = 0.0;
    for (k, term) in schrodinger_terms(q, a, b, s, t) {
        let kf = f64::from(k);
        let w0 = omega(0, kf)?;
        let w1 = omega(1, kf)?;
        sum += term * (w0 * w0 + w1);
    }
    Ok(sign(s, t) * sum)
}

/// Closed forms of 𝒜_{m−1,m−1} and 𝒜_{m−2,m}; their difference is E[T₂].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AClosedForms {
    pub a_mm: f64,
    pub a_m2m: f64,
}

impl AClosedForms {
    /// E[T₂] = 𝒜_{m−1,m−1} − 𝒜_{m−2,m}.
    pub fn mean_t2(&self) -> f64 {
        self.a_mm - self.a_m2m
    }
}

/// 𝒜_{m−1,m−1} = mn Ψ_{0,α} + mn(ψ₀²(n+1) + ψ₁(n+1)) + 2n(ψ₀(n−m+1) − ψ₀(n+1)).
pub fn a_mm(spec: EnsembleSpec) -> Result<f64> {
    spec.require(EnsembleKind::HilbertSchmidt)?;
    let (m, n) = (f64::from(spec.m()), f64::from(spec.n()));
    let psi = psi_sum(PsiParams::new(spec.m(), 0.0, f64::from(spec.alpha()))?);
    let p0 = digamma(n + 1.0);
    Ok(m * n * psi + m * n * (p0 * p0 + trigamma(n + 1.0)) + 2.0 * n * (digamma(n - m + 1.0) - p0))
}

/// Both closed forms; 𝒜_{m−2,m} involves L_{m−2} and needs `m >= 2`.
pub fn a_closed_forms(spec: EnsembleSpec) -> Result<AClosedForms> {
    spec.require(EnsembleKind::HilbertSchmidt)?;
    if spec.m() < 2 {
        return Err(Error::Dimensions(format!(
            "A_(m-2,m) needs m >= 2, got m = {}",
            spec.m()
        )));
    }
    let (m, n) = (f64::from(spec.m()), f64::from(spec.n()));
    let a_m2m = (n * n + n - m * m + m) * digamma(n - m + 1.0) - n * (n + 1.0) * digamma(n + 1.0)
        + 0.5 * m * (2.0 * n + 3.0 * m - 1.0);
    Ok(AClosedForms { a_mm: a_mm(spec)?, a_m2m })
}

/// E[C] rebuilt from E[T₂]: convert to E[S₂] with the trace-conditioning
/// relation, then subtract V[S₁] + E[S₁]². This route never touches the
/// capacity formula itself.
pub fn pipeline_capacity(spec: EnsembleSpec) -> Result<f64> {
    let t2 = a_closed_forms(spec)?.mean_t2();
    let e1 = mean_s1(spec);
    let s2 = s2_from_t2(t2, e1, spec)?;
    Ok(s2 - (var_s1(spec) + e1 * e1))
}

/// Largest `m` or `n` accepted by [`mean_t2_quadrature`].
pub const QUADRATURE_MAX_DIM: u32 = 32;

/// Upper cutoff for the eigenvalue integrals; the density beyond it is below
/// 1e-14.
pub fn density_cutoff(spec: EnsembleSpec) -> f64 {
    let (m, n) = (f64::from(spec.m()), f64::from(spec.n()));
    n + m + 40.0 * n.sqrt()
}

/// E[T₂] = m ∫₀^∞ x ln² x p_HS(x) dx by adaptive quadrature.
pub fn mean_t2_quadrature(spec: EnsembleSpec) -> Result<f64> {
    spec.require(EnsembleKind::HilbertSchmidt)?;
    if spec.n() > QUADRATURE_MAX_DIM {
        return Err(Error::Dimensions(format!(
            "quadrature of E[T2] supports m, n <= {QUADRATURE_MAX_DIM}, got {spec}"
        )));
    }
    let (m, alpha) = (spec.m(), spec.alpha());
    let breaks = log_spaced_breaks(density_cutoff(spec), 12, 4 * m as usize + 8);
    let (value, _) = integrate(
        |x| {
            if x == 0.0 {
                0.0
            } else {
                let l = x.ln();
                x * l * l * density_unchecked(m, alpha, x)
            }
        },
        &breaks,
        QuadOptions::tolerance(1e-10, 1e-13),
    )?;
    Ok(f64::from(m) * value)
}
