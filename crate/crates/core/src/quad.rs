//! Globally adaptive Gauss–Kronrod (7/15) quadrature over a finite interval,
//! for scalar and fixed-size vector integrands.
//!
//! All components of a vector integrand share the same panels, so ratios of
//! moments taken from one call are computed from identical weights.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

/// Gauss weights for nodes XGK[1], XGK[3], XGK[5], XGK[7].
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_panels: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self { abs_tol: 1e-12, rel_tol: 1e-12, max_panels: 4000 }
    }
}

impl QuadOptions {
    pub fn tolerance(abs_tol: f64, rel_tol: f64) -> Self {
        Self { abs_tol, rel_tol, ..Self::default() }
    }
}

/// Integral value and error estimate per component.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult<const N: usize> {
    pub value: [f64; N],
    pub error: [f64; N],
    pub panels: usize,
}

struct Panel<const N: usize> {
    a: f64,
    b: f64,
    value: [f64; N],
    error: [f64; N],
    priority: f64,
}

impl<const N: usize> PartialEq for Panel<N> {
    fn eq(&self, other: &Self) -> bool {
        self.priority == other.priority
    }
}
impl<const N: usize> Eq for Panel<N> {}
impl<const N: usize> PartialOrd for Panel<N> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<const N: usize> Ord for Panel<N> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.priority.total_cmp(&other.priority)
    }
}

fn gk15<const N: usize, F: Fn(f64) -> [f64; N]>(f: &F, a: f64, b: f64) -> ([f64; N], [f64; N]) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kron = [0.0; N];
    let mut gauss = [0.0; N];
    for c in 0..N {
        kron[c] = WGK[7] * fc[c];
        gauss[c] = WG[3] * fc[c];
    }
    for (j, &x) in XGK.iter().take(7).enumerate() {
        let dx = half * x;
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        for c in 0..N {
            let s = f1[c] + f2[c];
            kron[c] += WGK[j] * s;
            if j % 2 == 1 {
                gauss[c] += WG[j / 2] * s;
            }
        }
    }
    let mut err = [0.0; N];
    for c in 0..N {
        kron[c] *= half;
        gauss[c] *= half;
        err[c] = (kron[c] - gauss[c]).abs();
    }
    (kron, err)
}

fn priority<const N: usize>(err: &[f64; N], scale: &[f64; N]) -> f64 {
    err.iter().zip(scale).map(|(e, s)| e / s).fold(0.0, f64::max)
}

/// Integrates a vector-valued `f` over `[breaks[0], breaks[last]]`, starting
/// from the panels given by consecutive breakpoints.
pub fn integrate_vec<const N: usize, F>(f: F, breaks: &[f64], opts: QuadOptions) -> Result<QuadResult<N>>
where
    F: Fn(f64) -> [f64; N],
{
    assert!(breaks.len() >= 2, "need at least one panel");
    let mut heap = BinaryHeap::new();
    let mut total = [0.0; N];
    let mut total_err = [0.0; N];
    let unit = [1.0; N];
    for w in breaks.windows(2) {
        let (value, error) = gk15(&f, w[0], w[1]);
        for c in 0..N {
            total[c] += value[c];
            total_err[c] += error[c];
        }
        heap.push(Panel { a: w[0], b: w[1], value, error, priority: priority(&error, &unit) });
    }
    let target = |total: &[f64; N]| {
        let mut t = [0.0; N];
        for c in 0..N {
            t[c] = opts.abs_tol.max(opts.rel_tol * total[c].abs());
        }
        t
    };
    loop {
        let tol = target(&total);
        if (0..N).all(|c| total_err[c] <= tol[c]) {
            break;
        }
        if heap.len() >= opts.max_panels {
            let achieved = (0..N).map(|c| total_err[c]).fold(0.0, f64::max);
            let goal = (0..N).map(|c| tol[c]).fold(f64::INFINITY, f64::min);
            return Err(Error::Quadrature { achieved, target: goal });
        }
        // Re-rank by the current tolerance so each component is weighed by
        // how far it is from its own target.
        if heap.len() % 64 == 0 {
            let panels: Vec<_> = heap.drain().collect();
            for mut p in panels {
                p.priority = priority(&p.error, &tol);
                heap.push(p);
            }
        }
        let worst = heap.pop().expect("heap is nonempty");
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) {
            // Panel is at floating-point resolution; accept it as is.
            let achieved = (0..N).map(|c| total_err[c]).fold(0.0, f64::max);
            let goal = (0..N).map(|c| tol[c]).fold(f64::INFINITY, f64::min);
            return Err(Error::Quadrature { achieved, target: goal });
        }
        for c in 0..N {
            total[c] -= worst.value[c];
            total_err[c] -= worst.error[c];
        }
        for (a, b) in [(worst.a, mid), (mid, worst.b)] {
            let (value, error) = gk15(&f, a, b);
            for c in 0..N {
                total[c] += value[c];
                total_err[c] += error[c];
            }
            heap.push(Panel { a, b, value, error, priority: priority(&error, &tol) });
        }
    }
    // Re-sum from the panels to shed accumulated add/subtract rounding.
    let mut value = [0.0; N];
    let mut error = [0.0; N];
    let mut panels: Vec<_> = heap.into_vec();
    panels.sort_by(|p, q| p.a.total_cmp(&q.a));
    for p in &panels {
        for c in 0..N {
            value[c] += p.value[c];
            error[c] += p.error[c];
        }
    }
    Ok(QuadResult { value, error, panels: panels.len() })
}

/// Scalar version of [`integrate_vec`].
pub fn integrate<F: Fn(f64) -> f64>(f: F, breaks: &[f64], opts: QuadOptions) -> Result<(f64, f64)> {
    let r = integrate_vec(|x| [f(x)], breaks, opts)?;
    Ok((r.value[0], r.error[0]))
}

/// Breakpoints for `[0, upper]` with geometrically shrinking panels towards
/// zero, for integrands like `x^α ln² x`.
pub fn log_spaced_breaks(upper: f64, decades: i32, linear_panels: usize) -> Vec<f64> {
    let mut breaks = vec![0.0];
    let first = upper.min(1.0);
    for e in (1..=decades).rev() {
        breaks.push(first * 10f64.powi(-e));
    }
    breaks.push(first);
    if upper > 1.0 {
        let step = (upper - 1.0) / linear_panels as f64;
        for i in 1..=linear_panels {
            breaks.push(1.0 + step * i as f64);
        }
    }
    breaks
}
