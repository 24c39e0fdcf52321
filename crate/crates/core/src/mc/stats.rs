//! Running moments and convergence diagnostics for correlated chains.

/// Welford accumulator; merging is associative up to rounding and is done in
/// a fixed order by the callers.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RunningMoments {
    count: u64,
    mean: f64,
    m2: f64,
}

impl RunningMoments {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    pub fn merge(&mut self, other: &Self) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = *other;
            return;
        }
        let total = self.count + other.count;
        let delta = other.mean - self.mean;
        self.mean += delta * other.count as f64 / total as f64;
        self.m2 += other.m2 + delta * delta * (self.count as f64 * other.count as f64 / total as f64);
        self.count = total;
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Unbiased sample variance; zero for fewer than two points.
    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            (self.m2 / (self.count - 1) as f64).max(0.0)
        }
    }
}

impl FromIterator<f64> for RunningMoments {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = Self::default();
        for x in iter {
            acc.push(x);
        }
        acc
    }
}

fn autocovariance(xs: &[f64], mean: f64, lag: usize) -> f64 {
    let n = xs.len();
    let s: f64 = xs[..n - lag].iter().zip(&xs[lag..]).map(|(a, b)| (a - mean) * (b - mean)).sum();
    s / n as f64
}

/// Effective sample size of one chain by Geyer's initial positive sequence:
/// autocorrelations are summed in adjacent pairs until a pair sum turns
/// nonpositive, with the pair sums forced to be nonincreasing.
pub fn effective_sample_size(xs: &[f64]) -> f64 {
    let n = xs.len();
    if n < 4 {
        return n as f64;
    }
    let mean = xs.iter().sum::<f64>() / n as f64;
    let c0 = autocovariance(xs, mean, 0);
    if !(c0 > 0.0) {
        return n as f64;
    }
    let mut tau = -1.0;
    let mut prev_pair = f64::INFINITY;
    let mut lag = 0;
    while lag + 1 < n {
        let pair = (autocovariance(xs, mean, lag) + autocovariance(xs, mean, lag + 1)) / c0;
        if pair <= 0.0 {
            break;
        }
        let pair = pair.min(prev_pair);
        tau += 2.0 * pair;
        prev_pair = pair;
        lag += 2;
    }
    let tau = tau.max(1.0 / n as f64);
    (n as f64 / tau).min(n as f64)
}

/// Split-R̂ over chains: each chain is cut in half and the halves are compared
/// with the Gelman–Rubin between/within variance ratio. Returns 1 when all
/// draws are identical.
pub fn split_rhat(chains: &[Vec<f64>]) -> f64 {
    let halves: Vec<&[f64]> = chains
        .iter()
        .filter(|c| c.len() >= 4)
        .flat_map(|c| {
            let h = c.len() / 2;
            [&c[..h], &c[c.len() - h..]]
        })
        .collect();
    if halves.len() < 2 {
        return 1.0;
    }
    let len = halves.iter().map(|h| h.len()).min().unwrap_or(0) as f64;
    let stats: Vec<RunningMoments> = halves.iter().map(|h| h.iter().copied().collect()).collect();
    let w = stats.iter().map(RunningMoments::variance).sum::<f64>() / stats.len() as f64;
    let means: RunningMoments = stats.iter().map(RunningMoments::mean).collect();
    let b_over_n = means.variance();
    if !(w > 0.0) {
        return if b_over_n > 0.0 { f64::INFINITY } else { 1.0 };
    }
    let var_plus = (len - 1.0) / len * w + b_over_n;
    (var_plus / w).sqrt()
}

/// Delete-one-block jackknife standard error of a statistic over `blocks`
/// contiguous blocks of `xs`.
pub fn block_jackknife<F>(xs: &[f64], blocks: usize, statistic: F) -> f64
where
    F: Fn(&mut dyn Iterator<Item = f64>) -> f64,
{
    let n = xs.len();
    let blocks = blocks.min(n);
    if blocks < 2 {
        return 0.0;
    }
    let bounds: Vec<usize> = (0..=blocks).map(|b| b * n / blocks).collect();
    let estimates: Vec<f64> = (0..blocks)
        .map(|b| {
            let mut rest = xs[..bounds[b]].iter().chain(&xs[bounds[b + 1]..]).copied();
            statistic(&mut rest)
        })
        .collect();
    let acc: RunningMoments = estimates.iter().copied().collect();
    let k = blocks as f64;
    // Σ(θ₋ᵦ − θ̄)² = (k − 1)·var
    ((k - 1.0) * (k - 1.0) / k * acc.variance()).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::StandardNormal;

    fn normals(n: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| rng.sample(StandardNormal)).collect()
    }

    #[test]
    fn welford_matches_two_pass() {
        let xs: Vec<f64> = (0..1000).map(|i| (i as f64 * 0.37).sin() + 1e6).collect();
        let acc: RunningMoments = xs.iter().copied().collect();
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (xs.len() - 1) as f64;
        assert!((acc.mean() - mean).abs() < 1e-9);
        assert!((acc.variance() - var).abs() < 1e-9 * var);

        let mut left: RunningMoments = xs[..300].iter().copied().collect();
        let right: RunningMoments = xs[300..].iter().copied().collect();
        left.merge(&right);
        assert_eq!(left.count(), 1000);
        assert!((left.variance() - var).abs() < 1e-9 * var);
    }

    #[test]
    fn ess_of_independent_draws_is_near_n() {
        let xs = normals(20_000, 1);
        let ess = effective_sample_size(&xs);
        assert!(ess > 15_000.0 && ess <= 20_000.0, "{ess}");
    }

    #[test]
    fn ess_of_ar1_matches_theory() {
        // AR(1) with φ = 0.9 has integrated time (1 + φ)/(1 − φ) = 19
        let e = normals(200_000, 2);
        let mut xs = Vec::with_capacity(e.len());
        let mut x = 0.0;
        for z in e {
            x = 0.9 * x + z;
            xs.push(x);
        }
        let ess = effective_sample_size(&xs);
        let expected = 200_000.0 / 19.0;
        assert!((ess / expected - 1.0).abs() < 0.15, "{ess} vs {expected}");
    }

    #[test]
    fn constant_chains() {
        assert_eq!(effective_sample_size(&[0.0; 100]), 100.0);
        assert_eq!(split_rhat(&[vec![0.0; 100], vec![0.0; 100]]), 1.0);
    }

    #[test]
    fn rhat_flags_disagreeing_chains() {
        let a = normals(5000, 3);
        let b: Vec<f64> = normals(5000, 4).iter().map(|x| x + 1.0).collect();
        assert!(split_rhat(&[a.clone(), b]) > 1.1);
        let c = normals(5000, 5);
        assert!(split_rhat(&[a, c]) < 1.01);
    }

    #[test]
    fn jackknife_of_mean_matches_textbook_se() {
        let xs = normals(10_000, 6);
        let se = block_jackknife(&xs, 100, |it: &mut dyn Iterator<Item = f64>| it.collect::<RunningMoments>().mean());
        assert!((se / 0.01 - 1.0).abs() < 0.2, "{se}");
    }
}
