use entcap_core::mc::{sample_eigen_mcmc, sample_hs_matrix};
use entcap_core::oracle::two_level_bin_probabilities;
use entcap_core::{
    capacity, cmax, estimate, mean_s1, var_s1, ChainConfig, EnsembleKind, EnsembleSpec, Error, MCEstimate, Observable,
    SamplerKind,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn hs(m: u32, n: u32) -> EnsembleSpec {
    EnsembleSpec::hilbert_schmidt(m, n).unwrap()
}

fn bh(m: u32, n: u32) -> EnsembleSpec {
    EnsembleSpec::bures_hall(m, n).unwrap()
}

fn cfg(spec: EnsembleSpec, samples: u64, seed: u64) -> ChainConfig {
    ChainConfig { n_samples: samples, seed, ..ChainConfig::for_spec(spec) }
}

fn within(e: &MCEstimate, exact: f64, sigmas: f64) -> bool {
    (e.mean - exact).abs() <= sigmas * e.std_error
}

fn agree(a: &MCEstimate, b: &MCEstimate) -> bool {
    (a.mean - b.mean).abs() <= 4.0 * a.std_error.hypot(b.std_error)
}

#[test]
fn matrix_sampler_two_by_two_entropy() {
    let spec = hs(2, 2);
    let e = estimate(spec, Observable::S1, &cfg(spec, 100_000, 1), SamplerKind::Matrix).unwrap();
    assert!(within(&e, 1.0 / 3.0, 4.0), "{e:?}");
    assert_eq!(e.n_samples, 100_000);
    assert_eq!(e.diagnostics.effective_samples, 100_000.0);
}

#[test]
fn matrix_sampler_capacity_grid() {
    let spec = hs(2, 4);
    let e = estimate(spec, Observable::C, &cfg(spec, 100_000, 2), SamplerKind::Matrix).unwrap();
    assert!(within(&e, capacity(spec).unwrap(), 4.0), "{e:?}");
    for m in 2..=8 {
        let spec = hs(m, m);
        let e = estimate(spec, Observable::C, &cfg(spec, 100_000, 3), SamplerKind::Matrix).unwrap();
        assert!(within(&e, capacity(spec).unwrap(), 4.0), "m={m}: {e:?}");
        assert!(e.diagnostics.max_capacity <= cmax(m).unwrap() + 1e-12);
    }
}

#[test]
fn entropy_variance_with_jackknife_error() {
    let spec = hs(2, 2);
    let e = estimate(spec, Observable::VarS1, &cfg(spec, 100_000, 4), SamplerKind::Matrix).unwrap();
    assert!(e.std_error > 0.0);
    assert!(within(&e, var_s1(spec), 4.0), "{e:?} vs {}", var_s1(spec));
}

#[test]
fn samplers_agree_on_hilbert_schmidt() {
    for (m, n) in [(2, 2), (3, 5), (4, 4), (3, 4)] {
        let spec = hs(m, n);
        for obs in [Observable::S1, Observable::C] {
            let c = cfg(spec, 100_000, 5);
            let a = estimate(spec, obs, &c, SamplerKind::Matrix).unwrap();
            let b = estimate(spec, obs, &c, SamplerKind::Mcmc).unwrap();
            assert!(agree(&a, &b), "{spec} {obs}: {a:?} vs {b:?}");
            assert!(b.diagnostics.split_rhat < 1.02);
        }
        let e = estimate(spec, Observable::S1, &cfg(spec, 100_000, 6), SamplerKind::Mcmc).unwrap();
        assert!(within(&e, mean_s1(spec), 4.0), "{spec}: {e:?}");
    }
}

#[test]
fn bures_hall_smallest_case_with_many_effective_samples() {
    let spec = bh(2, 2);
    let c = ChainConfig { n_samples: 200_000, thinning: 10, step_scale: 2.5, seed: 8, ..ChainConfig::for_spec(spec) };
    let e = estimate(spec, Observable::C, &c, SamplerKind::Mcmc).unwrap();
    assert!(e.diagnostics.effective_samples >= 100_000.0, "{e:?}");
    assert!(within(&e, capacity(spec).unwrap(), 4.0), "{e:?}");
    assert!(e.diagnostics.effective_samples <= e.n_samples as f64);
}

#[test]
fn bures_hall_larger_eigenvalue_histogram() {
    let spec = bh(2, 2);
    let bins = 50;
    let probs = two_level_bin_probabilities(spec, bins).unwrap();
    let c = ChainConfig { n_samples: 25_000, thinning: 20, step_scale: 2.5, seed: 9, ..ChainConfig::for_spec(spec) };
    let mut counts = vec![0u64; bins];
    let mut total = 0u64;
    for chain in 0..4 {
        for s in sample_eigen_mcmc(spec, &c, chain, c.n_samples).unwrap() {
            let l1 = s.unwrap().values()[0];
            let idx = (((l1 - 0.5) * 2.0 * bins as f64) as usize).min(bins - 1);
            counts[idx] += 1;
            total += 1;
        }
    }
    let n = total as f64;
    for (i, (&k, &p)) in counts.iter().zip(&probs).enumerate() {
        let sigma = (n * p * (1.0 - p)).sqrt();
        assert!((k as f64 - n * p).abs() <= 5.0 * sigma, "bin {i}: {k} vs {}", n * p);
    }
}

#[test]
fn determinism_and_thread_independence() {
    let spec = bh(3, 4);
    let c = cfg(spec, 4_000, 42);
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| estimate(spec, Observable::C, &c, SamplerKind::Mcmc).unwrap())
    };
    let one = run(1);
    assert_eq!(one, run(3));
    assert_eq!(one, run(1));
    let other_seed = estimate(spec, Observable::C, &ChainConfig { seed: 43, ..c }, SamplerKind::Mcmc).unwrap();
    assert_ne!(one.mean, other_seed.mean);

    let spec = hs(3, 4);
    let a = estimate(spec, Observable::S2, &cfg(spec, 2_000, 1), SamplerKind::Matrix).unwrap();
    let b = estimate(spec, Observable::S2, &cfg(spec, 2_000, 1), SamplerKind::Matrix).unwrap();
    assert_eq!(a, b);
}

#[test]
fn single_level_estimates_are_exact_zeros() {
    for kind in [EnsembleKind::HilbertSchmidt, EnsembleKind::BuresHall] {
        let spec = EnsembleSpec::new(1, 6, kind).unwrap();
        let c = ChainConfig { burn_in: 100, ..cfg(spec, 500, 1) };
        for obs in [Observable::S1, Observable::S2, Observable::C, Observable::VarS1] {
            let e = estimate(spec, obs, &c, SamplerKind::Mcmc).unwrap();
            assert_eq!((e.mean, e.std_error), (0.0, 0.0), "{spec} {obs}");
        }
    }
    let spec = hs(1, 3);
    let e = estimate(spec, Observable::C, &cfg(spec, 100, 1), SamplerKind::Matrix).unwrap();
    assert_eq!((e.mean, e.std_error), (0.0, 0.0));
}

#[test]
fn sampled_capacity_never_exceeds_two_level_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for m in 2..=6 {
        let bound = cmax(m).unwrap() + 1e-12;
        let spec = hs(m, m + 1);
        for _ in 0..2_000 {
            let s = sample_hs_matrix(spec, &mut rng).unwrap();
            assert!(s.stats().capacity <= bound);
        }
        let spec = bh(m, m);
        let c = ChainConfig { burn_in: 500, ..cfg(spec, 2_000, 11) };
        for s in sample_eigen_mcmc(spec, &c, 0, 2_000).unwrap() {
            assert!(s.unwrap().stats().capacity <= bound);
        }
    }
}

#[test]
fn configuration_errors() {
    let spec = bh(2, 3);
    let c = cfg(spec, 100, 1);
    assert!(matches!(estimate(spec, Observable::C, &c, SamplerKind::Matrix), Err(Error::Config(_))));
    for bad in [
        ChainConfig { n_samples: 0, ..c },
        ChainConfig { thinning: 0, ..c },
        ChainConfig { step_scale: 0.0, ..c },
        ChainConfig { step_scale: f64::NAN, ..c },
        ChainConfig { n_chains: 0, ..c },
    ] {
        assert!(matches!(estimate(spec, Observable::C, &bad, SamplerKind::Mcmc), Err(Error::Config(_))));
    }
}

#[test]
fn samples_are_split_across_chains() {
    let spec = hs(2, 3);
    let c = ChainConfig { n_samples: 1_003, n_chains: 4, burn_in: 50, ..cfg(spec, 0, 3) };
    let e = estimate(spec, Observable::C, &c, SamplerKind::Mcmc).unwrap();
    assert_eq!(e.n_samples, 1_003);
    assert_eq!(e.sampler_id, "mcmc-logrw");
    assert!(e.diagnostics.acceptance_rate.is_some());
}

#[test]
fn acceptance_outside_band_is_flagged() {
    let spec = hs(4, 4);
    let c = ChainConfig { step_scale: 0.01, burn_in: 100, ..cfg(spec, 2_000, 1) };
    let e = estimate(spec, Observable::C, &c, SamplerKind::Mcmc).unwrap();
    assert!(e.diagnostics.acceptance_rate.unwrap() > 0.6);
    assert!(e.diagnostics.warnings.iter().any(|w| w.contains("acceptance")));
}
