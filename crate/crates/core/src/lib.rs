//! Exact and simulated entanglement capacity of random bipartite pure states.
//!
//! The capacity of entanglement of a spectrum `λ` is the variance of the
//! entanglement Hamiltonian, `C = Σ λ ln² λ − (Σ λ ln λ)²`. This crate
//! evaluates its average over the Hilbert-Schmidt and Bures-Hall ensembles in
//! closed form ([`exact`]), reproduces those values along independent routes
//! ([`spectral`], [`oracle`], [`sums`]) and estimates them by sampling
//! ([`mc`]).
//!
//! ```
//! use entcap_core::{capacity, EnsembleSpec};
//!
//! let spec = EnsembleSpec::hilbert_schmidt(2, 2).unwrap();
//! let c = capacity(spec).unwrap();
//! assert!((c - std::f64::consts::PI.powi(2) / 30.0).abs() < 1e-14);
//! ```

// Domain checks are written `!(x > 0.0)` on purpose so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod ensemble;
pub mod error;
pub mod exact;
pub mod mc;
pub mod oracle;
pub mod quad;
pub mod specfun;
pub mod spectral;
pub mod spectrum;
pub mod sums;

pub use ensemble::{EnsembleKind, EnsembleSpec};
pub use error::{Error, Result};
pub use exact::{
    annealed_capacity, asymptotic_capacity, capacity, capacity_bh, capacity_hs, cmax, cmax_argmax, mean_s1,
    var_s1, CapacityReport,
};
pub use mc::{estimate, ChainConfig, MCEstimate, Observable, SamplerKind};
pub use oracle::{quad_moments, QuadratureResult};
pub use spectrum::{spectrum_stats, Spectrum, SpectrumStats};
pub use sums::{identity_residual, psi_sum, IdentityCase, IdentityId, IdentityResidual, PsiParams};
