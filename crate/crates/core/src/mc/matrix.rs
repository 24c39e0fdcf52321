//! Direct sampling of Hilbert-Schmidt spectra from Wishart matrices.

use nalgebra::{Complex, DMatrix};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::ensemble::{EnsembleKind, EnsembleSpec};
use crate::error::{Error, Result};
use crate::spectrum::Spectrum;

const EIGEN_EPS: f64 = 1e-15;
const EIGEN_MAX_ITER: usize = 10_000;

/// Draws `X` (`m × n`, i.i.d. standard complex Gaussian entries), forms
/// `W = X X†` and returns its normalized eigenvalues. This is exactly the
/// reduced-density-matrix spectrum of a Haar-random pure state.
pub fn sample_hs_matrix<R: Rng + ?Sized>(spec: EnsembleSpec, rng: &mut R) -> Result<Spectrum> {
    spec.require(EnsembleKind::HilbertSchmidt)
        .map_err(|_| Error::Config("the matrix sampler only produces Hilbert-Schmidt spectra".into()))?;
    let (m, n) = (spec.m() as usize, spec.n() as usize);
    if m == 1 {
        return Spectrum::new(vec![1.0]);
    }
    let x = DMatrix::from_fn(m, n, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex::new(re, im)
    });
    let w = &x * x.adjoint();
    let eig = nalgebra::SymmetricEigen::try_new(w, EIGEN_EPS, EIGEN_MAX_ITER)
        .ok_or_else(|| Error::Eigen(format!("no convergence for {m}×{m} Hermitian matrix")))?;
    let values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    Spectrum::from_unnormalized(values).map_err(|e| Error::Eigen(e.to_string()))
}
