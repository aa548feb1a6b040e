//! Shared generators for the property and acceptance suites.
#![allow(dead_code)] // each test target uses a different subset

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use qfi_detect::numerics::CMatrix;
use qfi_detect::qfi::Observable;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_complex_matrix(d: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    DMatrix::from_fn(d, d, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

/// Random Hermitian matrix (G + G^dag)/2 from a complex Ginibre draw.
pub fn random_hermitian(d: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    let g = random_complex_matrix(d, rng);
    (&g + g.adjoint()) * Complex64::from(0.5)
}

pub fn random_observable(d: usize, rng: &mut ChaCha8Rng) -> Observable {
    Observable::new(random_hermitian(d, rng)).expect("hermitian by construction")
}

pub fn random_real_matrix(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| rng.sample(StandardNormal))
}
