//! Substrate invariants: eigendecomposition quality across dimensions,
//! trace-norm duality against a brute-force orthogonal-sampling oracle, and
//! Kronecker algebra.

mod common;

use common::{random_hermitian, random_real_matrix, rng};
use proptest::prelude::*;

use qfi_detect::numerics::{
    hermitian_eig, kron, max_abs, random_unitary, singular_values, svd_factors, identity_deviation,
    ORTHONORMALITY_TOL, RECONSTRUCTION_TOL,
};
use qfi_detect::observables::random_orthogonal;

#[test]
fn eigendecomposition_invariants_across_dimensions() {
    let mut r = rng(0xE16);
    for &d in &[2usize, 3, 4, 9] {
        for _ in 0..25 {
            let m = random_hermitian(d, &mut r);
            let spec = hermitian_eig(&m).unwrap();
            assert!(spec.gram_deviation() <= ORTHONORMALITY_TOL, "gram deviation at d={d}");
            assert!(
                max_abs(&(spec.reconstruct() - &m)) <= RECONSTRUCTION_TOL,
                "reconstruction residual at d={d}"
            );
            for w in spec.eigenvalues().windows(2) {
                assert!(w[0] <= w[1], "eigenvalues must come back ascending");
            }
        }
    }
}

#[test]
fn eigendecomposition_handles_degenerate_spectra() {
    // Projector-plus-identity structure: an 8-fold degenerate eigenvalue.
    let rho = qfi_detect::states::isotropic(3, 0.5).unwrap();
    let spec = hermitian_eig(rho.matrix()).unwrap();
    assert!(spec.gram_deviation() <= ORTHONORMALITY_TOL);
    assert!(max_abs(&(spec.reconstruct() - rho.matrix())) <= RECONSTRUCTION_TOL);
}

/// Von Neumann duality oracle: the trace norm dominates Tr[Q M] over sampled
/// orthogonal Q, and the SVD-built maximizer Q = V U^T attains it.
#[test]
fn trace_norm_duality_brute_force() {
    let mut r = rng(0x5D);
    for &n in &[3usize, 4, 8, 9] {
        let m = random_real_matrix(n, n, &mut r);
        let trace_norm: f64 = singular_values(&m).unwrap().iter().sum();
        let samples = if n == 4 { 1000 } else { 200 };
        for k in 0..samples {
            let q = random_orthogonal(n, 7000 + k as u64);
            let value = (q.matrix() * &m).trace();
            assert!(
                value <= trace_norm + 1e-8,
                "sampled Tr[QM] = {value} exceeded trace norm {trace_norm} at n={n}"
            );
        }
        let f = svd_factors(&m).unwrap();
        let maximizer = &f.v * f.u.transpose();
        let attained = (maximizer * &m).trace();
        assert!(
            (attained - trace_norm).abs() <= 1e-8,
            "maximizer reached {attained}, trace norm {trace_norm}"
        );
    }
}

#[test]
fn svd_reconstructs_random_matrices() {
    let mut r = rng(0x51D);
    for _ in 0..20 {
        let m = random_real_matrix(3, 3, &mut r);
        let f = svd_factors(&m).unwrap();
        let sigma = nalgebra::DMatrix::from_partial_diagonal(3, 3, &f.sigma);
        let residual = (&f.u * sigma * f.v.transpose()) - &m;
        assert!(residual.iter().all(|x| x.abs() <= 1e-9));
        assert!((f.u.transpose() * &f.u - nalgebra::DMatrix::identity(3, 3))
            .iter()
            .all(|x| x.abs() <= 1e-10));
        assert!((f.v.transpose() * &f.v - nalgebra::DMatrix::identity(3, 3))
            .iter()
            .all(|x| x.abs() <= 1e-10));
    }
}

#[test]
fn random_unitary_columns_are_orthonormal() {
    for seed in 0..10 {
        let u = random_unitary(4, seed);
        assert!(identity_deviation(&(u.adjoint() * &u)) <= 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    /// Mixed-product identity (A (x) I)(I (x) B) = A (x) B, and associativity.
    #[test]
    fn kron_mixed_product_and_associativity(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = random_hermitian(3, &mut r);
        let b = random_hermitian(3, &mut r);
        let c = random_hermitian(2, &mut r);
        let id3 = qfi_detect::numerics::CMatrix::identity(3, 3);

        let mixed = kron(&a, &id3) * kron(&id3, &b);
        prop_assert!(max_abs(&(mixed - kron(&a, &b))) <= 1e-12);

        let left = kron(&kron(&a, &b), &c);
        let right = kron(&a, &kron(&b, &c));
        prop_assert!(max_abs(&(left - right)) <= 1e-12);
    }
}
