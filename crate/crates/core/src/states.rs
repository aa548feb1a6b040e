//! Parameterized bipartite state families (isotropic, Werner) and seeded
//! random-state generators for property tests and soundness checks.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::numerics::{complex_ginibre, kron, CMatrix};
use crate::qfi::DensityMatrix;

/// A one-parameter family eta -> rho on a d x d bipartite system,
/// defined for eta in [0, 1].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateFamily {
    Isotropic { local_dim: usize },
    Werner { local_dim: usize },
}

impl StateFamily {
    pub fn name(&self) -> &'static str {
        match self {
            StateFamily::Isotropic { .. } => "isotropic",
            StateFamily::Werner { .. } => "werner",
        }
    }

    pub fn local_dim(&self) -> usize {
        match self {
            StateFamily::Isotropic { local_dim } | StateFamily::Werner { local_dim } => *local_dim,
        }
    }

    pub fn joint_dim(&self) -> usize {
        self.local_dim() * self.local_dim()
    }

    pub fn state(&self, eta: f64) -> Result<DensityMatrix> {
        match self {
            StateFamily::Isotropic { local_dim } => isotropic(*local_dim, eta),
            StateFamily::Werner { local_dim } => werner(*local_dim, eta),
        }
    }
}

fn check_eta(eta: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::ParameterOutOfRange { value: eta, min: 0.0, max: 1.0 });
    }
    Ok(())
}

/// Isotropic state `(1 - eta)/d^2 * I + eta |psi+><psi+|` with the maximally
/// entangled `|psi+> = sum_i |ii>/sqrt(d)`.
pub fn isotropic(d: usize, eta: f64) -> Result<DensityMatrix> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    check_eta(eta)?;
    let n = d * d;
    let noise = (1.0 - eta) / n as f64;
    let mut m = CMatrix::identity(n, n) * Complex64::from(noise);
    let amp = Complex64::from(eta / d as f64);
    for i in 0..d {
        for j in 0..d {
            m[(i * d + i, j * d + j)] += amp;
        }
    }
    DensityMatrix::new(m)
}

/// Werner state `(1 - eta)/d^2 * I + eta * P_anti / (d(d-1)/2)` with the
/// projector onto the antisymmetric subspace,
/// `P_anti = sum_{i<j} |psi_ij-><psi_ij-|`, `|psi_ij-> = (|ij> - |ji>)/sqrt(2)`.
/// At d = 3 this is the mixture `(eta/6) sum_{i != j}` of the singlet-like
/// states, each unordered pair appearing twice in that sum.
pub fn werner(d: usize, eta: f64) -> Result<DensityMatrix> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    check_eta(eta)?;
    let n = d * d;
    let noise = (1.0 - eta) / n as f64;
    let mut m = CMatrix::identity(n, n) * Complex64::from(noise);
    let weight = Complex64::from(eta / (d * (d - 1) / 2) as f64);
    for i in 0..d {
        for j in (i + 1)..d {
            let ij = i * d + j;
            let ji = j * d + i;
            // |psi-><psi-| has entries +-1/2 on the {ij, ji} block.
            m[(ij, ij)] += weight * Complex64::from(0.5);
            m[(ji, ji)] += weight * Complex64::from(0.5);
            m[(ij, ji)] -= weight * Complex64::from(0.5);
            m[(ji, ij)] -= weight * Complex64::from(0.5);
        }
    }
    DensityMatrix::new(m)
}

/// Random rank-constrained density matrix `G G^dag / Tr[G G^dag]` with `G`
/// a d x rank standard-complex-normal matrix. Deterministic per seed.
pub fn random_density(d: usize, rank: usize, seed: u64) -> Result<DensityMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_density_with_rng(d, rank, &mut rng)
}

pub(crate) fn random_density_with_rng(
    d: usize,
    rank: usize,
    rng: &mut ChaCha8Rng,
) -> Result<DensityMatrix> {
    if rank == 0 || rank > d {
        return Err(Error::InvalidRank { rank, dim: d });
    }
    let g = complex_ginibre(d, rank, rng);
    let mut m = &g * g.adjoint();
    let trace = m.trace().re;
    m /= Complex64::from(trace);
    DensityMatrix::new(m)
}

/// Random separable state: a convex mixture of `terms` product states with
/// Dirichlet-uniform weights. Separable by construction; deterministic per
/// seed.
pub fn random_separable(
    dim_a: usize,
    dim_b: usize,
    terms: usize,
    seed: u64,
) -> Result<DensityMatrix> {
    if terms == 0 {
        return Err(Error::InvalidRank { rank: 0, dim: terms });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // Dirichlet(1, ..., 1) = normalized unit-rate exponentials.
    let mut weights: Vec<f64> = (0..terms)
        .map(|_| -(1.0 - rng.random::<f64>()).ln())
        .collect();
    let total: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= total;
    }

    let n = dim_a * dim_b;
    let mut m = CMatrix::zeros(n, n);
    for &w in &weights {
        let rho_a = random_density_with_rng(dim_a, dim_a, &mut rng)?;
        let rho_b = random_density_with_rng(dim_b, dim_b, &mut rng)?;
        m += kron(rho_a.matrix(), rho_b.matrix()) * Complex64::from(w);
    }
    DensityMatrix::new(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn isotropic_endpoints() {
        let mixed = isotropic(3, 0.0).unwrap();
        for l in mixed.eigenvalues() {
            assert_abs_diff_eq!(*l, 1.0 / 9.0, epsilon = 1e-12);
        }
        let pure = isotropic(3, 1.0).unwrap();
        assert_abs_diff_eq!(pure.purity(), 1.0, epsilon = 1e-10);
    }

    #[test]
    fn isotropic_closed_form_spectrum() {
        // Eigenvalues {(1 - eta)/9 (x8), (1 + 8 eta)/9 (x1)}.
        let eta = 0.5;
        let rho = isotropic(3, eta).unwrap();
        let l = rho.eigenvalues();
        for lam in &l[..8] {
            assert_abs_diff_eq!(*lam, (1.0 - eta) / 9.0, epsilon = 1e-12);
        }
        assert_abs_diff_eq!(l[8], (1.0 + 8.0 * eta) / 9.0, epsilon = 1e-12);
    }

    #[test]
    fn werner_endpoints_and_spectrum() {
        let mixed = werner(3, 0.0).unwrap();
        for l in mixed.eigenvalues() {
            assert_abs_diff_eq!(*l, 1.0 / 9.0, epsilon = 1e-12);
        }
        // eta = 1: normalized rank-3 antisymmetric projector.
        let anti = werner(3, 1.0).unwrap();
        let l = anti.eigenvalues();
        for lam in &l[..6] {
            assert_abs_diff_eq!(*lam, 0.0, epsilon = 1e-12);
        }
        for lam in &l[6..] {
            assert_abs_diff_eq!(*lam, 1.0 / 3.0, epsilon = 1e-12);
        }
        // Any eta: the six symmetric-subspace eigenvalues all equal (1-eta)/9.
        let rho = werner(3, 0.37).unwrap();
        let l = rho.eigenvalues();
        for lam in &l[..6] {
            assert_abs_diff_eq!(*lam, (1.0 - 0.37) / 9.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn parameter_out_of_range() {
        assert!(matches!(isotropic(3, 1.5), Err(Error::ParameterOutOfRange { .. })));
        assert!(matches!(werner(3, -0.1), Err(Error::ParameterOutOfRange { .. })));
    }

    #[test]
    fn random_density_contract() {
        let pure = random_density(4, 1, 9).unwrap();
        assert_abs_diff_eq!(pure.purity(), 1.0, epsilon = 1e-12);
        let full = random_density(4, 4, 9).unwrap();
        assert!(full.eigenvalues()[0] > 0.0);
        assert!(matches!(random_density(3, 0, 1), Err(Error::InvalidRank { .. })));
        assert!(matches!(random_density(3, 4, 1), Err(Error::InvalidRank { .. })));
        // Determinism.
        assert_eq!(random_density(4, 2, 7).unwrap().matrix(), random_density(4, 2, 7).unwrap().matrix());
    }

    #[test]
    fn random_separable_contract() {
        let product = random_separable(2, 3, 1, 3).unwrap();
        assert_eq!(product.dim(), 6);
        assert_abs_diff_eq!(product.matrix().trace().re, 1.0, epsilon = 1e-12);
        let mix = random_separable(3, 3, 5, 4).unwrap();
        assert_abs_diff_eq!(mix.matrix().trace().re, 1.0, epsilon = 1e-12);
        assert_eq!(
            random_separable(3, 3, 5, 4).unwrap().matrix(),
            mix.matrix()
        );
    }
}
