//! Quantum Fisher information of a (state, observable) pair, the symmetric
//! logarithmic derivative, total QFI over observable sets, and the
//! Cramer-Rao precision bounds.
//!
//! The QFI convention carries the 1/4 prefactor, F = Tr[rho L^2]/4, so that
//! F equals the variance (not four times it) on pure states. Every bound in
//! the criterion module uses the same convention.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{
    hermitian_eig, hermiticity_deviation, CMatrix, CVector, SpectralDecomposition,
    HERMITICITY_TOL,
};
use crate::observables::ObservableSet;

/// Eigenvalue pairs with `lambda_k + lambda_l <= KERNEL_CUTOFF` contribute
/// nothing: both eigenvalues vanish and the numerators vanish at the same
/// order. This is the standard continuous extension that keeps rank-deficient
/// states finite.
pub const KERNEL_CUTOFF: f64 = 1e-12;

/// Eigenvalues of a density matrix in `[-EIGENVALUE_CLAMP, 0)` are rounding
/// noise on an analytically valid state; they are clamped to 0 without
/// renormalizing the spectrum.
pub const EIGENVALUE_CLAMP: f64 = 1e-10;

const TRACE_TOL: f64 = 1e-10;

/// A positive-semidefinite, unit-trace Hermitian matrix with its spectral
/// decomposition computed once at construction.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    dim: usize,
    matrix: CMatrix,
    spectrum: SpectralDecomposition,
}

impl DensityMatrix {
    /// Validate and wrap a matrix: Hermitian within 1e-10, trace within
    /// 1e-10 of one, smallest eigenvalue >= -1e-10 (small negatives are
    /// clamped to zero).
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::NotSquare { rows: matrix.nrows(), cols: matrix.ncols() });
        }
        let dev = hermiticity_deviation(&matrix);
        if dev > HERMITICITY_TOL {
            return Err(Error::NonHermitianInput { deviation: dev });
        }
        let trace = matrix.trace().re;
        if (trace - 1.0).abs() > TRACE_TOL {
            return Err(Error::InvalidTrace { trace });
        }
        let mut spectrum = hermitian_eig(&matrix)?;
        let min = spectrum.eigenvalues()[0];
        if min < -EIGENVALUE_CLAMP {
            return Err(Error::NotPositiveSemidefinite { min_eigenvalue: min });
        }
        spectrum.clamp_small_negatives(EIGENVALUE_CLAMP);
        Ok(Self { dim: matrix.nrows(), matrix, spectrum })
    }

    /// Rank-one state |psi><psi| from a unit vector.
    pub fn from_pure(psi: &CVector) -> Result<Self> {
        let norm = psi.norm();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidVector(format!("state vector norm {norm} is not 1")));
        }
        let d = psi.len();
        let matrix = CMatrix::from_fn(d, d, |i, j| psi[i] * psi[j].conj());
        Self::new(matrix)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// Cached spectral decomposition (eigenvalues ascending, clamped).
    pub fn spectrum(&self) -> &SpectralDecomposition {
        &self.spectrum
    }

    pub fn eigenvalues(&self) -> &[f64] {
        self.spectrum.eigenvalues()
    }

    pub fn purity(&self) -> f64 {
        self.eigenvalues().iter().map(|l| l * l).sum()
    }
}

/// A Hermitian matrix acting on a d-dimensional system.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    dim: usize,
    matrix: CMatrix,
}

impl Observable {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::NotSquare { rows: matrix.nrows(), cols: matrix.ncols() });
        }
        let dev = hermiticity_deviation(&matrix);
        if dev > HERMITICITY_TOL {
            return Err(Error::NonHermitianInput { deviation: dev });
        }
        Ok(Self { dim: matrix.nrows(), matrix })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }
}

fn check_dims(rho: &DensityMatrix, a: &Observable) -> Result<()> {
    if rho.dim() != a.dim() {
        return Err(Error::DimensionMismatch { expected: rho.dim(), got: a.dim() });
    }
    Ok(())
}

/// Matrix elements of `a` in the eigenbasis of `rho`: `V^dag A V`.
fn eigenbasis_elements(rho: &DensityMatrix, a: &Observable) -> CMatrix {
    let v = rho.spectrum().eigenvectors();
    v.adjoint() * a.matrix() * v
}

/// Quantum Fisher information
/// `F = sum_{k,l} (lambda_k - lambda_l)^2 / (2 (lambda_k + lambda_l)) |<k|A|l>|^2`,
/// kernel pairs skipped, clamped at zero.
pub fn qfi(rho: &DensityMatrix, a: &Observable) -> Result<f64> {
    check_dims(rho, a)?;
    let lambda = rho.eigenvalues();
    let m = eigenbasis_elements(rho, a);
    let d = rho.dim();
    let mut sum = 0.0;
    for k in 0..d {
        for l in 0..d {
            let denom = lambda[k] + lambda[l];
            if denom <= KERNEL_CUTOFF {
                continue;
            }
            let diff = lambda[k] - lambda[l];
            sum += diff * diff / (2.0 * denom) * m[(k, l)].norm_sqr();
        }
    }
    Ok(sum.max(0.0))
}

/// Symmetric logarithmic derivative
/// `L = 2i sum_{k,l} (lambda_k - lambda_l)/(lambda_k + lambda_l) <k|A|l> |k><l|`,
/// defined on the support of `rho` (the off-support block is zero).
pub fn sld(rho: &DensityMatrix, a: &Observable) -> Result<Observable> {
    check_dims(rho, a)?;
    let lambda = rho.eigenvalues();
    let m = eigenbasis_elements(rho, a);
    let d = rho.dim();
    let mut l_eig = CMatrix::zeros(d, d);
    for k in 0..d {
        for l in 0..d {
            let denom = lambda[k] + lambda[l];
            if denom <= KERNEL_CUTOFF {
                continue;
            }
            let coeff = Complex64::new(0.0, 2.0 * (lambda[k] - lambda[l]) / denom);
            l_eig[(k, l)] = coeff * m[(k, l)];
        }
    }
    let v = rho.spectrum().eigenvectors();
    Observable::new(v * l_eig * v.adjoint())
}

/// Total QFI `sum_mu F(rho, A_mu)` over an observable set.
pub fn total_qfi(rho: &DensityMatrix, obs: &ObservableSet) -> Result<f64> {
    if !obs.is_empty() && rho.dim() != obs.dim() {
        return Err(Error::DimensionMismatch { expected: rho.dim(), got: obs.dim() });
    }
    let mut sum = 0.0;
    for a in obs.members() {
        sum += qfi(rho, a)?;
    }
    Ok(sum)
}

/// Variance `Tr[rho A^2] - Tr[rho A]^2`.
pub fn variance(rho: &DensityMatrix, a: &Observable) -> Result<f64> {
    check_dims(rho, a)?;
    let ra = rho.matrix() * a.matrix();
    let mean = ra.trace().re;
    let second = (&ra * a.matrix()).trace().re;
    Ok((second - mean * mean).max(0.0))
}

/// Cramer-Rao lower bound on `(Delta theta)^2` for a single observable:
/// `1 / F`, infinite when the QFI vanishes.
pub fn precision_bound_single(rho: &DensityMatrix, a: &Observable) -> Result<f64> {
    let f = qfi(rho, a)?;
    Ok(if f > 0.0 { 1.0 / f } else { f64::INFINITY })
}

/// Cramer-Rao lower bound for a set of m observables: `1 / (m F_total)`,
/// infinite when the total QFI vanishes.
pub fn precision_bound_set(rho: &DensityMatrix, obs: &ObservableSet) -> Result<f64> {
    if obs.is_empty() {
        return Err(Error::EmptyObservableSet);
    }
    let total = total_qfi(rho, obs)?;
    let m = obs.len() as f64;
    Ok(if total > 0.0 { 1.0 / (m * total) } else { f64::INFINITY })
}
