//! Dense complex matrix substrate: Hermitian eigendecomposition, singular
//! values, Kronecker products and Haar-random unitaries.
//!
//! Tolerance policy (absolute, element-wise unless stated otherwise):
//!
//! * Hermiticity of inputs: [`HERMITICITY_TOL`] = 1e-10. Inputs are built
//!   analytically, so anything larger is a construction bug.
//! * Eigenvector orthonormality (Gram deviation): [`ORTHONORMALITY_TOL`] = 1e-10.
//! * Spectral reconstruction residual: [`RECONSTRUCTION_TOL`] = 1e-9.
//!
//! Everything above this module is tolerance-free by construction: all
//! floating-point slack is decided here and in the criterion thresholds.

use nalgebra::linalg::SymmetricEigen;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;
pub type RMatrix = DMatrix<f64>;

/// Max admissible element-wise deviation of an input from its adjoint.
pub const HERMITICITY_TOL: f64 = 1e-10;
/// Max admissible Gram deviation of an eigenvector basis from identity.
pub const ORTHONORMALITY_TOL: f64 = 1e-10;
/// Max admissible residual when reassembling a matrix from its spectrum.
pub const RECONSTRUCTION_TOL: f64 = 1e-9;

const MAX_EIG_ITERATIONS: usize = 10_000;

/// Largest element-wise |M - M^dag|.
pub fn hermiticity_deviation(m: &CMatrix) -> f64 {
    if m.nrows() != m.ncols() {
        return f64::INFINITY;
    }
    let mut dev: f64 = 0.0;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            dev = dev.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    dev
}

/// Largest element-wise |M - I|.
pub fn identity_deviation(m: &CMatrix) -> f64 {
    let mut dev: f64 = 0.0;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let target = if i == j { Complex64::ONE } else { Complex64::ZERO };
            dev = dev.max((m[(i, j)] - target).norm());
        }
    }
    dev
}

/// Largest element-wise absolute value of a complex matrix.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
///
/// Degenerate subspaces come back with an arbitrary orthonormal basis;
/// every consumer in this crate is covariant under that choice.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<f64>,
    eigenvectors: CMatrix,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Unitary matrix whose k-th column is the eigenvector of `eigenvalues()[k]`.
    pub fn eigenvectors(&self) -> &CMatrix {
        &self.eigenvectors
    }

    /// Rebuild `sum_k lambda_k |k><k|`.
    pub fn reconstruct(&self) -> CMatrix {
        let d = self.dim();
        let mut m = CMatrix::zeros(d, d);
        for k in 0..d {
            let v = self.eigenvectors.column(k);
            for i in 0..d {
                for j in 0..d {
                    m[(i, j)] += Complex64::from(self.eigenvalues[k]) * v[i] * v[j].conj();
                }
            }
        }
        m
    }

    /// Max |V^dag V - I| of the eigenvector basis.
    pub fn gram_deviation(&self) -> f64 {
        identity_deviation(&(self.eigenvectors.adjoint() * &self.eigenvectors))
    }

    pub(crate) fn clamp_small_negatives(&mut self, tol: f64) {
        for lambda in &mut self.eigenvalues {
            if *lambda < 0.0 && *lambda >= -tol {
                *lambda = 0.0;
            }
        }
    }
}

/// Hermitian eigendecomposition with eigenvalues sorted ascending.
pub fn hermitian_eig(m: &CMatrix) -> Result<SpectralDecomposition> {
    let dev = hermiticity_deviation(m);
    if dev > HERMITICITY_TOL {
        return Err(Error::NonHermitianInput { deviation: dev });
    }
    let eig = SymmetricEigen::try_new(m.clone(), f64::EPSILON, MAX_EIG_ITERATIONS)
        .ok_or(Error::ConvergenceFailure)?;

    let d = m.nrows();
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));

    let eigenvalues: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut eigenvectors = CMatrix::zeros(d, d);
    for (slot, &k) in order.iter().enumerate() {
        eigenvectors.set_column(slot, &eig.eigenvectors.column(k));
    }
    Ok(SpectralDecomposition { eigenvalues, eigenvectors })
}

const MAX_JACOBI_SWEEPS: usize = 64;

/// One-sided Jacobi: rotate column pairs of `a` (accumulating the rotations
/// in `v`) until all columns are mutually orthogonal to relative machine
/// precision. On exit `a = U Sigma` column-wise and the original matrix is
/// `a_final * v^T`.
fn jacobi_orthogonalize(a: &mut RMatrix, v: &mut RMatrix) -> Result<()> {
    let n = a.ncols();
    // The Frobenius norm is rotation-invariant; columns below eps * ||A||_F
    // are numerically zero and left alone.
    let total2: f64 = a.iter().map(|x| x * x).sum();
    let dead = total2 * f64::EPSILON * f64::EPSILON;
    let tol = a.nrows().max(n) as f64 * f64::EPSILON;
    for _ in 0..MAX_JACOBI_SWEEPS {
        let mut converged = true;
        for p in 0..n {
            for q in (p + 1)..n {
                let ap = a.column(p);
                let aq = a.column(q);
                let app = ap.dot(&ap);
                let aqq = aq.dot(&aq);
                let apq = ap.dot(&aq);
                if app <= dead || aqq <= dead || apq * apq <= tol * tol * app * aqq {
                    continue;
                }
                converged = false;
                let zeta = (aqq - app) / (2.0 * apq);
                let t = if zeta >= 0.0 {
                    1.0 / (zeta + (1.0 + zeta * zeta).sqrt())
                } else {
                    -1.0 / (-zeta + (1.0 + zeta * zeta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for m in [&mut *a, &mut *v] {
                    for i in 0..m.nrows() {
                        let mp = m[(i, p)];
                        let mq = m[(i, q)];
                        m[(i, p)] = c * mp - s * mq;
                        m[(i, q)] = s * mp + c * mq;
                    }
                }
            }
        }
        if converged {
            return Ok(());
        }
    }
    Err(Error::ConvergenceFailure)
}

/// Singular values of a real matrix, descending. Their sum is the trace norm.
pub fn singular_values(m: &RMatrix) -> Result<Vec<f64>> {
    // Work on the orientation with fewer columns.
    let mut a = if m.nrows() >= m.ncols() { m.clone() } else { m.transpose() };
    let mut v = RMatrix::identity(a.ncols(), a.ncols());
    jacobi_orthogonalize(&mut a, &mut v)?;
    let mut sigma: Vec<f64> = (0..a.ncols()).map(|j| a.column(j).norm()).collect();
    sigma.sort_by(|a, b| b.total_cmp(a));
    Ok(sigma)
}

/// Full SVD of a square real matrix: `m = u * diag(sigma) * v^T`,
/// singular values descending, `u` and `v` orthogonal.
pub struct SvdFactors {
    pub u: RMatrix,
    pub sigma: Vec<f64>,
    pub v: RMatrix,
}

pub fn svd_factors(m: &RMatrix) -> Result<SvdFactors> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare { rows: m.nrows(), cols: m.ncols() });
    }
    let n = m.nrows();
    let mut a = m.clone();
    let mut v = RMatrix::identity(n, n);
    jacobi_orthogonalize(&mut a, &mut v)?;

    let norms: Vec<f64> = (0..n).map(|j| a.column(j).norm()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&p, &q| norms[q].total_cmp(&norms[p]));

    let sigma: Vec<f64> = order.iter().map(|&k| norms[k]).collect();

    // Columns of the rotated matrix whose direction is numerically
    // meaningful become left singular vectors; noise-level columns (their
    // normalized direction collides with an accepted one, or they vanish)
    // carry no reconstruction weight and get an arbitrary orthonormal
    // completion instead.
    let mut u = RMatrix::zeros(n, n);
    let mut v_sorted = RMatrix::zeros(n, n);
    let mut accepted: Vec<usize> = Vec::new();
    let mut completion_slots = Vec::new();
    for (slot, &k) in order.iter().enumerate() {
        v_sorted.set_column(slot, &v.column(k));
        if norms[k] == 0.0 {
            completion_slots.push(slot);
            continue;
        }
        let mut col: Vec<f64> = (a.column(k) / norms[k]).iter().copied().collect();
        for _ in 0..2 {
            for &j in &accepted {
                let proj: f64 = (0..n).map(|i| u[(i, j)] * col[i]).sum();
                for i in 0..n {
                    col[i] -= proj * u[(i, j)];
                }
            }
        }
        let residual = col.iter().map(|x| x * x).sum::<f64>().sqrt();
        if residual < 0.5 {
            completion_slots.push(slot);
            continue;
        }
        for i in 0..n {
            u[(i, slot)] = col[i] / residual;
        }
        accepted.push(slot);
    }
    complete_orthonormal(&mut u, &completion_slots);
    Ok(SvdFactors { u, sigma, v: v_sorted })
}

/// Fill the listed columns with unit vectors orthogonal to every other
/// column: for each slot, take the standard basis vector with the largest
/// re-orthogonalized Gram-Schmidt residual (at least sqrt(1/n) for a slot
/// that is genuinely missing).
fn complete_orthonormal(u: &mut RMatrix, slots: &[usize]) {
    let n = u.nrows();
    let mut filled: Vec<usize> = (0..n).filter(|i| !slots.contains(i)).collect();
    for &slot in slots {
        let mut best: Option<(f64, Vec<f64>)> = None;
        for candidate in 0..n {
            let mut vec = vec![0.0; n];
            vec[candidate] = 1.0;
            for _ in 0..2 {
                for &j in &filled {
                    let proj: f64 = (0..n).map(|i| u[(i, j)] * vec[i]).sum();
                    for (i, x) in vec.iter_mut().enumerate() {
                        *x -= proj * u[(i, j)];
                    }
                }
            }
            let norm = vec.iter().map(|x| x * x).sum::<f64>().sqrt();
            if best.as_ref().is_none_or(|(b, _)| norm > *b) {
                best = Some((norm, vec));
            }
        }
        let (norm, vec) = best.expect("nonempty candidate list");
        for i in 0..n {
            u[(i, slot)] = vec[i] / norm;
        }
        filled.push(slot);
    }
}

/// Kronecker product `a (x) b`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Identity embedded on the left: `I_da (x) b`.
pub fn embed_right(b: &CMatrix, da: usize) -> CMatrix {
    kron(&CMatrix::identity(da, da), b)
}

/// Identity embedded on the right: `a (x) I_db`.
pub fn embed_left(a: &CMatrix, db: usize) -> CMatrix {
    kron(a, &CMatrix::identity(db, db))
}

pub(crate) fn complex_ginibre(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

pub(crate) fn real_ginibre(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> RMatrix {
    RMatrix::from_fn(rows, cols, |_, _| rng.sample(StandardNormal))
}

/// Haar-distributed random unitary (QR of a complex Ginibre matrix with the
/// R diagonal phase-fixed). Deterministic per seed.
pub fn random_unitary(d: usize, seed: u64) -> CMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_unitary_with_rng(d, &mut rng)
}

pub(crate) fn random_unitary_with_rng(d: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    let g = complex_ginibre(d, d, rng);
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for i in 0..d {
        let rii = r[(i, i)];
        if rii.norm() > 0.0 {
            let phase = rii / rii.norm();
            let col = q.column(i) * phase;
            q.set_column(i, &col);
        }
    }
    q
}
