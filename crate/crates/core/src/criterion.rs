//! Bipartite separability criteria from total quantum Fisher information:
//! the F_A / F_B / xi decomposition of the joint total QFI, its maximization
//! over the orthogonal measurement orbits of both observable sets (a trace
//! norm by von Neumann's trace theorem), the state-independent bounds for
//! LOO and SIC-POVM sets, and threshold location over state families.

use crate::error::{Error, Result};
use crate::numerics::{embed_left, embed_right, singular_values, svd_factors, CMatrix, RMatrix};
use crate::observables::{rotate, ObservableSet, OrthogonalRotation};
use crate::qfi::{qfi, DensityMatrix, Observable, KERNEL_CUTOFF};
use crate::states::StateFamily;

/// A state is flagged entangled only when it exceeds the separability bound
/// by more than numerical noise; soundness is prioritized over marginal
/// sensitivity.
pub const VIOLATION_EPS: f64 = 1e-9;

/// Which criterion variant to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Unoptimized,
    Optimized,
}

impl Mode {
    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::Unoptimized => "unopt",
            Mode::Optimized => "opt",
        }
    }
}

/// The decomposition `F(rho, A+B) = f_a + f_b + 2 Tr[xi]` of the joint total
/// QFI: two invariant local parts and the real m x m cross matrix whose
/// trace norm gives the orbit maximum.
#[derive(Debug, Clone)]
pub struct XiDecomposition {
    pub f_a: f64,
    pub f_b: f64,
    pub xi: RMatrix,
}

impl XiDecomposition {
    pub fn xi_trace(&self) -> f64 {
        self.xi.trace()
    }

    pub fn xi_trace_norm(&self) -> Result<f64> {
        Ok(singular_values(&self.xi)?.iter().sum())
    }

    /// The unoptimized joint total QFI reassembled from the decomposition.
    pub fn total(&self) -> f64 {
        self.f_a + self.f_b + 2.0 * self.xi_trace()
    }
}

/// Per-state criterion evaluation: both totals, the bound, violation flags
/// and the maximizing rotations.
#[derive(Debug, Clone)]
pub struct CriterionReport {
    pub state_id: String,
    pub unopt_total: f64,
    pub opt_total: f64,
    pub bound: f64,
    pub xi_trace_norm: f64,
    pub unopt_violated: bool,
    pub opt_violated: bool,
    pub rotation_a: OrthogonalRotation,
    pub rotation_b: OrthogonalRotation,
}

fn check_config(
    rho: &DensityMatrix,
    obs_a: &ObservableSet,
    obs_b: &ObservableSet,
) -> Result<()> {
    let joint = obs_a.dim() * obs_b.dim();
    if rho.dim() != joint {
        return Err(Error::DimensionMismatch { expected: joint, got: rho.dim() });
    }
    if obs_a.len() != obs_b.len() {
        return Err(Error::SizeMismatch { rotation: obs_a.len(), set: obs_b.len() });
    }
    if obs_a.is_empty() {
        return Err(Error::EmptyObservableSet);
    }
    Ok(())
}

/// Compute `(f_a, f_b, xi)` in the eigenbasis of the full bipartite state:
///
/// * `f_a = sum_mu (<A_mu^2> - sum_{k,l} w_kl |<k|A_mu|l>|^2)` with
///   `w_kl = 2 lambda_k lambda_l / (lambda_k + lambda_l)` and `A_mu`
///   embedded as `A_mu (x) I`,
/// * `f_b` likewise with `B_nu` embedded as `I (x) B_nu`,
/// * `xi_mn = <A_m (x) B_n> - sum_{k,l} w_kl Re[<k|A_m|l><l|B_n|k>]`.
///
/// Kernel pairs (`lambda_k + lambda_l <= KERNEL_CUTOFF`) are skipped.
pub fn xi_decomposition(
    rho: &DensityMatrix,
    obs_a: &ObservableSet,
    obs_b: &ObservableSet,
) -> Result<XiDecomposition> {
    check_config(rho, obs_a, obs_b)?;
    let n = rho.dim();
    let m = obs_a.len();
    let lambda = rho.eigenvalues();
    let basis = rho.spectrum().eigenvectors();

    // lambda_k - w_kl combines the expectation and correction sums into one
    // weight: diagonal and kernel pairs cancel exactly.
    let mut weight = RMatrix::zeros(n, n);
    for k in 0..n {
        for l in 0..n {
            let denom = lambda[k] + lambda[l];
            let w = if denom <= KERNEL_CUTOFF { 0.0 } else { 2.0 * lambda[k] * lambda[l] / denom };
            weight[(k, l)] = lambda[k] - w;
        }
    }

    let elements = |matrices: Vec<CMatrix>| -> Vec<CMatrix> {
        matrices.into_iter().map(|full| basis.adjoint() * full * basis).collect()
    };
    let elems_a = elements(
        obs_a.members().iter().map(|a| embed_left(a.matrix(), obs_b.dim())).collect(),
    );
    let elems_b = elements(
        obs_b.members().iter().map(|b| embed_right(b.matrix(), obs_a.dim())).collect(),
    );

    let local_part = |elems: &[CMatrix]| -> f64 {
        let mut sum = 0.0;
        for e in elems {
            for k in 0..n {
                for l in 0..n {
                    sum += weight[(k, l)] * e[(k, l)].norm_sqr();
                }
            }
        }
        sum.max(0.0)
    };
    let f_a = local_part(&elems_a);
    let f_b = local_part(&elems_b);

    let mut xi = RMatrix::zeros(m, m);
    for mu in 0..m {
        for nu in 0..m {
            let a = &elems_a[mu];
            let b = &elems_b[nu];
            let mut sum = 0.0;
            for k in 0..n {
                for l in 0..n {
                    sum += weight[(k, l)] * (a[(k, l)] * b[(l, k)]).re;
                }
            }
            xi[(mu, nu)] = sum;
        }
    }

    Ok(XiDecomposition { f_a, f_b, xi })
}

/// The joint total QFI `sum_mu F(rho, A_mu (x) I + I (x) B_mu)`, evaluated
/// directly from the spectral QFI formula. This is an independent path from
/// the xi decomposition and is cross-checked against it in the tests.
pub fn unoptimized_total(
    rho: &DensityMatrix,
    obs_a: &ObservableSet,
    obs_b: &ObservableSet,
) -> Result<f64> {
    check_config(rho, obs_a, obs_b)?;
    let mut sum = 0.0;
    for (a, b) in obs_a.members().iter().zip(obs_b.members()) {
        let joint = embed_left(a.matrix(), obs_b.dim()) + embed_right(b.matrix(), obs_a.dim());
        sum += qfi(rho, &Observable::new(joint)?)?;
    }
    Ok(sum)
}

/// Maximum of the joint total QFI over the orthogonal orbits of both sets:
/// `f_a + f_b + 2 ||xi||_tr`, together with the maximizing rotations
/// `O^A = U^T`, `O^B = V^T` from `xi = U Sigma V^T`. Evaluating
/// [`unoptimized_total`] on the correspondingly rotated sets reproduces the
/// returned value.
pub fn optimized_total(
    rho: &DensityMatrix,
    obs_a: &ObservableSet,
    obs_b: &ObservableSet,
) -> Result<(f64, OrthogonalRotation, OrthogonalRotation)> {
    let decomp = xi_decomposition(rho, obs_a, obs_b)?;
    let factors = svd_factors(&decomp.xi)?;
    let trace_norm: f64 = factors.sigma.iter().sum();
    let value = decomp.f_a + decomp.f_b + 2.0 * trace_norm;
    let rot_a = OrthogonalRotation::new(factors.u.transpose())?;
    let rot_b = OrthogonalRotation::new(factors.v.transpose())?;
    Ok((value, rot_a, rot_b))
}

/// State-independent separability bound `s(A) + s(B)`; for LOO pairs at
/// equal local dimension this is `2(d-1)`, for SIC pairs
/// `2(d-1)/(d(d+1))`. Generic sets without a user-supplied bound are
/// rejected.
pub fn separability_bound(obs_a: &ObservableSet, obs_b: &ObservableSet) -> Result<f64> {
    match (obs_a.bound_s(), obs_b.bound_s()) {
        (Some(sa), Some(sb)) => Ok(sa + sb),
        _ => Err(Error::UnknownBound),
    }
}

/// Evaluate both criterion variants on one state. A violated inequality
/// certifies entanglement; the optimized flag dominates the unoptimized one
/// since `Tr[xi] <= ||xi||_tr`.
pub fn evaluate(
    rho: &DensityMatrix,
    obs_a: &ObservableSet,
    obs_b: &ObservableSet,
) -> Result<CriterionReport> {
    let bound = separability_bound(obs_a, obs_b)?;
    let decomp = xi_decomposition(rho, obs_a, obs_b)?;
    let unopt_total = unoptimized_total(rho, obs_a, obs_b)?;
    let factors = svd_factors(&decomp.xi)?;
    let xi_trace_norm: f64 = factors.sigma.iter().sum();
    let opt_total = decomp.f_a + decomp.f_b + 2.0 * xi_trace_norm;

    let unopt_violated = unopt_total > bound + VIOLATION_EPS;
    let opt_violated = opt_total > bound + VIOLATION_EPS;
    // The trace-norm form of the optimized condition is the same inequality
    // rearranged; the two must agree.
    debug_assert_eq!(
        opt_violated,
        xi_trace_norm > (bound - decomp.f_a - decomp.f_b) / 2.0 + VIOLATION_EPS / 2.0
    );
    debug_assert!(opt_total >= unopt_total - 1e-9);

    Ok(CriterionReport {
        state_id: String::new(),
        unopt_total,
        opt_total,
        bound,
        xi_trace_norm,
        unopt_violated,
        opt_violated,
        rotation_a: OrthogonalRotation::new(factors.u.transpose())?,
        rotation_b: OrthogonalRotation::new(factors.v.transpose())?,
    })
}

impl CriterionReport {
    pub fn violated(&self, mode: Mode) -> bool {
        match mode {
            Mode::Unoptimized => self.unopt_violated,
            Mode::Optimized => self.opt_violated,
        }
    }
}

/// Apply the maximizing rotations from a report to the observable pair.
pub fn rotate_pair(
    obs_a: &ObservableSet,
    obs_b: &ObservableSet,
    report: &CriterionReport,
) -> Result<(ObservableSet, ObservableSet)> {
    Ok((rotate(obs_a, &report.rotation_a)?, rotate(obs_b, &report.rotation_b)?))
}

const COARSE_GRID_POINTS: usize = 101;
const BISECTION_RESOLUTION: f64 = 1e-5;

/// Smallest eta in [0, 1] at which the selected criterion flags the family
/// as entangled: a 101-point coarse scan (with a monotonicity check on the
/// violation indicator) followed by bisection to |delta eta| <= 1e-5.
/// `None` when no grid point violates.
pub fn threshold(
    family: StateFamily,
    obs_a: &ObservableSet,
    obs_b: &ObservableSet,
    mode: Mode,
) -> Result<Option<f64>> {
    let violated_at = |eta: f64| -> Result<bool> {
        let rho = family.state(eta)?;
        Ok(evaluate(&rho, obs_a, obs_b)?.violated(mode))
    };

    let grid: Vec<f64> =
        (0..COARSE_GRID_POINTS).map(|i| i as f64 / (COARSE_GRID_POINTS - 1) as f64).collect();
    let flags: Vec<bool> = grid.iter().map(|&eta| violated_at(eta)).collect::<Result<_>>()?;

    let first = match flags.iter().position(|&v| v) {
        None => return Ok(None),
        Some(i) => i,
    };
    if let Some(back) = flags.iter().skip(first).position(|&v| !v) {
        return Err(Error::NonMonotoneViolation {
            eta_violated: grid[first],
            eta_clean: grid[first + back],
        });
    }
    if first == 0 {
        return Ok(Some(0.0));
    }

    let (mut lo, mut hi) = (grid[first - 1], grid[first]);
    while hi - lo > BISECTION_RESOLUTION {
        let mid = 0.5 * (lo + hi);
        if violated_at(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Some(0.5 * (lo + hi)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::observables::{loo_basis, sic_povm};
    use crate::states::{isotropic, random_density, werner};
    use approx::assert_abs_diff_eq;
    use num_complex::Complex64;

    fn product_ground_state() -> DensityMatrix {
        let mut m = CMatrix::zeros(4, 4);
        m[(0, 0)] = Complex64::ONE;
        DensityMatrix::new(m).unwrap()
    }

    #[test]
    fn xi_vanishes_on_pure_product_state() {
        let rho = product_ground_state();
        let loo = loo_basis(2).unwrap();
        let d = xi_decomposition(&rho, &loo, &loo).unwrap();
        assert!(d.xi.iter().all(|x| x.abs() <= 1e-10));
    }

    #[test]
    fn xi_vanishes_on_maximally_mixed() {
        let rho = DensityMatrix::new(CMatrix::identity(9, 9) / Complex64::from(9.0)).unwrap();
        let loo = loo_basis(3).unwrap();
        let d = xi_decomposition(&rho, &loo, &loo).unwrap();
        assert!(d.f_a.abs() <= 1e-12);
        assert!(d.f_b.abs() <= 1e-12);
        assert!(d.xi.iter().all(|x| x.abs() <= 1e-12));
    }

    #[test]
    fn decomposition_reconstructs_direct_total() {
        let loo = loo_basis(3).unwrap();
        for seed in 0..10 {
            let rho = random_density(9, 9, seed).unwrap();
            let d = xi_decomposition(&rho, &loo, &loo).unwrap();
            let direct = unoptimized_total(&rho, &loo, &loo).unwrap();
            assert_abs_diff_eq!(d.total(), direct, epsilon = 1e-8);
        }
    }

    #[test]
    fn optimized_dominates_and_product_state_has_no_gain() {
        let rho = product_ground_state();
        let loo = loo_basis(2).unwrap();
        let d = xi_decomposition(&rho, &loo, &loo).unwrap();
        let (opt, _, _) = optimized_total(&rho, &loo, &loo).unwrap();
        assert_abs_diff_eq!(opt, d.f_a + d.f_b, epsilon = 1e-10);
        for seed in 0..5 {
            let rho = random_density(9, 4, 100 + seed).unwrap();
            let loo3 = loo_basis(3).unwrap();
            let unopt = unoptimized_total(&rho, &loo3, &loo3).unwrap();
            let (opt, _, _) = optimized_total(&rho, &loo3, &loo3).unwrap();
            assert!(opt >= unopt - 1e-9);
        }
    }

    #[test]
    fn separability_bounds() {
        let loo = loo_basis(3).unwrap();
        let sic = sic_povm(3).unwrap();
        assert_abs_diff_eq!(separability_bound(&loo, &loo).unwrap(), 4.0);
        assert_abs_diff_eq!(separability_bound(&sic, &sic).unwrap(), 1.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(
            separability_bound(&loo, &sic).unwrap(),
            2.0 + 1.0 / 6.0,
            epsilon = 1e-15
        );
        let generic = ObservableSet::generic(3, vec![], None).unwrap();
        assert!(matches!(separability_bound(&generic, &loo), Err(Error::UnknownBound)));
    }

    #[test]
    fn isotropic_unoptimized_loo_hits_bound_at_two_thirds() {
        let loo = loo_basis(3).unwrap();
        let rho = isotropic(3, 2.0 / 3.0).unwrap();
        let total = unoptimized_total(&rho, &loo, &loo).unwrap();
        assert_abs_diff_eq!(total, 4.0, epsilon = 1e-9);
    }

    #[test]
    fn evaluate_flags_isotropic_and_werner() {
        let sic = sic_povm(3).unwrap();
        let iso = isotropic(3, 0.9).unwrap();
        let report = evaluate(&iso, &sic, &sic).unwrap();
        assert!(report.unopt_violated);
        assert!(report.opt_violated);

        let loo = loo_basis(3).unwrap();
        let wer = werner(3, 0.9).unwrap();
        let report = evaluate(&wer, &loo, &loo).unwrap();
        assert!(!report.unopt_violated);
        assert!(report.opt_violated);
    }

    #[test]
    fn maximizer_attains_optimized_value() {
        let loo = loo_basis(3).unwrap();
        let rho = isotropic(3, 0.8).unwrap();
        let report = evaluate(&rho, &loo, &loo).unwrap();
        let (rot_a, rot_b) = rotate_pair(&loo, &loo, &report).unwrap();
        let attained = unoptimized_total(&rho, &rot_a, &rot_b).unwrap();
        assert_abs_diff_eq!(attained, report.opt_total, epsilon = 1e-8);
    }

    #[test]
    fn threshold_unoptimized_isotropic_loo() {
        let loo = loo_basis(3).unwrap();
        let family = StateFamily::Isotropic { local_dim: 3 };
        let t = threshold(family, &loo, &loo, Mode::Unoptimized).unwrap().unwrap();
        assert_abs_diff_eq!(t, 2.0 / 3.0, epsilon = 1e-4);
    }

    #[test]
    fn threshold_none_for_unoptimized_werner() {
        let family = StateFamily::Werner { local_dim: 3 };
        for obs in [loo_basis(3).unwrap(), sic_povm(3).unwrap()] {
            assert_eq!(threshold(family, &obs, &obs, Mode::Unoptimized).unwrap(), None);
        }
    }

    #[test]
    fn optimized_thresholds_match_closed_forms() {
        // Isotropic: total = 4 K (d^2-1)/d with K = 9 eta^2/(7 eta + 2);
        // setting it to the bound 2(d-1) gives 24 eta^2 - 7 eta - 2 = 0.
        let expected_iso = (7.0 + 241.0_f64.sqrt()) / 48.0;
        let loo = loo_basis(3).unwrap();
        let sic = sic_povm(3).unwrap();
        let iso = StateFamily::Isotropic { local_dim: 3 };
        let t_loo = threshold(iso, &loo, &loo, Mode::Optimized).unwrap().unwrap();
        assert_abs_diff_eq!(t_loo, expected_iso, epsilon = 1e-4);
        let t_sic = threshold(iso, &sic, &sic, Mode::Optimized).unwrap().unwrap();
        assert_abs_diff_eq!(t_sic, expected_iso, epsilon = 1e-4);

        // Werner: total = 24 eta^2/(2 + eta) against the bound 4, hence
        // 6 eta^2 - eta - 2 = 0 and eta = 2/3 exactly.
        let wer = StateFamily::Werner { local_dim: 3 };
        let t_wer = threshold(wer, &loo, &loo, Mode::Optimized).unwrap().unwrap();
        assert_abs_diff_eq!(t_wer, 2.0 / 3.0, epsilon = 1e-4);
    }

    #[test]
    fn mismatched_configurations_are_rejected() {
        let rho = isotropic(2, 0.5).unwrap();
        let loo3 = loo_basis(3).unwrap();
        assert!(matches!(
            xi_decomposition(&rho, &loo3, &loo3),
            Err(Error::DimensionMismatch { .. })
        ));
        let loo2 = loo_basis(2).unwrap();
        assert!(matches!(
            xi_decomposition(&isotropic(3, 0.5).unwrap().clone(), &loo3, &loo2),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn report_invariants_on_a_sweep() {
        let loo = loo_basis(3).unwrap();
        for i in 0..11 {
            let eta = i as f64 / 10.0;
            let report = evaluate(&isotropic(3, eta).unwrap(), &loo, &loo).unwrap();
            assert!(report.opt_total >= report.unopt_total - 1e-9);
            if report.unopt_violated {
                assert!(report.opt_violated);
            }
        }
    }

    #[test]
    fn xi_trace_norm_never_below_trace() {
        let loo = loo_basis(3).unwrap();
        for seed in 0..5 {
            let rho = random_density(9, 9, 40 + seed).unwrap();
            let d = xi_decomposition(&rho, &loo, &loo).unwrap();
            assert!(d.xi_trace_norm().unwrap() >= d.xi_trace() - 1e-10);
        }
    }
}
