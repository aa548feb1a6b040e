//! Construction and certification of observable sets: generalized Gell-Mann
//! LOO bases, SIC-POVMs (built in for d = 2, 3; Weyl-Heisenberg orbits of a
//! user-supplied fiducial otherwise), the SIC-to-LOO transform, and
//! orthogonal mixing of a set along its measurement orbit.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::numerics::{hermitian_eig, real_ginibre, CMatrix, CVector, RMatrix};
use crate::qfi::Observable;

/// Certification tolerance for constructed sets (LOO orthonormality,
/// SIC resolution of identity and trace).
pub const CERT_TOL: f64 = 1e-9;
/// SIC overlap tolerance, looser than the construction tolerance so that
/// fiducials computed elsewhere at lower precision still certify.
pub const SIC_OVERLAP_TOL: f64 = 1e-8;
const ROTATION_TOL: f64 = 1e-9;

/// What an observable set has been certified as.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObservableKind {
    /// d^2 Hermitian matrices, orthonormal under the Hilbert-Schmidt inner
    /// product.
    Loo,
    /// d^2 subnormalized rank-1 projectors with uniform pairwise overlap,
    /// summing to the identity.
    Sic,
    /// No certified structure.
    Generic,
}

impl ObservableKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ObservableKind::Loo => "loo",
            ObservableKind::Sic => "sic",
            ObservableKind::Generic => "generic",
        }
    }
}

/// An ordered list of Hermitian observables on one subsystem, tagged with
/// its certified kind and, when known, the state-independent bound
/// `s = max_rho F_total(rho)`.
#[derive(Debug, Clone)]
pub struct ObservableSet {
    dim: usize,
    members: Vec<Observable>,
    kind: ObservableKind,
    bound_s: Option<f64>,
}

impl ObservableSet {
    /// Wrap arbitrary Hermitian matrices as an uncertified set. The bound,
    /// if supplied, is trusted as given.
    pub fn generic(dim: usize, members: Vec<Observable>, bound_s: Option<f64>) -> Result<Self> {
        for m in &members {
            if m.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: m.dim() });
            }
        }
        Ok(Self { dim, members, kind: ObservableKind::Generic, bound_s })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn kind(&self) -> ObservableKind {
        self.kind
    }

    /// State-independent bound on the total QFI of this set, when known.
    pub fn bound_s(&self) -> Option<f64> {
        self.bound_s
    }

    pub fn members(&self) -> &[Observable] {
        &self.members
    }

    pub fn member(&self, mu: usize) -> &Observable {
        &self.members[mu]
    }
}

/// A real orthogonal matrix mixing an observable set along its orbit.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthogonalRotation {
    matrix: RMatrix,
}

impl OrthogonalRotation {
    pub fn new(matrix: RMatrix) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::NotSquare { rows: matrix.nrows(), cols: matrix.ncols() });
        }
        let gram = matrix.transpose() * &matrix;
        let mut dev: f64 = 0.0;
        for i in 0..gram.nrows() {
            for j in 0..gram.ncols() {
                let target = if i == j { 1.0 } else { 0.0 };
                dev = dev.max((gram[(i, j)] - target).abs());
            }
        }
        if dev > ROTATION_TOL {
            return Err(Error::NotOrthogonal { deviation: dev });
        }
        Ok(Self { matrix })
    }

    pub fn identity(size: usize) -> Self {
        Self { matrix: RMatrix::identity(size, size) }
    }

    pub fn size(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &RMatrix {
        &self.matrix
    }
}

/// Haar-distributed random orthogonal matrix (QR of a standard-normal
/// matrix with the R diagonal sign-fixed). Deterministic per seed.
pub fn random_orthogonal(size: usize, seed: u64) -> OrthogonalRotation {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_orthogonal_with_rng(size, &mut rng)
}

pub(crate) fn random_orthogonal_with_rng(size: usize, rng: &mut ChaCha8Rng) -> OrthogonalRotation {
    let g = real_ginibre(size, size, rng);
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for i in 0..size {
        if r[(i, i)] < 0.0 {
            let col = -q.column(i);
            q.set_column(i, &col);
        }
    }
    OrthogonalRotation { matrix: q }
}

/// The d^2 - 1 generalized Gell-Mann matrices, normalized to
/// `Tr[pi_mu pi_nu] = 2 delta_{mu nu}`, ordered: symmetric off-diagonal
/// pairs (j < k lexicographic), antisymmetric pairs (same order), then
/// diagonal matrices by increasing rank. The fixed order keeps the xi-matrix
/// layout and CSV output reproducible.
pub fn gell_mann_matrices(d: usize) -> Vec<CMatrix> {
    let mut out = Vec::with_capacity(d * d - 1);
    for j in 0..d {
        for k in (j + 1)..d {
            let mut m = CMatrix::zeros(d, d);
            m[(j, k)] = Complex64::new(1.0, 0.0);
            m[(k, j)] = Complex64::new(1.0, 0.0);
            out.push(m);
        }
    }
    for j in 0..d {
        for k in (j + 1)..d {
            let mut m = CMatrix::zeros(d, d);
            m[(j, k)] = Complex64::new(0.0, -1.0);
            m[(k, j)] = Complex64::new(0.0, 1.0);
            out.push(m);
        }
    }
    for l in 1..d {
        let norm = (2.0 / (l as f64 * (l + 1) as f64)).sqrt();
        let mut m = CMatrix::zeros(d, d);
        for j in 0..l {
            m[(j, j)] = Complex64::from(norm);
        }
        m[(l, l)] = Complex64::from(-(l as f64) * norm);
        out.push(m);
    }
    out
}

/// Local orthonormal observables: the identity over sqrt(d) followed by the
/// generalized Gell-Mann matrices over sqrt(2). Satisfies
/// `Tr[G_mu G_nu] = delta_{mu nu}` with m = d^2 members; the total-QFI bound
/// is `s = d - 1`.
pub fn loo_basis(d: usize) -> Result<ObservableSet> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    let inv_sqrt_d = 1.0 / (d as f64).sqrt();
    let inv_sqrt_2 = std::f64::consts::FRAC_1_SQRT_2;
    let mut members = Vec::with_capacity(d * d);
    members.push(Observable::new(CMatrix::identity(d, d) * Complex64::from(inv_sqrt_d))?);
    for pi in gell_mann_matrices(d) {
        members.push(Observable::new(pi * Complex64::from(inv_sqrt_2))?);
    }
    Ok(ObservableSet {
        dim: d,
        members,
        kind: ObservableKind::Loo,
        bound_s: Some(d as f64 - 1.0),
    })
}

/// Weyl-Heisenberg displacement orbit `{X^a Z^b |f> : a, b in 0..d}` of a
/// fiducial vector, (a, b) lexicographic. Convention: `X|j> = |j+1 mod d>`,
/// `Z|j> = omega^j |j>` with `omega = exp(2 pi i / d)`; plain products
/// `X^a Z^b` without a half-phase factor, since projectors are insensitive
/// to the overall phase.
fn weyl_heisenberg_orbit(fiducial: &CVector) -> Vec<CVector> {
    let d = fiducial.len();
    let omega = 2.0 * std::f64::consts::PI / d as f64;
    let mut orbit = Vec::with_capacity(d * d);
    for a in 0..d {
        for b in 0..d {
            let psi = CVector::from_fn(d, |j, _| {
                let src = (j + d - a) % d;
                let phase = omega * (src * b) as f64;
                fiducial[src] * Complex64::new(phase.cos(), phase.sin())
            });
            orbit.push(psi);
        }
    }
    orbit
}

fn projectors_over_d(states: &[CVector], d: usize) -> Result<Vec<Observable>> {
    let scale = Complex64::from(1.0 / d as f64);
    states
        .iter()
        .map(|psi| {
            Observable::new(CMatrix::from_fn(d, d, |i, j| scale * psi[i] * psi[j].conj()))
        })
        .collect()
}

/// Max deviation of the pairwise overlaps from the SIC condition
/// `|<psi_mu|psi_nu>|^2 = (d delta_{mu nu} + 1)/(d + 1)`.
fn sic_overlap_deviation(states: &[CVector], d: usize) -> f64 {
    let off = 1.0 / (d as f64 + 1.0);
    let mut dev: f64 = 0.0;
    for (mu, a) in states.iter().enumerate() {
        for (nu, b) in states.iter().enumerate() {
            let overlap = a.dotc(b).norm_sqr();
            let target = if mu == nu { 1.0 } else { off };
            dev = dev.max((overlap - target).abs());
        }
    }
    dev
}

fn sic_bound(d: usize) -> f64 {
    (d as f64 - 1.0) / (d as f64 * (d as f64 + 1.0))
}

/// Built-in SIC-POVMs: the qubit tetrahedron (Bloch vectors
/// `(+-1, +-1, +-1)/sqrt(3)` with even sign products) and the qutrit
/// Weyl-Heisenberg orbit of the fiducial `(0, 1, -1)/sqrt(2)`. The total-QFI
/// bound is `s = (d - 1)/(d (d + 1))`.
pub fn sic_povm(d: usize) -> Result<ObservableSet> {
    let states: Vec<CVector> = match d {
        2 => {
            let bloch = [[1.0, 1.0, 1.0], [1.0, -1.0, -1.0], [-1.0, 1.0, -1.0], [-1.0, -1.0, 1.0]];
            bloch.iter().map(bloch_state).collect()
        }
        3 => {
            let s = std::f64::consts::FRAC_1_SQRT_2;
            let fiducial = CVector::from_vec(vec![
                Complex64::ZERO,
                Complex64::from(s),
                Complex64::from(-s),
            ]);
            weyl_heisenberg_orbit(&fiducial)
        }
        _ => return Err(Error::UnsupportedDimension(d)),
    };
    debug_assert!(sic_overlap_deviation(&states, d) < 1e-12);
    Ok(ObservableSet {
        dim: d,
        members: projectors_over_d(&states, d)?,
        kind: ObservableKind::Sic,
        bound_s: Some(sic_bound(d)),
    })
}

fn bloch_state(n: &[f64; 3]) -> CVector {
    let r = 3.0_f64.sqrt();
    let (nx, ny, nz) = (n[0] / r, n[1] / r, n[2] / r);
    let theta = nz.clamp(-1.0, 1.0).acos();
    let phi = ny.atan2(nx);
    CVector::from_vec(vec![
        Complex64::from((theta / 2.0).cos()),
        Complex64::new(phi.cos(), phi.sin()) * Complex64::from((theta / 2.0).sin()),
    ])
}

/// SIC-POVM from the Weyl-Heisenberg orbit of a user-supplied fiducial.
/// The orbit is fully certified; a vector whose orbit violates the overlap
/// condition beyond 1e-8 is rejected.
pub fn sic_from_fiducial(d: usize, fiducial: &CVector) -> Result<ObservableSet> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    if fiducial.len() != d {
        return Err(Error::InvalidVector(format!(
            "fiducial has {} amplitudes, expected {d}",
            fiducial.len()
        )));
    }
    let norm = fiducial.norm();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidVector(format!("fiducial norm {norm} is not 1")));
    }
    let states = weyl_heisenberg_orbit(fiducial);
    let dev = sic_overlap_deviation(&states, d);
    if dev > SIC_OVERLAP_TOL {
        return Err(Error::NotAFiducial { max_deviation: dev });
    }
    Ok(ObservableSet {
        dim: d,
        members: projectors_over_d(&states, d)?,
        kind: ObservableKind::Sic,
        bound_s: Some(sic_bound(d)),
    })
}

/// Sign choice in the SIC-to-LOO transform. Both produce valid LOOs with
/// identical QFI content; `Minus` is the default with no physical
/// preference.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SicSign {
    #[default]
    Minus,
    Plus,
}

/// Turn a certified SIC-POVM into a LOO:
/// `G_mu = sqrt(d(d+1)) E_mu - (sqrt(d+1) -+ 1)/sqrt(d^3) * I`.
pub fn sic_to_loo(e: &ObservableSet, sign: SicSign) -> Result<ObservableSet> {
    if e.kind() != ObservableKind::Sic {
        return Err(Error::NotSic);
    }
    let d = e.dim() as f64;
    let scale = Complex64::from((d * (d + 1.0)).sqrt());
    let shift = match sign {
        SicSign::Minus => ((d + 1.0).sqrt() - 1.0) / (d * d * d).sqrt(),
        SicSign::Plus => ((d + 1.0).sqrt() + 1.0) / (d * d * d).sqrt(),
    };
    let id = CMatrix::identity(e.dim(), e.dim());
    let members: Result<Vec<Observable>> = e
        .members()
        .iter()
        .map(|em| Observable::new(em.matrix() * scale - &id * Complex64::from(shift)))
        .collect();
    let set = ObservableSet {
        dim: e.dim(),
        members: members?,
        kind: ObservableKind::Loo,
        bound_s: Some(d - 1.0),
    };
    debug_assert!(loo_orthonormality_deviation(&set) < CERT_TOL);
    Ok(set)
}

/// Mix a set along its orbit: `A'_mu = sum_nu O_{mu nu} A_nu`. LOO structure
/// survives any orthogonal mixing; a mixed SIC is downgraded to generic
/// (positivity is not preserved, and only QFI content matters downstream).
/// The bound `s` is orbit-invariant and carried over.
pub fn rotate(obs: &ObservableSet, o: &OrthogonalRotation) -> Result<ObservableSet> {
    if o.size() != obs.len() {
        return Err(Error::SizeMismatch { rotation: o.size(), set: obs.len() });
    }
    let d = obs.dim();
    let mut members = Vec::with_capacity(obs.len());
    for mu in 0..obs.len() {
        let mut m = CMatrix::zeros(d, d);
        for nu in 0..obs.len() {
            let w = o.matrix()[(mu, nu)];
            if w != 0.0 {
                m += obs.member(nu).matrix() * Complex64::from(w);
            }
        }
        members.push(Observable::new(m)?);
    }
    let kind = match obs.kind() {
        ObservableKind::Loo => ObservableKind::Loo,
        _ => ObservableKind::Generic,
    };
    Ok(ObservableSet { dim: d, members, kind, bound_s: obs.bound_s() })
}

// ---------------------------------------------------------------------------
// Certification
// ---------------------------------------------------------------------------

/// One certification check: name, measured deviation, tolerance.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: String,
    pub deviation: f64,
    pub tolerance: f64,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.deviation <= self.tolerance
    }
}

fn loo_orthonormality_deviation(set: &ObservableSet) -> f64 {
    let mut dev: f64 = 0.0;
    for (mu, a) in set.members().iter().enumerate() {
        for (nu, b) in set.members().iter().enumerate() {
            let target = if mu == nu { 1.0 } else { 0.0 };
            let inner = (a.matrix() * b.matrix()).trace().re;
            dev = dev.max((inner - target).abs());
        }
    }
    dev
}

/// Reconstruction deviation of random Hermitian matrices from their
/// expansion in the set, `sum_mu Tr[G_mu M] G_mu`; certifies completeness.
fn loo_completeness_deviation(set: &ObservableSet) -> f64 {
    let d = set.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(0x1007);
    let mut dev: f64 = 0.0;
    for _ in 0..4 {
        let g = crate::numerics::complex_ginibre(d, d, &mut rng);
        let m = (&g + g.adjoint()) * Complex64::from(0.5);
        let mut rebuilt = CMatrix::zeros(d, d);
        for obs in set.members() {
            let coeff = (obs.matrix() * &m).trace().re;
            rebuilt += obs.matrix() * Complex64::from(coeff);
        }
        dev = dev.max(crate::numerics::max_abs(&(rebuilt - m)));
    }
    dev
}

/// Certify a set as LOO: Hermitian members, m = d^2, pairwise
/// Hilbert-Schmidt orthonormality, completeness as a basis.
pub fn certify_loo(set: &ObservableSet) -> Vec<CheckResult> {
    let d = set.dim();
    vec![
        CheckResult {
            name: "member count m = d^2".into(),
            deviation: (set.len() as f64 - (d * d) as f64).abs(),
            tolerance: 0.0,
        },
        CheckResult {
            name: "Hilbert-Schmidt orthonormality Tr[G_mu G_nu] = delta".into(),
            deviation: loo_orthonormality_deviation(set),
            tolerance: CERT_TOL,
        },
        CheckResult {
            name: "completeness (random Hermitian reconstruction)".into(),
            deviation: loo_completeness_deviation(set),
            tolerance: CERT_TOL,
        },
    ]
}

/// Certify a set as a SIC-POVM: m = d^2, each member PSD with trace 1/d,
/// resolution of the identity, and the uniform-overlap condition
/// `d^2 Tr[E_mu E_nu] = (d delta + 1)/(d + 1)`.
pub fn certify_sic(set: &ObservableSet) -> Vec<CheckResult> {
    let d = set.dim();
    let df = d as f64;

    let mut trace_dev: f64 = 0.0;
    let mut psd_dev: f64 = 0.0;
    let mut sum = CMatrix::zeros(d, d);
    for e in set.members() {
        trace_dev = trace_dev.max((e.matrix().trace().re - 1.0 / df).abs());
        if let Ok(spec) = hermitian_eig(e.matrix()) {
            psd_dev = psd_dev.max((-spec.eigenvalues()[0]).max(0.0));
        }
        sum += e.matrix();
    }

    let mut overlap_dev: f64 = 0.0;
    for (mu, a) in set.members().iter().enumerate() {
        for (nu, b) in set.members().iter().enumerate() {
            let target = (df * if mu == nu { 1.0 } else { 0.0 } + 1.0) / (df + 1.0);
            let inner = df * df * (a.matrix() * b.matrix()).trace().re;
            overlap_dev = overlap_dev.max((inner - target).abs());
        }
    }

    vec![
        CheckResult {
            name: "member count m = d^2".into(),
            deviation: (set.len() as f64 - (d * d) as f64).abs(),
            tolerance: 0.0,
        },
        CheckResult { name: "member trace = 1/d".into(), deviation: trace_dev, tolerance: CERT_TOL },
        CheckResult { name: "members positive semidefinite".into(), deviation: psd_dev, tolerance: CERT_TOL },
        CheckResult {
            name: "resolution of identity sum E_mu = I".into(),
            deviation: crate::numerics::identity_deviation(&sum),
            tolerance: CERT_TOL,
        },
        CheckResult {
            name: "uniform overlap d^2 Tr[E_mu E_nu] = (d delta + 1)/(d + 1)".into(),
            deviation: overlap_dev,
            tolerance: SIC_OVERLAP_TOL,
        },
    ]
}

// ---------------------------------------------------------------------------
// Fiducial file format
// ---------------------------------------------------------------------------

/// Parse a fiducial file: line 1 is the dimension d, each of the next d
/// lines holds one amplitude as "re im".
pub fn parse_fiducial(text: &str) -> Result<(usize, CVector)> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let d: usize = lines
        .next()
        .ok_or_else(|| Error::InvalidVector("empty fiducial file".into()))?
        .trim()
        .parse()
        .map_err(|_| Error::InvalidVector("first line must be the dimension".into()))?;
    let mut amps = Vec::with_capacity(d);
    for i in 0..d {
        let line = lines
            .next()
            .ok_or_else(|| Error::InvalidVector(format!("expected {d} amplitudes, got {i}")))?;
        let mut parts = line.split_whitespace();
        let re: f64 = parts
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::InvalidVector(format!("bad amplitude on line {}", i + 2)))?;
        let im: f64 = parts
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::InvalidVector(format!("bad amplitude on line {}", i + 2)))?;
        amps.push(Complex64::new(re, im));
    }
    Ok((d, CVector::from_vec(amps)))
}
