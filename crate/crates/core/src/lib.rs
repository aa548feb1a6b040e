//! Detection of bipartite entanglement through quantum Fisher information.
//!
//! A separable state cannot exceed the state-independent bound
//! `s(A) + s(B)` on the total QFI of a joint observable set `A + B`; a
//! violation certifies entanglement. The bound is invariant under orthogonal
//! mixing of either set, so the criterion sharpens by maximizing the total
//! QFI over both measurement orbits — a maximum that reduces to
//! `F_A + F_B + 2 ||xi||_tr` with `xi` the real cross matrix of the
//! bipartite QFI decomposition.
//!
//! The crate provides:
//!
//! * [`qfi`]: QFI, symmetric logarithmic derivative, total QFI and
//!   Cramer-Rao precision bounds;
//! * [`observables`]: generalized Gell-Mann LOO bases, SIC-POVMs with their
//!   certification, the SIC-to-LOO transform and orbit rotations;
//! * [`states`]: isotropic and Werner families plus seeded random states;
//! * [`criterion`]: the xi decomposition, both criterion variants, bounds
//!   and threshold location;
//! * [`cli`]: the sweep/threshold/certification machinery behind the
//!   `qfi-detect` binary.

pub mod cli;
pub mod criterion;
pub mod error;
pub mod numerics;
pub mod observables;
pub mod qfi;
pub mod states;

pub use error::{Error, Result};
pub use numerics::{CMatrix, CVector, RMatrix, SpectralDecomposition};
pub use observables::{ObservableKind, ObservableSet, OrthogonalRotation, SicSign};
pub use qfi::{DensityMatrix, Observable};
pub use states::StateFamily;
