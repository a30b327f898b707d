//! Numerical laboratory for quantum adiabatic evolution along randomized
//! interpolation paths
//!
//! ```text
//! H(s) = (1 - s) H_B + s H_P + s (1 - s) H_E
//! ```
//!
//! where `H_E` is an extra clause-supported term that vanishes at both ends of
//! the path. The crate is organised bottom-up:
//!
//! - [`instances`]: local cost functions over bit strings and their builders.
//! - [`operators`]: clause operators, Pauli algebra, random perturbations and
//!   the full-space path Hamiltonian.
//! - [`collective`]: the `(n + 1)`-dimensional maximal-spin sector of the
//!   permutation-symmetric instance and spin coherent states.
//! - [`spectra`]: dense Hermitian eigensolving and gap scans.
//! - [`dynamics`]: time-dependent Schrödinger evolution and success
//!   probabilities.
//! - [`effpot`]: the large-`n` effective potential on the sphere, local
//!   minimum continuation and the random-matrix Monte Carlo experiment.
//! - [`study`]: random 3-SAT gap comparison with and without `H_E`.
//!
//! Data-parallel loops (gap scans, Monte Carlo trials, instance sweeps) go
//! through [`exec`], which uses rayon when the `parallel` feature is enabled
//! and falls back to plain iteration otherwise.

pub mod collective;
pub mod dynamics;
pub mod effpot;
pub mod error;
pub mod exec;
pub mod instances;
pub mod operators;
pub mod spectra;
pub mod study;

pub use error::{Error, Result};
pub use exec::Execution;

/// Complex scalar used for all state vectors and operators.
pub type C64 = nalgebra::Complex<f64>;

/// Dense complex matrix, row/column indexed by computational basis states.
pub type CMatrix = nalgebra::DMatrix<C64>;
