//! Design and simulation toolkit for qubits encoded in pairs of
//! dipole-dipole interacting two-level systems.
//!
//! Two identical two-level emitters separated by much less than the
//! transition wavelength hybridize into a four-level ladder: the ground
//! state `G`, an antisymmetric (subradiant) state `-`, a symmetric
//! (superradiant) state `+`, and the doubly excited state `E`. The
//! dipole-dipole exchange shifts `+`/`-` by the amount `delta` in
//! opposite directions, while interference in the common radiation
//! field splits the decay rates into `gamma_plus = gamma + gamma12` and
//! `gamma_minus = gamma - gamma12`. Deep in the near field the `G`/`-`
//! pair forms a qubit that decays slower than either bare emitter by a
//! factor of order `zeta^2 / 5`, where `zeta` is the separation in
//! units of the reduced transition wavelength.
//!
//! The crate is organized bottom-up:
//!
//! - [`linalg`]: dense complex containers, a Hermitian eigensolver, an
//!   SVD, the matrix exponential, and an adaptive integrator. All
//!   numerics are deterministic and hand-rolled; dimensions stay small.
//! - [`rddi`]: resonant dipole-dipole coefficients, exact and
//!   asymptotic, plus single- and two-dimer level structure.
//! - [`drive`]: laser coupling to the dressed states, driven
//!   Hamiltonians, effective two-level reductions, collapse operators.
//! - [`dynamics`]: conditional (non-Hermitian) propagation, the master
//!   equation, and steady states.
//! - [`gates`]: qubit rotations, readout and initialization, SWAP and
//!   controlled-phase gates, with analytic error budgets checked
//!   against numerical propagation.
//!
//! Units: the single-emitter decay rate `gamma` is the unit of
//! frequency and `1/gamma` the unit of time; `hbar = 1`. All energies,
//! Rabi frequencies, and rates are dimensionless multiples of `gamma`.

pub mod drive;
pub mod dynamics;
pub mod error;
pub mod gates;
pub mod linalg;
pub mod rddi;

pub use error::{Error, Result};

/// Shorthand for the complex scalar used throughout.
pub type C64 = num_complex::Complex64;
