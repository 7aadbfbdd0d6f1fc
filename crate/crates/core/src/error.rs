//! Error and diagnostic types shared across the crate.

use thiserror::Error;

/// Failure modes surfaced by constructors, solvers, and gate builders.
#[derive(Debug, Error)]
pub enum Error {
    /// Geometry parameters outside their physical domain.
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    /// Scalar or array input violates a documented precondition.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Matrix/vector shapes are inconsistent or exceed the supported size.
    #[error("dimension error: {0}")]
    Dimension(String),

    /// The adaptive integrator drove the step size below the resolvable
    /// limit, which indicates a stiffness scale the tolerance cannot meet.
    #[error("integration stalled near t = {t:.6e}: step size underflow ({detail})")]
    Stiff { t: f64, detail: String },

    /// An iterative numerical kernel failed to converge.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// A model assumption was violated at run time (norm growth,
    /// inconsistent loss terms, non-unique steady state, ...).
    #[error("model violation: {0}")]
    Model(String),

    /// The requested drive does not couple to the requested transition.
    #[error("drive does not couple: {0}")]
    NoCoupling(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Non-fatal diagnostics attached to reports when a regime assumption
/// is only marginally satisfied. Carrying them as data keeps library
/// output silent while letting callers decide what to surface.
#[derive(Debug, Clone, PartialEq)]
pub enum Warning {
    /// Separation is no longer deep in the near field; the qubit
    /// encoding degrades as `zeta` approaches 1.
    FarFieldGeometry { zeta: f64 },
    /// Dressed-state hierarchy marginal: the quoted ratio should be
    /// small for the reduction or budget to be trustworthy.
    WeakHierarchy { what: &'static str, ratio: f64 },
    /// Drive detuned off the targeted dressed resonance by more than
    /// the linewidth-level tolerance.
    OffResonantDrive { offset: f64, splitting: f64 },
    /// Probe interval is not short against the qubit lifetime, so
    /// readout back-action erodes the stored state.
    ProbeOutlivesQubit { probe_time: f64, qubit_lifetime: f64 },
}

impl std::fmt::Display for Warning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Warning::FarFieldGeometry { zeta } => {
                write!(f, "separation zeta = {zeta:.3} is not deep in the near field")
            }
            Warning::WeakHierarchy { what, ratio } => {
                write!(f, "scale hierarchy '{what}' marginal: ratio = {ratio:.3e}")
            }
            Warning::OffResonantDrive { offset, splitting } => {
                write!(
                    f,
                    "drive off dressed resonance by {offset:.3e} (splitting {splitting:.3e})"
                )
            }
            Warning::ProbeOutlivesQubit { probe_time, qubit_lifetime } => {
                write!(
                    f,
                    "probe time {probe_time:.3e} not short against qubit lifetime {qubit_lifetime:.3e}"
                )
            }
        }
    }
}
