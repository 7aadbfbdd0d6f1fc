//! Single-qubit rotations on the `{G, -}` qubit.
//!
//! A laser propagating along the intra-dimer axis couples to the
//! antisymmetric transition with `Omega_- ~ Omega zeta / sqrt(2)` and
//! to the symmetric one with `Omega_+ ~ sqrt(2) Omega`. Tuned to the
//! light-shift-corrected `G <-> -` resonance it drives a clean Rabi
//! rotation whose axis azimuth follows the laser phase. Two error
//! channels survive:
//!
//! - decay of `|->` at `gamma_minus ~ zeta^2/5` over the pulse, and
//! - photon scattering of `|G>` through the far-detuned superradiant
//!   state at `gamma_plus |Omega_+|^2/(2 delta)^2 ~ 16 Omega^2 zeta^6/9`.
//!
//! For a pulse of area `theta` both scale linearly in the duration
//! `theta/(sqrt(2) Omega zeta)`, so the total error
//! `theta zeta/(5 sqrt(2) Omega) + (16/(9 sqrt(2))) theta Omega zeta^5`
//! has a shallow minimum in the drive strength near `1/(3 zeta^2)`,
//! where it reaches about `(8/3) zeta^3` for a full flip.
//!
//! The alternative encoding treated by [`raman_rotation`] replaces the
//! metastable `|->` by a second ground sublevel flipped via a Raman
//! transition through the radiating level; matching the collective
//! scheme's coupling strength fixes the intermediate-state detuning
//! and with it the scattering error.

use std::f64::consts::PI;

use crate::drive::{
    drive_couplings, effective_minus_hamiltonian, resonant_minus_field, LaserField,
};
use crate::dynamics::propagate_conditional;
use crate::error::{Error, Result};
use crate::gates::{mean_leak, mean_overlap_fidelity, ErrorBudget, GateReport, OptimizedDrive};
use crate::linalg::{golden_section_min, ComplexMatrix, QuantumState};
use crate::rddi::DimerGeometry;
use crate::C64;

fn check_positive(name: &str, v: f64) -> Result<()> {
    if !v.is_finite() || v <= 0.0 {
        return Err(Error::InvalidInput(format!("{name} must be positive and finite, got {v}")));
    }
    Ok(())
}

/// Leading-order error budget for a rotation of pulse area `area`
/// (`pi` flips the qubit) at drive Rabi frequency `rabi`.
pub fn rotation_error_budget(g: &DimerGeometry, rabi: f64, area: f64) -> Result<ErrorBudget> {
    check_positive("drive rabi frequency", rabi)?;
    check_positive("pulse area", area)?;
    let z = g.zeta();
    // T = area / (2 |Omega_-|) with |Omega_-| = rabi z / sqrt(2).
    let duration = area / (std::f64::consts::SQRT_2 * rabi * z);
    let spontaneous = z * z / 5.0 * duration;
    let bright = 16.0 * rabi * rabi * z.powi(6) / 9.0 * duration;
    Ok(ErrorBudget::new(spontaneous, bright, 0.0, duration))
}

/// Rotates the qubit by `area` about an equatorial axis set by the
/// laser `phase`, and propagates the effective two-level model to get
/// the realized truth table.
pub fn rotate_qubit(g: &DimerGeometry, rabi: f64, area: f64, phase: f64) -> Result<GateReport> {
    check_positive("pulse area", area)?;
    let field = resonant_minus_field(g, rabi, phase, 0.0, true)?;
    let eff = effective_minus_hamiltonian(g, &field)?;
    let coupling = eff.coupling;
    let duration = area / (2.0 * coupling.norm());

    let mut columns = Vec::with_capacity(2);
    for j in 0..2 {
        let psi0 = QuantumState::basis_state(2, j)?;
        let evo = propagate_conditional(&eff.matrix, &psi0, &[duration])?;
        columns.push(evo.final_state().amplitudes().clone());
    }
    let mut tt = ndarray::Array2::<C64>::zeros((2, 2));
    for (j, col) in columns.iter().enumerate() {
        for k in 0..2 {
            tt[[k, j]] = col[k];
        }
    }
    let truth_table = ComplexMatrix::new(tt)?;

    // Loss-free rotation about the axis at azimuth alpha = arg(coupling).
    let alpha = coupling.arg();
    let (ch, sh) = ((0.5 * area).cos(), (0.5 * area).sin());
    let off = C64::new(0.0, -sh);
    let mut ideal = ndarray::Array2::<C64>::zeros((2, 2));
    ideal[[0, 0]] = C64::new(ch, 0.0);
    ideal[[1, 1]] = C64::new(ch, 0.0);
    ideal[[0, 1]] = off * C64::from_polar(1.0, -alpha);
    ideal[[1, 0]] = off * C64::from_polar(1.0, alpha);
    let ideal = ComplexMatrix::new(ideal)?;

    let budget = rotation_error_budget(g, rabi, area)?;
    Ok(GateReport {
        duration,
        fidelity_analytic: 1.0 - budget.total,
        fidelity_numeric: mean_overlap_fidelity(&ideal, &truth_table),
        leaked_population: mean_leak(&truth_table),
        conditional_phase: None,
        truth_table,
        budget,
        warnings: eff.warnings,
    })
}

/// Drive strength for minimum rotation error: the design rule
/// `1/(3 zeta^2)` against a golden-section minimization of the coded
/// budget for a full flip.
pub fn optimize_rotation_drive(g: &DimerGeometry) -> Result<OptimizedDrive> {
    let z = g.zeta();
    let design = 1.0 / (3.0 * z * z);
    let total = |omega: f64| {
        rotation_error_budget(g, omega, PI).map(|b| b.total).unwrap_or(f64::INFINITY)
    };
    let (searched, searched_error) = golden_section_min(&total, design / 5.0, design * 5.0, 1e-12);
    Ok(OptimizedDrive {
        design_drive: design,
        design_error: total(design),
        searched_drive: searched,
        searched_error,
    })
}

/// Error of a resonant `pi` flip of a single bare emitter: excited
/// half the pulse `pi/rabi`, decaying at the full free-space rate,
/// giving `pi/(2 rabi)`. The collective qubit's optimized flip beats
/// this by roughly `zeta^{-1}` because its storage state is subradiant.
pub fn single_atom_flip_error(rabi: f64) -> Result<f64> {
    check_positive("drive rabi frequency", rabi)?;
    Ok(PI / (2.0 * rabi))
}

/// Raman-encoded alternative to the collective qubit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RamanRotation {
    /// Collective coupling `|Omega_-|` the two-photon drive must match.
    pub effective_coupling: f64,
    /// Intermediate-state detuning that reproduces it with two beams
    /// of Rabi frequency `rabi`: `rabi^2 / effective_coupling`.
    pub required_detuning: f64,
    /// Scattering probability from the intermediate level during a
    /// flip: `pi / (2 required_detuning)`.
    pub flip_error: f64,
}

/// Sizes a ground-sublevel Raman scheme so its two-photon Rabi
/// frequency equals the collective `G <-> -` coupling at the same
/// beam strength.
pub fn raman_rotation(g: &DimerGeometry, rabi: f64) -> Result<RamanRotation> {
    check_positive("drive rabi frequency", rabi)?;
    let f = LaserField::new(rabi, 0.0, 0.0, 0.0)?;
    let effective_coupling = drive_couplings(g, &f).antisym.norm();
    if effective_coupling <= 0.0 {
        return Err(Error::NoCoupling("antisymmetric coupling vanishes".into()));
    }
    let required_detuning = rabi * rabi / effective_coupling;
    Ok(RamanRotation {
        effective_coupling,
        required_detuning,
        flip_error: PI / (2.0 * required_detuning),
    })
}
