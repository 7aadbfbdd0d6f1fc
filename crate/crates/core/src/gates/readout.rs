//! Qubit readout and initialization through the superradiant ladder.
//!
//! A probe tuned to the `G <-> +` resonance makes a qubit in `|G>`
//! fluoresce brightly (the saturated `|+>` state emits near the rate
//! `gamma_plus ~ 2 gamma`), while a qubit stored in `|->` stays dark.
//! Collecting a photon with efficiency `eta` takes about
//! `T_pr = 1/(eta gamma)`.
//!
//! The readout error channel: the same probe is simultaneously
//! resonant on `|-> <-> |E>` (the gap equals `omega + delta` on both
//! transitions), so a dark qubit is pumped out of `|->` at
//! `gamma_-+ ~ (Omega_p zeta)^2 / gamma`, after which it scatters like
//! a bright one. The reliability of discriminating dark from bright is
//! therefore `1/(1 + gamma_-+ T_pr / 2) = 2 eta / (2 eta + (Omega_p zeta)^2)`.
//!
//! The same pumping, run deliberately for several `1/gamma_-+` and
//! followed by a settling window of a few `1/gamma_plus`, empties
//! `|->` and leaves the dimer in `|G>`: that is the initialization
//! sequence sized by [`initialization_plan`].

use crate::drive::{drive_couplings, resonant_saturation, LaserField};
use crate::error::{Error, Result, Warning};
use crate::rddi::{rddi_coefficients, DimerGeometry};

/// Figures of merit for one fluorescence readout window.
#[derive(Debug, Clone, PartialEq)]
pub struct ReadoutReport {
    /// Probe window `1/(eta gamma)` for one detected photon on average.
    pub probe_time: f64,
    /// Probability that a dark qubit is still dark when the photon
    /// verdict arrives.
    pub reliability: f64,
    /// Pumping rate of `|->` through the doubly excited level.
    pub depumping_rate: f64,
    /// Steady `|+>` population of a bright qubit under the probe.
    pub bright_population: f64,
    /// Mean detected photon number from a bright qubit per window.
    pub expected_photons: f64,
    /// Time-integrated bright fraction of an initially dark qubit over
    /// the window (the false-signal exposure), and its small-time
    /// quadratic approximation `gamma_-+ T^2 / 2`.
    pub false_signal_exposure: f64,
    pub false_signal_quadratic: f64,
    pub warnings: Vec<Warning>,
}

/// `int_0^T (1 - e^{-g t}) dt = T - (1 - e^{-g T})/g`: the time an
/// initially dark qubit has spent repumped-bright by the end of the
/// window, which is what converts into falsely detected photons.
pub fn false_signal_exposure(pump_rate: f64, window: f64) -> f64 {
    let x = pump_rate * window;
    if x < 1e-6 {
        // Series to dodge the cancellation of T against (1-e^{-x})/g.
        return pump_rate * window * window * (0.5 - x / 6.0 + x * x / 24.0);
    }
    window + f64::exp_m1(-x) / pump_rate
}

/// Readout figures for a probe of Rabi frequency `probe_rabi` and a
/// photon detection efficiency `efficiency`.
pub fn readout_report(
    g: &DimerGeometry,
    probe_rabi: f64,
    efficiency: f64,
) -> Result<ReadoutReport> {
    if !probe_rabi.is_finite() || probe_rabi <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "probe rabi frequency must be positive and finite, got {probe_rabi}"
        )));
    }
    if !efficiency.is_finite() || efficiency <= 0.0 || efficiency > 1.0 {
        return Err(Error::InvalidInput(format!(
            "detection efficiency must lie in (0, 1], got {efficiency}"
        )));
    }
    let c = rddi_coefficients(g);
    let z = g.zeta();
    let probe_time = 1.0 / efficiency;
    let depumping_rate = (probe_rabi * z) * (probe_rabi * z);
    let reliability = 2.0 * efficiency / (2.0 * efficiency + depumping_rate);
    let f = LaserField::new(probe_rabi, 0.0, 0.0, 0.0)?;
    let bright_coupling = drive_couplings(g, &f).sym.norm();
    let bright_population = resonant_saturation(bright_coupling, c.gamma_plus());
    let expected_photons = efficiency * c.gamma_plus() * bright_population * probe_time;
    let mut warnings = Vec::new();
    let qubit_lifetime = 1.0 / c.gamma_minus();
    if probe_time > qubit_lifetime {
        warnings.push(Warning::ProbeOutlivesQubit { probe_time, qubit_lifetime });
    }
    Ok(ReadoutReport {
        probe_time,
        reliability,
        depumping_rate,
        bright_population,
        expected_photons,
        false_signal_exposure: false_signal_exposure(depumping_rate, probe_time),
        false_signal_quadratic: depumping_rate * probe_time * probe_time / 2.0,
        warnings,
    })
}

/// Timing of the optical-pumping initialization into `|G>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitializationPlan {
    /// Pump-out rate of `|->` under the probe.
    pub pump_rate: f64,
    /// Probe duration that shrinks any initial `|->` population by the
    /// factor `target_residual`.
    pub probe_time: f64,
    /// Drive-free window for the bright ladder to funnel into `|G>`.
    pub settle_time: f64,
    pub total_time: f64,
    pub target_residual: f64,
}

/// Sizes the pump-and-settle initialization sequence.
pub fn initialization_plan(
    g: &DimerGeometry,
    probe_rabi: f64,
    target_residual: f64,
) -> Result<InitializationPlan> {
    if !probe_rabi.is_finite() || probe_rabi <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "probe rabi frequency must be positive and finite, got {probe_rabi}"
        )));
    }
    if !target_residual.is_finite() || target_residual <= 0.0 || target_residual >= 1.0 {
        return Err(Error::InvalidInput(format!(
            "target residual must lie in (0, 1), got {target_residual}"
        )));
    }
    let c = rddi_coefficients(g);
    let z = g.zeta();
    let pump_rate = (probe_rabi * z) * (probe_rabi * z);
    let probe_time = (1.0 / target_residual).ln() / pump_rate;
    let settle_time = 5.0 / c.gamma_plus();
    Ok(InitializationPlan {
        pump_rate,
        probe_time,
        settle_time,
        total_time: probe_time + settle_time,
        target_residual,
    })
}
