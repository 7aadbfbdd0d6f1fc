//! Laser driving of the dressed dimer states.
//!
//! A plane wave of Rabi frequency `Omega` (per emitter) and wavevector
//! tilted by `k_angle` from the interatomic axis reaches the two
//! emitters with a relative propagation phase `zeta cos(k_angle)`.
//! Projected on the dressed states this yields the couplings
//!
//! ```text
//! Omega_plus  = Omega (1 + e^{-i zeta cos(k_angle)}) / sqrt(2)
//! Omega_minus = Omega (1 - e^{-i zeta cos(k_angle)}) / sqrt(2)
//! ```
//!
//! so the symmetric state couples with nearly doubled strength while
//! the antisymmetric state is reached only through the field gradient:
//! `|Omega_minus| = sqrt(2) |Omega| sin(zeta cos(k_angle) / 2)`, of
//! order `Omega zeta / sqrt(2)` for propagation along the axis. The
//! identity `|Omega_plus|^2 + |Omega_minus|^2 = 2 |Omega|^2` holds for
//! every geometry.
//!
//! In the frame rotating at the laser frequency, with detuning
//! `delta_L = omega_eg - omega_laser`, the driven pair is governed by
//! the non-Hermitian (no-jump) Hamiltonian in the `G, -, +, E` basis:
//! diagonal `(0, delta_L - delta - i gamma_minus/2,
//! delta_L + delta - i gamma_plus/2, 2 delta_L - i)` with the drive
//! `Omega_minus (|-><G| - |E><-|) + Omega_plus (|+><G| + |E><+|) + h.c.`
//!
//! Driving one dressed transition shifts the levels via the other,
//! far-detuned one (light shift `(|Omega_plus|^2 - |Omega_minus|^2) /
//! (2 delta)`); the resonant field constructors can pre-compensate it,
//! which matters as soon as `Omega` approaches `delta / 10`.

use ndarray::Array2;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result, Warning};
use crate::linalg::ComplexMatrix;
use crate::rddi::{dressed, rddi_coefficients, DimerGeometry};

/// Classical drive: per-emitter Rabi frequency `rabi >= 0` (units of
/// `gamma`), overall phase, detuning `omega_eg - omega_laser`, and the
/// angle between wavevector and interatomic axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaserField {
    pub rabi: f64,
    pub phase: f64,
    pub detuning: f64,
    pub k_angle: f64,
}

impl LaserField {
    pub fn new(rabi: f64, phase: f64, detuning: f64, k_angle: f64) -> Result<Self> {
        if !rabi.is_finite() || rabi < 0.0 {
            return Err(Error::InvalidInput(format!(
                "rabi frequency must be non-negative and finite, got {rabi}"
            )));
        }
        for (name, v) in [("phase", phase), ("detuning", detuning), ("k_angle", k_angle)] {
            if !v.is_finite() {
                return Err(Error::InvalidInput(format!("laser {name} must be finite, got {v}")));
            }
        }
        Ok(Self { rabi, phase, detuning, k_angle })
    }

    /// Complex drive amplitude `rabi e^{i phase}`.
    pub fn amplitude(&self) -> C64 {
        C64::from_polar(self.rabi, self.phase)
    }
}

/// Drive projected on the symmetric and antisymmetric transitions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriveCouplings {
    /// `Omega_plus`, coupling `G <-> +` and `+ <-> E`.
    pub sym: C64,
    /// `Omega_minus`, coupling `G <-> -` and `- <-> E`.
    pub antisym: C64,
}

pub fn drive_couplings(g: &DimerGeometry, f: &LaserField) -> DriveCouplings {
    let amp = f.amplitude() * std::f64::consts::FRAC_1_SQRT_2;
    let prop = C64::from_polar(1.0, -g.zeta() * f.k_angle.cos());
    let one = C64::new(1.0, 0.0);
    DriveCouplings { sym: amp * (one + prop), antisym: amp * (one - prop) }
}

/// Conditional Hamiltonian of the driven dimer, 4x4 in the dressed
/// basis `G, -, +, E`, rotating frame of the laser. Anti-Hermitian
/// part equals `-(i/2) sum_k rate_k L_k^dag L_k` for the operators of
/// [`jump_operators`].
pub fn full_dimer_hamiltonian(g: &DimerGeometry, f: &LaserField) -> ComplexMatrix {
    let c = rddi_coefficients(g);
    let cpl = drive_couplings(g, f);
    let d = f.detuning;
    let mut h = Array2::<C64>::zeros((4, 4));
    h[[dressed::MINUS, dressed::MINUS]] = C64::new(d - c.delta, -0.5 * c.gamma_minus());
    h[[dressed::PLUS, dressed::PLUS]] = C64::new(d + c.delta, -0.5 * c.gamma_plus());
    h[[dressed::E, dressed::E]] = C64::new(2.0 * d, -1.0);
    h[[dressed::MINUS, dressed::G]] = cpl.antisym;
    h[[dressed::G, dressed::MINUS]] = cpl.antisym.conj();
    h[[dressed::E, dressed::MINUS]] = -cpl.antisym;
    h[[dressed::MINUS, dressed::E]] = -cpl.antisym.conj();
    h[[dressed::PLUS, dressed::G]] = cpl.sym;
    h[[dressed::G, dressed::PLUS]] = cpl.sym.conj();
    h[[dressed::E, dressed::PLUS]] = cpl.sym;
    h[[dressed::PLUS, dressed::E]] = cpl.sym.conj();
    ComplexMatrix::new(h).expect("4x4 driven hamiltonian")
}

/// Radiative cascade of the dressed ladder as `(rate, operator)`
/// pairs: `E -> +` and `+ -> G` at `gamma_plus`, `E -> -` and
/// `- -> G` at `gamma_minus`.
pub fn jump_operators(g: &DimerGeometry) -> Vec<(f64, ComplexMatrix)> {
    let c = rddi_coefficients(g);
    let lower = |to: usize, from: usize| {
        let mut l = Array2::<C64>::zeros((4, 4));
        l[[to, from]] = C64::new(1.0, 0.0);
        ComplexMatrix::new(l).expect("4x4 jump operator")
    };
    vec![
        (c.gamma_plus(), lower(dressed::G, dressed::PLUS)),
        (c.gamma_minus(), lower(dressed::G, dressed::MINUS)),
        (c.gamma_plus(), lower(dressed::PLUS, dressed::E)),
        (c.gamma_minus(), lower(dressed::MINUS, dressed::E)),
    ]
}

/// Light shift of the driven `G <-> target` transition caused by the
/// spectator transition, `(|Omega_plus|^2 - |Omega_minus|^2) / (2 delta)`.
fn light_shift(g: &DimerGeometry, f: &LaserField) -> f64 {
    let c = rddi_coefficients(g);
    let cpl = drive_couplings(g, f);
    (cpl.sym.norm_sqr() - cpl.antisym.norm_sqr()) / (2.0 * c.delta)
}

/// Laser tuned to the `G <-> -` transition (`delta_L = delta`), with
/// the light shift pre-compensated when `stark_corrected` is set.
pub fn resonant_minus_field(
    g: &DimerGeometry,
    rabi: f64,
    phase: f64,
    k_angle: f64,
    stark_corrected: bool,
) -> Result<LaserField> {
    let c = rddi_coefficients(g);
    let mut f = LaserField::new(rabi, phase, c.delta, k_angle)?;
    if stark_corrected {
        f.detuning = c.delta - light_shift(g, &f);
    }
    Ok(f)
}

/// Laser tuned to the `G <-> +` transition (`delta_L = -delta`), with
/// the light shift pre-compensated when `stark_corrected` is set.
pub fn resonant_plus_field(
    g: &DimerGeometry,
    rabi: f64,
    phase: f64,
    k_angle: f64,
    stark_corrected: bool,
) -> Result<LaserField> {
    let c = rddi_coefficients(g);
    let mut f = LaserField::new(rabi, phase, -c.delta, k_angle)?;
    if stark_corrected {
        f.detuning = -c.delta - light_shift(g, &f);
    }
    Ok(f)
}

/// Two-level reduction of the driven dimer onto one dressed transition.
#[derive(Debug, Clone, PartialEq)]
pub struct EffectiveTwoLevel {
    /// 2x2 conditional Hamiltonian in the `(G, target)` basis:
    /// `[[-i loss_ground/2, conj(coupling)], [coupling,
    /// residual_detuning - i loss_excited/2]]`.
    pub matrix: ComplexMatrix,
    /// Drive coupling to the retained transition.
    pub coupling: C64,
    /// Photon-scattering loss of `G` through the eliminated transition.
    pub loss_ground: f64,
    /// Radiative width of the retained excited state.
    pub loss_excited: f64,
    /// Light shift of the retained transition from the eliminated one.
    pub stark_shift: f64,
    /// Laser detuning that would sit exactly on the shifted resonance.
    pub corrected_detuning: f64,
    /// Deviation of the supplied field from `corrected_detuning`.
    pub residual_detuning: f64,
    /// False when the elimination's scale hierarchy is not satisfied.
    pub valid: bool,
    pub warnings: Vec<Warning>,
}

fn build_two_level(
    coupling: C64,
    loss_ground: f64,
    loss_excited: f64,
    residual: f64,
) -> ComplexMatrix {
    let mut h = Array2::<C64>::zeros((2, 2));
    h[[0, 0]] = C64::new(0.0, -0.5 * loss_ground);
    h[[1, 1]] = C64::new(residual, -0.5 * loss_excited);
    h[[1, 0]] = coupling;
    h[[0, 1]] = coupling.conj();
    ComplexMatrix::new(h).expect("2x2 effective hamiltonian")
}

/// Adiabatic elimination of `+` and `E` for a drive near the
/// subradiant resonance. The spectator `+` transition scatters ground
/// population at `gamma_plus |Omega_plus|^2 / (2 delta)^2` and shifts
/// the resonance by the light shift; both appear explicitly.
pub fn effective_minus_hamiltonian(
    g: &DimerGeometry,
    f: &LaserField,
) -> Result<EffectiveTwoLevel> {
    let c = rddi_coefficients(g);
    let cpl = drive_couplings(g, f);
    // Threshold relative to the drive scale so that a wavevector that is
    // perpendicular up to floating-point noise still counts as decoupled.
    if cpl.antisym.norm() <= 1e-14 * f.rabi {
        return Err(Error::NoCoupling(
            "antisymmetric coupling vanishes (wavevector perpendicular to the axis?)".into(),
        ));
    }
    let two_delta = 2.0 * c.delta;
    let shift = light_shift(g, f);
    let corrected = c.delta - shift;
    let residual = f.detuning - corrected;
    let loss_ground = c.gamma_plus() * cpl.sym.norm_sqr() / (two_delta * two_delta);
    let mut warnings = Vec::new();
    let hierarchy = cpl.sym.norm() / two_delta;
    if hierarchy > 0.05 {
        warnings.push(Warning::WeakHierarchy { what: "omega_plus << 2 delta", ratio: hierarchy });
    }
    if residual.abs() > 0.1 * c.delta {
        warnings.push(Warning::OffResonantDrive { offset: residual, splitting: two_delta });
    }
    let valid = warnings.is_empty();
    Ok(EffectiveTwoLevel {
        matrix: build_two_level(cpl.antisym, loss_ground, c.gamma_minus(), residual),
        coupling: cpl.antisym,
        loss_ground,
        loss_excited: c.gamma_minus(),
        stark_shift: shift,
        corrected_detuning: corrected,
        residual_detuning: residual,
        valid,
        warnings,
    })
}

/// Adiabatic elimination of `-` and `E` for a drive near the
/// superradiant resonance, used for readout and initialization.
pub fn effective_plus_hamiltonian(
    g: &DimerGeometry,
    f: &LaserField,
) -> Result<EffectiveTwoLevel> {
    let c = rddi_coefficients(g);
    let cpl = drive_couplings(g, f);
    if cpl.sym.norm() == 0.0 {
        return Err(Error::NoCoupling("symmetric coupling vanishes (zero drive?)".into()));
    }
    let two_delta = 2.0 * c.delta;
    let shift = light_shift(g, f);
    let corrected = -c.delta - shift;
    let residual = f.detuning - corrected;
    let loss_ground = c.gamma_minus() * cpl.antisym.norm_sqr() / (two_delta * two_delta);
    let mut warnings = Vec::new();
    let hierarchy = cpl.sym.norm() / two_delta;
    if hierarchy > 0.05 {
        warnings.push(Warning::WeakHierarchy { what: "omega_plus << 2 delta", ratio: hierarchy });
    }
    if residual.abs() > 0.1 * c.delta {
        warnings.push(Warning::OffResonantDrive { offset: residual, splitting: two_delta });
    }
    let valid = warnings.is_empty();
    Ok(EffectiveTwoLevel {
        matrix: build_two_level(cpl.sym, loss_ground, c.gamma_plus(), residual),
        coupling: cpl.sym,
        loss_ground,
        loss_excited: c.gamma_plus(),
        stark_shift: shift,
        corrected_detuning: corrected,
        residual_detuning: residual,
        valid,
        warnings,
    })
}

/// Steady excited population of a resonantly driven two-level system
/// with coupling `|Omega|` (half the Rabi splitting) and width `Gamma`:
/// `|Omega|^2 / ((Gamma/2)^2 + 2 |Omega|^2)`, saturating at one half.
pub fn resonant_saturation(coupling: f64, width: f64) -> f64 {
    let o2 = coupling * coupling;
    o2 / (0.25 * width * width + 2.0 * o2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs;
    use std::f64::consts::FRAC_PI_2;

    fn reference() -> DimerGeometry {
        DimerGeometry::perpendicular(0.033).unwrap()
    }

    fn axis_field(rabi: f64, detuning: f64) -> LaserField {
        LaserField::new(rabi, 0.0, detuning, 0.0).unwrap()
    }

    #[test]
    fn field_validation() {
        assert!(LaserField::new(-1.0, 0.0, 0.0, 0.0).is_err());
        assert!(LaserField::new(f64::INFINITY, 0.0, 0.0, 0.0).is_err());
        assert!(LaserField::new(1.0, 0.0, f64::NAN, 0.0).is_err());
    }

    #[test]
    fn coupling_reference_values() {
        // zeta = 0.033, axial propagation, unit drive: frozen values.
        let cpl = drive_couplings(&reference(), &axis_field(1.0, 0.0));
        assert!((cpl.antisym.re / 3.8498470309184798e-4 - 1.0).abs() < 1e-12);
        assert!((cpl.antisym.im / 2.3330288793691687e-2 - 1.0).abs() < 1e-12);
        assert!((cpl.sym.norm() / 1.4140210569194439 - 1.0).abs() < 1e-12);
        assert!((cpl.antisym.norm() / 2.3333464989552465e-2 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn coupling_strength_identity() {
        // |Omega_plus|^2 + |Omega_minus|^2 = 2 Omega^2 at any geometry.
        for &z in &[0.01, 0.033, 0.3, 0.9] {
            for &ang in &[0.0, 0.4, 1.0, FRAC_PI_2, 2.5] {
                let g = DimerGeometry::perpendicular(z).unwrap();
                let f = LaserField::new(2.5, 0.7, 0.0, ang).unwrap();
                let cpl = drive_couplings(&g, &f);
                let total = cpl.sym.norm_sqr() + cpl.antisym.norm_sqr();
                assert!((total / (2.0 * 2.5 * 2.5) - 1.0).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn antisymmetric_coupling_magnitude_law() {
        // |Omega_minus| = sqrt(2) Omega sin(zeta/2) exactly for axial
        // propagation; the leading small-zeta form errs by zeta^2/24.
        for &z in &[0.01, 0.033, 0.1] {
            let g = DimerGeometry::perpendicular(z).unwrap();
            let cpl = drive_couplings(&g, &axis_field(1.0, 0.0));
            let exact = 2.0f64.sqrt() * (z / 2.0).sin();
            assert!((cpl.antisym.norm() / exact - 1.0).abs() < 1e-13);
            let lead = z / 2.0f64.sqrt();
            let rel = (cpl.antisym.norm() / lead - 1.0).abs();
            assert!((rel / (z * z / 24.0) - 1.0).abs() < 1e-2);
        }
    }

    #[test]
    fn perpendicular_propagation_decouples_minus() {
        let g = reference();
        let f = LaserField::new(1.0, 0.0, 0.0, FRAC_PI_2).unwrap();
        let cpl = drive_couplings(&g, &f);
        // cos(pi/2) is ~6e-17 in floating point, not exactly zero.
        assert!(cpl.antisym.norm() < 1e-16);
        assert!((cpl.sym.norm() / (2.0f64.sqrt()) - 1.0).abs() < 1e-14);
        assert!(matches!(
            effective_minus_hamiltonian(&g, &f),
            Err(Error::NoCoupling(_))
        ));
    }

    #[test]
    fn hamiltonian_loss_matches_jump_operators() {
        // Anti-Hermitian part must be -(i/2) sum rate L^dag L.
        let g = DimerGeometry::new(0.21, 1.1).unwrap();
        let f = LaserField::new(3.0, 0.4, 7.0, 0.3).unwrap();
        let h = full_dimer_hamiltonian(&g, &f);
        let anti = h.anti_hermitian_part();
        let mut expect = Array2::<C64>::zeros((4, 4));
        for (rate, l) in jump_operators(&g) {
            let ll = l.adjoint().mul(&l);
            expect = expect + ll.mapv(|z| z * C64::new(0.0, -0.5 * rate));
        }
        assert!(max_abs(&(&expect - &anti.clone().into_inner())) < 1e-15);
    }

    #[test]
    fn drive_phases_enter_hamiltonian_coherently() {
        let g = reference();
        let f = LaserField::new(2.0, 1.234, 0.0, 0.0).unwrap();
        let h = full_dimer_hamiltonian(&g, &f);
        let cpl = drive_couplings(&g, &f);
        assert_eq!(h[[dressed::MINUS, dressed::G]], cpl.antisym);
        assert_eq!(h[[dressed::E, dressed::MINUS]], -cpl.antisym);
        assert_eq!(h[[dressed::E, dressed::PLUS]], cpl.sym);
        // Hermitian pairing.
        assert_eq!(h[[dressed::G, dressed::PLUS]], cpl.sym.conj());
    }

    #[test]
    fn stark_correction_reference_value() {
        // Omega = 300 gamma at zeta = 0.033: shift frozen at 4.3124 gamma.
        let g = reference();
        let f = resonant_minus_field(&g, 300.0, 0.0, 0.0, true).unwrap();
        let c = crate::rddi::rddi_coefficients(&g);
        let shift = c.delta - f.detuning;
        assert!((shift / 4.3124382945200442 - 1.0).abs() < 1e-12);
        // Effective model built from the corrected field sits on resonance.
        let eff = effective_minus_hamiltonian(&g, &f).unwrap();
        assert!(eff.residual_detuning.abs() < 1e-12 * c.delta);
        assert!((eff.stark_shift / shift - 1.0).abs() < 1e-12);
        // Uncorrected field misses resonance by exactly the shift.
        let f0 = resonant_minus_field(&g, 300.0, 0.0, 0.0, false).unwrap();
        let eff0 = effective_minus_hamiltonian(&g, &f0).unwrap();
        assert!((eff0.residual_detuning / shift - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ground_loss_reference_value() {
        // gamma_plus |Omega_plus|^2 / (2 delta)^2 at Omega = 300, zeta = 0.033.
        let g = reference();
        let f = resonant_minus_field(&g, 300.0, 0.0, 0.0, true).unwrap();
        let eff = effective_minus_hamiltonian(&g, &f).unwrap();
        assert!((eff.loss_ground / 2.0678106817647652e-4 - 1.0).abs() < 1e-12);
        assert!((eff.coupling.norm() / 7.0000394968657396 - 1.0).abs() < 1e-12);
        // Hierarchy is comfortably satisfied there.
        assert!(eff.valid, "warnings: {:?}", eff.warnings);
    }

    #[test]
    fn effective_models_flag_marginal_regimes() {
        // A drive at half the splitting scale cannot be eliminated cleanly.
        let g = DimerGeometry::perpendicular(0.3).unwrap();
        let f = resonant_minus_field(&g, 20.0, 0.0, 0.0, true).unwrap();
        let eff = effective_minus_hamiltonian(&g, &f).unwrap();
        assert!(!eff.valid);
        assert!(eff
            .warnings
            .iter()
            .any(|w| matches!(w, Warning::WeakHierarchy { .. })));
        // Strongly off-resonant field is flagged too.
        let g2 = reference();
        let off = LaserField::new(1.0, 0.0, 0.0, 0.0).unwrap();
        let eff2 = effective_minus_hamiltonian(&g2, &off).unwrap();
        assert!(eff2
            .warnings
            .iter()
            .any(|w| matches!(w, Warning::OffResonantDrive { .. })));
    }

    #[test]
    fn plus_reduction_structure() {
        let g = reference();
        let f = resonant_plus_field(&g, 3.0, 0.0, 0.0, true).unwrap();
        let eff = effective_plus_hamiltonian(&g, &f).unwrap();
        assert!((eff.loss_excited / 1.9997822127059548 - 1.0).abs() < 1e-11);
        assert!(eff.residual_detuning.abs() < 1e-12);
        // Ground loss through the far-detuned subradiant route is
        // suppressed by gamma_minus AND the tiny antisymmetric coupling.
        assert!(eff.loss_ground < 1e-12);
        let m = &eff.matrix;
        assert_eq!(m[[1, 0]], eff.coupling);
    }

    #[test]
    fn saturation_formula_limits() {
        // Half-width coupling gives 1/3; strong drive saturates to 1/2.
        assert!((resonant_saturation(1.0, 2.0) - 1.0 / 3.0).abs() < 1e-15);
        assert!((resonant_saturation(1e4, 2.0) - 0.5).abs() < 1e-7);
        assert_eq!(resonant_saturation(0.0, 2.0), 0.0);
    }

    #[test]
    fn corrected_plus_detuning_sign() {
        // The light shift pushes the + resonance further negative.
        let g = reference();
        let strong = resonant_plus_field(&g, 300.0, 0.0, 0.0, true).unwrap();
        let c = crate::rddi::rddi_coefficients(&g);
        assert!(strong.detuning < -c.delta);
        let plain = resonant_plus_field(&g, 300.0, 0.0, 0.0, false).unwrap();
        assert_eq!(plain.detuning, -c.delta);
    }
}
