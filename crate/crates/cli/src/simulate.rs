//! Bundled time-domain models behind `dimer simulate`: conditional
//! (no-jump) evolution of the driven dimer and of the two-qubit
//! manifolds, sampled on a uniform grid and written as plot-ready rows.
//!
//! Models:
//! - `dimer4`: one driven dimer in its dressed basis `{G, -, +, E}`,
//!   laser on the Stark-corrected `G <-> -` resonance.
//! - `eff2minus` / `eff2plus`: the two-level reductions onto one
//!   dressed transition; zero drive degenerates to pure decay.
//! - `twodimer_swap`: excitation exchange between two qubits in the
//!   basis `{GG, G-, -G, --}`, starting from `|-G>`.
//! - `twodimer_cphase9`: the nine-level conditional-phase manifold at
//!   constant drive, starting from `|GG>`.

use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use dimer_core::drive::{
    effective_minus_hamiltonian, effective_plus_hamiltonian, full_dimer_hamiltonian,
    resonant_minus_field, resonant_plus_field,
};
use dimer_core::dynamics::propagate_conditional;
use dimer_core::gates::{cphase_hamiltonian, swap_hamiltonian};
use dimer_core::linalg::{ComplexMatrix, QuantumState};
use dimer_core::rddi::{
    inter_dimer_coupling_minus, rddi_coefficients, DimerGeometry, TwoDimerGeometry,
};
use dimer_core::C64;

use crate::config::SimulateConfig;
use crate::output::{fmt_float, json_number, write_csv_row};
use crate::Failure;

pub const MODELS: &[&str] =
    &["dimer4", "eff2minus", "eff2plus", "twodimer_swap", "twodimer_cphase9"];

type Emit = fn(&QuantumState) -> Vec<f64>;

struct ModelRun {
    h: ComplexMatrix,
    initial: usize,
    duration: f64,
    columns: &'static [&'static str],
    emit: Emit,
}

fn estr(e: dimer_core::Error) -> String {
    e.to_string()
}

fn emit_dimer4(s: &QuantumState) -> Vec<f64> {
    let a = s.amplitudes();
    let coh = a[0] * a[1].conj();
    vec![
        a[0].norm_sqr(),
        a[1].norm_sqr(),
        a[2].norm_sqr(),
        a[3].norm_sqr(),
        coh.re,
        coh.im,
        s.norm_sq(),
    ]
}

fn emit_two_level(s: &QuantumState) -> Vec<f64> {
    let a = s.amplitudes();
    let coh = a[0] * a[1].conj();
    vec![a[0].norm_sqr(), a[1].norm_sqr(), coh.re, coh.im, s.norm_sq()]
}

fn emit_swap(s: &QuantumState) -> Vec<f64> {
    let a = s.amplitudes();
    let coh = a[2] * a[1].conj();
    vec![
        a[0].norm_sqr(),
        a[1].norm_sqr(),
        a[2].norm_sqr(),
        a[3].norm_sqr(),
        coh.re,
        coh.im,
        s.norm_sq(),
    ]
}

fn emit_cphase(s: &QuantumState) -> Vec<f64> {
    let a = s.amplitudes();
    let comp: f64 = [0usize, 1, 3, 4].iter().map(|&k| a[k].norm_sqr()).sum();
    vec![
        a[0].norm_sqr(),
        a[1].norm_sqr(),
        a[3].norm_sqr(),
        a[4].norm_sqr(),
        s.norm_sq() - comp,
        a[0].arg(),
        s.norm_sq(),
    ]
}

// Pure decay of the excited level: the zero-drive limit of the
// two-level reductions, whose builders require a coupled drive.
fn decay_two_level(width: f64) -> Result<ComplexMatrix, String> {
    let mut h = ComplexMatrix::zeros(2).into_inner();
    h[[1, 1]] = C64::new(0.0, -0.5 * width);
    ComplexMatrix::new(h).map_err(estr)
}

fn forbid(field: &str, set: bool, model: &str) -> Result<(), String> {
    if set {
        Err(format!("field `{field}` is not used by model `{model}`"))
    } else {
        Ok(())
    }
}

fn build(cfg: &SimulateConfig) -> Result<ModelRun, String> {
    let zeta = cfg.zeta.unwrap_or(0.033);
    let theta = cfg.theta.unwrap_or(FRAC_PI_2);
    let model = cfg.model.as_str();
    match model {
        "dimer4" | "eff2minus" | "eff2plus" => {
            forbid("xi", cfg.xi.is_some(), model)?;
            forbid("mismatch", cfg.mismatch.is_some(), model)?;
            let g = DimerGeometry::new(zeta, theta).map_err(estr)?;
            let phase = cfg.phase.unwrap_or(0.0);
            match model {
                "dimer4" => {
                    let drive = cfg.drive.unwrap_or(300.0);
                    let f = resonant_minus_field(&g, drive, phase, 0.0, true).map_err(estr)?;
                    let h = full_dimer_hamiltonian(&g, &f);
                    // One full cycle of the collective Rabi coupling.
                    let duration =
                        if drive > 0.0 { PI * SQRT_2 / (drive * zeta) } else { 1.0 };
                    Ok(ModelRun {
                        h,
                        initial: 0,
                        duration,
                        columns: &["p_g", "p_minus", "p_plus", "p_e", "re_g_minus", "im_g_minus", "norm2"],
                        emit: emit_dimer4,
                    })
                }
                "eff2minus" => {
                    let drive = cfg.drive.unwrap_or(300.0);
                    let columns: &'static [&'static str] =
                        &["p_g", "p_minus", "re_g_minus", "im_g_minus", "norm2"];
                    if drive == 0.0 {
                        let h = decay_two_level(rddi_coefficients(&g).gamma_minus())?;
                        Ok(ModelRun { h, initial: 0, duration: 1.0, columns, emit: emit_two_level })
                    } else {
                        let f = resonant_minus_field(&g, drive, phase, 0.0, true).map_err(estr)?;
                        let eff = effective_minus_hamiltonian(&g, &f).map_err(estr)?;
                        let duration = 2.0 * PI / eff.coupling.norm();
                        Ok(ModelRun {
                            h: eff.matrix,
                            initial: 0,
                            duration,
                            columns,
                            emit: emit_two_level,
                        })
                    }
                }
                _ => {
                    let drive = cfg.drive.unwrap_or(3.0);
                    let columns: &'static [&'static str] =
                        &["p_g", "p_plus", "re_g_plus", "im_g_plus", "norm2"];
                    if drive == 0.0 {
                        let gp = rddi_coefficients(&g).gamma_plus();
                        let h = decay_two_level(gp)?;
                        Ok(ModelRun { h, initial: 0, duration: 5.0 / gp, columns, emit: emit_two_level })
                    } else {
                        let f = resonant_plus_field(&g, drive, phase, 0.0, true).map_err(estr)?;
                        let eff = effective_plus_hamiltonian(&g, &f).map_err(estr)?;
                        let duration = 2.0 * PI / eff.coupling.norm();
                        Ok(ModelRun {
                            h: eff.matrix,
                            initial: 0,
                            duration,
                            columns,
                            emit: emit_two_level,
                        })
                    }
                }
            }
        }
        "twodimer_swap" => {
            forbid("drive", cfg.drive.is_some(), model)?;
            forbid("phase", cfg.phase.is_some(), model)?;
            let g = DimerGeometry::new(zeta, theta).map_err(estr)?;
            let tg = TwoDimerGeometry::new(g, cfg.xi.unwrap_or(0.1)).map_err(estr)?;
            let mismatch = cfg.mismatch.unwrap_or(0.0);
            if !mismatch.is_finite() {
                return Err(format!("mismatch must be finite, got {mismatch}"));
            }
            let h = swap_hamiltonian(&tg, mismatch);
            // Half exchange cycle: complete transfer |-G> -> |G->.
            let duration = PI / (2.0 * inter_dimer_coupling_minus(&tg));
            Ok(ModelRun {
                h,
                initial: 2,
                duration,
                columns: &["p_gg", "p_g_minus", "p_minus_g", "p_minus_minus", "re_exchange", "im_exchange", "norm2"],
                emit: emit_swap,
            })
        }
        "twodimer_cphase9" => {
            forbid("mismatch", cfg.mismatch.is_some(), model)?;
            forbid("phase", cfg.phase.is_some(), model)?;
            let g = DimerGeometry::new(zeta, theta).map_err(estr)?;
            let xi = cfg.xi.unwrap_or(0.1);
            let tg = TwoDimerGeometry::new(g, xi).map_err(estr)?;
            let drive = cfg.drive.unwrap_or(50.0);
            let h = cphase_hamiltonian(&tg, drive).map_err(estr)?;
            // Full 2 pi rotation of GG through the symmetric bright state.
            let duration = PI / (2.0 * drive * (0.5 * xi).sin());
            Ok(ModelRun {
                h,
                initial: 0,
                duration,
                columns: &["p_gg", "p_g_minus", "p_minus_g", "p_minus_minus", "p_outside", "arg_gg", "norm2"],
                emit: emit_cphase,
            })
        }
        other => {
            Err(format!("unknown model `{other}`; valid models: {}", MODELS.join(", ")))
        }
    }
}

pub fn run(cfg: &SimulateConfig, out: &Path) -> Result<(), Failure> {
    let model = build(cfg).map_err(Failure::Usage)?;

    let points = cfg.points.unwrap_or(400);
    if points < 1 || points > 200_000 {
        return Err(Failure::Usage(format!(
            "points must lie in [1, 200000], got {points}"
        )));
    }
    let duration = cfg.duration.unwrap_or(model.duration);
    if !duration.is_finite() || duration <= 0.0 {
        return Err(Failure::Usage(format!(
            "duration must be positive and finite, got {duration}"
        )));
    }
    let initial = cfg.initial.unwrap_or(model.initial);
    let psi0 = QuantumState::basis_state(model.h.dim(), initial)
        .map_err(|e| Failure::Usage(e.to_string()))?;

    let times: Vec<f64> = (0..=points).map(|k| duration * k as f64 / points as f64).collect();
    let ev = propagate_conditional(&model.h, &psi0, &times)
        .map_err(|e| Failure::Check(format!("propagation failed: {e}")))?;

    let json = out.extension().and_then(|e| e.to_str()) == Some("json");
    let file = File::create(out)
        .map_err(|e| Failure::Usage(format!("cannot create {}: {e}", out.display())))?;
    let mut w = BufWriter::new(file);
    let werr = |e: std::io::Error| Failure::Usage(format!("write {}: {e}", out.display()));

    if json {
        w.write_all(b"[").map_err(werr)?;
        for (k, (t, state)) in ev.times.iter().zip(&ev.states).enumerate() {
            let sep = if k == 0 { "\n  " } else { ",\n  " };
            let fields: Vec<String> = std::iter::once(format!("\"t\": {}", json_number(*t)))
                .chain(
                    model
                        .columns
                        .iter()
                        .zip((model.emit)(state))
                        .map(|(name, v)| format!("\"{name}\": {}", json_number(v))),
                )
                .collect();
            w.write_all(sep.as_bytes()).map_err(werr)?;
            w.write_all(format!("{{{}}}", fields.join(", ")).as_bytes()).map_err(werr)?;
        }
        w.write_all(b"\n]\n").map_err(werr)?;
    } else {
        let header: Vec<String> = std::iter::once("t".to_string())
            .chain(model.columns.iter().map(|c| c.to_string()))
            .collect();
        write_csv_row(&mut w, &header).map_err(werr)?;
        for (t, state) in ev.times.iter().zip(&ev.states) {
            let fields: Vec<String> = std::iter::once(fmt_float(*t))
                .chain((model.emit)(state).into_iter().map(fmt_float))
                .collect();
            write_csv_row(&mut w, &fields).map_err(werr)?;
        }
    }
    w.flush().map_err(werr)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base(model: &str) -> SimulateConfig {
        SimulateConfig {
            model: model.to_string(),
            zeta: None,
            theta: None,
            xi: None,
            drive: None,
            phase: None,
            mismatch: None,
            initial: None,
            duration: None,
            points: None,
        }
    }

    fn err_of(cfg: &SimulateConfig) -> String {
        match build(cfg) {
            Ok(_) => panic!("expected an error"),
            Err(e) => e,
        }
    }

    #[test]
    fn unknown_model_lists_the_valid_ones() {
        let err = err_of(&base("qubit"));
        for name in MODELS {
            assert!(err.contains(name), "missing {name}");
        }
    }

    #[test]
    fn unused_fields_are_rejected() {
        let mut cfg = base("eff2minus");
        cfg.xi = Some(0.1);
        assert!(err_of(&cfg).contains("`xi`"));
        let mut cfg = base("twodimer_swap");
        cfg.drive = Some(50.0);
        assert!(err_of(&cfg).contains("`drive`"));
    }

    // The ground state is an exact eigenvector of the pure-decay
    // Hamiltonian, so zero drive must leave it untouched.
    #[test]
    fn zero_drive_ground_state_is_stationary() {
        let mut cfg = base("eff2minus");
        cfg.drive = Some(0.0);
        let model = build(&cfg).unwrap();
        let psi0 = QuantumState::basis_state(2, 0).unwrap();
        let ev = propagate_conditional(&model.h, &psi0, &[0.0, 0.5, 1.0]).unwrap();
        for s in &ev.states {
            assert!((s.amplitudes()[0].norm_sqr() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn default_swap_duration_is_the_half_cycle() {
        let model = build(&base("twodimer_swap")).unwrap();
        let g = DimerGeometry::perpendicular(0.033).unwrap();
        let tg = TwoDimerGeometry::new(g, 0.1).unwrap();
        let expected = PI / (2.0 * inter_dimer_coupling_minus(&tg));
        assert_eq!(model.duration, expected);
        assert_eq!(model.initial, 2);
    }
}
