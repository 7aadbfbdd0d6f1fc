//! Parameter sweeps over pure design-quantity evaluators.
//!
//! Grid points run concurrently on a worker pool sized by the
//! `DIMER_WORKERS` environment variable (default: available cores).
//! Workers pull indices from a shared counter; a single writer reorders
//! finished rows by grid index and flushes the contiguous prefix as it
//! completes, so the output bytes never depend on the worker count.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::mpsc;

use dimer_core::gates::{
    optimize_cphase_drive, optimize_rotation_drive, readout_report, swap_gate, SwapFraction,
};
use dimer_core::rddi::{
    inter_dimer_coupling_minus, rddi_coefficients, DimerGeometry, TwoDimerGeometry,
};

use crate::config::SweepConfig;
use crate::output::{fmt_float, json_number, sanitize_field, write_csv_row};
use crate::Failure;

type Eval = fn(&[f64]) -> Result<Vec<f64>, String>;

struct QuantitySpec {
    name: &'static str,
    // Axes in grid order: required first, then optional with defaults.
    required: &'static [&'static str],
    optional: &'static [(&'static str, f64)],
    columns: &'static [&'static str],
    eval: Eval,
}

fn estr(e: dimer_core::Error) -> String {
    e.to_string()
}

fn eval_rddi(p: &[f64]) -> Result<Vec<f64>, String> {
    let g = DimerGeometry::new(p[0], p[1]).map_err(estr)?;
    let c = rddi_coefficients(&g);
    Ok(vec![c.delta, c.gamma12, c.gamma_plus(), c.gamma_minus()])
}

fn eval_flip_optimum(p: &[f64]) -> Result<Vec<f64>, String> {
    let g = DimerGeometry::perpendicular(p[0]).map_err(estr)?;
    let o = optimize_rotation_drive(&g).map_err(estr)?;
    Ok(vec![o.design_drive, o.design_error, o.searched_drive, o.searched_error])
}

fn eval_swap(p: &[f64]) -> Result<Vec<f64>, String> {
    let g = DimerGeometry::perpendicular(p[0]).map_err(estr)?;
    let tg = TwoDimerGeometry::new(g, p[1]).map_err(estr)?;
    let r = swap_gate(&tg, SwapFraction::Full, 0.0).map_err(estr)?;
    Ok(vec![inter_dimer_coupling_minus(&tg), r.duration, r.fidelity_analytic])
}

fn eval_cphase_optimum(p: &[f64]) -> Result<Vec<f64>, String> {
    let g = DimerGeometry::perpendicular(p[0]).map_err(estr)?;
    let tg = TwoDimerGeometry::new(g, p[1]).map_err(estr)?;
    let o = optimize_cphase_drive(&tg).map_err(estr)?;
    Ok(vec![o.design_drive, o.design_error, o.searched_drive, o.searched_error])
}

fn eval_readout(p: &[f64]) -> Result<Vec<f64>, String> {
    let g = DimerGeometry::perpendicular(p[0]).map_err(estr)?;
    let r = readout_report(&g, p[1], p[2]).map_err(estr)?;
    Ok(vec![r.reliability, r.depumping_rate, r.bright_population, r.expected_photons])
}

const QUANTITIES: &[QuantitySpec] = &[
    QuantitySpec {
        name: "rddi",
        required: &["zeta"],
        optional: &[("theta", std::f64::consts::FRAC_PI_2)],
        columns: &["delta", "gamma12", "gamma_plus", "gamma_minus"],
        eval: eval_rddi,
    },
    QuantitySpec {
        name: "flip_optimum",
        required: &["zeta"],
        optional: &[],
        columns: &["design_drive", "design_error", "searched_drive", "searched_error"],
        eval: eval_flip_optimum,
    },
    QuantitySpec {
        name: "swap",
        required: &["zeta", "xi"],
        optional: &[],
        columns: &["exchange", "duration", "fidelity"],
        eval: eval_swap,
    },
    QuantitySpec {
        name: "cphase_optimum",
        required: &["zeta", "xi"],
        optional: &[],
        columns: &["design_drive", "design_error", "searched_drive", "searched_error"],
        eval: eval_cphase_optimum,
    },
    QuantitySpec {
        name: "readout",
        required: &["zeta", "probe", "efficiency"],
        optional: &[],
        columns: &["reliability", "depumping_rate", "bright_population", "expected_photons"],
        eval: eval_readout,
    },
];

struct Plan {
    axes: Vec<(&'static str, Vec<f64>)>,
    columns: &'static [&'static str],
    eval: Eval,
}

fn plan(cfg: &SweepConfig) -> Result<Plan, String> {
    let spec = QUANTITIES.iter().find(|q| q.name == cfg.quantity).ok_or_else(|| {
        let names: Vec<&str> = QUANTITIES.iter().map(|q| q.name).collect();
        format!("unknown quantity `{}`; valid quantities: {}", cfg.quantity, names.join(", "))
    })?;

    let provided = [
        ("zeta", &cfg.zeta),
        ("theta", &cfg.theta),
        ("xi", &cfg.xi),
        ("probe", &cfg.probe),
        ("efficiency", &cfg.efficiency),
    ];
    for (name, axis) in &provided {
        let accepted = spec.required.contains(name)
            || spec.optional.iter().any(|(opt, _)| opt == name);
        if axis.is_some() && !accepted {
            return Err(format!("axis `{name}` is not used by quantity `{}`", spec.name));
        }
    }
    let get = |name: &str| {
        provided.iter().find(|(n, _)| *n == name).and_then(|(_, axis)| (*axis).as_ref())
    };

    let mut axes = Vec::new();
    for name in spec.required {
        let axis = get(name)
            .ok_or_else(|| format!("quantity `{}` requires axis `{name}`", spec.name))?;
        axes.push((*name, axis.values(name)?));
    }
    for (name, default) in spec.optional {
        let values = match get(name) {
            Some(axis) => axis.values(name)?,
            None => vec![*default],
        };
        axes.push((*name, values));
    }
    Ok(Plan { axes, columns: spec.columns, eval: spec.eval })
}

// Lexicographic unranking: the first axis is the outermost loop.
fn params_at(axes: &[(&'static str, Vec<f64>)], mut index: usize) -> Vec<f64> {
    let mut out = vec![0.0; axes.len()];
    for (k, (_, values)) in axes.iter().enumerate().rev() {
        out[k] = values[index % values.len()];
        index /= values.len();
    }
    out
}

fn compute_row(eval: Eval, params: &[f64], ncols: usize) -> (Vec<f64>, String) {
    match eval(params) {
        Ok(values) => {
            let status = if values.iter().all(|v| v.is_finite()) {
                "ok".to_string()
            } else {
                "non-finite".to_string()
            };
            (values, status)
        }
        Err(msg) => (vec![f64::NAN; ncols], format!("error: {}", sanitize_field(&msg))),
    }
}

fn worker_count() -> Result<usize, String> {
    match std::env::var("DIMER_WORKERS") {
        Ok(s) => s
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|n| *n >= 1)
            .ok_or_else(|| format!("DIMER_WORKERS must be a positive integer, got `{s}`")),
        Err(std::env::VarError::NotPresent) => {
            Ok(std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1))
        }
        Err(e) => Err(format!("DIMER_WORKERS: {e}")),
    }
}

fn json_row(
    plan: &Plan,
    params: &[f64],
    values: &[f64],
    status: &str,
) -> String {
    let fields: Vec<String> = plan
        .axes
        .iter()
        .zip(params)
        .map(|((name, _), v)| format!("\"{name}\": {}", json_number(*v)))
        .chain(
            plan.columns
                .iter()
                .zip(values)
                .map(|(name, v)| format!("\"{name}\": {}", json_number(*v))),
        )
        .chain(std::iter::once(format!(
            "\"status\": {}",
            serde_json::Value::String(status.to_string())
        )))
        .collect();
    format!("{{{}}}", fields.join(", "))
}

pub fn run(cfg: &SweepConfig, out: &Path) -> Result<(), Failure> {
    let plan = plan(cfg).map_err(Failure::Usage)?;
    let total: usize = plan.axes.iter().map(|(_, v)| v.len()).product();
    let workers = worker_count().map_err(Failure::Usage)?.min(total).max(1);
    let json = out.extension().and_then(|e| e.to_str()) == Some("json");

    let file = File::create(out)
        .map_err(|e| Failure::Usage(format!("cannot create {}: {e}", out.display())))?;
    let mut w = BufWriter::new(file);
    let werr = |e: std::io::Error| Failure::Usage(format!("write {}: {e}", out.display()));

    if json {
        w.write_all(b"[").map_err(werr)?;
    } else {
        let header: Vec<String> = plan
            .axes
            .iter()
            .map(|(n, _)| n.to_string())
            .chain(plan.columns.iter().map(|c| c.to_string()))
            .chain(std::iter::once("status".to_string()))
            .collect();
        write_csv_row(&mut w, &header).map_err(werr)?;
    }

    let next_index = AtomicUsize::new(0);
    let (tx, rx) = mpsc::channel::<(usize, Vec<f64>, Vec<f64>, String)>();

    std::thread::scope(|s| -> Result<(), Failure> {
        for _ in 0..workers {
            let tx = tx.clone();
            let next_index = &next_index;
            let plan = &plan;
            s.spawn(move || loop {
                let i = next_index.fetch_add(1, Ordering::Relaxed);
                if i >= total {
                    break;
                }
                let params = params_at(&plan.axes, i);
                let (values, status) = compute_row(plan.eval, &params, plan.columns.len());
                if tx.send((i, params, values, status)).is_err() {
                    break;
                }
            });
        }
        drop(tx);

        // Reorder buffer: write rows in grid order, flush after each
        // contiguous batch so partial results reach disk early.
        let mut pending: BTreeMap<usize, (Vec<f64>, Vec<f64>, String)> = BTreeMap::new();
        let mut next_write = 0usize;
        while let Ok((i, params, values, status)) = rx.recv() {
            pending.insert(i, (params, values, status));
            let mut wrote = false;
            while let Some((params, values, status)) = pending.remove(&next_write) {
                if json {
                    let sep = if next_write == 0 { "\n  " } else { ",\n  " };
                    w.write_all(sep.as_bytes()).map_err(werr)?;
                    w.write_all(json_row(&plan, &params, &values, &status).as_bytes())
                        .map_err(werr)?;
                } else {
                    let fields: Vec<String> = params
                        .iter()
                        .chain(values.iter())
                        .map(|v| fmt_float(*v))
                        .chain(std::iter::once(status))
                        .collect();
                    write_csv_row(&mut w, &fields).map_err(werr)?;
                }
                next_write += 1;
                wrote = true;
            }
            if wrote {
                w.flush().map_err(werr)?;
            }
        }
        Ok(())
    })?;

    if json {
        w.write_all(b"\n]\n").map_err(werr)?;
    }
    w.flush().map_err(werr)
}
