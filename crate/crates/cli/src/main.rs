//! `dimer`: command-line front end for the dimer design library.
//!
//! Subcommands: `reproduce` recomputes the headline design numbers and
//! checks them against their quoted values; `sweep` evaluates a design
//! quantity over a parameter grid; `simulate` integrates one of the
//! bundled dynamics models; `rddi` prints the coupling coefficients of
//! one geometry. Exit codes: 0 on success, 1 when a physics check
//! fails, 2 on usage or configuration errors.

mod claims;
mod config;
mod output;
mod simulate;
mod sweep;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use dimer_core::rddi::{rddi_asymptotic, rddi_coefficients, DimerGeometry};

use crate::output::fmt_float;

/// How a command failed, mapped onto the exit code contract.
pub enum Failure {
    /// Usage or configuration problem: exit code 2.
    Usage(String),
    /// Physics check failed or a model run aborted: exit code 1.
    Check(String),
}

#[derive(Parser)]
#[command(
    name = "dimer",
    version,
    about = "Design calculations for dipole-dipole dimer qubits",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Recompute the headline design numbers and compare against their quoted values
    Reproduce {
        /// Emit the table as a JSON array instead of text
        #[arg(long)]
        json: bool,
        /// Relative tolerance applied to every row (default: per-row)
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Evaluate a design quantity over a parameter grid
    Sweep {
        /// JSON config path (see README for the schema)
        #[arg(long)]
        config: PathBuf,
        /// Output path; `.json` extension switches to JSON rows
        #[arg(long)]
        out: PathBuf,
    },
    /// Integrate one of the bundled dynamics models and emit a time series
    Simulate {
        /// JSON config path (see README for the schema)
        #[arg(long)]
        config: PathBuf,
        /// Output path; `.json` extension switches to JSON rows
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the dipole-dipole coupling coefficients for one geometry
    Rddi {
        /// Separation in units of the reduced transition wavelength
        #[arg(long)]
        zeta: f64,
        /// Angle between the dipoles and the separation axis, radians
        #[arg(long)]
        theta: f64,
        /// Exact coefficients (the default)
        #[arg(long, conflicts_with = "asymptotic")]
        exact: bool,
        /// Near-field series with its leading corrections instead
        #[arg(long)]
        asymptotic: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Reproduce { json, tol } => cmd_reproduce(json, tol),
        Command::Sweep { config, out } => {
            config::load_sweep(&config).map_err(Failure::Usage).and_then(|c| sweep::run(&c, &out))
        }
        Command::Simulate { config, out } => config::load_simulate(&config)
            .map_err(Failure::Usage)
            .and_then(|c| simulate::run(&c, &out)),
        Command::Rddi { zeta, theta, exact: _, asymptotic } => cmd_rddi(zeta, theta, asymptotic),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Check(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
    }
}

fn cmd_reproduce(json: bool, tol: Option<f64>) -> Result<(), Failure> {
    if let Some(t) = tol {
        if !t.is_finite() || t < 0.0 {
            return Err(Failure::Usage(format!(
                "--tol must be a finite non-negative relative tolerance, got {t}"
            )));
        }
    }
    let rows = claims::claim_rows()
        .map_err(|e| Failure::Check(format!("recomputation failed: {e}")))?;
    let failed = rows.iter().filter(|r| !r.passes(tol)).count();

    if json {
        let arr: Vec<serde_json::Value> = rows
            .iter()
            .map(|r| {
                serde_json::json!({
                    "quantity": r.quantity,
                    "computed": r.computed,
                    "quoted": r.quoted,
                    "deviation": r.deviation(),
                    "tolerance": tol.unwrap_or(r.tolerance),
                    "status": if r.passes(tol) { "pass" } else { "fail" },
                    "reference": r.reference,
                })
            })
            .collect();
        println!("{}", serde_json::to_string_pretty(&arr).expect("plain data serializes"));
    } else {
        println!(
            "{:<24} {:>24} {:>12} {:>10}  {:<4}  {}",
            "quantity", "computed", "quoted", "deviation", "status", "reference"
        );
        for r in &rows {
            println!(
                "{:<24} {:>24} {:>12} {:>10}  {:<4}  {}",
                r.quantity,
                fmt_float(r.computed),
                r.quoted,
                format!("{:.2e}", r.deviation()),
                if r.passes(tol) { "pass" } else { "FAIL" },
                r.reference
            );
        }
    }
    if failed > 0 {
        Err(Failure::Check(format!("{failed} of {} rows outside tolerance", rows.len())))
    } else {
        Ok(())
    }
}

fn cmd_rddi(zeta: f64, theta: f64, asymptotic: bool) -> Result<(), Failure> {
    let g = DimerGeometry::new(zeta, theta).map_err(|e| Failure::Usage(e.to_string()))?;
    for warning in g.warnings() {
        eprintln!("warning: {warning}");
    }
    if asymptotic {
        let a = rddi_asymptotic(&g).map_err(|e| Failure::Usage(e.to_string()))?;
        println!("delta = {}", fmt_float(a.coeffs.delta));
        println!("gamma12 = {}", fmt_float(a.coeffs.gamma12));
        println!("gamma_plus = {}", fmt_float(a.coeffs.gamma_plus()));
        println!("gamma_minus = {}", fmt_float(a.coeffs.gamma_minus()));
        println!("delta_correction = {}", fmt_float(a.delta_correction));
        println!("delta_deviation = {}", fmt_float(a.delta_deviation));
        println!("gamma_minus_deviation = {}", fmt_float(a.gamma_minus_deviation));
    } else {
        let c = rddi_coefficients(&g);
        println!("delta = {}", fmt_float(c.delta));
        println!("gamma12 = {}", fmt_float(c.gamma12));
        println!("gamma_plus = {}", fmt_float(c.gamma_plus()));
        println!("gamma_minus = {}", fmt_float(c.gamma_minus()));
    }
    Ok(())
}
