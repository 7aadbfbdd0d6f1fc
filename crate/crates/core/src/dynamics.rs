//! Open-system dynamics: conditional evolution, the master equation,
//! and steady states.
//!
//! Two complementary pictures are used throughout the crate.
//!
//! **Conditional (no-jump) evolution** propagates a pure state under a
//! non-Hermitian Hamiltonian whose anti-Hermitian part encodes loss:
//! `|psi(t)> = exp(-i H t) |psi(0)>` with decaying norm. The lost
//! norm, `1 - <psi|psi>`, is exactly the probability that at least one
//! photon was emitted, which is the quantity the analytic gate error
//! budgets bound.
//!
//! **Master-equation evolution** keeps the emitted-photon branches:
//! `d rho/dt = -i (H_eff rho - rho H_eff^dag) + sum_k r_k L_k rho L_k^dag`
//! with `H_eff = H_herm - (i/2) sum_k r_k L_k^dag L_k`. Trace is
//! conserved, populations recycle to the ground state, and the steady
//! state of the driven system is well defined. The implementation
//! vectorizes `rho` row-major (`(i, j) -> i n + j`) and integrates the
//! dense superoperator
//! `L = -i (H_eff (x) 1 - 1 (x) conj(H_eff)) + sum_k r_k L_k (x) conj(L_k)`.
//!
//! A supplied Hamiltonian may be Hermitian (losses taken from the jump
//! list alone) or carry an anti-Hermitian part, in which case that
//! part must equal `-(i/2) sum r L^dag L`; inconsistent inputs are
//! rejected rather than silently reinterpreted.

use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::{
    integrate_path, matexp, max_abs, svd, ComplexMatrix, ConstantGenerator, DensityMatrix,
    QuantumState,
};

/// Pure-state trajectory under a conditional Hamiltonian.
#[derive(Debug, Clone)]
pub struct ConditionalEvolution {
    pub times: Vec<f64>,
    pub states: Vec<QuantumState>,
    /// Population lost to (unrecorded) photon emission by the final
    /// sample: `1 - norm^2(final)` relative to the initial norm.
    pub leaked_population: f64,
}

impl ConditionalEvolution {
    pub fn final_state(&self) -> &QuantumState {
        self.states.last().expect("at least one sample")
    }
}

fn check_times(times: &[f64]) -> Result<()> {
    if times.is_empty() {
        return Err(Error::InvalidInput("at least one sample time is required".into()));
    }
    if times[0] < 0.0 {
        return Err(Error::InvalidInput("sample times must start at t >= 0".into()));
    }
    for w in times.windows(2) {
        if !(w[1] > w[0]) {
            return Err(Error::InvalidInput("sample times must be strictly increasing".into()));
        }
    }
    Ok(())
}

/// Evolves `psi0` under `exp(-i h t)` and samples at `times` (the
/// initial state is taken at `t = 0`). Segments reuse cached
/// exponentials, so uniform grids cost a single `matexp`.
///
/// Fails with a model violation if the norm grows, which catches loss
/// terms with the wrong sign.
pub fn propagate_conditional(
    h: &ComplexMatrix,
    psi0: &QuantumState,
    times: &[f64],
) -> Result<ConditionalEvolution> {
    check_times(times)?;
    if psi0.dim() != h.dim() {
        return Err(Error::Dimension(format!(
            "state dimension {} does not match hamiltonian dimension {}",
            psi0.dim(),
            h.dim()
        )));
    }
    let mut states = Vec::with_capacity(times.len());
    let mut psi = psi0.amplitudes().clone();
    let mut prev_t = 0.0;
    let mut prev_norm2 = psi0.norm_sq();
    // Cache the segment propagator; uniform grids hit it every step.
    let mut cached: Option<(u64, ComplexMatrix)> = None;
    for &t in times {
        let dt = t - prev_t;
        if dt > 0.0 {
            let key = dt.to_bits();
            let propagator = match &cached {
                Some((k, p)) if *k == key => p.clone(),
                _ => {
                    let p = matexp(h, dt)?;
                    cached = Some((key, p.clone()));
                    p
                }
            };
            psi = propagator.apply(&psi);
        }
        let norm2: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        if norm2 > prev_norm2 * (1.0 + 1e-9) + 1e-12 {
            return Err(Error::Model(format!(
                "conditional norm grew from {prev_norm2:.12} to {norm2:.12} at t = {t:.6e}; \
                 loss terms must make the Hamiltonian's anti-Hermitian part negative"
            )));
        }
        prev_norm2 = norm2;
        prev_t = t;
        states.push(QuantumState::new(psi.clone())?);
    }
    let leaked = (psi0.norm_sq() - prev_norm2).max(0.0);
    Ok(ConditionalEvolution { times: times.to_vec(), states, leaked_population: leaked })
}

/// Single-shot conditional propagation to time `t`.
pub fn conditional_final(h: &ComplexMatrix, psi0: &QuantumState, t: f64) -> Result<QuantumState> {
    let evo = propagate_conditional(h, psi0, &[t])?;
    Ok(evo.states.into_iter().next_back().expect("one sample"))
}

fn validate_jumps(n: usize, jumps: &[(f64, ComplexMatrix)]) -> Result<()> {
    for (rate, l) in jumps {
        if !rate.is_finite() || *rate < 0.0 {
            return Err(Error::InvalidInput(format!(
                "jump rates must be non-negative and finite, got {rate}"
            )));
        }
        if l.dim() != n {
            return Err(Error::Dimension(format!(
                "jump operator dimension {} does not match hamiltonian dimension {n}",
                l.dim()
            )));
        }
    }
    Ok(())
}

// -(i/2) sum_k r_k L_k^dag L_k
fn loss_term(n: usize, jumps: &[(f64, ComplexMatrix)]) -> Array2<C64> {
    let mut acc = Array2::<C64>::zeros((n, n));
    for (rate, l) in jumps {
        let ll = l.adjoint().mul(l);
        acc = acc + ll.mapv(|z| z * C64::new(0.0, -0.5 * rate));
    }
    acc
}

// Effective non-Hermitian Hamiltonian rebuilt from the Hermitian part
// of `h` plus the jump losses, after checking that any anti-Hermitian
// content of `h` agrees with the jump list.
fn effective_hamiltonian(
    h: &ComplexMatrix,
    jumps: &[(f64, ComplexMatrix)],
) -> Result<Array2<C64>> {
    let n = h.dim();
    validate_jumps(n, jumps)?;
    let loss = loss_term(n, jumps);
    let anti = h.anti_hermitian_part();
    let scale = max_abs(h).max(max_abs(&loss)).max(1e-300);
    if max_abs(&anti) > 1e-12 * scale {
        let mismatch = max_abs(&(&anti.clone().into_inner() - &loss));
        if mismatch > 1e-8 * scale {
            return Err(Error::Model(format!(
                "anti-Hermitian part of the Hamiltonian disagrees with the jump operators \
                 (max deviation {mismatch:.3e}); pass a Hermitian H or matching losses"
            )));
        }
    }
    Ok(h.hermitian_part().into_inner() + loss)
}

/// Dense superoperator of the master equation in row-major
/// vectorization. Public so tests and callers can cross-check it
/// against the direct right-hand side.
pub fn liouvillian(h: &ComplexMatrix, jumps: &[(f64, ComplexMatrix)]) -> Result<ComplexMatrix> {
    let n = h.dim();
    if n * n > crate::linalg::MAX_DIM {
        return Err(Error::Dimension(format!(
            "superoperator dimension {} exceeds {}",
            n * n,
            crate::linalg::MAX_DIM
        )));
    }
    let heff = effective_hamiltonian(h, jumps)?;
    let id = ComplexMatrix::identity(n);
    let heff_m = ComplexMatrix::new(heff.clone())?;
    let heff_conj = ComplexMatrix::new(heff.mapv(|z| z.conj()))?;
    // -i [ H_eff (x) 1 - 1 (x) conj(H_eff) ]
    let mut sup = crate::linalg::kron(&heff_m, &id)?.into_inner();
    sup = sup - crate::linalg::kron(&id, &heff_conj)?.into_inner();
    sup = sup.mapv(|z| z * C64::new(0.0, -1.0));
    for (rate, l) in jumps {
        let lc = ComplexMatrix::new(l.mapv(|z| z.conj()))?;
        let recycle = crate::linalg::kron(l, &lc)?;
        sup = sup + recycle.into_inner().mapv(|z| z * rate);
    }
    ComplexMatrix::new(sup)
}

/// Right-hand side of the master equation applied directly to a
/// density matrix, without forming the superoperator.
pub fn master_rhs(
    h: &ComplexMatrix,
    jumps: &[(f64, ComplexMatrix)],
    rho: &Array2<C64>,
) -> Result<Array2<C64>> {
    let heff = effective_hamiltonian(h, jumps)?;
    let heff_dag = heff.t().mapv(|z| z.conj());
    let mut out = heff.dot(rho) - rho.dot(&heff_dag);
    out = out.mapv(|z| z * C64::new(0.0, -1.0));
    for (rate, l) in jumps {
        let l_dag = l.adjoint();
        out = out + l.dot(rho).dot(&*l_dag).mapv(|z| z * rate);
    }
    Ok(out)
}

/// Density-matrix trajectory with conserved trace.
#[derive(Debug, Clone)]
pub struct MasterEvolution {
    pub times: Vec<f64>,
    pub states: Vec<DensityMatrix>,
    /// Largest `|tr rho - tr rho(0)|` across samples, a direct measure
    /// of accumulated integration error.
    pub trace_drift: f64,
}

impl MasterEvolution {
    pub fn final_state(&self) -> &DensityMatrix {
        self.states.last().expect("at least one sample")
    }
}

/// Integrates the master equation and samples at `times` (initial
/// state at `t = 0`), controlling local error per unit time at `tol`.
///
/// Trace conservation is monitored; drift beyond `1e-5` aborts with a
/// model violation since it signals a tolerance far too loose for the
/// requested horizon.
pub fn propagate_master(
    h: &ComplexMatrix,
    jumps: &[(f64, ComplexMatrix)],
    rho0: &DensityMatrix,
    times: &[f64],
    tol: f64,
) -> Result<MasterEvolution> {
    check_times(times)?;
    if rho0.dim() != h.dim() {
        return Err(Error::Dimension(format!(
            "state dimension {} does not match hamiltonian dimension {}",
            rho0.dim(),
            h.dim()
        )));
    }
    let n = h.dim();
    let sup = liouvillian(h, jumps)?;
    let gen = ConstantGenerator::new(sup);
    let y0 = Array1::from_iter(rho0.matrix().iter().cloned());
    // Prepend t = 0 when the first requested sample is later.
    let mut grid: Vec<f64> = Vec::with_capacity(times.len() + 1);
    let prepended = times[0] > 0.0;
    if prepended {
        grid.push(0.0);
    }
    grid.extend_from_slice(times);
    let raw = integrate_path(&gen, &y0, &grid, tol)?;
    let tr0 = rho0.trace();
    let mut states = Vec::with_capacity(times.len());
    let mut drift = 0.0f64;
    for y in raw.into_iter().skip(if prepended { 1 } else { 0 }) {
        let mut m = Array2::<C64>::zeros((n, n));
        for i in 0..n {
            for j in 0..n {
                m[[i, j]] = y[i * n + j];
            }
        }
        // Exact Lindblad dynamics preserves Hermiticity; symmetrize
        // away integrator roundoff before wrapping.
        let m = ComplexMatrix::new(m)?.hermitian_part().into_inner();
        let tr: f64 = m.diag().iter().map(|z| z.re).sum();
        drift = drift.max((tr - tr0).abs());
        if drift > 1e-5 {
            return Err(Error::Model(format!(
                "master-equation trace drifted by {drift:.3e}; tighten the tolerance"
            )));
        }
        states.push(DensityMatrix::unchecked(m));
    }
    Ok(MasterEvolution { times: times.to_vec(), states, trace_drift: drift })
}

/// Unique steady state of the master equation, from the null space of
/// the superoperator.
///
/// The Jacobi SVD resolves the zero singular value to near machine
/// precision; a second vanishing singular value (relative to the
/// largest) means the generator has multiple stationary states and is
/// reported as a model violation rather than silently picking one.
pub fn steady_state(h: &ComplexMatrix, jumps: &[(f64, ComplexMatrix)]) -> Result<DensityMatrix> {
    let n = h.dim();
    let sup = liouvillian(h, jumps)?;
    let (_, s, v) = svd(&sup)?;
    let dim = n * n;
    let smax = s[0].max(1e-300);
    let null_tol = smax * 1e-10;
    if s[dim - 1] > null_tol {
        return Err(Error::Model(format!(
            "no stationary state: smallest singular value {:.3e} (scale {:.3e})",
            s[dim - 1],
            smax
        )));
    }
    if dim >= 2 && s[dim - 2] <= null_tol {
        return Err(Error::Model(
            "steady state is not unique: the superoperator has a degenerate null space".into(),
        ));
    }
    let mut m = Array2::<C64>::zeros((n, n));
    for i in 0..n {
        for j in 0..n {
            m[[i, j]] = v[[i * n + j, dim - 1]];
        }
    }
    // The physical null vector has nonzero trace; normalize and
    // symmetrize (the vector is defined up to a complex scale).
    let tr: C64 = m.diag().iter().sum();
    if tr.norm() < 1e-10 {
        return Err(Error::Model(
            "null vector is traceless, so it is not a density matrix".into(),
        ));
    }
    let m = m.mapv(|z| z / tr);
    let m = ComplexMatrix::new(m)?.hermitian_part().into_inner();
    let rho = DensityMatrix::new(m)?;
    // Residual check: the normalized state must actually be stationary.
    let resid = master_rhs(h, jumps, rho.matrix())?;
    let scale = max_abs(&sup).max(1.0);
    if max_abs(&resid) > 1e-8 * scale {
        return Err(Error::Numerical(format!(
            "steady-state residual {:.3e} exceeds tolerance",
            max_abs(&resid)
        )));
    }
    Ok(rho)
}
