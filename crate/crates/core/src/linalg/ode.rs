//! Adaptive Runge-Kutta integration for linear quantum dynamics.
//!
//! The integrator is an embedded Dormand-Prince 5(4) pair with PI step
//! control. The controlled quantity is the local error per unit time:
//! a step of size `dt` is accepted when the embedded error estimate
//! stays below `dt * tol` componentwise (scaled by `max(1, |y_i|)`),
//! so the accumulated error over an interval `T` is of order `T * tol`
//! for smooth generators.
//!
//! Generators supply `dy/dt` directly. For Schroedinger dynamics the
//! caller passes `-i H`, for master equations the Liouvillian; the
//! integrator is agnostic.

use ndarray::{Array1, ArrayView1};
use num_complex::Complex64 as C64;

use super::ComplexMatrix;
use crate::error::{Error, Result};

/// Right-hand side of the linear ODE `dy/dt = f(t, y)`.
pub trait Generator {
    fn dim(&self) -> usize;
    /// Writes `f(t, y)` into `out`, overwriting its previous contents.
    fn apply(&self, t: f64, y: &ArrayView1<C64>, out: &mut Array1<C64>);
}

/// Time-independent generator `dy/dt = a y`.
pub struct ConstantGenerator {
    a: ComplexMatrix,
}

impl ConstantGenerator {
    pub fn new(a: ComplexMatrix) -> Self {
        Self { a }
    }
}

impl Generator for ConstantGenerator {
    fn dim(&self) -> usize {
        self.a.dim()
    }
    fn apply(&self, _t: f64, y: &ArrayView1<C64>, out: &mut Array1<C64>) {
        out.assign(&self.a.dot(y));
    }
}

// Dormand-Prince coefficients.
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
// b - b*: weights of the embedded error estimate.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

const MAX_STEPS: usize = 5_000_000;

/// Integrates `dy/dt = f(t, y)` from `t0` to `t1` and returns `y(t1)`.
pub fn integrate<G: Generator>(
    gen: &G,
    y0: &Array1<C64>,
    t0: f64,
    t1: f64,
    tol: f64,
) -> Result<Array1<C64>> {
    let mut stepper = Stepper::new(gen, y0.clone(), t0, tol)?;
    stepper.advance_to(t1)?;
    Ok(stepper.y)
}

/// Integrates from `times[0]` (initial condition `y0` there) and
/// returns the state at every requested time, first entry included.
pub fn integrate_path<G: Generator>(
    gen: &G,
    y0: &Array1<C64>,
    times: &[f64],
    tol: f64,
) -> Result<Vec<Array1<C64>>> {
    if times.is_empty() {
        return Err(Error::InvalidInput("integrate_path requires at least one time".into()));
    }
    for w in times.windows(2) {
        if !(w[1] > w[0]) {
            return Err(Error::InvalidInput("sample times must be strictly increasing".into()));
        }
    }
    let mut out = Vec::with_capacity(times.len());
    out.push(y0.clone());
    let mut stepper = Stepper::new(gen, y0.clone(), times[0], tol)?;
    for &t in &times[1..] {
        stepper.advance_to(t)?;
        out.push(stepper.y.clone());
    }
    Ok(out)
}

struct Stepper<'g, G: Generator> {
    gen: &'g G,
    y: Array1<C64>,
    t: f64,
    dt: f64,
    tol: f64,
    // FSAL: derivative at (t, y), valid between steps.
    f_now: Array1<C64>,
    err_prev: f64,
    steps: usize,
}

impl<'g, G: Generator> Stepper<'g, G> {
    fn new(gen: &'g G, y0: Array1<C64>, t0: f64, tol: f64) -> Result<Self> {
        if !(tol > 0.0) || !tol.is_finite() {
            return Err(Error::InvalidInput(format!("tolerance must be positive, got {tol}")));
        }
        if y0.len() != gen.dim() {
            return Err(Error::Dimension(format!(
                "state length {} does not match generator dimension {}",
                y0.len(),
                gen.dim()
            )));
        }
        let mut f_now = Array1::zeros(y0.len());
        gen.apply(t0, &y0.view(), &mut f_now);
        Ok(Self { gen, y: y0, t: t0, dt: 0.0, tol, f_now, err_prev: 1.0, steps: 0 })
    }

    fn advance_to(&mut self, t1: f64) -> Result<()> {
        if !(t1 >= self.t) {
            return Err(Error::InvalidInput(format!(
                "cannot integrate backwards from {} to {}",
                self.t, t1
            )));
        }
        if t1 == self.t {
            return Ok(());
        }
        let span = t1 - self.t;
        let dt_min = span * 1e-13;
        if self.dt <= 0.0 {
            // First call: scale the initial step by the state's rate of change.
            let rate = rms_scaled(&self.f_now, &self.y) + 1e-16;
            self.dt = (0.01 / rate).min(span * 1e-2).max(dt_min * 10.0);
        }
        let n = self.y.len();
        let mut k: Vec<Array1<C64>> = (0..7).map(|_| Array1::zeros(n)).collect();
        let mut y_stage: Array1<C64> = Array1::zeros(n);

        while self.t < t1 {
            self.steps += 1;
            if self.steps > MAX_STEPS {
                return Err(Error::Numerical(format!(
                    "step budget exhausted at t = {:.6e} (tolerance too tight for this generator)",
                    self.t
                )));
            }
            let mut dt = self.dt.min(t1 - self.t);
            if dt < dt_min {
                dt = dt_min.min(t1 - self.t);
            }

            k[0].assign(&self.f_now);
            for stage in 1..7 {
                y_stage.assign(&self.y);
                for (j, kj) in k.iter().enumerate().take(stage) {
                    let w = A[stage - 1][j];
                    if w != 0.0 {
                        y_stage.scaled_add(C64::new(w * dt, 0.0), kj);
                    }
                }
                let ts = self.t + C[stage] * dt;
                self.gen.apply(ts, &y_stage.view(), &mut k[stage]);
            }
            // 5th-order solution is the last stage state (FSAL pair).
            // y_stage currently holds it because stage 7 used row A[5].
            let y_new = y_stage.clone();
            let f_new = k[6].clone();

            // Scaled error per unit time.
            let mut err_sq = 0.0;
            for i in 0..n {
                let mut e = C64::new(0.0, 0.0);
                for (j, kj) in k.iter().enumerate() {
                    if E[j] != 0.0 {
                        e += C64::new(E[j] * dt, 0.0) * kj[i];
                    }
                }
                let sc = self.y[i].norm().max(y_new[i].norm()).max(1.0);
                let ratio = e.norm() / (dt * self.tol * sc);
                err_sq += ratio * ratio;
            }
            let err = (err_sq / n as f64).sqrt().max(1e-12);

            if err <= 1.0 {
                self.t += dt;
                self.y = y_new;
                self.f_now = f_new;
                if !self.y.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
                    return Err(Error::Numerical(format!(
                        "state became non-finite at t = {:.6e}",
                        self.t
                    )));
                }
                // PI controller, fourth-order scaled error.
                let grow = 0.9 * err.powf(-0.175) * self.err_prev.powf(0.075);
                self.dt = dt * grow.clamp(0.2, 4.0);
                self.err_prev = err;
            } else {
                let shrink = (0.9 * err.powf(-0.25)).clamp(0.1, 0.9);
                let dt_next = dt * shrink;
                if dt_next < dt_min && dt > dt_min * 1.001 {
                    self.dt = dt_min;
                } else if dt_next < dt_min {
                    return Err(Error::Stiff {
                        t: self.t,
                        detail: format!(
                            "required step {dt_next:.3e} below resolvable {dt_min:.3e}"
                        ),
                    });
                } else {
                    self.dt = dt_next;
                }
            }
        }
        Ok(())
    }
}

// Root-mean-square of |f_i| / max(1, |y_i|).
fn rms_scaled(f: &Array1<C64>, y: &Array1<C64>) -> f64 {
    let n = f.len() as f64;
    let s: f64 = f
        .iter()
        .zip(y.iter())
        .map(|(fi, yi)| {
            let sc = yi.norm().max(1.0);
            (fi.norm() / sc).powi(2)
        })
        .sum();
    (s / n).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{matexp, max_abs};
    use ndarray::array;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn scalar_decay_matches_exponential() {
        let a = ComplexMatrix::new(array![[c(-1.0, 0.0)]]).unwrap();
        let gen = ConstantGenerator::new(a);
        let y0 = array![c(1.0, 0.0)];
        let y = integrate(&gen, &y0, 0.0, 2.0, 1e-10).unwrap();
        assert!((y[0].re - (-2.0f64).exp()).abs() < 1e-9);
        assert!(y[0].im.abs() < 1e-12);
    }

    #[test]
    fn two_level_oscillation_matches_matexp() {
        let h = ComplexMatrix::new(array![[c(0.7, 0.0), c(0.3, -0.2)], [c(0.3, 0.2), c(-0.4, 0.0)]])
            .unwrap();
        let gen = ConstantGenerator::new(
            ComplexMatrix::new(h.mapv(|z| z * c(0.0, -1.0))).unwrap(),
        );
        let y0 = array![c(1.0, 0.0), c(0.0, 0.0)];
        let t = 3.0;
        let y = integrate(&gen, &y0, 0.0, t, 1e-10).unwrap();
        let exact = matexp(&h, t).unwrap().apply(&y0);
        let diff: f64 = y.iter().zip(exact.iter()).map(|(a, b)| (a - b).norm()).sum();
        assert!(diff < 1e-8, "diff = {diff:.3e}");
    }

    #[test]
    fn time_dependent_generator() {
        // dy/dt = -i cos(t) X y integrates to exp(-i sin(t) X) y0 because
        // the generator commutes with itself at different times.
        struct DriveX;
        impl Generator for DriveX {
            fn dim(&self) -> usize {
                2
            }
            fn apply(&self, t: f64, y: &ArrayView1<C64>, out: &mut Array1<C64>) {
                let w = c(0.0, -1.0) * t.cos();
                out[0] = w * y[1];
                out[1] = w * y[0];
            }
        }
        let y0 = array![c(1.0, 0.0), c(0.0, 0.0)];
        let t = 2.4;
        let y = integrate(&DriveX, &y0, 0.0, t, 1e-11).unwrap();
        let angle = t.sin();
        assert!((y[0] - c(angle.cos(), 0.0)).norm() < 1e-9);
        assert!((y[1] - c(0.0, -angle.sin())).norm() < 1e-9);
    }

    #[test]
    fn path_sampling_consistent_with_single_shot() {
        let a = ComplexMatrix::new(array![[c(0.0, -2.0), c(0.5, 0.0)], [c(-0.5, 0.0), c(0.0, 1.0)]])
            .unwrap();
        let gen = ConstantGenerator::new(a);
        let y0 = array![c(0.8, 0.0), c(0.0, 0.6)];
        let times = [0.0, 0.4, 1.1, 2.0];
        let path = integrate_path(&gen, &y0, &times, 1e-11).unwrap();
        assert_eq!(path.len(), 4);
        for (idx, &t) in times.iter().enumerate() {
            let single = integrate(&gen, &y0, 0.0, t, 1e-11).unwrap();
            let diff: f64 =
                path[idx].iter().zip(single.iter()).map(|(a, b)| (a - b).norm()).sum();
            assert!(diff < 1e-8);
        }
    }

    #[test]
    fn rejects_bad_sample_times_and_shapes() {
        let a = ComplexMatrix::identity(2);
        let gen = ConstantGenerator::new(a);
        let y0 = array![c(1.0, 0.0), c(0.0, 0.0)];
        assert!(integrate_path(&gen, &y0, &[0.0, 0.0], 1e-9).is_err());
        assert!(integrate(&gen, &y0, 1.0, 0.5, 1e-9).is_err());
        let short = array![c(1.0, 0.0)];
        assert!(integrate(&gen, &short, 0.0, 1.0, 1e-9).is_err());
        assert!(integrate(&gen, &y0, 0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn unitary_norm_preserved_over_long_span() {
        let h = ComplexMatrix::new(array![[c(1.0, 0.0), c(0.2, 0.1)], [c(0.2, -0.1), c(-1.0, 0.0)]])
            .unwrap();
        let gen = ConstantGenerator::new(
            ComplexMatrix::new(h.mapv(|z| z * c(0.0, -1.0))).unwrap(),
        );
        let y0 = array![c(0.6, 0.0), c(0.8, 0.0)];
        let y = integrate(&gen, &y0, 0.0, 200.0, 1e-10).unwrap();
        let norm: f64 = y.iter().map(|z| z.norm_sqr()).sum();
        assert!((norm - 1.0).abs() < 1e-6, "norm drift {:.3e}", norm - 1.0);
    }

    #[test]
    fn matexp_and_integrator_agree_on_decaying_model() {
        // Non-Hermitian generator: both routes must land on the same state.
        let m = ComplexMatrix::new(array![
            [c(0.0, 0.0), c(1.2, 0.0)],
            [c(1.2, 0.0), c(-0.5, -0.35)]
        ])
        .unwrap();
        let y0 = array![c(1.0, 0.0), c(0.0, 0.0)];
        let t = 4.0;
        let via_exp = matexp(&m, t).unwrap().apply(&y0);
        let gen = ConstantGenerator::new(
            ComplexMatrix::new(m.mapv(|z| z * c(0.0, -1.0))).unwrap(),
        );
        let via_ode = integrate(&gen, &y0, 0.0, t, 1e-11).unwrap();
        let diff: f64 = via_exp.iter().zip(via_ode.iter()).map(|(a, b)| (a - b).norm()).sum();
        assert!(diff < 1e-8, "routes disagree by {diff:.3e}");
        let _ = max_abs(&ComplexMatrix::identity(2));
    }
}
