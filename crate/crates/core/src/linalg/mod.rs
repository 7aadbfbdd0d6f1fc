//! Dense complex linear algebra for small quantum models.
//!
//! Everything in this crate acts on matrices of dimension at most
//! [`MAX_DIM`]: physical models are 2 to 16 dimensional and
//! superoperators reach 256. At these sizes dense, deterministic,
//! dependency-free kernels are preferable to a BLAS/LAPACK binding, so
//! the eigensolver, SVD, matrix exponential, and integrator are
//! implemented here directly.
//!
//! Conventions: states are column vectors of `Complex64`, operators act
//! from the left, `adjoint` is the conjugate transpose, and all checks
//! use absolute tolerances scaled by the largest matrix entry.

mod eig;
mod expm;
mod ode;

pub use eig::{eigh, svd};
pub use expm::matexp;
pub use ode::{integrate, integrate_path, ConstantGenerator, Generator};

use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Hard cap on matrix dimension; superoperators of 16-dimensional
/// models are the largest objects the crate is designed for.
pub const MAX_DIM: usize = 256;

fn check_finite2(data: &Array2<C64>) -> bool {
    data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Largest entry magnitude, used as the scale for absolute tolerances.
pub fn max_abs(m: &Array2<C64>) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// Frobenius norm.
pub fn fro_norm(m: &Array2<C64>) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Induced 1-norm (maximum absolute column sum), the quantity the
/// scaling-and-squaring exponential bounds its backward error with.
pub fn one_norm(m: &Array2<C64>) -> f64 {
    let (_, cols) = m.dim();
    (0..cols)
        .map(|j| m.column(j).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Square complex matrix with validated shape and finite entries.
///
/// Dereferences to [`ndarray::Array2<Complex64>`], so all ndarray
/// arithmetic is available; the wrapper only guards construction.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    data: Array2<C64>,
}

impl ComplexMatrix {
    /// Validates that `data` is square, finite, and within [`MAX_DIM`].
    pub fn new(data: Array2<C64>) -> Result<Self> {
        let (r, c) = data.dim();
        if r != c {
            return Err(Error::Dimension(format!("matrix must be square, got {r} x {c}")));
        }
        if r == 0 || r > MAX_DIM {
            return Err(Error::Dimension(format!(
                "dimension {r} outside supported range 1..={MAX_DIM}"
            )));
        }
        if !check_finite2(&data) {
            return Err(Error::InvalidInput("matrix contains non-finite entries".into()));
        }
        Ok(Self { data })
    }

    pub(crate) fn unchecked(data: Array2<C64>) -> Self {
        debug_assert_eq!(data.nrows(), data.ncols());
        Self { data }
    }

    pub fn zeros(n: usize) -> Self {
        Self::unchecked(Array2::zeros((n, n)))
    }

    pub fn identity(n: usize) -> Self {
        Self::unchecked(Array2::eye(n))
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::unchecked(self.data.t().mapv(|z| z.conj()))
    }

    /// Matrix product `self * rhs`.
    pub fn mul(&self, rhs: &Self) -> Self {
        Self::unchecked(self.data.dot(&rhs.data))
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &Array1<C64>) -> Array1<C64> {
        self.data.dot(v)
    }

    /// True when `self` equals its adjoint within `tol * max_abs`.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        let scale = max_abs(&self.data).max(1e-300);
        let n = self.dim();
        for i in 0..n {
            for j in i..n {
                if (self.data[[i, j]] - self.data[[j, i]].conj()).norm() > tol * scale {
                    return false;
                }
            }
        }
        true
    }

    /// Hermitian part `(M + M^dag) / 2`.
    pub fn hermitian_part(&self) -> Self {
        let adj = self.adjoint();
        Self::unchecked((&self.data + &adj.data).mapv(|z| 0.5 * z))
    }

    /// Anti-Hermitian part `(M - M^dag) / 2`.
    pub fn anti_hermitian_part(&self) -> Self {
        let adj = self.adjoint();
        Self::unchecked((&self.data - &adj.data).mapv(|z| 0.5 * z))
    }

    pub fn into_inner(self) -> Array2<C64> {
        self.data
    }
}

impl std::ops::Deref for ComplexMatrix {
    type Target = Array2<C64>;
    fn deref(&self) -> &Array2<C64> {
        &self.data
    }
}

impl std::ops::DerefMut for ComplexMatrix {
    // Mutation can only change values, not the validated shape.
    fn deref_mut(&mut self) -> &mut Array2<C64> {
        &mut self.data
    }
}

/// Kronecker product, keeping the composite within [`MAX_DIM`].
///
/// Index convention: row `(i_a, i_b)` of the product maps to
/// `i_a * dim_b + i_b`, so the left factor is the slow index.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = a.dim() * b.dim();
    if n > MAX_DIM {
        return Err(Error::Dimension(format!(
            "kronecker product dimension {n} exceeds {MAX_DIM}"
        )));
    }
    Ok(ComplexMatrix::unchecked(ndarray::linalg::kron(&a.data, &b.data)))
}

/// Pure state amplitudes in a fixed orthonormal basis.
///
/// The norm may be below one: conditional (no-jump) evolution leaks
/// probability, and `1 - norm_sq` is the accumulated loss.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState {
    amps: Array1<C64>,
}

impl QuantumState {
    /// Validates finiteness, `1..=MAX_DIM`, and `norm_sq <= 1 + 1e-9`.
    pub fn new(amps: Array1<C64>) -> Result<Self> {
        let n = amps.len();
        if n == 0 || n > MAX_DIM {
            return Err(Error::Dimension(format!(
                "state dimension {n} outside supported range 1..={MAX_DIM}"
            )));
        }
        if !amps.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::InvalidInput("state contains non-finite amplitudes".into()));
        }
        let n2 = amps.iter().map(|z| z.norm_sqr()).sum::<f64>();
        if n2 > 1.0 + 1e-9 {
            return Err(Error::InvalidInput(format!("state norm^2 = {n2} exceeds 1")));
        }
        Ok(Self { amps })
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(amps: Array1<C64>) -> Result<Self> {
        let n2 = amps.iter().map(|z| z.norm_sqr()).sum::<f64>();
        if !(n2 > 0.0) || !n2.is_finite() {
            return Err(Error::InvalidInput("cannot normalize a zero or non-finite state".into()));
        }
        Self::new(amps.mapv(|z| z / n2.sqrt()))
    }

    /// Computational basis vector `|k>` in dimension `dim`.
    pub fn basis_state(dim: usize, k: usize) -> Result<Self> {
        if k >= dim {
            return Err(Error::Dimension(format!("basis index {k} out of range for dim {dim}")));
        }
        let mut amps = Array1::zeros(dim);
        amps[k] = C64::new(1.0, 0.0);
        Self::new(amps)
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn norm_sq(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `|amplitude|^2` per basis state; sums to `norm_sq`.
    pub fn populations(&self) -> Vec<f64> {
        self.amps.iter().map(|z| z.norm_sqr()).collect()
    }

    pub fn amplitudes(&self) -> &Array1<C64> {
        &self.amps
    }

    pub fn into_inner(self) -> Array1<C64> {
        self.amps
    }
}

/// Density operator: Hermitian, positive semidefinite, trace at most
/// one (conditional states carry the surviving probability as trace).
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: Array2<C64>,
}

impl DensityMatrix {
    /// Validates Hermiticity (1e-10), positivity (eigenvalues above
    /// -1e-8), and trace in `(0, 1 + 1e-8]`.
    pub fn new(mat: Array2<C64>) -> Result<Self> {
        let m = ComplexMatrix::new(mat)?;
        if !m.is_hermitian(1e-10) {
            return Err(Error::InvalidInput("density matrix is not Hermitian".into()));
        }
        let tr = m.diag().iter().map(|z| z.re).sum::<f64>();
        if !(tr > 0.0) || tr > 1.0 + 1e-8 {
            return Err(Error::InvalidInput(format!("density matrix trace {tr} outside (0, 1]")));
        }
        let herm = m.hermitian_part();
        let (vals, _) = eigh(&herm)?;
        if vals.iter().any(|&v| v < -1e-8) {
            return Err(Error::InvalidInput(format!(
                "density matrix has negative eigenvalue {:.3e}",
                vals.iter().cloned().fold(f64::INFINITY, f64::min)
            )));
        }
        Ok(Self { mat: m.into_inner() })
    }

    /// Projector `|psi><psi|`; trace equals the state's `norm_sq`.
    pub fn from_pure(psi: &QuantumState) -> Self {
        let n = psi.dim();
        let mut mat = Array2::zeros((n, n));
        for i in 0..n {
            for j in 0..n {
                mat[[i, j]] = psi.amplitudes()[i] * psi.amplitudes()[j].conj();
            }
        }
        Self { mat }
    }

    pub(crate) fn unchecked(mat: Array2<C64>) -> Self {
        Self { mat }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn trace(&self) -> f64 {
        self.mat.diag().iter().map(|z| z.re).sum()
    }

    /// Diagonal in the model basis; real up to the Hermiticity tolerance.
    pub fn populations(&self) -> Vec<f64> {
        self.mat.diag().iter().map(|z| z.re).collect()
    }

    /// `tr(rho^2)`, equal to `trace^2` only for pure states.
    pub fn purity(&self) -> f64 {
        self.mat.dot(&self.mat).diag().iter().map(|z| z.re).sum()
    }

    pub fn matrix(&self) -> &Array2<C64> {
        &self.mat
    }

    pub fn into_inner(self) -> Array2<C64> {
        self.mat
    }
}

/// Solves `a x = b` for matrix right-hand sides by LU factorization
/// with partial pivoting. `a` must be square and nonsingular.
pub fn solve_linear(a: &Array2<C64>, b: &Array2<C64>) -> Result<Array2<C64>> {
    let n = a.nrows();
    if a.ncols() != n || b.nrows() != n {
        return Err(Error::Dimension(format!(
            "solve shapes incompatible: a is {} x {}, b has {} rows",
            n,
            a.ncols(),
            b.nrows()
        )));
    }
    let mut lu = a.clone();
    let mut x = b.clone();
    let scale = max_abs(a).max(1e-300);
    for k in 0..n {
        // Partial pivot on the largest remaining entry in column k.
        let (mut pivot_row, mut pivot_mag) = (k, lu[[k, k]].norm());
        for i in (k + 1)..n {
            let mag = lu[[i, k]].norm();
            if mag > pivot_mag {
                pivot_row = i;
                pivot_mag = mag;
            }
        }
        if pivot_mag < 1e-14 * scale {
            return Err(Error::Numerical("linear solve: matrix is singular to working precision".into()));
        }
        if pivot_row != k {
            for j in 0..n {
                lu.swap([k, j], [pivot_row, j]);
            }
            for j in 0..x.ncols() {
                x.swap([k, j], [pivot_row, j]);
            }
        }
        let piv = lu[[k, k]];
        for i in (k + 1)..n {
            let factor = lu[[i, k]] / piv;
            lu[[i, k]] = factor;
            for j in (k + 1)..n {
                let sub = factor * lu[[k, j]];
                lu[[i, j]] -= sub;
            }
            for j in 0..x.ncols() {
                let sub = factor * x[[k, j]];
                x[[i, j]] -= sub;
            }
        }
    }
    // Back substitution.
    for k in (0..n).rev() {
        for j in 0..x.ncols() {
            let mut acc = x[[k, j]];
            for i in (k + 1)..n {
                acc -= lu[[k, i]] * x[[i, j]];
            }
            x[[k, j]] = acc / lu[[k, k]];
        }
    }
    Ok(x)
}

/// Golden-section minimization of a unimodal function on `[a, b]`.
///
/// Returns `(argmin, min)`. Used as an independent check on analytic
/// optima; the caller guarantees unimodality on the bracket.
pub fn golden_section_min(f: impl Fn(f64) -> f64, a: f64, b: f64, rel_tol: f64) -> (f64, f64) {
    assert!(b > a, "golden_section_min: empty bracket");
    let inv_phi = 0.618_033_988_749_894_9;
    let (mut lo, mut hi) = (a, b);
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..500 {
        if (hi - lo).abs() <= rel_tol * 0.5 * (lo.abs() + hi.abs()) {
            break;
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
    }
    let xm = 0.5 * (lo + hi);
    (xm, f(xm))
}
