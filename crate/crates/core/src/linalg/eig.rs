//! Dense Hermitian eigensolver and singular value decomposition.
//!
//! Both kernels are Jacobi iterations: numerically the slowest choice
//! and the most accurate one, with relative errors near machine
//! precision even for tiny eigenvalue gaps. For the matrix sizes this
//! crate allows (<= 256) their cost is irrelevant, and they are fully
//! deterministic across platforms because only scalar arithmetic and
//! square roots are involved.

use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;

use super::{max_abs, ComplexMatrix};
use crate::error::{Error, Result};

// Smaller-magnitude root of t^2 + 2 tau t - 1 = 0, the tangent of the
// Jacobi rotation angle.
fn jacobi_tangent(tau: f64) -> f64 {
    let s = if tau >= 0.0 { 1.0 } else { -1.0 };
    s / (tau.abs() + (1.0 + tau * tau).sqrt())
}

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi
/// rotations.
///
/// Returns `(w, v)` with eigenvalues `w` ascending and unitary `v`
/// whose columns are the eigenvectors: `m = v diag(w) v^dag`.
pub fn eigh(m: &ComplexMatrix) -> Result<(Array1<f64>, ComplexMatrix)> {
    if !m.is_hermitian(1e-10) {
        return Err(Error::InvalidInput("eigh requires a Hermitian matrix".into()));
    }
    let n = m.dim();
    // Symmetrize exactly so roundoff in the input cannot accumulate.
    let mut a: Array2<C64> = m.hermitian_part().into_inner();
    let mut v: Array2<C64> = Array2::eye(n);
    let scale = max_abs(&a).max(1e-300);
    let done = 1e-15 * scale;

    for _sweep in 0..100 {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[[p, q]];
                let beta = apq.norm();
                if beta <= done * 1e-2 {
                    continue;
                }
                rotated = true;
                let phase = apq / beta; // e^{i phi}
                let alpha = a[[p, p]].re;
                let delta = a[[q, q]].re;
                let t = jacobi_tangent((delta - alpha) / (2.0 * beta));
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                // Rotation J: J[p,p] = c, J[p,q] = s e^{i phi},
                // J[q,p] = -s e^{-i phi}, J[q,q] = c; a <- J^dag a J.
                let se = phase * s;
                for k in 0..n {
                    let (rp, rq) = (a[[p, k]], a[[q, k]]);
                    a[[p, k]] = c * rp - se * rq;
                    a[[q, k]] = se.conj() * rp + c * rq;
                }
                for k in 0..n {
                    let (cp, cq) = (a[[k, p]], a[[k, q]]);
                    a[[k, p]] = c * cp - se.conj() * cq;
                    a[[k, q]] = se * cp + c * cq;
                }
                for k in 0..n {
                    let (vp, vq) = (v[[k, p]], v[[k, q]]);
                    v[[k, p]] = c * vp - se.conj() * vq;
                    v[[k, q]] = se * vp + c * vq;
                }
            }
        }
        if !rotated {
            break;
        }
        let off = (0..n)
            .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
            .map(|(i, j)| a[[i, j]].norm())
            .fold(0.0, f64::max);
        if off <= done {
            break;
        }
    }

    let off = (0..n)
        .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
        .map(|(i, j)| a[[i, j]].norm())
        .fold(0.0, f64::max);
    if off > 1e-12 * scale {
        return Err(Error::Numerical(format!(
            "jacobi eigensolver stalled with off-diagonal residual {off:.3e}"
        )));
    }

    // Sort eigenvalues ascending, permuting eigenvectors along.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[[i, i]].re.partial_cmp(&a[[j, j]].re).unwrap());
    let w = Array1::from_iter(order.iter().map(|&i| a[[i, i]].re));
    let mut vs = Array2::zeros((n, n));
    for (new, &old) in order.iter().enumerate() {
        for k in 0..n {
            vs[[k, new]] = v[[k, old]];
        }
    }
    Ok((w, ComplexMatrix::unchecked(vs)))
}

/// Singular value decomposition `m = u diag(s) v^dag` by one-sided
/// Jacobi orthogonalization of the columns.
///
/// Singular values are returned descending; `u` and `v` are unitary
/// (columns for vanishing singular values are completed to an
/// orthonormal basis). The smallest singular values are computed to
/// high relative accuracy, which is what the steady-state null-space
/// extraction relies on.
pub fn svd(m: &ComplexMatrix) -> Result<(ComplexMatrix, Array1<f64>, ComplexMatrix)> {
    let n = m.dim();
    let mut w: Array2<C64> = m.clone().into_inner();
    let mut v: Array2<C64> = Array2::eye(n);
    let eps = 1e-15;

    let mut converged = false;
    for _sweep in 0..100 {
        let mut rotated = false;
        // Columns that have collapsed to the roundoff floor carry no
        // information and would keep the relative criterion from ever
        // being met; freeze them (deflation).
        let max_norm2 = (0..n)
            .map(|j| (0..n).map(|k| w[[k, j]].norm_sqr()).sum::<f64>())
            .fold(0.0, f64::max);
        let deflate2 = max_norm2 * (n as f64) * 1e-30;
        for p in 0..n {
            for q in (p + 1)..n {
                let mut alpha = 0.0;
                let mut beta = 0.0;
                let mut g = C64::new(0.0, 0.0);
                for k in 0..n {
                    alpha += w[[k, p]].norm_sqr();
                    beta += w[[k, q]].norm_sqr();
                    g += w[[k, p]].conj() * w[[k, q]];
                }
                if alpha <= deflate2 || beta <= deflate2 {
                    continue;
                }
                let gn = g.norm();
                if gn <= eps * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = g / gn; // e^{i psi}, with w_p^dag w_q = gn e^{i psi}
                let t = jacobi_tangent((beta - alpha) / (2.0 * gn));
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                // Columns (p, q) mix through a phase-adjusted real
                // rotation that zeroes their inner product.
                let sp = s * phase.conj();
                let sq = s * phase;
                for k in 0..n {
                    let (wp, wq) = (w[[k, p]], w[[k, q]]);
                    w[[k, p]] = c * wp - sp * wq;
                    w[[k, q]] = sq * wp + c * wq;
                }
                for k in 0..n {
                    let (vp, vq) = (v[[k, p]], v[[k, q]]);
                    v[[k, p]] = c * vp - sp * vq;
                    v[[k, q]] = sq * vp + c * vq;
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Numerical("one-sided jacobi svd did not converge".into()));
    }

    // Column norms are the singular values; sort descending.
    let mut sig: Vec<(f64, usize)> = (0..n)
        .map(|j| ((0..n).map(|k| w[[k, j]].norm_sqr()).sum::<f64>().sqrt(), j))
        .collect();
    sig.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());

    let mut u = Array2::<C64>::zeros((n, n));
    let mut s = Array1::<f64>::zeros(n);
    let mut vs = Array2::<C64>::zeros((n, n));
    // Deflated columns point in noise directions; rebuild their u
    // columns orthonormally instead of normalizing noise.
    let cutoff = sig.first().map(|x| x.0).unwrap_or(0.0) * (n as f64).sqrt() * 1e-15;
    let mut deferred: Vec<usize> = Vec::new();
    for (new, &(sv, old)) in sig.iter().enumerate() {
        s[new] = sv;
        for k in 0..n {
            vs[[k, new]] = v[[k, old]];
        }
        if sv > cutoff && sv > 0.0 {
            for k in 0..n {
                u[[k, new]] = w[[k, old]] / sv;
            }
        } else {
            deferred.push(new);
        }
    }
    // Complete u to a unitary for exactly singular inputs by
    // Gram-Schmidt of canonical vectors against the existing columns.
    for &col in &deferred {
        'candidates: for e in 0..n {
            let mut cand = Array1::<C64>::zeros(n);
            cand[e] = C64::new(1.0, 0.0);
            for j in 0..n {
                if deferred.contains(&j) && j >= col {
                    continue;
                }
                let overlap: C64 = (0..n).map(|k| u[[k, j]].conj() * cand[k]).sum();
                for k in 0..n {
                    let sub = overlap * u[[k, j]];
                    cand[k] -= sub;
                }
            }
            let nrm = cand.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if nrm > 1e-6 {
                for k in 0..n {
                    u[[k, col]] = cand[k] / nrm;
                }
                break 'candidates;
            }
        }
    }
    Ok((ComplexMatrix::unchecked(u), s, ComplexMatrix::unchecked(vs)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;
    use rand::Rng;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn random_matrix(n: usize, seed: u64) -> ComplexMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let data = Array2::from_shape_fn((n, n), |_| {
            c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        ComplexMatrix::new(data).unwrap()
    }

    fn unitarity_defect(u: &ComplexMatrix) -> f64 {
        let id = Array2::<C64>::eye(u.dim());
        max_abs(&(&u.adjoint().mul(u).into_inner() - &id))
    }

    #[test]
    fn eigh_two_level_analytic() {
        // [[0, g], [g*, d]] has eigenvalues d/2 -+ sqrt(d^2/4 + |g|^2).
        let g = c(0.3, -0.4);
        let d = 1.7;
        let m = ComplexMatrix::new(array![[c(0.0, 0.0), g], [g.conj(), c(d, 0.0)]]).unwrap();
        let (w, v) = eigh(&m).unwrap();
        let root = (d * d / 4.0 + g.norm_sqr()).sqrt();
        assert!((w[0] - (d / 2.0 - root)).abs() < 1e-14);
        assert!((w[1] - (d / 2.0 + root)).abs() < 1e-14);
        assert!(unitarity_defect(&v) < 1e-13);
    }

    #[test]
    fn eigh_reconstructs_random_hermitian() {
        for seed in 0..4u64 {
            let n = 3 + 3 * seed as usize;
            let r = random_matrix(n, 11 + seed);
            let h = r.hermitian_part();
            let (w, v) = eigh(&h).unwrap();
            assert!(unitarity_defect(&v) < 1e-12);
            // v diag(w) v^dag == h
            let mut d = Array2::<C64>::zeros((n, n));
            for i in 0..n {
                d[[i, i]] = c(w[i], 0.0);
            }
            let rec = v.mul(&ComplexMatrix::new(d).unwrap()).mul(&v.adjoint());
            assert!(max_abs(&(&rec.into_inner() - &h.clone().into_inner())) < 1e-12);
            // Eigenvalues ascend.
            for i in 1..n {
                assert!(w[i] >= w[i - 1]);
            }
        }
    }

    #[test]
    fn svd_reconstructs_and_is_unitary() {
        for seed in 0..4u64 {
            let n = 2 + 4 * seed as usize;
            let a = random_matrix(n.max(2), 99 + seed);
            let (u, s, v) = svd(&a).unwrap();
            assert!(unitarity_defect(&u) < 1e-12, "u unitary");
            assert!(unitarity_defect(&v) < 1e-12, "v unitary");
            let mut d = Array2::<C64>::zeros((a.dim(), a.dim()));
            for i in 0..a.dim() {
                d[[i, i]] = c(s[i], 0.0);
                if i > 0 {
                    assert!(s[i] <= s[i - 1], "descending order");
                }
            }
            let rec = u.into_inner().dot(&d).dot(&v.adjoint().into_inner());
            assert!(max_abs(&(&rec - &a.clone().into_inner())) < 1e-12);
        }
    }

    #[test]
    fn svd_exposes_exact_null_space() {
        // Rank-1 projector embedded in dimension 3: two zero singular values.
        let psi = [c(0.6, 0.0), c(0.0, 0.8), c(0.0, 0.0)];
        let mut data = Array2::<C64>::zeros((3, 3));
        for i in 0..3 {
            for j in 0..3 {
                data[[i, j]] = psi[i] * psi[j].conj();
            }
        }
        let a = ComplexMatrix::new(data).unwrap();
        let (u, s, v) = svd(&a).unwrap();
        assert!((s[0] - 1.0).abs() < 1e-13);
        assert!(s[1] < 1e-13 && s[2] < 1e-13);
        assert!(unitarity_defect(&u) < 1e-12);
        // Null-space columns of v are annihilated by a.
        for col in 1..3 {
            let x = Array1::from_iter((0..3).map(|k| v[[k, col]]));
            let ax = a.apply(&x);
            let n = ax.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            assert!(n < 1e-13);
        }
    }

    #[test]
    fn svd_agrees_with_eigh_of_gram_matrix() {
        let a = random_matrix(6, 2024);
        let (_, s, _) = svd(&a).unwrap();
        let gram = a.adjoint().mul(&a);
        let (w, _) = eigh(&gram).unwrap();
        // Gram eigenvalues ascend; singular values descend.
        for i in 0..6 {
            let expect = w[5 - i].max(0.0).sqrt();
            assert!((s[i] - expect).abs() < 1e-12 * s[0].max(1.0));
        }
    }
}
