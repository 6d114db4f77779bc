//! One-sided Jacobi SVD for complex dense matrices.
//!
//! Every rank, kernel, image, and principal-angle decision in this crate
//! runs through this decomposition. One-sided Jacobi orthogonalizes the
//! columns of `A` by unitary plane rotations on the right, `A -> A R`,
//! accumulating `V = prod R`; at convergence the columns of `A V` are
//! orthogonal, their norms are the singular values, and normalizing them
//! gives `U`. The method delivers high relative accuracy for the small
//! dense matrices used here (n <= 64), including the nearly-rank-deficient
//! products the refactorization oracle inspects.

use nalgebra::DMatrix;
use num_complex::Complex64;

const CONVERGENCE: f64 = 1e-15;
const MAX_SWEEPS: usize = 64;

pub(crate) struct JacobiSvd {
    /// `m x n`; for every positive singular value the corresponding column
    /// is a unit left singular vector, columns for zero singular values are
    /// zero.
    pub u: DMatrix<Complex64>,
    /// Length `n`, descending.
    pub singular_values: Vec<f64>,
    /// `n x n` unitary; right singular vectors as columns.
    pub v: DMatrix<Complex64>,
}

pub(crate) fn jacobi_svd(a: &DMatrix<Complex64>) -> JacobiSvd {
    let n = a.ncols();
    let mut work = a.clone();
    let mut v = DMatrix::<Complex64>::identity(n, n);

    for _ in 0..MAX_SWEEPS {
        let mut max_off = 0.0f64;
        for i in 0..n {
            for j in (i + 1)..n {
                let mut guu = 0.0f64;
                let mut gvv = 0.0f64;
                let mut guv = Complex64::new(0.0, 0.0);
                for r in 0..work.nrows() {
                    let x = work[(r, i)];
                    let y = work[(r, j)];
                    guu += x.norm_sqr();
                    gvv += y.norm_sqr();
                    guv += x.conj() * y;
                }
                // Divide by the norms separately: the product guu * gvv can
                // underflow once rank-deficient columns have been rotated
                // down to the denormal range.
                let norm_u = guu.sqrt();
                let norm_v = gvv.sqrt();
                if norm_u == 0.0 || norm_v == 0.0 || guv.norm() == 0.0 {
                    continue;
                }
                // Cauchy-Schwarz bounds this by 1, so it is always finite.
                let relative = (guv.norm() / norm_u) / norm_v;
                max_off = max_off.max(relative);
                if relative <= CONVERGENCE {
                    continue;
                }
                // Phase out guv, then solve the real 2x2 Jacobi rotation:
                // tan(2 theta) = 2|guv| / (gvv - guu).
                let magnitude = guv.norm();
                let phase = guv / magnitude;
                let tau = (gvv - guu) / (2.0 * magnitude);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let cos = 1.0 / (1.0 + t * t).sqrt();
                let sin = t * cos;
                let s_left = sin * phase.conj();
                let s_right = sin * phase;
                for r in 0..work.nrows() {
                    let x = work[(r, i)];
                    let y = work[(r, j)];
                    work[(r, i)] = x * cos - y * s_left;
                    work[(r, j)] = x * s_right + y * cos;
                }
                for r in 0..n {
                    let x = v[(r, i)];
                    let y = v[(r, j)];
                    v[(r, i)] = x * cos - y * s_left;
                    v[(r, j)] = x * s_right + y * cos;
                }
            }
        }
        if max_off <= CONVERGENCE {
            break;
        }
    }

    // Sort columns by descending norm; normalize into U.
    let mut order: Vec<usize> = (0..n).collect();
    let norms: Vec<f64> = (0..n).map(|j| work.column(j).norm()).collect();
    order.sort_by(|&a, &b| norms[b].partial_cmp(&norms[a]).expect("finite norms"));

    let m = a.nrows();
    let mut u = DMatrix::<Complex64>::zeros(m, n);
    let mut v_sorted = DMatrix::<Complex64>::zeros(n, n);
    let mut singular_values = Vec::with_capacity(n);
    for (slot, &source) in order.iter().enumerate() {
        let sigma = norms[source];
        singular_values.push(sigma);
        if sigma > 0.0 {
            for r in 0..m {
                u[(r, slot)] = work[(r, source)] / sigma;
            }
        }
        for r in 0..n {
            v_sorted[(r, slot)] = v[(r, source)];
        }
    }
    JacobiSvd {
        u,
        singular_values,
        v: v_sorted,
    }
}
