//! Numeric rank, null spaces, and column spaces by singular-value
//! thresholding.
//!
//! A singular value counts as zero when it falls below
//! `rank_tol * sigma_max`. Rectangular inputs are padded with zero rows
//! (for null spaces) or zero columns (for column spaces) so the
//! decomposition always yields the full singular basis on the side we
//! need. All decompositions go through the one-sided Jacobi SVD in
//! [`super::jacobi`].

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::jacobi::jacobi_svd;
use super::subspace::Subspace;
use crate::error::{Error, Result};

fn pad_to_rows(m: &DMatrix<Complex64>, rows: usize) -> DMatrix<Complex64> {
    if m.nrows() >= rows {
        return m.clone();
    }
    let mut padded = DMatrix::zeros(rows, m.ncols());
    padded.view_mut((0, 0), (m.nrows(), m.ncols())).copy_from(m);
    padded
}

fn pad_to_cols(m: &DMatrix<Complex64>, cols: usize) -> DMatrix<Complex64> {
    if m.ncols() >= cols {
        return m.clone();
    }
    let mut padded = DMatrix::zeros(m.nrows(), cols);
    padded.view_mut((0, 0), (m.nrows(), m.ncols())).copy_from(m);
    padded
}

fn count_above(singular_values: &[f64], rank_tol: f64) -> usize {
    let sigma_max = singular_values.first().copied().unwrap_or(0.0);
    singular_values
        .iter()
        .filter(|&&s| s > rank_tol * sigma_max && s > 0.0)
        .count()
}

/// Numeric rank of `m`.
pub fn numeric_rank(m: &DMatrix<Complex64>, rank_tol: f64) -> usize {
    count_above(&jacobi_svd(m).singular_values, rank_tol)
}

/// Orthonormal basis of the numeric null space `{v : Mv = 0}`.
///
/// The ambient dimension is the column count of `m`; a zero matrix returns
/// the whole space.
pub fn numeric_kernel(m: &DMatrix<Complex64>, rank_tol: f64) -> Subspace {
    let ambient = m.ncols();
    let svd = jacobi_svd(&pad_to_rows(m, ambient));
    let rank = count_above(&svd.singular_values, rank_tol);
    Subspace::from_orthonormal(ambient, svd.v.columns(rank, ambient - rank).into_owned())
}

/// Orthonormal basis of the numeric column space of `m`.
pub fn numeric_image(m: &DMatrix<Complex64>, rank_tol: f64) -> Subspace {
    let ambient = m.nrows();
    let svd = jacobi_svd(&pad_to_cols(m, ambient));
    let rank = count_above(&svd.singular_values, rank_tol);
    Subspace::from_orthonormal(ambient, svd.u.columns(0, rank).into_owned())
}

/// Null space of known dimension. Takes exactly the `expected` smallest
/// singular directions and cross-checks the threshold-detected dimension,
/// failing with [`Error::RankMismatch`] on disagreement.
pub fn numeric_kernel_with_dim(
    m: &DMatrix<Complex64>,
    expected: usize,
    rank_tol: f64,
) -> Result<Subspace> {
    let ambient = m.ncols();
    if expected > ambient {
        return Err(Error::RankMismatch {
            expected,
            detected: ambient,
        });
    }
    let svd = jacobi_svd(&pad_to_rows(m, ambient));
    let detected = ambient - count_above(&svd.singular_values, rank_tol);
    if detected != expected {
        return Err(Error::RankMismatch { expected, detected });
    }
    Ok(Subspace::from_orthonormal(
        ambient,
        svd.v.columns(ambient - expected, expected).into_owned(),
    ))
}

/// Column space of known dimension, with the same cross-check as
/// [`numeric_kernel_with_dim`].
pub fn numeric_image_with_dim(
    m: &DMatrix<Complex64>,
    expected: usize,
    rank_tol: f64,
) -> Result<Subspace> {
    let ambient = m.nrows();
    if expected > ambient {
        return Err(Error::RankMismatch {
            expected,
            detected: ambient,
        });
    }
    let svd = jacobi_svd(&pad_to_cols(m, ambient));
    let detected = count_above(&svd.singular_values, rank_tol);
    if detected != expected {
        return Err(Error::RankMismatch { expected, detected });
    }
    Ok(Subspace::from_orthonormal(
        ambient,
        svd.u.columns(0, expected).into_owned(),
    ))
}

/// One decomposition of a square matrix yielding both the column space and
/// the null space, so that `rank + nullity = n` holds exactly.
pub(crate) fn square_split(m: &DMatrix<Complex64>, rank_tol: f64) -> (Subspace, Subspace, usize) {
    debug_assert_eq!(m.nrows(), m.ncols());
    let n = m.nrows();
    let svd = jacobi_svd(m);
    let rank = count_above(&svd.singular_values, rank_tol);
    let image = Subspace::from_orthonormal(n, svd.u.columns(0, rank).into_owned());
    let kernel = Subspace::from_orthonormal(n, svd.v.columns(rank, n - rank).into_owned());
    (image, kernel, rank)
}

/// Singular values of `m`, descending.
pub fn singular_values(m: &DMatrix<Complex64>) -> Vec<f64> {
    jacobi_svd(m).singular_values
}
