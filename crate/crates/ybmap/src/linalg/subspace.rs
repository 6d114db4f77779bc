//! Subspaces of `C^n` with canonical orthonormal bases.
//!
//! A [`Subspace`] always stores an orthonormal basis obtained from an SVD of
//! whatever raw columns it was built from, so two subspaces are compared by
//! geometry (principal angles) rather than by the accident of a basis.
//!
//! Principal angles are computed through their sines: with orthonormal bases
//! `Qa`, `Qb`, the singular values of `Qb - Qa (Qa^H Qb)` are the sines of
//! the principal angles. The sine route stays accurate near zero angle,
//! which is where the verification campaigns need resolution.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::jacobi::jacobi_svd;
use super::vectors::{ensure_finite_matrix, Vector};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct Subspace {
    ambient_dim: usize,
    /// `ambient_dim x dim` matrix with orthonormal columns.
    basis: DMatrix<Complex64>,
}

impl Subspace {
    /// Build a subspace from raw (not necessarily orthonormal) columns.
    ///
    /// The columns must be numerically independent: exactly `ncols` singular
    /// values above `rank_tol * sigma_max`, otherwise [`Error::RankDeficient`].
    pub fn from_columns(columns: &DMatrix<Complex64>, rank_tol: f64) -> Result<Self> {
        ensure_finite_matrix(columns, "subspace basis")?;
        let ambient = columns.nrows();
        if ambient == 0 {
            return Err(Error::InvalidInput("ambient dimension must be >= 1".into()));
        }
        let k = columns.ncols();
        if k == 0 {
            return Ok(Self::zero(ambient));
        }
        let svd = jacobi_svd(columns);
        let sigma_max = svd.singular_values[0];
        let found = svd
            .singular_values
            .iter()
            .filter(|&&s| s > rank_tol * sigma_max && s > 0.0)
            .count();
        if found < k {
            return Err(Error::RankDeficient { found, expected: k });
        }
        Ok(Self {
            ambient_dim: ambient,
            basis: svd.u.columns(0, k).into_owned(),
        })
    }

    /// Wrap columns that are already orthonormal (singular vectors, etc.).
    pub(crate) fn from_orthonormal(ambient_dim: usize, basis: DMatrix<Complex64>) -> Self {
        debug_assert_eq!(basis.nrows(), ambient_dim);
        Self { ambient_dim, basis }
    }

    /// The zero subspace `{0}`.
    pub fn zero(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            basis: DMatrix::zeros(ambient_dim, 0),
        }
    }

    /// The whole space `C^n`.
    pub fn full(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            basis: DMatrix::identity(ambient_dim, ambient_dim),
        }
    }

    /// The line spanned by a nonzero vector.
    pub fn line(v: &Vector) -> Result<Self> {
        let norm = v.norm();
        if norm == 0.0 {
            return Err(Error::RankDeficient {
                found: 0,
                expected: 1,
            });
        }
        let basis = DMatrix::from_fn(v.len(), 1, |i, _| v.entries()[i] / norm);
        Ok(Self {
            ambient_dim: v.len(),
            basis,
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    /// Canonical orthonormal basis, one column per dimension.
    pub fn basis(&self) -> &DMatrix<Complex64> {
        &self.basis
    }

    /// Orthogonal complement with respect to the Hermitian inner product.
    pub fn orthogonal_complement(&self) -> Subspace {
        // The complement is the null space of Q^H; columns are orthonormal so
        // the singular values are exactly 1 and the threshold is uncritical.
        super::numrank::numeric_kernel(&self.basis.adjoint(), 0.5)
    }

    /// Image of the subspace under `m`, re-canonicalized. Fails with
    /// [`Error::RankDeficient`] when `m` collapses the dimension.
    pub fn transformed(&self, m: &DMatrix<Complex64>, rank_tol: f64) -> Result<Subspace> {
        if m.ncols() != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                context: "subspace transform",
                left: m.ncols(),
                right: self.ambient_dim,
            });
        }
        if self.dim() == 0 {
            return Ok(Subspace::zero(m.nrows()));
        }
        Subspace::from_columns(&(m * &self.basis), rank_tol)
    }

    /// Sines of the principal angles to `other`, largest first.
    pub fn principal_sines(&self, other: &Subspace) -> Result<Vec<f64>> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::DimensionMismatch {
                context: "principal angles (ambient)",
                left: self.ambient_dim,
                right: other.ambient_dim,
            });
        }
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                context: "principal angles (subspace dim)",
                left: self.dim(),
                right: other.dim(),
            });
        }
        if self.dim() == 0 {
            return Ok(Vec::new());
        }
        let cross = self.basis.adjoint() * &other.basis;
        let residual = &other.basis - &self.basis * cross;
        Ok(jacobi_svd(&residual)
            .singular_values
            .iter()
            .map(|&s| s.clamp(0.0, 1.0))
            .collect())
    }

    /// Largest principal angle to `other`, in radians.
    pub fn max_principal_angle(&self, other: &Subspace) -> Result<f64> {
        let sines = self.principal_sines(other)?;
        Ok(sines.first().copied().unwrap_or(0.0).asin())
    }

    /// Geometric equality: same dimension and every principal angle below
    /// `angle_tol`.
    pub fn approx_eq(&self, other: &Subspace, angle_tol: f64) -> bool {
        match self.max_principal_angle(other) {
            Ok(theta) => theta <= angle_tol,
            Err(_) => false,
        }
    }

    /// Whether `v` lies in the subspace up to `tol * ||v||`.
    pub fn contains(&self, v: &Vector, tol: f64) -> bool {
        if v.len() != self.ambient_dim {
            return false;
        }
        let x = v.as_dvector();
        let projected = &self.basis * (self.basis.adjoint() * x);
        (x - projected).norm() <= tol * x.norm().max(1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::dmatrix;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn from_columns_orthonormalizes() {
        let cols = dmatrix![c(2.0, 0.0); c(2.0, 0.0)];
        let s = Subspace::from_columns(&cols, 1e-10).unwrap();
        assert_eq!(s.dim(), 1);
        assert!((s.basis().column(0).norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn from_columns_rejects_dependent_columns() {
        let cols = dmatrix![
            c(1.0, 0.0), c(2.0, 0.0);
            c(1.0, 0.0), c(2.0, 0.0)
        ];
        assert!(matches!(
            Subspace::from_columns(&cols, 1e-10),
            Err(Error::RankDeficient { found: 1, expected: 2 })
        ));
    }

    #[test]
    fn complement_of_line_in_c2() {
        let s = Subspace::line(&Vector::from_real(&[1.0, 1.0]).unwrap()).unwrap();
        let comp = s.orthogonal_complement();
        assert_eq!(comp.dim(), 1);
        let q = comp.basis().column(0);
        // orthogonal to (1,1) under the Hermitian inner product
        let dot = q[0].conj() * c(1.0, 0.0) + q[1].conj() * c(1.0, 0.0);
        assert!(dot.norm() < 1e-12);
    }

    #[test]
    fn principal_angle_resolves_tiny_rotations() {
        let a = Subspace::line(&Vector::from_real(&[1.0, 0.0]).unwrap()).unwrap();
        let eps = 1e-12;
        let b = Subspace::line(&Vector::from_real(&[1.0, eps]).unwrap()).unwrap();
        let theta = a.max_principal_angle(&b).unwrap();
        assert!((theta - eps).abs() < 1e-14, "theta = {theta:e}");
    }

    #[test]
    fn equality_is_basis_independent() {
        let a = Subspace::from_columns(
            &dmatrix![c(1.0, 0.0), c(1.0, 0.0); c(0.0, 0.0), c(1.0, 0.0)],
            1e-10,
        )
        .unwrap();
        assert!(a.approx_eq(&Subspace::full(2), 1e-8));
    }

    #[test]
    fn transform_detects_collapse() {
        let line = Subspace::line(&Vector::from_real(&[0.0, 1.0]).unwrap()).unwrap();
        let collapse = dmatrix![c(1.0, 0.0), c(0.0, 0.0); c(0.0, 0.0), c(0.0, 0.0)];
        assert!(matches!(
            line.transformed(&collapse, 1e-10),
            Err(Error::RankDeficient { .. })
        ));
    }
}
