//! Projectors `P: C^n -> C^n`, `P^2 = P`, with their kernel and image
//! subspaces kept alongside the matrix.
//!
//! A projector is uniquely determined by its kernel `K` and image `L`, two
//! complementary subspaces `K (+) L = C^n`; the rank-one case arises from a
//! vector/covector pair as `P = xi (x) eta / (xi, eta)`. Both constructions
//! are provided, together with the orthogonal (self-adjoint) projector onto
//! a subspace. Zero and identity are admitted as the rank `0` and rank `n`
//! degenerate cases.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::jacobi::jacobi_svd;
use super::numrank::{numeric_kernel, square_split};
use super::subspace::Subspace;
use super::vectors::{ensure_finite_matrix, outer, pairing, Covector, Vector};
use crate::error::{Error, Result};
use crate::tol::Tolerances;

/// Frobenius norm of a complex matrix.
pub fn fro_norm(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

#[derive(Debug, Clone)]
pub struct ProjectorState {
    matrix: DMatrix<Complex64>,
    rank: usize,
    kernel: Subspace,
    image: Subspace,
    hermitian: bool,
}

impl ProjectorState {
    /// Validate an arbitrary square matrix as a projector.
    ///
    /// Checks `||P^2 - P||_F <= idem_tol * (1 + ||P||_F)`, splits the
    /// kernel/image off a single SVD, and verifies their complementarity.
    pub fn from_matrix(matrix: DMatrix<Complex64>, tols: &Tolerances) -> Result<Self> {
        ensure_finite_matrix(&matrix, "projector matrix")?;
        let n = matrix.nrows();
        if n == 0 || matrix.ncols() != n {
            return Err(Error::DimensionMismatch {
                context: "projector matrix",
                left: matrix.nrows(),
                right: matrix.ncols(),
            });
        }
        let defect = fro_norm(&(&matrix * &matrix - &matrix));
        let threshold = tols.idem_tol * (1.0 + fro_norm(&matrix));
        if defect > threshold {
            return Err(Error::NotIdempotent { defect, threshold });
        }
        let (image, kernel, rank) = square_split(&matrix, tols.rank_tol);
        let hermitian = fro_norm(&(&matrix - matrix.adjoint())) <= threshold;
        let state = Self {
            matrix,
            rank,
            kernel,
            image,
            hermitian,
        };
        state.check_complementary("projector spectral split", tols.rank_tol)?;
        Ok(state)
    }

    /// Rank-one projector `P = xi (x) eta / (xi, eta)`.
    ///
    /// The image is the line through `xi`; the kernel is the annihilator of
    /// `eta`. Fails with [`Error::DegeneratePairing`] when
    /// `|(xi, eta)| <= pairing_tol * ||xi|| * ||eta||`.
    pub fn from_pair(xi: &Vector, eta: &Covector, tols: &Tolerances) -> Result<Self> {
        let p = pairing(xi, eta)?;
        let threshold = tols.pairing_tol * xi.norm() * eta.norm();
        if p.norm() <= threshold {
            return Err(Error::DegeneratePairing {
                magnitude: p.norm(),
                threshold,
            });
        }
        let matrix = outer(xi, eta)? / p;
        let image = Subspace::line(xi)?;
        let eta_row = DMatrix::from_fn(1, eta.len(), |_, j| eta.entries()[j]);
        let kernel = numeric_kernel(&eta_row, tols.rank_tol);
        let hermitian =
            fro_norm(&(&matrix - matrix.adjoint())) <= tols.idem_tol * (1.0 + fro_norm(&matrix));
        Ok(Self {
            matrix,
            rank: 1,
            kernel,
            image,
            hermitian,
        })
    }

    /// The unique projector with the given image and kernel.
    ///
    /// Solves `P [L K] = [L 0]`. Fails with [`Error::NotComplementary`] when
    /// `dim L + dim K != n` or the stacked basis is numerically singular.
    pub fn from_subspaces(image: &Subspace, kernel: &Subspace, tols: &Tolerances) -> Result<Self> {
        let n = image.ambient_dim();
        if kernel.ambient_dim() != n {
            return Err(Error::DimensionMismatch {
                context: "projector subspaces",
                left: n,
                right: kernel.ambient_dim(),
            });
        }
        let k = image.dim();
        if k + kernel.dim() != n {
            return Err(Error::NotComplementary {
                context: format!(
                    "dim L + dim K = {} + {} != {}",
                    k,
                    kernel.dim(),
                    n
                ),
                condition: 0.0,
            });
        }
        let mut stacked = DMatrix::zeros(n, n);
        stacked.view_mut((0, 0), (n, k)).copy_from(image.basis());
        stacked
            .view_mut((0, k), (n, n - k))
            .copy_from(kernel.basis());
        let singular_values = jacobi_svd(&stacked).singular_values;
        let sigma_max = singular_values[0];
        let sigma_min = singular_values[n - 1];
        let condition = if sigma_max > 0.0 {
            sigma_min / sigma_max
        } else {
            0.0
        };
        if condition <= tols.rank_tol {
            return Err(Error::NotComplementary {
                context: "stacked image/kernel basis".into(),
                condition,
            });
        }
        // P = [L 0] S^{-1}  <=>  S^T P^T = [L 0]^T
        let mut target = DMatrix::zeros(n, n);
        target.view_mut((0, 0), (n, k)).copy_from(image.basis());
        let lu = stacked.transpose().lu();
        let p_t = lu
            .solve(&target.transpose())
            .ok_or_else(|| Error::NotComplementary {
                context: "stacked basis LU solve".into(),
                condition,
            })?;
        let matrix = p_t.transpose();
        let defect = fro_norm(&(&matrix * &matrix - &matrix));
        let threshold = tols.idem_tol * (1.0 + fro_norm(&matrix));
        if defect > threshold {
            // Complementarity held at rank_tol but the solve lost too much
            // accuracy; surface the conditioning rather than the symptom.
            return Err(Error::NotComplementary {
                context: format!("ill-conditioned reconstruction, defect {defect:.3e}"),
                condition,
            });
        }
        let hermitian = fro_norm(&(&matrix - matrix.adjoint())) <= threshold;
        Ok(Self {
            matrix,
            rank: k,
            kernel: kernel.clone(),
            image: image.clone(),
            hermitian,
        })
    }

    /// Orthogonal (self-adjoint) projector onto `image`: `P = Q Q^H` with
    /// kernel the orthogonal complement.
    pub fn orthogonal(image: &Subspace) -> Self {
        let q = image.basis();
        let matrix = q * q.adjoint();
        Self {
            matrix,
            rank: image.dim(),
            kernel: image.orthogonal_complement(),
            image: image.clone(),
            hermitian: true,
        }
    }

    /// The zero projector (rank 0).
    pub fn zero(n: usize) -> Self {
        Self {
            matrix: DMatrix::zeros(n, n),
            rank: 0,
            kernel: Subspace::full(n),
            image: Subspace::zero(n),
            hermitian: true,
        }
    }

    /// The identity projector (rank n).
    pub fn identity(n: usize) -> Self {
        Self {
            matrix: DMatrix::identity(n, n),
            rank: n,
            kernel: Subspace::zero(n),
            image: Subspace::full(n),
            hermitian: true,
        }
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn ambient_dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn kernel(&self) -> &Subspace {
        &self.kernel
    }

    pub fn image(&self) -> &Subspace {
        &self.image
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    /// `||P^2 - P||_F / (1 + ||P||_F)`.
    pub fn idempotency_defect(&self) -> f64 {
        fro_norm(&(&self.matrix * &self.matrix - &self.matrix)) / (1.0 + fro_norm(&self.matrix))
    }

    /// `||P - P^H||_F / (1 + ||P||_F)`.
    pub fn hermitian_defect(&self) -> f64 {
        fro_norm(&(&self.matrix - self.matrix.adjoint())) / (1.0 + fro_norm(&self.matrix))
    }

    /// Rebuild as the orthogonal projector onto the current image. Used to
    /// stop Hermitian drift when iterating maps that preserve hermiticity.
    pub fn resymmetrized(&self) -> Self {
        Self::orthogonal(&self.image)
    }

    fn check_complementary(&self, context: &str, rank_tol: f64) -> Result<()> {
        let n = self.ambient_dim();
        let k = self.image.dim();
        let mut stacked = DMatrix::zeros(n, n);
        stacked.view_mut((0, 0), (n, k)).copy_from(self.image.basis());
        stacked
            .view_mut((0, k), (n, n - k))
            .copy_from(self.kernel.basis());
        let singular_values = jacobi_svd(&stacked).singular_values;
        let sigma_max = singular_values[0];
        let sigma_min = singular_values[n - 1];
        let condition = if sigma_max > 0.0 {
            sigma_min / sigma_max
        } else {
            0.0
        };
        if condition <= rank_tol {
            return Err(Error::NotComplementary {
                context: context.into(),
                condition,
            });
        }
        Ok(())
    }
}

/// Distance between projectors of equal rank: the larger of the maximal
/// principal angles between images and between kernels. Zero exactly when
/// the projectors coincide, independent of basis choices.
pub fn projector_distance(a: &ProjectorState, b: &ProjectorState) -> Result<f64> {
    let image_angle = a.image().max_principal_angle(b.image())?;
    let kernel_angle = a.kernel().max_principal_angle(b.kernel())?;
    Ok(image_angle.max(kernel_angle))
}
