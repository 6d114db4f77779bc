//! The Yang-Baxter map on pairs of projectors, acting through kernel and
//! image updates.
//!
//! Writing `K_i = ker P_i` and `L_i = im P_i`, the updated projectors are
//! determined by
//!
//! ```text
//! K1~ = (I - 2 l2 / (l1 + l2) P2) K1
//! L1~ = (I + 2 l2 / (l1 - l2) P2) L1
//! K2~ = (I - 2 l1 / (l1 + l2) P1) K2
//! L2~ = (I + 2 l1 / (l2 - l1) P1) L2
//! ```
//!
//! and each output is reconstructed from its transformed subspace pair, so
//! ranks are preserved by construction. The update factors are invertible
//! whenever `l1 != +-l2`; if a transformed pair still loses complementarity
//! numerically the error carries the conditioning diagnostics.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lax::{verify_refactorization, ZetaGrid};
use crate::linalg::{ProjectorState, Subspace};
use crate::tol::Tolerances;

use super::{guard_parameters, MapResult};

fn update_factor(
    projector: &ProjectorState,
    coefficient: Complex64,
) -> DMatrix<Complex64> {
    let n = projector.ambient_dim();
    DMatrix::identity(n, n) + projector.matrix() * coefficient
}

fn transform(
    space: &Subspace,
    factor: &DMatrix<Complex64>,
    tols: &Tolerances,
    label: &str,
) -> Result<Subspace> {
    space.transformed(factor, tols.rank_tol).map_err(|e| match e {
        Error::RankDeficient { found, expected } => Error::NotComplementary {
            context: format!("{label}: transformed basis rank {found} of {expected}"),
            condition: 0.0,
        },
        other => other,
    })
}

/// Apply the projector map `R(l1, l2)(P1, P2) = (P1~, P2~)`.
///
/// Ranks may differ between the two inputs; both are preserved. Real
/// velocities on Hermitian inputs yield Hermitian outputs, which are pinned
/// to the self-adjoint projector onto their image to stop drift in iterated
/// dynamics.
pub fn projector_map(
    lambda1: Complex64,
    p1: &ProjectorState,
    lambda2: Complex64,
    p2: &ProjectorState,
    tols: &Tolerances,
) -> Result<(ProjectorState, ProjectorState)> {
    guard_parameters(lambda1, lambda2, tols)?;
    if p1.ambient_dim() != p2.ambient_dim() {
        return Err(Error::DimensionMismatch {
            context: "projector ambient",
            left: p1.ambient_dim(),
            right: p2.ambient_dim(),
        });
    }

    let two = Complex64::new(2.0, 0.0);
    let kernel1_factor = update_factor(p2, -two * lambda2 / (lambda1 + lambda2));
    let image1_factor = update_factor(p2, two * lambda2 / (lambda1 - lambda2));
    let kernel2_factor = update_factor(p1, -two * lambda1 / (lambda1 + lambda2));
    let image2_factor = update_factor(p1, two * lambda1 / (lambda2 - lambda1));

    let kernel1 = transform(p1.kernel(), &kernel1_factor, tols, "kernel of first output")?;
    let image1 = transform(p1.image(), &image1_factor, tols, "image of first output")?;
    let kernel2 = transform(p2.kernel(), &kernel2_factor, tols, "kernel of second output")?;
    let image2 = transform(p2.image(), &image2_factor, tols, "image of second output")?;

    let mut q1 = ProjectorState::from_subspaces(&image1, &kernel1, tols)?;
    let mut q2 = ProjectorState::from_subspaces(&image2, &kernel2, tols)?;

    let real_params = lambda1.im.abs() <= tols.param_tol * lambda1.norm()
        && lambda2.im.abs() <= tols.param_tol * lambda2.norm();
    if p1.is_hermitian() && p2.is_hermitian() && real_params {
        if q1.hermitian_defect() <= tols.idem_tol {
            q1 = q1.resymmetrized();
        }
        if q2.hermitian_defect() <= tols.idem_tol {
            q2 = q2.resymmetrized();
        }
    }
    Ok((q1, q2))
}

/// [`projector_map`] plus the refactorization certificate over `grid`.
pub fn projector_map_certified(
    lambda1: Complex64,
    p1: &ProjectorState,
    lambda2: Complex64,
    p2: &ProjectorState,
    tols: &Tolerances,
    grid: &ZetaGrid,
) -> Result<MapResult<ProjectorState>> {
    let (q1, q2) = projector_map(lambda1, p1, lambda2, p2, tols)?;
    let residual = verify_refactorization(lambda1, p1, lambda2, p2, &q1, &q2, grid)?;
    Ok(MapResult {
        first: q1,
        second: q2,
        lambda1,
        lambda2,
        refactor_residual: residual,
    })
}
