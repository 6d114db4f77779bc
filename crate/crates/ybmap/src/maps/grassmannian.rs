//! The Yang-Baxter map on Grassmannians.
//!
//! A self-adjoint projector is determined by its image alone (the kernel is
//! the orthogonal complement), so the map acts on subspaces:
//!
//! ```text
//! L1~ = (I + 2 l2 / (l1 - l2) P2) L1
//! L2~ = (I + 2 l1 / (l2 - l1) P1) L2
//! ```
//!
//! with `P_i` the orthogonal projector onto `L_i`. Velocities are restricted
//! to nonzero reals, the regime in which the updates preserve hermiticity.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lax::{verify_refactorization, ZetaGrid};
use crate::linalg::{ProjectorState, Subspace};
use crate::tol::Tolerances;

use super::{guard_parameters, MapResult};

/// Apply the Grassmannian map to `(L1, L2)` with real velocities. Returns
/// the updated subspaces in canonical form; dimensions are preserved.
pub fn grassmannian_map(
    lambda1: f64,
    first: &Subspace,
    lambda2: f64,
    second: &Subspace,
    tols: &Tolerances,
) -> Result<(Subspace, Subspace)> {
    let l1 = Complex64::new(lambda1, 0.0);
    let l2 = Complex64::new(lambda2, 0.0);
    guard_parameters(l1, l2, tols)?;
    if first.ambient_dim() != second.ambient_dim() {
        return Err(Error::DimensionMismatch {
            context: "grassmannian ambient",
            left: first.ambient_dim(),
            right: second.ambient_dim(),
        });
    }
    let p1 = ProjectorState::orthogonal(first);
    let p2 = ProjectorState::orthogonal(second);
    let n = first.ambient_dim();
    let identity = nalgebra::DMatrix::<Complex64>::identity(n, n);

    let factor1 = &identity + p2.matrix() * (2.0 * l2 / (l1 - l2));
    let factor2 = &identity + p1.matrix() * (2.0 * l1 / (l2 - l1));

    let out1 = first.transformed(&factor1, tols.rank_tol)?;
    let out2 = second.transformed(&factor2, tols.rank_tol)?;
    Ok((out1, out2))
}

/// [`grassmannian_map`] plus the refactorization certificate for the
/// orthogonal projectors onto the subspaces.
pub fn grassmannian_map_certified(
    lambda1: f64,
    first: &Subspace,
    lambda2: f64,
    second: &Subspace,
    tols: &Tolerances,
    grid: &ZetaGrid,
) -> Result<MapResult<Subspace>> {
    let (out1, out2) = grassmannian_map(lambda1, first, lambda2, second, tols)?;
    let residual = verify_refactorization(
        Complex64::new(lambda1, 0.0),
        &ProjectorState::orthogonal(first),
        Complex64::new(lambda2, 0.0),
        &ProjectorState::orthogonal(second),
        &ProjectorState::orthogonal(&out1),
        &ProjectorState::orthogonal(&out2),
        grid,
    )?;
    Ok(MapResult {
        first: out1,
        second: out2,
        lambda1: Complex64::new(lambda1, 0.0),
        lambda2: Complex64::new(lambda2, 0.0),
        refactor_residual: residual,
    })
}
