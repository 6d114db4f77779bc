//! The rank-one vector map on soliton polarizations.
//!
//! For polarizations `(xi1, eta1; l1)` and `(xi2, eta2; l2)` the collision
//! updates are
//!
//! ```text
//! xi1~  = xi1  + 2 l2 (xi1, eta2) / ((l1 - l2)(xi2, eta2)) * xi2
//! eta1~ = eta1 + 2 l2 (xi2, eta1) / ((l1 - l2)(xi2, eta2)) * eta2
//! xi2~  = xi2  + 2 l1 (xi2, eta1) / ((l2 - l1)(xi1, eta1)) * xi1
//! eta2~ = eta2 + 2 l1 (xi1, eta2) / ((l2 - l1)(xi1, eta1)) * eta1
//! ```
//!
//! with velocities carried along unchanged.

use crate::error::{Error, Result};
use crate::lax::{verify_refactorization, ZetaGrid};
use crate::linalg::pairing;
use crate::tol::Tolerances;

use super::{guard_parameters, MapResult, Polarization};

/// Apply the two-soliton polarization map. Both pairings `(xi_i, eta_i)`
/// must be nondegenerate and `l1 != +-l2`.
pub fn vector_soliton_map(
    first: &Polarization,
    second: &Polarization,
    tols: &Tolerances,
) -> Result<(Polarization, Polarization)> {
    guard_parameters(first.lambda(), second.lambda(), tols)?;
    if first.dim() != second.dim() {
        return Err(Error::DimensionMismatch {
            context: "polarization ambient",
            left: first.dim(),
            right: second.dim(),
        });
    }
    let l1 = first.lambda();
    let l2 = second.lambda();
    let p11 = pairing(first.xi(), first.eta())?;
    let p22 = pairing(second.xi(), second.eta())?;
    let p12 = pairing(first.xi(), second.eta())?;
    let p21 = pairing(second.xi(), first.eta())?;

    let coeff1 = 2.0 * l2 / ((l1 - l2) * p22);
    let coeff2 = 2.0 * l1 / ((l2 - l1) * p11);

    let xi1 = first.xi().add_scaled(coeff1 * p12, second.xi())?;
    let eta1 = first.eta().add_scaled(coeff1 * p21, second.eta())?;
    let xi2 = second.xi().add_scaled(coeff2 * p21, first.xi())?;
    let eta2 = second.eta().add_scaled(coeff2 * p12, first.eta())?;

    Ok((
        Polarization::new(xi1, eta1, l1, tols)?,
        Polarization::new(xi2, eta2, l2, tols)?,
    ))
}

/// [`vector_soliton_map`] plus a refactorization certificate evaluated on
/// the induced rank-one Lax factors.
pub fn vector_soliton_map_certified(
    first: &Polarization,
    second: &Polarization,
    tols: &Tolerances,
    grid: &ZetaGrid,
) -> Result<MapResult<Polarization>> {
    let (out1, out2) = vector_soliton_map(first, second, tols)?;
    let residual = verify_refactorization(
        first.lambda(),
        &first.projector(tols)?,
        second.lambda(),
        &second.projector(tols)?,
        &out1.projector(tols)?,
        &out2.projector(tols)?,
        grid,
    )?;
    Ok(MapResult {
        first: out1,
        second: out2,
        lambda1: first.lambda(),
        lambda2: second.lambda(),
        refactor_residual: residual,
    })
}
