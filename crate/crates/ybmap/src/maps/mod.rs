//! The three closed-form Yang-Baxter map families: the rank-one vector map
//! on polarization data, the projector map acting through kernel/image
//! updates, and the Hermitian map on Grassmannian subspaces.
//!
//! All three share one orientation: `R(l1, l2)(x1, x2) = (x1~, x2~)`, which
//! the Lax module translates into the refactorization ordering
//! `A(x1, l1; z) A(x2, l2; z) = A(x2~, l2; z) A(x1~, l1; z)`.

mod grassmannian;
mod projector;
mod vector;

pub use grassmannian::{grassmannian_map, grassmannian_map_certified};
pub use projector::{projector_map, projector_map_certified};
pub use vector::{vector_soliton_map, vector_soliton_map_certified};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{pairing, Covector, ProjectorState, Vector};
use crate::tol::Tolerances;

/// Polarization data of a rank-one soliton: a vector `xi`, a covector
/// `eta` with nondegenerate pairing, and a nonzero velocity `lambda`.
#[derive(Debug, Clone)]
pub struct Polarization {
    xi: Vector,
    eta: Covector,
    lambda: Complex64,
}

impl Polarization {
    pub fn new(xi: Vector, eta: Covector, lambda: Complex64, tols: &Tolerances) -> Result<Self> {
        if lambda == Complex64::new(0.0, 0.0) {
            return Err(Error::ZeroLambda);
        }
        let p = pairing(&xi, &eta)?;
        let threshold = tols.pairing_tol * xi.norm() * eta.norm();
        if p.norm() <= threshold {
            return Err(Error::DegeneratePairing {
                magnitude: p.norm(),
                threshold,
            });
        }
        Ok(Self { xi, eta, lambda })
    }

    pub fn xi(&self) -> &Vector {
        &self.xi
    }

    pub fn eta(&self) -> &Covector {
        &self.eta
    }

    pub fn lambda(&self) -> Complex64 {
        self.lambda
    }

    pub fn dim(&self) -> usize {
        self.xi.len()
    }

    /// The rank-one projector `xi (x) eta / (xi, eta)` this polarization
    /// induces. Invariant under independent rescaling of `xi` and `eta`.
    pub fn projector(&self, tols: &Tolerances) -> Result<ProjectorState> {
        ProjectorState::from_pair(&self.xi, &self.eta, tols)
    }
}

/// Outcome of one certified map application: the updated pair, the
/// velocities echoed, and the maximum relative refactorization residual
/// over the sampled spectral-parameter grid.
#[derive(Debug, Clone)]
pub struct MapResult<S> {
    pub first: S,
    pub second: S,
    pub lambda1: Complex64,
    pub lambda2: Complex64,
    pub refactor_residual: f64,
}

pub(crate) fn guard_parameters(
    lambda1: Complex64,
    lambda2: Complex64,
    tols: &Tolerances,
) -> Result<()> {
    if lambda1.norm() == 0.0 || lambda2.norm() == 0.0 {
        return Err(Error::ZeroLambda);
    }
    if tols.lambdas_collide(lambda1, lambda2) {
        return Err(Error::ParameterCollision { lambda1, lambda2 });
    }
    Ok(())
}
