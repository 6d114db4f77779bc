//! The three registered map families and their seeded samplers.
//!
//! Sampling keeps conditioning bounded so that tolerance failures indicate
//! logic errors rather than float exhaustion: velocities have modulus in
//! `[0.5, 2]` with pairwise separations `|l_i -+ l_j| >= 0.1`, pairings are
//! kept away from degeneracy, and sampled projectors are rejected when
//! their norm blows up.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::error::Result;
use crate::json::{encode_entries, encode_matrix, SubspaceJson};
use crate::lax::ZetaGrid;
use crate::linalg::{pairing, projector_distance, Covector, ProjectorState, Subspace, Vector};
use crate::maps::{
    grassmannian_map_certified, projector_map_certified, vector_soliton_map_certified,
    Polarization,
};
use crate::tol::Tolerances;

/// Whether a family draws complex or real velocities.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LambdaKind {
    Complex,
    Real,
}

/// A state space with a parameter-dependent map `R(l1, l2)` acting on pairs,
/// a seeded sampler, and a metric on canonical forms.
pub trait MapFamily: Sync {
    type State: Clone + Send;

    fn identifier(&self) -> &'static str;

    fn lambda_kind(&self) -> LambdaKind;

    fn sample_dim(&self, rng: &mut ChaCha8Rng) -> usize;

    fn sample_state(&self, rng: &mut ChaCha8Rng, dim: usize) -> Self::State;

    /// Apply `R(l1, l2)` and certify it against the Lax refactorization
    /// identity on `grid`; returns the updated pair and the certificate
    /// residual.
    fn apply(
        &self,
        lambda1: Complex64,
        first: &Self::State,
        lambda2: Complex64,
        second: &Self::State,
        tols: &Tolerances,
        grid: &ZetaGrid,
    ) -> Result<(Self::State, Self::State, f64)>;

    fn distance(&self, a: &Self::State, b: &Self::State) -> Result<f64>;

    fn echo_state(&self, state: &Self::State) -> serde_json::Value;
}

/// Velocities with modulus in `[0.5, 2]`, pairwise separated from each
/// other and from each other's negatives by at least `0.1`.
pub fn sample_lambdas(rng: &mut ChaCha8Rng, count: usize, kind: LambdaKind) -> Vec<Complex64> {
    let mut out: Vec<Complex64> = Vec::with_capacity(count);
    while out.len() < count {
        let modulus = rng.gen_range(0.5..2.0);
        let candidate = match kind {
            LambdaKind::Complex => {
                Complex64::from_polar(modulus, rng.gen_range(0.0..std::f64::consts::TAU))
            }
            LambdaKind::Real => {
                let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
                Complex64::new(sign * modulus, 0.0)
            }
        };
        if out
            .iter()
            .all(|l| (l - candidate).norm() >= 0.1 && (l + candidate).norm() >= 0.1)
        {
            out.push(candidate);
        }
    }
    out
}

fn random_complex(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

fn random_entries(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
    (0..n).map(|_| random_complex(rng)).collect()
}

/// Angle between the lines spanned by two nonzero vectors given as raw
/// complex entries.
fn line_angle(a: &[Complex64], b: &[Complex64]) -> Result<f64> {
    let left = Subspace::line(&Vector::from_entries(a.to_vec())?)?;
    let right = Subspace::line(&Vector::from_entries(b.to_vec())?)?;
    left.max_principal_angle(&right)
}

/// Polarization datum without a velocity: the campaign binds velocities to
/// slot positions, the state is the `(xi, eta)` pair.
#[derive(Debug, Clone)]
pub struct VectorState {
    pub xi: Vector,
    pub eta: Covector,
}

/// Rank-one polarizations in the configured dimensions.
#[derive(Debug, Clone)]
pub struct VectorFamily {
    pub dims: Vec<usize>,
}

impl Default for VectorFamily {
    fn default() -> Self {
        Self { dims: vec![2, 3, 4] }
    }
}

impl MapFamily for VectorFamily {
    type State = VectorState;

    fn identifier(&self) -> &'static str {
        "vector"
    }

    fn lambda_kind(&self) -> LambdaKind {
        LambdaKind::Complex
    }

    fn sample_dim(&self, rng: &mut ChaCha8Rng) -> usize {
        self.dims[rng.gen_range(0..self.dims.len())]
    }

    fn sample_state(&self, rng: &mut ChaCha8Rng, dim: usize) -> VectorState {
        loop {
            let xi = Vector::from_entries(random_entries(rng, dim)).expect("finite entries");
            let eta = Covector::from_entries(random_entries(rng, dim)).expect("finite entries");
            if pairing(&xi, &eta).unwrap().norm() > 0.1 * xi.norm() * eta.norm() {
                return VectorState { xi, eta };
            }
        }
    }

    fn apply(
        &self,
        lambda1: Complex64,
        first: &VectorState,
        lambda2: Complex64,
        second: &VectorState,
        tols: &Tolerances,
        grid: &ZetaGrid,
    ) -> Result<(VectorState, VectorState, f64)> {
        let first = Polarization::new(first.xi.clone(), first.eta.clone(), lambda1, tols)?;
        let second = Polarization::new(second.xi.clone(), second.eta.clone(), lambda2, tols)?;
        let result = vector_soliton_map_certified(&first, &second, tols, grid)?;
        Ok((
            VectorState {
                xi: result.first.xi().clone(),
                eta: result.first.eta().clone(),
            },
            VectorState {
                xi: result.second.xi().clone(),
                eta: result.second.eta().clone(),
            },
            result.refactor_residual,
        ))
    }

    /// Projective distance: polarization data matters only up to independent
    /// rescaling of `xi` and `eta` (the induced projector is the invariant),
    /// so compare the spanned lines.
    fn distance(&self, a: &VectorState, b: &VectorState) -> Result<f64> {
        let xi_angle = line_angle(a.xi.entries(), b.xi.entries())?;
        let eta_angle = line_angle(a.eta.entries(), b.eta.entries())?;
        Ok(xi_angle.max(eta_angle))
    }

    fn echo_state(&self, state: &VectorState) -> serde_json::Value {
        json!({
            "xi": encode_entries(state.xi.entries()),
            "eta": encode_entries(state.eta.entries()),
        })
    }
}

/// Projectors of mixed ranks `1..n-1` in the configured dimensions, not
/// necessarily Hermitian.
#[derive(Debug, Clone)]
pub struct ProjectorFamily {
    pub dims: Vec<usize>,
}

impl Default for ProjectorFamily {
    fn default() -> Self {
        Self {
            dims: (2..=6).collect(),
        }
    }
}

impl MapFamily for ProjectorFamily {
    type State = ProjectorState;

    fn identifier(&self) -> &'static str {
        "projector"
    }

    fn lambda_kind(&self) -> LambdaKind {
        LambdaKind::Complex
    }

    fn sample_dim(&self, rng: &mut ChaCha8Rng) -> usize {
        self.dims[rng.gen_range(0..self.dims.len())]
    }

    fn sample_state(&self, rng: &mut ChaCha8Rng, dim: usize) -> ProjectorState {
        let tols = Tolerances::default();
        loop {
            let k = rng.gen_range(1..dim);
            let image_cols = DMatrix::from_fn(dim, k, |_, _| random_complex(rng));
            let kernel_cols = DMatrix::from_fn(dim, dim - k, |_, _| random_complex(rng));
            let image = match Subspace::from_columns(&image_cols, tols.rank_tol) {
                Ok(s) => s,
                Err(_) => continue,
            };
            let kernel = match Subspace::from_columns(&kernel_cols, tols.rank_tol) {
                Ok(s) => s,
                Err(_) => continue,
            };
            match ProjectorState::from_subspaces(&image, &kernel, &tols) {
                // Norm bound keeps the kernel/image pair well separated.
                Ok(p) if crate::linalg::fro_norm(p.matrix()) <= 10.0 => return p,
                _ => continue,
            }
        }
    }

    fn apply(
        &self,
        lambda1: Complex64,
        first: &ProjectorState,
        lambda2: Complex64,
        second: &ProjectorState,
        tols: &Tolerances,
        grid: &ZetaGrid,
    ) -> Result<(ProjectorState, ProjectorState, f64)> {
        let result = projector_map_certified(lambda1, first, lambda2, second, tols, grid)?;
        Ok((result.first, result.second, result.refactor_residual))
    }

    fn distance(&self, a: &ProjectorState, b: &ProjectorState) -> Result<f64> {
        projector_distance(a, b)
    }

    fn echo_state(&self, state: &ProjectorState) -> serde_json::Value {
        json!({ "projector": encode_matrix(state.matrix()) })
    }
}

/// Subspaces of dimension `1..n-1` acted on through their orthogonal
/// projectors, with real velocities.
#[derive(Debug, Clone)]
pub struct GrassmannianFamily {
    pub dims: Vec<usize>,
}

impl Default for GrassmannianFamily {
    fn default() -> Self {
        Self {
            dims: (2..=6).collect(),
        }
    }
}

impl MapFamily for GrassmannianFamily {
    type State = Subspace;

    fn identifier(&self) -> &'static str {
        "grassmannian"
    }

    fn lambda_kind(&self) -> LambdaKind {
        LambdaKind::Real
    }

    fn sample_dim(&self, rng: &mut ChaCha8Rng) -> usize {
        self.dims[rng.gen_range(0..self.dims.len())]
    }

    fn sample_state(&self, rng: &mut ChaCha8Rng, dim: usize) -> Subspace {
        loop {
            let k = rng.gen_range(1..dim);
            let cols = DMatrix::from_fn(dim, k, |_, _| random_complex(rng));
            if let Ok(s) = Subspace::from_columns(&cols, 1e-10) {
                return s;
            }
        }
    }

    fn apply(
        &self,
        lambda1: Complex64,
        first: &Subspace,
        lambda2: Complex64,
        second: &Subspace,
        tols: &Tolerances,
        grid: &ZetaGrid,
    ) -> Result<(Subspace, Subspace, f64)> {
        let result =
            grassmannian_map_certified(lambda1.re, first, lambda2.re, second, tols, grid)?;
        Ok((result.first, result.second, result.refactor_residual))
    }

    fn distance(&self, a: &Subspace, b: &Subspace) -> Result<f64> {
        a.max_principal_angle(b)
    }

    fn echo_state(&self, state: &Subspace) -> serde_json::Value {
        serde_json::to_value(SubspaceJson::encode(state)).expect("subspace serializes")
    }
}
