//! Periodic chains of projector sites with Lax monodromy, transfer-map
//! dynamics, and conserved spectral invariants.
//!
//! The monodromy of a chain `(P_1, l_1), ..., (P_N, l_N)` at spectral
//! parameter `z` is the ordered product
//! `M(z) = A(P_1, l_1; z) A(P_2, l_2; z) ... A(P_N, l_N; z)`.
//!
//! The transfer map sweeps site 1 through the chain: with `y := P_1`,
//! refactorize `A(y, l_1; z) A(P_k, l_k; z) = A(P_k~, l_k; z) A(y', l_1; z)`
//! for `k = 2..N`, advancing `y := y'` after each step. The resulting chain
//! `(y_final, P_2~, ..., P_N~)` keeps the velocity ordering, and chaining
//! the pairwise relations gives
//!
//! ```text
//! M~(z) = A(y_final, l_1; z) M(z) A(y_final, l_1; z)^{-1},
//! ```
//!
//! so the spectrum of `M(z)` is conserved at every `z`. The coefficients of
//! the monic characteristic polynomial of `M(z)` on a fixed grid of samples
//! therefore serve as integrals of the dynamics; [`Chain::iterate`] tracks
//! their drift.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lax::{lax_matrix, ZetaGrid};
use crate::linalg::ProjectorState;
use crate::maps::projector_map;
use crate::tol::Tolerances;

/// One site of a chain: a projector and its velocity.
#[derive(Debug, Clone)]
pub struct ChainSite {
    pub projector: ProjectorState,
    pub lambda: Complex64,
}

/// Ordered list of sites sharing one ambient dimension.
#[derive(Debug, Clone)]
pub struct Chain {
    sites: Vec<ChainSite>,
}

impl Chain {
    /// Build a chain, validating shared ambient dimension and nonzero
    /// velocities. Velocity collisions are checked at transfer time, where
    /// the pairs that actually refactorize are known.
    pub fn new(sites: Vec<ChainSite>) -> Result<Self> {
        if let Some(first) = sites.first() {
            let n = first.projector.ambient_dim();
            for (index, site) in sites.iter().enumerate() {
                if site.projector.ambient_dim() != n {
                    return Err(Error::DimensionMismatch {
                        context: "chain site ambient",
                        left: n,
                        right: site.projector.ambient_dim(),
                    }
                    .at_site(index));
                }
                if site.lambda == Complex64::new(0.0, 0.0) {
                    return Err(Error::ZeroLambda.at_site(index));
                }
            }
        }
        Ok(Self { sites })
    }

    pub fn sites(&self) -> &[ChainSite] {
        &self.sites
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn ambient_dim(&self) -> Option<usize> {
        self.sites.first().map(|s| s.projector.ambient_dim())
    }

    pub fn lambdas(&self) -> Vec<Complex64> {
        self.sites.iter().map(|s| s.lambda).collect()
    }

    /// Ordered product of the Lax factors at `z`. The empty chain gives the
    /// identity in dimension `fallback_dim`.
    pub fn monodromy(&self, zeta: Complex64, pole_margin: f64) -> Result<DMatrix<Complex64>> {
        let n = self.ambient_dim().unwrap_or(1);
        let mut product = DMatrix::identity(n, n);
        for (index, site) in self.sites.iter().enumerate() {
            if (zeta - site.lambda).norm() <= pole_margin {
                return Err(Error::PoleEvaluation {
                    zeta,
                    pole: site.lambda,
                    margin: pole_margin,
                }
                .at_site(index));
            }
            product *= lax_matrix(site.projector.matrix(), site.lambda, zeta);
        }
        Ok(product)
    }

    /// One transfer step: sweep site 1 through sites `2..N`.
    ///
    /// Requires `l_1 != +-l_k` for every `k >= 2`; collisions and lost
    /// complementarity are reported with the offending site index.
    pub fn transfer_map(&self, tols: &Tolerances) -> Result<Chain> {
        if self.sites.len() <= 1 {
            return Ok(self.clone());
        }
        let lambda1 = self.sites[0].lambda;
        let mut moving = self.sites[0].projector.clone();
        let mut updated = Vec::with_capacity(self.sites.len());
        for (offset, site) in self.sites[1..].iter().enumerate() {
            let index = offset + 1;
            let (advanced, site_updated) =
                projector_map(lambda1, &moving, site.lambda, &site.projector, tols)
                    .map_err(|e| e.at_site(index))?;
            moving = advanced;
            updated.push(ChainSite {
                projector: site_updated,
                lambda: site.lambda,
            });
        }
        let mut sites = Vec::with_capacity(self.sites.len());
        sites.push(ChainSite {
            projector: moving,
            lambda: lambda1,
        });
        sites.extend(updated);
        Ok(Chain { sites })
    }

    /// Characteristic-polynomial coefficients of the monodromy at every
    /// grid sample, in grid order.
    pub fn spectral_invariants(&self, grid: &ZetaGrid) -> Result<InvariantVector> {
        let samples = grid
            .points()
            .iter()
            .map(|&zeta| {
                let m = self.monodromy(zeta, grid.pole_margin())?;
                Ok(InvariantSample {
                    zeta,
                    coefficients: char_poly_coefficients(&m),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(InvariantVector { samples })
    }

    /// Apply the transfer map `steps` times, recording the per-step drift
    /// of the spectral invariants relative to step 0.
    pub fn iterate(&self, steps: usize, grid: &ZetaGrid, tols: &Tolerances) -> Result<Trajectory> {
        let reference = self.spectral_invariants(grid)?;
        let mut records = vec![TrajectoryStep {
            step: 0,
            invariant_drift: 0.0,
        }];
        let mut current = self.clone();
        let mut max_drift = 0.0f64;
        for step in 1..=steps {
            current = current.transfer_map(tols).map_err(|e| e.at_step(step))?;
            let invariants = current.spectral_invariants(grid)?;
            let drift = invariants.max_relative_drift(&reference)?;
            max_drift = max_drift.max(drift);
            records.push(TrajectoryStep {
                step,
                invariant_drift: drift,
            });
        }
        Ok(Trajectory {
            steps: records,
            max_drift,
            final_chain: current,
        })
    }

    /// Product formula for the monodromy determinant:
    /// `det M(z) = prod_i ((z + l_i) / (z - l_i))^{rank P_i}`.
    pub fn determinant_product(&self, zeta: Complex64) -> Complex64 {
        self.sites
            .iter()
            .map(|site| {
                ((zeta + site.lambda) / (zeta - site.lambda)).powu(site.projector.rank() as u32)
            })
            .product()
    }
}

/// Coefficients of the monic characteristic polynomial
/// `det(sI - M) = s^n + c[1] s^(n-1) + ... + c[n]`, returned leading-first
/// as `[1, c[1], ..., c[n]]` (length `n + 1`).
///
/// Computed by the Faddeev-LeVerrier recurrence, which needs only matrix
/// products and traces and is deterministic.
pub fn char_poly_coefficients(m: &DMatrix<Complex64>) -> Vec<Complex64> {
    let n = m.nrows();
    let mut coefficients = Vec::with_capacity(n + 1);
    coefficients.push(Complex64::new(1.0, 0.0));
    let mut auxiliary = DMatrix::<Complex64>::identity(n, n);
    for k in 1..=n {
        let product = m * &auxiliary;
        let coefficient = -product.trace() / (k as f64);
        auxiliary = &product + DMatrix::identity(n, n) * coefficient;
        coefficients.push(coefficient);
    }
    coefficients
}

#[derive(Debug, Clone)]
pub struct InvariantSample {
    pub zeta: Complex64,
    pub coefficients: Vec<Complex64>,
}

/// Spectral invariants: one coefficient vector per grid sample.
#[derive(Debug, Clone)]
pub struct InvariantVector {
    pub samples: Vec<InvariantSample>,
}

impl InvariantVector {
    /// Maximum over samples and coefficients of
    /// `|c - c_ref| / (1 + |c_ref|)`.
    pub fn max_relative_drift(&self, reference: &InvariantVector) -> Result<f64> {
        if self.samples.len() != reference.samples.len() {
            return Err(Error::DimensionMismatch {
                context: "invariant samples",
                left: self.samples.len(),
                right: reference.samples.len(),
            });
        }
        let mut max_drift = 0.0f64;
        for (sample, reference_sample) in self.samples.iter().zip(&reference.samples) {
            if sample.coefficients.len() != reference_sample.coefficients.len() {
                return Err(Error::DimensionMismatch {
                    context: "invariant coefficients",
                    left: sample.coefficients.len(),
                    right: reference_sample.coefficients.len(),
                });
            }
            for (c, c_ref) in sample
                .coefficients
                .iter()
                .zip(&reference_sample.coefficients)
            {
                let drift = (c - c_ref).norm() / (1.0 + c_ref.norm());
                max_drift = max_drift.max(drift);
            }
        }
        Ok(max_drift)
    }
}

#[derive(Debug, Clone)]
pub struct TrajectoryStep {
    pub step: usize,
    pub invariant_drift: f64,
}

#[derive(Debug)]
pub struct Trajectory {
    pub steps: Vec<TrajectoryStep>,
    pub max_drift: f64,
    pub final_chain: Chain,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lax::verify_refactorization;
    use crate::linalg::{fro_norm, Covector, Vector};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn tols() -> Tolerances {
        Tolerances::default()
    }

    fn random_rank_one(rng: &mut ChaCha8Rng, n: usize) -> ProjectorState {
        loop {
            let xi = Vector::from_entries(
                (0..n)
                    .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                    .collect(),
            )
            .unwrap();
            let eta = Covector::from_entries(
                (0..n)
                    .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                    .collect(),
            )
            .unwrap();
            if crate::linalg::pairing(&xi, &eta).unwrap().norm() > 0.2 * xi.norm() * eta.norm() {
                return ProjectorState::from_pair(&xi, &eta, &tols()).unwrap();
            }
        }
    }

    fn random_chain(seed: u64, sites: usize, n: usize) -> Chain {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let lambdas: Vec<Complex64> = {
            let mut out: Vec<Complex64> = Vec::new();
            while out.len() < sites {
                let candidate = Complex64::from_polar(
                    rng.gen_range(0.5..2.0),
                    rng.gen_range(0.0..std::f64::consts::TAU),
                );
                if out
                    .iter()
                    .all(|l| (l - candidate).norm() >= 0.1 && (l + candidate).norm() >= 0.1)
                {
                    out.push(candidate);
                }
            }
            out
        };
        Chain::new(
            lambdas
                .into_iter()
                .map(|lambda| ChainSite {
                    projector: random_rank_one(&mut rng, n),
                    lambda,
                })
                .collect(),
        )
        .unwrap()
    }

    fn random_hermitian_chain(seed: u64, lambdas: &[f64], n: usize) -> Chain {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Chain::new(
            lambdas
                .iter()
                .map(|&l| {
                    let k = 1 + (rng.gen_range(0..(n as u32 - 1)) as usize);
                    let cols = DMatrix::from_fn(n, k, |_, _| {
                        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
                    });
                    let image = crate::linalg::Subspace::from_columns(&cols, 1e-10).unwrap();
                    ChainSite {
                        projector: ProjectorState::orthogonal(&image),
                        lambda: c(l, 0.0),
                    }
                })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn hermitian_chain_conserves_invariants_over_long_runs() {
        // Hermitian sites with real velocities stay on the (compact)
        // Grassmannian, so the orbit never leaves the well-conditioned
        // region and the invariants hold over many sweeps.
        let chain = random_hermitian_chain(11, &[1.5, 0.7, -1.1, 0.9, 1.9], 4);
        let grid = ZetaGrid::circle(&chain.lambdas(), 8, 2).unwrap();
        let trajectory = chain.iterate(100, &grid, &tols()).unwrap();
        assert!(
            trajectory.max_drift < 1e-9,
            "drift = {:e}",
            trajectory.max_drift
        );
        for site in trajectory.final_chain.sites() {
            assert!(site.projector.is_hermitian());
        }
    }

    #[test]
    fn empty_chain_monodromy_is_identity() {
        let chain = Chain::new(vec![]).unwrap();
        let m = chain.monodromy(c(2.0, 1.0), 0.1).unwrap();
        assert!(fro_norm(&(m - DMatrix::identity(1, 1))) < 1e-15);
    }

    #[test]
    fn single_site_monodromy_is_the_lax_factor() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let p = random_rank_one(&mut rng, 3);
        let lambda = c(1.3, 0.2);
        let chain = Chain::new(vec![ChainSite {
            projector: p.clone(),
            lambda,
        }])
        .unwrap();
        let zeta = c(4.0, -1.0);
        let m = chain.monodromy(zeta, 0.1).unwrap();
        let expected = lax_matrix(p.matrix(), lambda, zeta);
        assert!(fro_norm(&(m - expected)) < 1e-14);
    }

    #[test]
    fn zero_projector_sites_give_identity_monodromy() {
        let chain = Chain::new(vec![
            ChainSite {
                projector: ProjectorState::zero(2),
                lambda: c(1.0, 0.0),
            },
            ChainSite {
                projector: ProjectorState::zero(2),
                lambda: c(0.6, 0.0),
            },
        ])
        .unwrap();
        let m = chain.monodromy(c(5.0, 0.0), 0.05).unwrap();
        assert!(fro_norm(&(m - DMatrix::identity(2, 2))) < 1e-15);
    }

    #[test]
    fn char_poly_of_zero_projector_chain_is_binomial() {
        // Monodromy is the identity, char poly (s - 1)^n.
        let chain = Chain::new(vec![ChainSite {
            projector: ProjectorState::zero(3),
            lambda: c(1.0, 0.0),
        }])
        .unwrap();
        let grid = ZetaGrid::circle(&chain.lambdas(), 4, 0).unwrap();
        let invariants = chain.spectral_invariants(&grid).unwrap();
        for sample in &invariants.samples {
            let expected = [1.0, -3.0, 3.0, -1.0];
            for (coefficient, want) in sample.coefficients.iter().zip(expected) {
                assert!((coefficient - c(want, 0.0)).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn full_rank_site_char_poly_scales_binomially() {
        // P = I: monodromy is ((z+l)/(z-l)) I, char poly (s - w)^n with
        // w the scalar factor.
        let lambda = c(0.8, 0.0);
        let chain = Chain::new(vec![ChainSite {
            projector: ProjectorState::identity(2),
            lambda,
        }])
        .unwrap();
        let zeta = c(3.0, 1.0);
        let m = chain.monodromy(zeta, 0.05).unwrap();
        let coefficients = char_poly_coefficients(&m);
        let w = (zeta + lambda) / (zeta - lambda);
        assert!((coefficients[1] + 2.0 * w).norm() < 1e-13);
        assert!((coefficients[2] - w * w).norm() < 1e-13);
    }

    #[test]
    fn transfer_on_single_site_is_identity() {
        let chain = random_chain(5, 1, 3);
        let out = chain.transfer_map(&tols()).unwrap();
        assert_eq!(out.len(), 1);
        assert!(
            fro_norm(&(out.sites()[0].projector.matrix() - chain.sites()[0].projector.matrix()))
                < 1e-15
        );
    }

    #[test]
    fn shared_projector_chain_is_a_fixed_point() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let p = random_rank_one(&mut rng, 3);
        let chain = Chain::new(
            [c(1.5, 0.0), c(0.7, 0.0), c(1.1, 0.0)]
                .into_iter()
                .map(|lambda| ChainSite {
                    projector: p.clone(),
                    lambda,
                })
                .collect(),
        )
        .unwrap();
        let out = chain.transfer_map(&tols()).unwrap();
        for site in out.sites() {
            assert!(fro_norm(&(site.projector.matrix() - p.matrix())) < 1e-10);
        }
        let grid = ZetaGrid::circle(&chain.lambdas(), 8, 0).unwrap();
        let trajectory = chain.iterate(10, &grid, &tols()).unwrap();
        assert!(trajectory.max_drift < 1e-10);
    }

    #[test]
    fn transfer_conjugates_the_monodromy() {
        let chain = random_chain(42, 4, 3);
        let tols = tols();
        let out = chain.transfer_map(&tols).unwrap();
        let conjugator_site = &out.sites()[0];
        let grid = ZetaGrid::circle(&chain.lambdas(), 8, 1).unwrap();
        for &zeta in grid.points() {
            let m = chain.monodromy(zeta, grid.pole_margin()).unwrap();
            let m_new = out.monodromy(zeta, grid.pole_margin()).unwrap();
            let conjugator = lax_matrix(
                conjugator_site.projector.matrix(),
                conjugator_site.lambda,
                zeta,
            );
            let inverse = lax_matrix(
                conjugator_site.projector.matrix(),
                -conjugator_site.lambda,
                zeta,
            );
            let defect = fro_norm(&(&m_new - &conjugator * &m * &inverse));
            assert!(
                defect <= 1e-9 * (1.0 + fro_norm(&m)),
                "conjugation defect {defect:e} at zeta = {zeta}"
            );
        }
    }

    #[test]
    fn invariants_conserved_over_transfer_steps() {
        // General (non-Hermitian, complex-velocity) orbits are unbounded on
        // the projector variety, so conditioning limits how far conservation
        // can be tracked; a short run stays far below tolerance.
        let chain = random_chain(7, 4, 3);
        let grid = ZetaGrid::circle(&chain.lambdas(), 8, 2).unwrap();
        let trajectory = chain.iterate(6, &grid, &tols()).unwrap();
        assert!(
            trajectory.max_drift < 1e-10,
            "drift = {:e}",
            trajectory.max_drift
        );
        assert_eq!(trajectory.steps.len(), 7);
        assert_eq!(trajectory.steps[0].invariant_drift, 0.0);
    }

    #[test]
    fn zero_steps_give_a_single_record_with_zero_drift() {
        let chain = random_chain(2, 3, 3);
        let grid = ZetaGrid::circle(&chain.lambdas(), 4, 0).unwrap();
        let trajectory = chain.iterate(0, &grid, &tols()).unwrap();
        assert_eq!(trajectory.steps.len(), 1);
        assert_eq!(trajectory.max_drift, 0.0);
    }

    #[test]
    fn determinant_matches_product_formula_along_a_trajectory() {
        let mut chain = random_chain(13, 3, 4);
        let grid = ZetaGrid::circle(&chain.lambdas(), 6, 3).unwrap();
        for _step in 0..=5 {
            for &zeta in grid.points() {
                let m = chain.monodromy(zeta, grid.pole_margin()).unwrap();
                let det = m.determinant();
                let product = chain.determinant_product(zeta);
                assert!(
                    (det - product).norm() <= 1e-10 * (1.0 + product.norm()),
                    "det defect at zeta = {zeta}"
                );
            }
            chain = chain.transfer_map(&tols()).unwrap();
        }
    }

    #[test]
    fn collision_with_site_one_reported_with_index() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let chain = Chain::new(vec![
            ChainSite {
                projector: random_rank_one(&mut rng, 2),
                lambda: c(1.0, 0.0),
            },
            ChainSite {
                projector: random_rank_one(&mut rng, 2),
                lambda: c(-1.0, 0.0),
            },
        ])
        .unwrap();
        match chain.transfer_map(&tols()) {
            Err(Error::AtSite { site, source }) => {
                assert_eq!(site, 1);
                assert!(matches!(*source, Error::ParameterCollision { .. }));
            }
            other => panic!("expected site-indexed collision, got {other:?}"),
        }
    }

    #[test]
    fn pairwise_refactorization_certificates_hold_along_a_sweep() {
        let chain = random_chain(21, 4, 3);
        let tols = tols();
        let grid = ZetaGrid::circle(&chain.lambdas(), 16, 4).unwrap();
        let lambda1 = chain.sites()[0].lambda;
        let mut moving = chain.sites()[0].projector.clone();
        for site in &chain.sites()[1..] {
            let (advanced, updated) =
                projector_map(lambda1, &moving, site.lambda, &site.projector, &tols).unwrap();
            let residual = verify_refactorization(
                lambda1,
                &moving,
                site.lambda,
                &site.projector,
                &advanced,
                &updated,
                &grid,
            )
            .unwrap();
            assert!(residual < 1e-10, "residual = {residual:e}");
            moving = advanced;
        }
    }
}
