//! Complex dense linear algebra primitives: vector/covector pairings,
//! subspaces with canonical bases, projector construction and
//! decomposition, numeric rank and null spaces.

mod jacobi;
mod numrank;
mod projector;
mod subspace;
mod vectors;

pub use numrank::{
    numeric_image, numeric_image_with_dim, numeric_kernel, numeric_kernel_with_dim, numeric_rank,
    singular_values,
};
pub use projector::{fro_norm, projector_distance, ProjectorState};
pub use subspace::Subspace;
pub use vectors::{outer, pairing, Covector, Vector};


#[cfg(test)]
mod proptests {
    use super::*;
    use crate::tol::Tolerances;
    use nalgebra::DMatrix;
    use num_complex::Complex64;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_projector(seed: u64, n: usize, k: usize) -> ProjectorState {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let tols = Tolerances::default();
        loop {
            let sample = |rng: &mut ChaCha8Rng, cols: usize| {
                DMatrix::from_fn(n, cols, |_, _| {
                    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
                })
            };
            let image = match Subspace::from_columns(&sample(&mut rng, k), tols.rank_tol) {
                Ok(s) => s,
                Err(_) => continue,
            };
            let kernel = match Subspace::from_columns(&sample(&mut rng, n - k), tols.rank_tol) {
                Ok(s) => s,
                Err(_) => continue,
            };
            match ProjectorState::from_subspaces(&image, &kernel, &tols) {
                Ok(p) => return p,
                Err(_) => continue,
            }
        }
    }

    proptest! {
        #[test]
        fn random_projectors_satisfy_invariants(seed in 0u64..256, n in 2usize..6) {
            let k = 1 + (seed as usize) % (n - 1);
            let p = random_projector(seed, n, k);
            let tols = Tolerances::default();
            prop_assert!(p.idempotency_defect() <= tols.idem_tol);
            prop_assert_eq!(p.rank(), p.image().dim());
            prop_assert_eq!(p.kernel().dim(), n - k);
            // trace(P) ~ rank within idem_tol * n
            let trace = p.matrix().trace();
            prop_assert!((trace - Complex64::new(k as f64, 0.0)).norm() <= tols.idem_tol * n as f64);
        }

        #[test]
        fn subspace_roundtrip_reproduces_projector(seed in 0u64..256, n in 2usize..6) {
            let k = 1 + (seed as usize) % (n - 1);
            let p = random_projector(seed, n, k);
            let tols = Tolerances::default();
            let rebuilt = ProjectorState::from_subspaces(p.image(), p.kernel(), &tols).unwrap();
            let diff = fro_norm(&(rebuilt.matrix() - p.matrix()));
            prop_assert!(diff <= tols.idem_tol * (1.0 + fro_norm(p.matrix())));
        }

        #[test]
        fn pair_matches_subspace_construction(seed in 0u64..256, n in 2usize..6) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9);
            let tols = Tolerances::default();
            let xi = Vector::from_entries((0..n).map(|_| {
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            }).collect()).unwrap();
            let eta = Covector::from_entries((0..n).map(|_| {
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            }).collect()).unwrap();
            prop_assume!(pairing(&xi, &eta).unwrap().norm() > 0.1 * xi.norm() * eta.norm());
            let from_pair = ProjectorState::from_pair(&xi, &eta, &tols).unwrap();
            let from_spaces =
                ProjectorState::from_subspaces(from_pair.image(), from_pair.kernel(), &tols).unwrap();
            let diff = fro_norm(&(from_spaces.matrix() - from_pair.matrix()));
            prop_assert!(diff <= 1e-10 * (1.0 + fro_norm(from_pair.matrix())));
        }

        #[test]
        fn orthogonal_projector_is_self_adjoint_and_idempotent(seed in 0u64..256, n in 2usize..6) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x51ed_2701);
            let k = 1 + (seed as usize) % n;
            let cols = DMatrix::from_fn(n, k, |_, _| {
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            });
            if let Ok(sub) = Subspace::from_columns(&cols, 1e-10) {
                let p = ProjectorState::orthogonal(&sub);
                prop_assert!(p.hermitian_defect() < 1e-14);
                let m = p.matrix();
                let complement_product = m * (DMatrix::identity(n, n) - m);
                prop_assert!(fro_norm(&complement_product) < 1e-13);
            }
        }
    }
}
