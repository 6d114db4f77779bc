//! Matrix KdV residual of the projector soliton ansatz.
//!
//! Scans the analytic residual of `U = 2 l^2 sech^2(l x - 4 l^3 t) P` over
//! an `(x, t)` grid for projector amplitudes of several ranks, shows the
//! finite-difference oracle converging at second order, and breaks the
//! cancellation on purpose with a non-idempotent amplitude.
//!
//! Run with `cargo run --example kdv_residual_scan`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ybmap::kdv::{fd_convergence_order, residual_scan, ScanGrid};
use ybmap::linalg::{ProjectorState, Subspace};
use ybmap::Tolerances;

fn main() -> ybmap::Result<()> {
    let tols = Tolerances::default();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let grid = ScanGrid::default();
    let lambda = 1.3;

    println!(
        "relative residual of the soliton ansatz over a {}x{} grid, lambda = {lambda}:",
        grid.x_samples, grid.t_samples
    );
    let n = 5;
    for k in 0..=n {
        let p = if k == 0 {
            ProjectorState::zero(n)
        } else if k == n {
            ProjectorState::identity(n)
        } else {
            let cols = DMatrix::from_fn(n, k, |_, _| {
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            });
            ProjectorState::orthogonal(&Subspace::from_columns(&cols, tols.rank_tol)?)
        };
        let scan = residual_scan(p.matrix(), lambda, &grid)?;
        println!("  rank {k}: {:.3e}", scan.max_relative_residual);
    }

    let p = {
        let cols = DMatrix::from_fn(3, 1, |_, _| {
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        ProjectorState::orthogonal(&Subspace::from_columns(&cols, tols.rank_tol)?)
    };
    println!("\nfinite-difference oracle, observed convergence order between h and h/2:");
    for h in [1e-2, 1e-3] {
        let order = fd_convergence_order(p.matrix(), 1.5, h);
        println!("  h = {h:.0e}: order {order:.4}");
    }

    // Doubling the amplitude scales the quadratic terms by 4 but the linear
    // ones by 2: the equation is no longer satisfied.
    let doubled = p.matrix() * Complex64::new(2.0, 0.0);
    let scan = residual_scan(&doubled, 1.0, &grid)?;
    println!(
        "\nnon-idempotent amplitude 2P: max relative residual {:.3e} near (x, t) = ({:.2}, {:.2})",
        scan.max_relative_residual, scan.argmax_x, scan.argmax_t
    );
    Ok(())
}
