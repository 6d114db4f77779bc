//! Tolerance knobs shared by every numeric decision in the crate.
//!
//! All thresholds are relative: rank decisions compare against the largest
//! singular value, residuals are normalized by `1 + ||.||_F`. Defaults are
//! sized for double precision at ambient dimensions up to 64.

/// Bundle of numeric tolerances. Construct with [`Tolerances::default`] and
/// override individual fields as needed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Singular values below `rank_tol * sigma_max` count as zero.
    pub rank_tol: f64,
    /// Projector idempotency / hermiticity defect bound, relative to `1 + ||P||_F`.
    pub idem_tol: f64,
    /// Largest principal angle (radians) at which two subspaces compare equal.
    pub angle_tol: f64,
    /// A pairing with `|(xi, eta)| <= pairing_tol * ||xi|| * ||eta||` is degenerate.
    pub pairing_tol: f64,
    /// Lambdas with `|l1 -+ l2| <= param_tol * (|l1| + |l2|)` collide.
    pub param_tol: f64,
    /// Relative residual bound for refactorization certificates.
    pub refact_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            rank_tol: 1e-10,
            idem_tol: 1e-10,
            angle_tol: 1e-8,
            pairing_tol: 1e-12,
            param_tol: 1e-12,
            refact_tol: 1e-9,
        }
    }
}

impl Tolerances {
    /// True when `l1` is too close to `l2` or to `-l2` for a refactorization
    /// to be well posed.
    pub fn lambdas_collide(&self, l1: num_complex::Complex64, l2: num_complex::Complex64) -> bool {
        let scale = self.param_tol * (l1.norm() + l2.norm());
        (l1 - l2).norm() <= scale || (l1 + l2).norm() <= scale
    }
}
