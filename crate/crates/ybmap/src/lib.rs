//! Yang-Baxter maps arising from matrix KdV soliton interaction.
//!
//! When two matrix KdV solitons collide, their internal polarizations are
//! exchanged by a map that satisfies the (parameter-dependent) Yang-Baxter
//! relation: the outcome of a multi-soliton interaction does not depend on
//! the order of pairwise collisions. This crate implements the three
//! closed-form map families, the rational Lax matrix whose refactorization
//! encodes them, and the verification machinery tying everything together:
//!
//! - [`linalg`] — complex dense primitives: vector/covector pairings,
//!   subspaces with canonical bases and principal angles, projector
//!   construction and decomposition, numeric kernels and images (via an
//!   in-crate one-sided Jacobi SVD);
//! - [`maps`] — the rank-one vector map on `(xi, eta)` polarizations, the
//!   projector map acting through kernel/image updates, and the Hermitian
//!   map on Grassmannian subspaces;
//! - [`lax`] — the Lax matrix `A(P, l; z) = I + (2l/(z - l)) P`, its
//!   inverse property `A(P, -l; z) = A(P, l; z)^{-1}`, a numeric
//!   refactorization oracle independent of the closed-form updates, and
//!   residual certificates sampled over a [`lax::ZetaGrid`];
//! - [`verify`] — seeded, deterministic Yang-Baxter and reversibility
//!   campaigns over any registered map family;
//! - [`chain`] — periodic chains with Lax monodromy, transfer-map
//!   dynamics, and conserved characteristic-polynomial invariants;
//! - [`kdv`] — the one-soliton field `U = 2 l^2 sech^2(l x - 4 l^3 t) P`
//!   and its PDE residual, with a finite-difference oracle;
//! - [`json`] / [`cli`] — wire formats and the `ybmap` command-line
//!   front end.
//!
//! The `examples/` directory demonstrates each capability end to end; the
//! acceptance suite in `tests/acceptance.rs` pins the numeric tolerances.

pub mod chain;
pub mod cli;
pub mod error;
pub mod json;
pub mod kdv;
pub mod lax;
pub mod linalg;
pub mod maps;
pub mod tol;
pub mod verify;

pub use error::{Error, Result};
pub use tol::Tolerances;

/// Scalar type used throughout: double-precision complex numbers.
pub use num_complex::Complex64;
