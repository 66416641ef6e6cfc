//! Gabor systems with Hermite windows over arbitrary planar lattices.
//!
//! The crate builds dual windows for `G(H_n, Λ)` in Fock space from powers
//! of the Weierstrass σ-function of the adjoint lattice, certifies them
//! through the Wexler–Raz biorthogonality relations, and provides
//! frame-bound estimates, reconstruction and a Zak-transform criterion for
//! the critical case.

pub mod cli;
pub mod contour;
pub mod dual_window;
pub mod elliptic;
pub mod error;
pub mod frame;
pub mod hermite_bargmann;
pub mod lattice;
pub mod quadrature;
pub mod zak;

pub use error::{GaborError, Result};
pub use lattice::Lattice2D;
