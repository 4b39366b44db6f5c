//! Spectral mass functions `M(λ)` and isotypic eigenvalue splitting.
//!
//! The crate is organised by the kind of space being studied:
//!
//! | Module | Contents |
//! |--------|----------|
//! | [`numerics`] | quadrature, series summation, Bessel `J_n`, Jacobi eigensolver, seeded RNG |
//! | [`homogeneous`] | Euclidean, lattice, hyperbolic, Heisenberg and tree spectral masses; heat transforms |
//! | [`domains`] | half-line and disjoint-cube averages |
//! | [`graph_symmetry`] | weighted graph Laplacians, finite group actions, isotypic counts, the boundary bound |
//! | [`lie_symmetry`] | product-space counts and the SO(2) component masses on the plane |
//! | [`fractal_sg`] | Sierpinski gasket graphs, D₃ splitting, Weyl ratios, decimation |
//! | [`covering`] | circle covers and the line covering the circle |
//! | [`verify`] | the acceptance checks shared by the test suite and `spectramass verify` |

pub mod covering;
pub mod domains;
mod error;
pub mod fractal_sg;
pub mod graph_symmetry;
pub mod homogeneous;
pub mod lie_symmetry;
pub mod numerics;
pub mod verify;

pub use error::{Error, Result};
