//! Shared numerical kernels.

mod bessel;
mod eigen;
mod matrix;
mod quadrature;
mod rng;
mod series;

pub use bessel::{bessel_j, bessel_j_upto};
pub use eigen::{sym_eig, sym_eig_with, EigenDecomposition, EigenOptions, DEFAULT_SIZE_CAP};
pub use matrix::Matrix;
pub use quadrature::{integrate, integrate_panels, Quadrature};
pub use rng::SeededRng;
pub use series::{sum_series, sum_series_bracketed, SERIES_ITERATION_CAP};
