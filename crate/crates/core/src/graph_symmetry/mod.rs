//! Graph Laplacians with finite symmetry groups: isotypic eigenvalue
//! counts, fundamental domains and the boundary bound
//! `|N_j - (d_j²/#G) N| ≤ d_j² #∂F`.

mod action;
mod domain;
mod graph;
mod group;
mod isotypic;
mod json;
mod lattice_d4;
mod torus;

pub use action::{GroupAction, SymmetricSystem};
pub use domain::{lemma51_check, FundamentalDomain, Lemma51Report, Lemma51Row};
pub use graph::{build_laplacian, laplacian_spectrum, minmax_count, rayleigh, WeightedGraph};
pub use group::{FiniteGroup, GroupKind, Irrep, MAX_GROUP_PARAM};
pub use isotypic::{
    isotypic_counts, isotypic_counts_with, isotypic_projector, IrrepSummary, IsotypicCount,
    SpectralLevel, TRACE_ROUNDING_TOL,
};
pub use json::{load_system, parse_system, GraphFile, LoadedSystem, VertexId};
pub use lattice_d4::{d4_trivial_integral, lattice_d4_trivial_mass, D4MonteCarlo, D4_SAMPLE_BOX};
pub use torus::{torus_d4_counts, OrbitSplit, TorusLevel, TorusReport, TORUS_LAMBDA_CAP};
