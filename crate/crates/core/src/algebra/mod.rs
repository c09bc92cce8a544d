//! Exact integer linear algebra: matrices, Smith normal form, homology and
//! Mayer–Vietoris checking.

pub mod homology;
pub mod matrix;
pub mod mayer_vietoris;
pub mod presentation;
pub mod snf;

pub use homology::{
    betti_numbers, boundary_matrix, boundary_sparse, boundary_squares_vanish, homology, homology_presentation,
    Coefficients, HomologyGroup,
};
pub use matrix::IntegerMatrix;
pub use mayer_vietoris::{mayer_vietoris_check, CoverError, MayerVietorisReport};
pub use presentation::{GroupShape, Presentation};
pub use snf::{invariant_factors, smith_normal_form, SnfDecomposition, SparseMatrix};
