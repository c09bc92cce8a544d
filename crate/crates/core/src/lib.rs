//! Simplicial models of Reeb spaces and branched manifolds, with exact
//! integral homology, cohomology rings, Mayer–Vietoris checking, collapse
//! certificates and PL Reeb graphs.

pub mod algebra;
pub mod branched;
pub mod cohomology;
pub mod complex;
pub mod reeb;
pub mod verify;

pub use complex::{SimplicialComplex, SimplicialMap, VertexId};
