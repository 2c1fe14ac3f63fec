//! Random flag complexes and the collapse pipeline.
//!
//! The crate builds clique complexes of random graphs, collapses them towards
//! dimension `d`, counts the surviving cross-polytope boundaries, computes
//! homology (Betti numbers over prime fields and the rationals, torsion via
//! Smith normal form) and runs seeded Monte Carlo experiments over all of it.

mod bigint_serde;
pub mod collapse;
pub mod complex;
pub mod density;
pub mod dual;
pub mod error;
pub mod graph;
pub mod harness;
pub mod homology;
pub mod models;

pub use complex::{clique_complex, flag_closure, link, DimCap, Face, SimplicialComplex};
pub use dual::{dual_graph, strongly_connected_components, DualGraph};
pub use error::{Error, Result};
pub use graph::{Graph, Vertex};
