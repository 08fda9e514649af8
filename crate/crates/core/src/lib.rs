//! Finite-level tools for graph C*-algebra spectral triples and the
//! corepresentation of the quantum automorphism group on path space.

pub mod corep;
pub mod cuntz;
pub mod error;
pub mod exact;
pub mod fixtures;
pub mod graph;
pub mod hilbert;
pub mod nc;
pub mod perron;
pub mod report;

pub use error::{Error, Result};
pub use graph::{parse_graph, Convention, DirectedGraph, Path};
