//! Noncommutative polynomials over quantum-group generators, relation sets,
//! a rewriting engine that proves identities, and numeric representations
//! that witness non-identities.

pub mod generator;
pub mod normal;
pub mod parse;
pub mod poly;
pub mod provider;
pub mod relations;

pub use generator::{Gen, Word};
pub use normal::{
    comultiply, is_zero, normal_form, normal_form_search, normal_form_traced, tensor_normal_form, tensor_normal_form_traced,
    witness_nonzero, Trace, TraceSummary, Verdict,
};
pub use parse::parse_poly;
pub use poly::{NCPoly, TensorPoly};
pub use provider::{classical_rep, free_unitary_portfolio, symmetric_group_rep, RepresentationProvider};
pub use relations::{free_unitary_relations, magic_relations, qaut_relations, RelationSet};
