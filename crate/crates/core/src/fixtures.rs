//! Graphs used throughout the test suites and examples.
//!
//! The text sources live in `graphs/` next to the crate manifest so the
//! command-line tool and the library agree on them.

use crate::graph::{parse_graph, DirectedGraph};

pub const CYCLE3: &str = include_str!("../graphs/cycle3.graph");
pub const K3: &str = include_str!("../graphs/k3.graph");
pub const ASYM4: &str = include_str!("../graphs/asym4.graph");
pub const CYCLE2: &str = include_str!("../graphs/cycle2.graph");

/// Directed 3-cycle `1 → 2 → 3 → 1`.
pub fn cycle3() -> DirectedGraph {
    parse_graph(CYCLE3).expect("bundled graph parses")
}

/// Complete directed graph on three vertices without loops.
pub fn k3() -> DirectedGraph {
    parse_graph(K3).expect("bundled graph parses")
}

/// Four vertices, nine edges, trivial automorphism group, `ρ = 2`,
/// Perron–Frobenius vector `(1/3, 1/3, 2/9, 1/9)`.
pub fn asym4() -> DirectedGraph {
    parse_graph(ASYM4).expect("bundled graph parses")
}

/// Two vertices joined in both directions.
pub fn cycle2() -> DirectedGraph {
    parse_graph(CYCLE2).expect("bundled graph parses")
}

/// One vertex carrying `n` loops `e1 … en`.
pub fn cuntz(n: usize) -> DirectedGraph {
    let edges: Vec<(String, String, String)> = (1..=n)
        .map(|i| (format!("e{i}"), "1".to_string(), "1".to_string()))
        .collect();
    DirectedGraph::new(format!("cuntz{n}"), &["1".to_string()], &edges)
        .expect("cuntz graph is well formed")
}

/// The graphs every convention-selection run consults.
pub fn convention_test_graphs() -> Vec<DirectedGraph> {
    vec![cycle3(), k3(), asym4(), cuntz(2), cuntz(3)]
}
