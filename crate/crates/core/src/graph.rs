//! Finite directed graphs, their validation profiles, and finite paths.
//!
//! Edges carry a range and a source vertex. An edge points from its source to
//! its range, and a path `λ₁λ₂…λₖ` is composable when `r(λᵢ₊₁) = s(λᵢ)`, so
//! paths are read right to left. Degree-0 paths are vertices.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use petgraph::algo::kosaraju_scc;
use petgraph::graph::DiGraph;
use serde::Serialize;

use crate::error::{Error, Result};

/// Index of a vertex in declaration order.
pub type VertexIx = usize;
/// Index of an edge in declaration order.
pub type EdgeIx = usize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Edge {
    pub id: String,
    pub range: VertexIx,
    pub source: VertexIx,
}

/// A finite directed graph with range and source maps.
///
/// Vertices and edges keep the order in which they were declared; every
/// index-based ordering in the crate (path enumeration, bases, generator
/// indices) derives from it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DirectedGraph {
    name: String,
    vertices: Vec<String>,
    edges: Vec<Edge>,
    #[serde(skip)]
    vertex_lookup: HashMap<String, VertexIx>,
}

impl DirectedGraph {
    /// Builds a graph from vertex ids and `(edge id, range id, source id)` triples.
    pub fn new<S: AsRef<str>>(
        name: impl Into<String>,
        vertices: &[S],
        edges: &[(S, S, S)],
    ) -> Result<Self> {
        let mut builder = GraphBuilder::new(name);
        for v in vertices {
            builder.vertex(v.as_ref(), 0)?;
        }
        for (id, r, s) in edges {
            builder.edge(id.as_ref(), r.as_ref(), s.as_ref(), 0)?;
        }
        Ok(builder.finish())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_ids(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_id(&self, v: VertexIx) -> &str {
        &self.vertices[v]
    }

    pub fn vertex_index(&self, id: &str) -> Option<VertexIx> {
        self.vertex_lookup.get(id).copied()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeIx) -> &Edge {
        &self.edges[e]
    }

    pub fn edge_index(&self, id: &str) -> Option<EdgeIx> {
        self.edges.iter().position(|e| e.id == id)
    }

    pub fn range(&self, e: EdgeIx) -> VertexIx {
        self.edges[e].range
    }

    pub fn source(&self, e: EdgeIx) -> VertexIx {
        self.edges[e].source
    }

    /// `A[v][w]` = number of edges with range `v` and source `w`.
    pub fn adjacency_matrix(&self) -> Vec<Vec<u64>> {
        let n = self.vertex_count();
        let mut a = vec![vec![0u64; n]; n];
        for e in &self.edges {
            a[e.range][e.source] += 1;
        }
        a
    }

    /// True when some edge has range `r` and source `s`.
    pub fn has_edge(&self, r: VertexIx, s: VertexIx) -> bool {
        self.edges.iter().any(|e| e.range == r && e.source == s)
    }

    /// Edges whose range is `v`, in declaration order.
    pub fn edges_with_range(&self, v: VertexIx) -> impl Iterator<Item = EdgeIx> + '_ {
        self.edges
            .iter()
            .enumerate()
            .filter(move |(_, e)| e.range == v)
            .map(|(i, _)| i)
    }

    /// Edges whose source is `v`, in declaration order.
    pub fn edges_with_source(&self, v: VertexIx) -> impl Iterator<Item = EdgeIx> + '_ {
        self.edges
            .iter()
            .enumerate()
            .filter(move |(_, e)| e.source == v)
            .map(|(i, _)| i)
    }

    /// Canonical text form; parsing it yields an equal graph.
    pub fn to_graph_text(&self) -> String {
        let mut out = format!("graph {}\n", self.name);
        for v in &self.vertices {
            out.push_str(&format!("v {v}\n"));
        }
        for e in &self.edges {
            out.push_str(&format!(
                "e {} {} {}\n",
                e.id, self.vertices[e.range], self.vertices[e.source]
            ));
        }
        out
    }

    /// All degree-`k` paths, lexicographic in edge declaration order.
    ///
    /// For `k = 0` this is the vertex list.
    pub fn enumerate_paths(&self, k: usize) -> Vec<Path> {
        if k == 0 {
            return (0..self.vertex_count()).map(Path::vertex).collect();
        }
        let mut out = Vec::new();
        let mut stack: Vec<EdgeIx> = Vec::with_capacity(k);
        self.extend_paths(k, &mut stack, &mut out);
        out
    }

    fn extend_paths(&self, k: usize, stack: &mut Vec<EdgeIx>, out: &mut Vec<Path>) {
        if stack.len() == k {
            let edges = stack.clone();
            let range = self.range(edges[0]);
            let source = self.source(edges[k - 1]);
            out.push(Path {
                edges,
                range,
                source,
            });
            return;
        }
        for (ix, e) in self.edges.iter().enumerate() {
            if let Some(&last) = stack.last() {
                if e.range != self.source(last) {
                    continue;
                }
            }
            stack.push(ix);
            self.extend_paths(k, stack, out);
            stack.pop();
        }
    }

    /// The single-edge path `e`.
    pub fn edge_path(&self, e: EdgeIx) -> Path {
        Path {
            edges: vec![e],
            range: self.range(e),
            source: self.source(e),
        }
    }

    /// Builds a path from an edge word, checking composability.
    pub fn path(&self, edges: &[EdgeIx]) -> Result<Path> {
        if edges.is_empty() {
            return Err(Error::InvalidPath("empty edge word; use Path::vertex".into()));
        }
        for w in edges.windows(2) {
            if self.range(w[1]) != self.source(w[0]) {
                return Err(Error::InvalidPath(format!(
                    "edges {} and {} are not composable",
                    self.edges[w[0]].id, self.edges[w[1]].id
                )));
            }
        }
        Ok(Path {
            edges: edges.to_vec(),
            range: self.range(edges[0]),
            source: self.source(edges[edges.len() - 1]),
        })
    }

    /// Builds a path from edge ids.
    pub fn path_from_ids(&self, ids: &[&str]) -> Result<Path> {
        let edges = ids
            .iter()
            .map(|id| {
                self.edge_index(id)
                    .ok_or_else(|| Error::InvalidPath(format!("unknown edge `{id}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        self.path(&edges)
    }

    /// Concatenation `λμ`; requires `s(λ) = r(μ)`.
    pub fn compose(&self, lambda: &Path, mu: &Path) -> Result<Path> {
        if lambda.source != mu.range {
            return Err(Error::NotComposable {
                left: self.path_label(lambda),
                right: self.path_label(mu),
            });
        }
        if lambda.is_vertex() {
            return Ok(mu.clone());
        }
        if mu.is_vertex() {
            return Ok(lambda.clone());
        }
        let mut edges = lambda.edges.clone();
        edges.extend_from_slice(&mu.edges);
        Ok(Path {
            edges,
            range: lambda.range,
            source: mu.source,
        })
    }

    /// All degree-`d(λ)+n` paths extending `λ` on the chosen side.
    ///
    /// With [`Convention::SourceAppend`] the result is `{λμ : d(μ)=n, r(μ)=s(λ)}`,
    /// with [`Convention::RangePrepend`] it is `{μλ : d(μ)=n, s(μ)=r(λ)}`.
    pub fn refine(&self, lambda: &Path, n: usize, side: Convention) -> Vec<Path> {
        if n == 0 {
            return vec![lambda.clone()];
        }
        let ext = self.enumerate_paths(n);
        match side {
            Convention::SourceAppend => ext
                .iter()
                .filter(|mu| mu.range == lambda.source)
                .map(|mu| self.compose(lambda, mu).expect("filtered composable"))
                .collect(),
            Convention::RangePrepend => ext
                .iter()
                .filter(|mu| mu.source == lambda.range)
                .map(|mu| self.compose(mu, lambda).expect("filtered composable"))
                .collect(),
        }
    }

    /// Human-readable label: edge ids joined by `.`, or `v:<id>` for a vertex.
    pub fn path_label(&self, p: &Path) -> String {
        if p.is_vertex() {
            format!("v:{}", self.vertices[p.range])
        } else {
            p.edges
                .iter()
                .map(|&e| self.edges[e].id.as_str())
                .collect::<Vec<_>>()
                .join(".")
        }
    }

    /// Runs the checks selected by `profile`.
    pub fn validate(&self, profile: ValidationProfile) -> ValidationReport {
        let mut checks = Vec::new();
        if profile.strongly_connected {
            checks.push(self.check_strongly_connected());
        }
        if profile.no_loops {
            let witness = self
                .edges
                .iter()
                .find(|e| e.range == e.source)
                .map(|e| format!("loop edge `{}` at vertex {}", e.id, self.vertices[e.range]));
            checks.push(HypothesisCheck::new(Hypothesis::NoLoops, witness));
        }
        if profile.no_multiple_edges {
            let mut seen = HashMap::new();
            let mut witness = None;
            for e in &self.edges {
                if let Some(prev) = seen.insert((e.range, e.source), &e.id) {
                    witness = Some(format!(
                        "edges `{prev}` and `{}` both have range {} and source {}",
                        e.id, self.vertices[e.range], self.vertices[e.source]
                    ));
                    break;
                }
            }
            checks.push(HypothesisCheck::new(Hypothesis::NoMultipleEdges, witness));
        }
        if profile.no_sources {
            let witness = (0..self.vertex_count())
                .find(|&v| self.edges_with_range(v).next().is_none())
                .map(|v| format!("vertex {} receives no edge", self.vertices[v]));
            checks.push(HypothesisCheck::new(Hypothesis::NoSources, witness));
        }
        ValidationReport { profile, checks }
    }

    fn check_strongly_connected(&self) -> HypothesisCheck {
        let n = self.vertex_count();
        if n == 0 {
            return HypothesisCheck::new(
                Hypothesis::StronglyConnected,
                Some("graph has no vertices".into()),
            );
        }
        let mut g = DiGraph::<(), ()>::with_capacity(n, self.edge_count());
        let nodes: Vec<_> = (0..n).map(|_| g.add_node(())).collect();
        for e in &self.edges {
            g.add_edge(nodes[e.source], nodes[e.range], ());
        }
        let sccs = kosaraju_scc(&g);
        if sccs.len() == 1 {
            return HypothesisCheck::new(Hypothesis::StronglyConnected, None);
        }
        // find a concrete unreachable pair for the witness
        let witness = (0..n).find_map(|from| {
            let seen = self.reachable_from(from);
            (0..n)
                .find(|&to| !seen[to])
                .map(|to| format!("no path from {} to {}", self.vertices[from], self.vertices[to]))
        });
        HypothesisCheck::new(Hypothesis::StronglyConnected, witness)
    }

    /// Vertices reachable from `from` by following edges source to range.
    pub fn reachable_from(&self, from: VertexIx) -> Vec<bool> {
        let mut seen = vec![false; self.vertex_count()];
        let mut queue = VecDeque::from([from]);
        seen[from] = true;
        while let Some(v) = queue.pop_front() {
            for e in self.edges_with_source(v) {
                let w = self.range(e);
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen
    }

    /// Vertex permutations `σ` with `A[σv][σw] = A[v][w]` for all `v, w`.
    ///
    /// Brute force over all permutations; intended for small graphs.
    pub fn automorphisms(&self) -> Vec<Vec<VertexIx>> {
        let a = self.adjacency_matrix();
        let n = self.vertex_count();
        let mut out = Vec::new();
        let mut perm: Vec<VertexIx> = (0..n).collect();
        permutations(&mut perm, 0, &mut |p| {
            let ok = (0..n).all(|v| (0..n).all(|w| a[p[v]][p[w]] == a[v][w]));
            if ok {
                out.push(p.to_vec());
            }
        });
        out.sort();
        out
    }

    pub fn loop_edges(&self) -> BTreeSet<EdgeIx> {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, e)| e.range == e.source)
            .map(|(i, _)| i)
            .collect()
    }
}

/// Heap-free recursive permutation walk in lexicographic-ish order.
pub(crate) fn permutations<F: FnMut(&[usize])>(perm: &mut Vec<usize>, k: usize, f: &mut F) {
    if k == perm.len() {
        f(perm);
        return;
    }
    for i in k..perm.len() {
        perm.swap(k, i);
        permutations(perm, k + 1, f);
        perm.swap(k, i);
    }
}

/// A finite path. Degree-0 paths are vertices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Path {
    edges: Vec<EdgeIx>,
    range: VertexIx,
    source: VertexIx,
}

impl Path {
    pub fn vertex(v: VertexIx) -> Self {
        Path {
            edges: Vec::new(),
            range: v,
            source: v,
        }
    }

    pub fn degree(&self) -> usize {
        self.edges.len()
    }

    pub fn is_vertex(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edges(&self) -> &[EdgeIx] {
        &self.edges
    }

    pub fn range(&self) -> VertexIx {
        self.range
    }

    pub fn source(&self) -> VertexIx {
        self.source
    }

    /// True when `self = other · β` for some path `β`.
    pub fn has_prefix(&self, other: &Path) -> bool {
        if other.is_vertex() {
            return other.range == self.range;
        }
        self.edges.starts_with(&other.edges)
    }
}

impl DirectedGraph {
    /// `λ = prefix · rest` split at `n` edges, resolving interior vertices.
    pub fn split(&self, p: &Path, n: usize) -> (Path, Path) {
        assert!(n <= p.degree());
        let head = if n == 0 {
            Path::vertex(p.range)
        } else {
            Path {
                edges: p.edges[..n].to_vec(),
                range: p.range,
                source: self.source(p.edges[n - 1]),
            }
        };
        let tail = if n == p.degree() {
            Path::vertex(p.source)
        } else {
            Path {
                edges: p.edges[n..].to_vec(),
                range: self.range(p.edges[n]),
                source: p.source,
            }
        };
        (head, tail)
    }
}

/// Which side of a path a refinement extends.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Convention {
    /// `[λ] = ⊔ [λμ]` over `r(μ) = s(λ)`: the cylinder fixes the initial segment.
    SourceAppend,
    /// `[λ] = ⊔ [μλ]` over `s(μ) = r(λ)`.
    RangePrepend,
}

impl Convention {
    pub const ALL: [Convention; 2] = [Convention::SourceAppend, Convention::RangePrepend];

    pub fn other(self) -> Self {
        match self {
            Convention::SourceAppend => Convention::RangePrepend,
            Convention::RangePrepend => Convention::SourceAppend,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Convention::SourceAppend => "source-append",
            Convention::RangePrepend => "range-prepend",
        }
    }
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Convention {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "source-append" => Ok(Convention::SourceAppend),
            "range-prepend" => Ok(Convention::RangePrepend),
            other => Err(Error::Usage(format!("unknown convention `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Hypothesis {
    StronglyConnected,
    NoLoops,
    NoMultipleEdges,
    NoSources,
}

/// Independent flags for each graph hypothesis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ValidationProfile {
    pub strongly_connected: bool,
    pub no_loops: bool,
    pub no_multiple_edges: bool,
    pub no_sources: bool,
}

impl ValidationProfile {
    /// Hypotheses under which the quantum automorphism group acts.
    pub const AUT_PLUS: Self = ValidationProfile {
        strongly_connected: true,
        no_loops: true,
        no_multiple_edges: true,
        no_sources: true,
    };

    /// Hypotheses needed for the path-space spectral triple.
    pub const SPECTRAL_TRIPLE: Self = ValidationProfile {
        strongly_connected: true,
        no_loops: false,
        no_multiple_edges: false,
        no_sources: true,
    };
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HypothesisCheck {
    pub hypothesis: Hypothesis,
    pub passed: bool,
    pub witness: Option<String>,
}

impl HypothesisCheck {
    fn new(hypothesis: Hypothesis, witness: Option<String>) -> Self {
        HypothesisCheck {
            hypothesis,
            passed: witness.is_none(),
            witness,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub profile: ValidationProfile,
    pub checks: Vec<HypothesisCheck>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failure(&self, h: Hypothesis) -> Option<&HypothesisCheck> {
        self.checks.iter().find(|c| c.hypothesis == h && !c.passed)
    }

    pub fn ensure(&self) -> Result<()> {
        match self.checks.iter().find(|c| !c.passed) {
            None => Ok(()),
            Some(c) => Err(Error::Validation {
                hypothesis: format!("{:?}", c.hypothesis),
                witness: c.witness.clone().unwrap_or_default(),
            }),
        }
    }
}

struct GraphBuilder {
    name: String,
    vertices: Vec<String>,
    edges: Vec<Edge>,
    vertex_lookup: HashMap<String, VertexIx>,
    edge_ids: HashMap<String, usize>,
}

impl GraphBuilder {
    fn new(name: impl Into<String>) -> Self {
        GraphBuilder {
            name: name.into(),
            vertices: Vec::new(),
            edges: Vec::new(),
            vertex_lookup: HashMap::new(),
            edge_ids: HashMap::new(),
        }
    }

    fn vertex(&mut self, id: &str, line: usize) -> Result<()> {
        if self.vertex_lookup.contains_key(id) {
            return Err(Error::Parse {
                line,
                message: format!("duplicate vertex id `{id}`"),
            });
        }
        self.vertex_lookup.insert(id.to_string(), self.vertices.len());
        self.vertices.push(id.to_string());
        Ok(())
    }

    fn edge(&mut self, id: &str, r: &str, s: &str, line: usize) -> Result<()> {
        if self.edge_ids.contains_key(id) {
            return Err(Error::Parse {
                line,
                message: format!("duplicate edge id `{id}`"),
            });
        }
        let lookup = |v: &str| {
            self.vertex_lookup.get(v).copied().ok_or_else(|| Error::Parse {
                line,
                message: format!("edge `{id}` references undeclared vertex `{v}`"),
            })
        };
        let range = lookup(r)?;
        let source = lookup(s)?;
        self.edge_ids.insert(id.to_string(), self.edges.len());
        self.edges.push(Edge {
            id: id.to_string(),
            range,
            source,
        });
        Ok(())
    }

    fn finish(self) -> DirectedGraph {
        DirectedGraph {
            name: self.name,
            vertices: self.vertices,
            edges: self.edges,
            vertex_lookup: self.vertex_lookup,
        }
    }
}

/// Parses the line-oriented graph format.
///
/// ```text
/// graph <name>
/// v <id>
/// e <id> <range-vertex> <source-vertex>
/// # comment
/// ```
pub fn parse_graph(text: &str) -> Result<DirectedGraph> {
    let mut builder: Option<GraphBuilder> = None;
    let mut pending_name = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        let syntax = |msg: &str| Error::Parse {
            line,
            message: msg.to_string(),
        };
        match fields[0] {
            "graph" => {
                if fields.len() != 2 {
                    return Err(syntax("expected `graph <name>`"));
                }
                if builder.is_some() || pending_name.is_some() {
                    return Err(syntax("`graph` declared twice or after vertices"));
                }
                pending_name = Some(fields[1].to_string());
            }
            "v" => {
                if fields.len() != 2 {
                    return Err(syntax("expected `v <id>`"));
                }
                let b = builder.get_or_insert_with(|| {
                    GraphBuilder::new(pending_name.take().unwrap_or_else(|| "unnamed".into()))
                });
                b.vertex(fields[1], line)?;
            }
            "e" => {
                if fields.len() != 4 {
                    return Err(syntax("expected `e <id> <range> <source>`"));
                }
                let b = builder.as_mut().ok_or_else(|| {
                    Error::Parse {
                        line,
                        message: format!("edge `{}` references undeclared vertex `{}`", fields[1], fields[2]),
                    }
                })?;
                b.edge(fields[1], fields[2], fields[3], line)?;
            }
            other => return Err(syntax(&format!("unknown directive `{other}`"))),
        }
    }
    match builder {
        Some(b) => Ok(b.finish()),
        None => Err(Error::Parse {
            line: text.lines().count().max(1),
            message: "graph declares no vertices".into(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn parses_cycle_and_k3() {
        let c = fixtures::cycle3();
        assert_eq!((c.vertex_count(), c.edge_count()), (3, 3));
        let k = fixtures::k3();
        assert_eq!((k.vertex_count(), k.edge_count()), (3, 6));
    }

    #[test]
    fn undeclared_vertex_is_reported_with_line() {
        let text = "graph bad\nv 1\nv 2\nv 3\ne x 4 1\n";
        match parse_graph(text) {
            Err(Error::Parse { line, message }) => {
                assert_eq!(line, 5);
                assert!(message.contains("undeclared vertex `4`"), "{message}");
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn duplicate_ids_rejected() {
        assert!(matches!(
            parse_graph("v 1\nv 1\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_graph("v 1\ne a 1 1\ne a 1 1\n"),
            Err(Error::Parse { line: 3, .. })
        ));
    }

    #[test]
    fn syntax_errors_located() {
        assert!(matches!(parse_graph("v 1\nq 2\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_graph("v 1\ne a 1\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_graph("# empty\n"), Err(Error::Parse { .. })));
    }

    #[test]
    fn text_round_trip() {
        for g in [fixtures::k3(), fixtures::asym4(), fixtures::cuntz(3)] {
            assert_eq!(parse_graph(&g.to_graph_text()).unwrap(), g);
        }
    }

    #[test]
    fn adjacency_conventions() {
        let c = fixtures::cycle3();
        let a = c.adjacency_matrix();
        for row in &a {
            assert_eq!(row.iter().sum::<u64>(), 1);
        }
        for j in 0..3 {
            assert_eq!((0..3).map(|i| a[i][j]).sum::<u64>(), 1);
        }
        let k = fixtures::k3().adjacency_matrix();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(k[i][j], u64::from(i != j));
            }
        }
        assert_eq!(fixtures::cuntz(2).adjacency_matrix(), vec![vec![2]]);
    }

    #[test]
    fn validation_profiles() {
        let k = fixtures::k3();
        assert!(k.validate(ValidationProfile::AUT_PLUS).passed());
        let o2 = fixtures::cuntz(2);
        let rep = o2.validate(ValidationProfile::AUT_PLUS);
        let fail = rep.failure(Hypothesis::NoLoops).expect("loop failure");
        assert!(fail.witness.as_deref().unwrap().contains("e1"));
        assert!(o2.validate(ValidationProfile::SPECTRAL_TRIPLE).passed());

        let chain = DirectedGraph::new("chain", &["1", "2"], &[("a", "2", "1")]).unwrap();
        let rep = chain.validate(ValidationProfile::AUT_PLUS);
        assert!(rep.failure(Hypothesis::StronglyConnected).is_some());
        assert!(rep.failure(Hypothesis::NoSources).is_some());

        let multi = DirectedGraph::new(
            "multi",
            &["1", "2"],
            &[("a", "2", "1"), ("b", "2", "1"), ("c", "1", "2")],
        )
        .unwrap();
        let rep = multi.validate(ValidationProfile::AUT_PLUS);
        assert!(rep.failure(Hypothesis::NoMultipleEdges).is_some());
        assert!(rep.failure(Hypothesis::StronglyConnected).is_none());
    }

    #[test]
    fn path_enumeration_examples() {
        assert_eq!(fixtures::cycle3().enumerate_paths(5).len(), 3);
        assert_eq!(fixtures::k3().enumerate_paths(2).len(), 12);
        let verts = fixtures::asym4().enumerate_paths(0);
        assert_eq!(verts, (0..4).map(Path::vertex).collect::<Vec<_>>());
    }

    #[test]
    fn enumeration_is_lexicographic() {
        let g = fixtures::asym4();
        for k in 1..5 {
            let ps = g.enumerate_paths(k);
            assert!(ps.windows(2).all(|w| w[0].edges() < w[1].edges()));
        }
    }

    #[test]
    fn compose_examples() {
        let k = fixtures::k3();
        // e21: range 1, source 2; e32: range 2, source 3
        let e = k.path_from_ids(&["e21"]).unwrap();
        let f = k.path_from_ids(&["e32"]).unwrap();
        let ef = k.compose(&e, &f).unwrap();
        assert_eq!(ef.degree(), 2);
        assert_eq!(k.vertex_id(ef.range()), "1");
        assert_eq!(k.vertex_id(ef.source()), "3");

        let v = Path::vertex(e.range());
        assert_eq!(k.compose(&v, &e).unwrap(), e);
        assert!(matches!(k.compose(&f, &e), Err(Error::NotComposable { .. })));
    }

    #[test]
    fn refine_examples() {
        let k = fixtures::k3();
        for e in 0..k.edge_count() {
            let p = k.edge_path(e);
            assert_eq!(k.refine(&p, 1, Convention::SourceAppend).len(), 2);
            assert_eq!(k.refine(&p, 0, Convention::RangePrepend), vec![p.clone()]);
        }
        let c = fixtures::cycle3();
        for p in c.enumerate_paths(2) {
            for side in Convention::ALL {
                assert_eq!(c.refine(&p, 3, side).len(), 1);
            }
        }
    }

    #[test]
    fn split_recovers_parts() {
        let g = fixtures::asym4();
        for p in g.enumerate_paths(3) {
            for n in 0..=3 {
                let (h, t) = g.split(&p, n);
                assert_eq!(g.compose(&h, &t).unwrap(), p);
            }
        }
    }

    #[test]
    fn automorphism_counts() {
        assert_eq!(fixtures::cycle3().automorphisms().len(), 3);
        assert_eq!(fixtures::k3().automorphisms().len(), 6);
        assert_eq!(fixtures::asym4().automorphisms().len(), 1);
    }
}
