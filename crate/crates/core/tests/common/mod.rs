//! Oracles and generators shared by the integration tests.

#![allow(dead_code)]

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Zero};
use rand::rngs::StdRng;
use rand::RngExt;

use qiso::fixtures;
use qiso::nc::provider::{free_unitary_portfolio, CMatrix};
use qiso::nc::relations::PairRhs;
use qiso::nc::{
    classical_rep, free_unitary_relations, magic_relations, qaut_relations, symmetric_group_rep, Gen, NCPoly,
    RelationSet, RepresentationProvider, Word,
};
use qiso::DirectedGraph;

pub use qiso::exact::Q;

pub fn rat(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Known Perron data `(ρ, x)` for each test graph, with `Σ x_v = 1`.
pub fn known_perron(name: &str) -> (Q, Vec<Q>) {
    match name {
        "cycle3" => (rat(1, 1), vec![rat(1, 3); 3]),
        "k3" => (rat(2, 1), vec![rat(1, 3); 3]),
        "asym4" => (rat(2, 1), vec![rat(1, 3), rat(1, 3), rat(2, 9), rat(1, 9)]),
        "cycle2" => (rat(1, 1), vec![rat(1, 2); 2]),
        "cuntz2" => (rat(2, 1), vec![rat(1, 1)]),
        "cuntz3" => (rat(3, 1), vec![rat(1, 1)]),
        other => panic!("no known Perron data for {other}"),
    }
}

pub fn test_graphs() -> Vec<DirectedGraph> {
    vec![
        fixtures::cycle3(),
        fixtures::k3(),
        fixtures::asym4(),
        fixtures::cuntz(2),
        fixtures::cuntz(3),
    ]
}

/// `B[v][w]` = number of edges with range `v` and source `w`.
pub fn range_source_counts(g: &DirectedGraph) -> Vec<Vec<Q>> {
    let n = g.vertex_count();
    let mut b = vec![vec![Q::zero(); n]; n];
    for e in 0..g.edge_count() {
        b[g.range(e)][g.source(e)] += Q::one();
    }
    b
}

pub fn mat_vec(b: &[Vec<Q>], x: &[Q]) -> Vec<Q> {
    b.iter()
        .map(|row| row.iter().zip(x).map(|(a, y)| a * y).sum())
        .collect()
}

pub fn q_pow(r: &Q, d: usize) -> Q {
    (0..d).fold(Q::one(), |acc, _| acc * r)
}

/// Edge sequences `e_1 … e_k` with `s(e_i) = r(e_{i+1})`, by depth-first
/// extension.
pub fn brute_force_paths(g: &DirectedGraph, k: usize) -> Vec<Vec<usize>> {
    fn extend(g: &DirectedGraph, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for e in 0..g.edge_count() {
            if cur.last().is_none_or(|&last| g.source(last) == g.range(e)) {
                cur.push(e);
                extend(g, k, cur, out);
                cur.pop();
            }
        }
    }
    if k == 0 {
        return (0..g.vertex_count()).map(|_| Vec::new()).collect();
    }
    let mut out = Vec::new();
    extend(g, k, &mut Vec::new(), &mut out);
    out
}

/// A noncommutative magic unitary of order 4 built from two projections in
/// general position on `C²`.
pub fn noncommutative_magic4() -> RepresentationProvider {
    let c = Complex64::new;
    let p = CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
    let (s, t) = (0.6_f64, 0.8_f64);
    let r = CMatrix::from_row_slice(2, 2, &[c(s * s, 0.0), c(s * t, 0.0), c(s * t, 0.0), c(t * t, 0.0)]);
    let id = CMatrix::identity(2, 2);
    let zero = CMatrix::zeros(2, 2);
    let mut prov = RepresentationProvider::new("two-projections", 2);
    for i in 0..4 {
        for j in 0..4 {
            let m = match (i / 2 == j / 2, i / 2, i == j) {
                (false, _, _) => zero.clone(),
                (true, 0, true) => p.clone(),
                (true, 0, false) => &id - &p,
                (true, _, true) => r.clone(),
                (true, _, false) => &id - &r,
            };
            prov.assign(Gen::q(i, j), m);
        }
    }
    prov
}

/// `u_{ij} ↦ v_{ij} X` for a unitary matrix `v` and a non-diagonal unitary
/// `X`, a free-unitary representation that is not scalar.
pub fn matrix_free_unitary(v: &CMatrix) -> RepresentationProvider {
    let n = v.nrows();
    let c = Complex64::new;
    let x = CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, 1.0), c(1.0, 0.0), c(0.0, 0.0)]);
    let xs = x.adjoint();
    let mut prov = RepresentationProvider::new("matrix-unitary", 2);
    for i in 0..n {
        for j in 0..n {
            prov.assign(Gen::u(i, j), &x * v[(i, j)]);
            prov.assign(Gen::u_star(i, j), &xs * v[(i, j)].conj());
        }
    }
    let w = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(0.0, 1.0), c(-1.0, 0.0)]));
    prov.assign(Gen::WStar, w.adjoint());
    prov.assign(Gen::W, w);
    prov
}

/// A relation set together with representations known to satisfy it.
pub struct Subject {
    pub rels: RelationSet,
    pub providers: Vec<RepresentationProvider>,
}

/// Built once per test binary; completion and registration dominate setup.
pub fn subjects() -> &'static [Subject] {
    static CELL: OnceLock<Vec<Subject>> = OnceLock::new();
    CELL.get_or_init(build_subjects)
}

fn build_subjects() -> Vec<Subject> {
    let mut out = Vec::new();
    for g in [fixtures::cycle3(), fixtures::k3(), fixtures::asym4()] {
        let rels = qaut_relations(&g).expect("relations build");
        out.push(Subject {
            providers: vec![classical_rep(&g)],
            rels,
        });
    }
    out.push(Subject {
        rels: magic_relations(3),
        providers: vec![symmetric_group_rep(3)],
    });
    out.push(Subject {
        rels: magic_relations(4),
        providers: vec![symmetric_group_rep(4), noncommutative_magic4()],
    });
    let fu = free_unitary_relations(2).with_formal_unitary();
    let mut providers = free_unitary_portfolio(2);
    providers.push(matrix_free_unitary(&qiso::nc::provider::rotation45(2)));
    out.push(Subject { rels: fu, providers });
    for s in &mut out {
        s.providers = std::mem::take(&mut s.providers)
            .into_iter()
            .map(|p| p.register(&s.rels).expect("provider satisfies relations"))
            .collect();
    }
    out
}

fn rhs_poly(rhs: PairRhs) -> NCPoly {
    match rhs {
        PairRhs::Zero => NCPoly::zero(),
        PairRhs::One => NCPoly::one(),
        PairRhs::Gen(g) => NCPoly::gen(g),
    }
}

/// Every relation of `rels` written as a polynomial that must vanish.
pub fn relators(rels: &RelationSet) -> Vec<NCPoly> {
    let mut out = Vec::new();
    for r in rels.enabled_pair_rules().chain(rels.derived_pairs.iter()) {
        out.push(&NCPoly::product([r.lhs.0, r.lhs.1]) - &rhs_poly(r.rhs));
    }
    for s in rels.enabled_schemas() {
        let mut p = -&s.result;
        for (l, w) in s.letters.iter().zip(&s.weights) {
            p.add_term(l.clone(), w.clone());
        }
        out.push(p);
    }
    for (a, b) in &rels.aliases {
        out.push(&NCPoly::gen(*a) - &NCPoly::gen(*b));
    }
    for z in &rels.zeros {
        out.push(NCPoly::gen(*z));
    }
    out
}

/// Generators mentioned by the relations.
pub fn alphabet(rels: &RelationSet) -> Vec<Gen> {
    let mut gens: Vec<Gen> = relators(rels).iter().flat_map(|p| p.generators().collect::<Vec<_>>()).collect();
    gens.sort();
    gens.dedup();
    gens
}

fn random_word(rng: &mut StdRng, gens: &[Gen], max_len: usize) -> Word {
    let len = rng.random_range(0..=max_len);
    Word((0..len).map(|_| gens[rng.random_range(0..gens.len())]).collect())
}

fn random_coeff(rng: &mut StdRng) -> Q {
    let n = rng.random_range(1..=4) * if rng.random_bool(0.5) { 1 } else { -1 };
    rat(n, rng.random_range(1..=3))
}

/// A random element of the two-sided ideal: `Σ c_i a_i r_i b_i` with `r_i`
/// drawn from the relators and `a_i, b_i` short random words.
pub fn random_ideal_element(rng: &mut StdRng, relators: &[NCPoly], gens: &[Gen]) -> NCPoly {
    let terms = rng.random_range(1..=3);
    let mut p = NCPoly::zero();
    for _ in 0..terms {
        let r = &relators[rng.random_range(0..relators.len())];
        let a = NCPoly::word(random_word(rng, gens, 1));
        let b = NCPoly::word(random_word(rng, gens, 1));
        p.add_scaled(&(&(&a * r) * &b), &random_coeff(rng));
    }
    p
}

/// A random polynomial of low degree.
pub fn random_poly(rng: &mut StdRng, gens: &[Gen]) -> NCPoly {
    let terms = rng.random_range(1..=4);
    let mut p = NCPoly::zero();
    for _ in 0..terms {
        p.add_term(random_word(rng, gens, 3), random_coeff(rng));
    }
    p
}

/// Largest Frobenius norm of `p` over the providers that cover it.
pub fn max_numeric_norm(p: &NCPoly, providers: &[RepresentationProvider]) -> Option<f64> {
    providers.iter().filter_map(|prov| prov.norm_of(p)).reduce(f64::max)
}
