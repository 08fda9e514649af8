use std::collections::{BTreeMap, HashSet};

use num_traits::{One, Signed};
use serde::Serialize;
use sha2::{Digest, Sha256};

use super::generator::{Gen, Word};
use super::poly::{NCPoly, TensorPoly};
use super::provider::{find_witness, RepresentationProvider};
use super::relations::{PairRhs, RelationSet};
use crate::exact::Q;

/// Record of the rules applied during a reduction: counts per rule family and
/// a digest of the ordered application sequence.
#[derive(Debug, Clone, Default)]
pub struct Trace {
    counts: BTreeMap<String, usize>,
    hasher: Sha256,
    steps: usize,
}

impl Trace {
    pub fn new() -> Self {
        Trace::default()
    }

    fn record(&mut self, family: &str) {
        *self.counts.entry(family.to_string()).or_default() += 1;
        self.hasher.update(family.as_bytes());
        self.hasher.update(b"\n");
        self.steps += 1;
    }

    pub fn counts(&self) -> &BTreeMap<String, usize> {
        &self.counts
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn digest(&self) -> String {
        hex::encode(self.hasher.clone().finalize())
    }

    pub fn merge(&mut self, other: &Trace) {
        for (k, v) in &other.counts {
            *self.counts.entry(k.clone()).or_default() += v;
        }
        self.hasher.update(other.digest().as_bytes());
        self.steps += other.steps;
    }

    pub fn summary(&self) -> TraceSummary {
        TraceSummary {
            steps: self.steps,
            rules: self.counts.clone(),
            digest: self.digest(),
        }
    }
}

/// Serializable form of a [`Trace`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceSummary {
    pub steps: usize,
    pub rules: BTreeMap<String, usize>,
    pub digest: String,
}

/// Result of a zero test.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Verdict {
    ProvedZero,
    Unknown,
    WitnessedNonzero { provider: String, norm: f64 },
}

impl Verdict {
    pub fn is_proved_zero(&self) -> bool {
        matches!(self, Verdict::ProvedZero)
    }

    pub fn is_witnessed(&self) -> bool {
        matches!(self, Verdict::WitnessedNonzero { .. })
    }
}

/// Reduces a word by the two-letter rules; `None` means the word vanishes.
pub fn reduce_word(w: &Word, rels: &RelationSet, trace: &mut Trace) -> Option<Word> {
    let mut stack: Vec<Gen> = Vec::with_capacity(w.len());
    for &g in w.gens() {
        if rels.is_zero_gen(g) {
            trace.record("support-consequence");
            return None;
        }
        let mut cur = rels.canonical(g);
        if cur != g {
            trace.record("support-consequence");
        }
        loop {
            let Some(&top) = stack.last() else {
                stack.push(cur);
                break;
            };
            match rels.lookup_pair(top, cur) {
                None => {
                    stack.push(cur);
                    break;
                }
                Some((rhs, fam)) => {
                    trace.record(&rels.families[fam].name);
                    match rhs {
                        PairRhs::Zero => return None,
                        PairRhs::One => {
                            stack.pop();
                            break;
                        }
                        PairRhs::Gen(h) => {
                            stack.pop();
                            cur = h;
                        }
                    }
                }
            }
        }
    }
    Some(Word(stack))
}

fn monomial_pass(p: &NCPoly, rels: &RelationSet, trace: &mut Trace) -> NCPoly {
    let mut out = NCPoly::zero();
    for (w, c) in p.terms() {
        if let Some(r) = reduce_word(w, rels, trace) {
            out.add_term(r, c.clone());
        }
    }
    out
}

/// Every single sum-collapse applicable to `p`, largest terms first. A group
/// `Σ_k c·w_k/w_{k0} · prefix·letters_k·suffix` may be replaced by
/// `c/w_{k0} · prefix·result·suffix` when every word of the group (after
/// monomial reduction) is present with a coefficient of the same sign and at
/// least the required size, and the replacement lowers the cost.
fn collapses<'a>(p: &'a NCPoly, rels: &'a RelationSet) -> impl Iterator<Item = (NCPoly, Trace)> + 'a {
    let cost = p.cost();
    let terms: Vec<(&Word, &Q)> = p.terms().collect();
    terms.into_iter().rev().flat_map(move |(w, c)| {
        let gens = w.gens();
        (0..gens.len()).flat_map(move |pos| {
            rels.schemas_starting_with(gens[pos]).iter().filter_map(move |&(sid, k0)| {
                let schema = rels.compiled_schema(sid);
                let letter = &schema.letters[k0];
                let len = letter.len();
                if pos + len > gens.len() || gens[pos..pos + len] != *letter.gens() {
                    return None;
                }
                let prefix = Word(gens[..pos].to_vec());
                let suffix = Word(gens[pos + len..].to_vec());
                let factor = c / &schema.weights[k0];
                let mut scratch = Trace::new();
                let mut group = NCPoly::zero();
                for (l, wt) in schema.letters.iter().zip(&schema.weights) {
                    let word = prefix.concat(l).concat(&suffix);
                    if let Some(r) = reduce_word(&word, rels, &mut scratch) {
                        group.add_term(r, &factor * wt);
                    }
                }
                let contained = group.terms().all(|(u, e)| {
                    let have = p.coeff(u);
                    have.is_positive() == e.is_positive() && have.abs() >= e.abs()
                });
                if !contained {
                    return None;
                }
                let mut replacement = NCPoly::zero();
                for (rw, rc) in schema.result.terms() {
                    let word = prefix.concat(rw).concat(&suffix);
                    if let Some(r) = reduce_word(&word, rels, &mut scratch) {
                        replacement.add_term(r, &factor * rc);
                    }
                }
                let mut next = p - &group;
                next.add_scaled(&replacement, &Q::one());
                if next.cost() < cost {
                    scratch.record(&rels.families[schema.family].name);
                    Some((next, scratch))
                } else {
                    None
                }
            })
        })
    })
}

fn collapse_once(p: &NCPoly, rels: &RelationSet, trace: &mut Trace) -> Option<NCPoly> {
    let (next, t) = collapses(p, rels).next()?;
    trace.merge(&t);
    Some(next)
}

/// Number of polynomials [`normal_form_search`] may visit.
pub const SEARCH_BUDGET: usize = 5000;

/// Like [`normal_form_traced`], but when the greedy collapse order stalls at
/// a nonzero polynomial, searches other collapse orders (depth first, at
/// most [`SEARCH_BUDGET`] states) for one that reaches zero. Every step is a
/// valid rewrite, so a zero result is a proof; otherwise the greedy normal
/// form is returned.
pub fn normal_form_search(p: &NCPoly, rels: &RelationSet, trace: &mut Trace) -> NCPoly {
    let mut greedy_trace = Trace::new();
    let greedy = normal_form_traced(p, rels, &mut greedy_trace);
    if greedy.is_zero() {
        trace.merge(&greedy_trace);
        return greedy;
    }
    let mut start_trace = Trace::new();
    let start = monomial_pass(p, rels, &mut start_trace);
    // (poly, parent, trace of the step from the parent)
    let mut nodes: Vec<(NCPoly, Option<usize>, Trace)> = vec![(start.clone(), None, start_trace)];
    let mut seen: HashSet<NCPoly> = HashSet::from([start]);
    let mut stack = vec![0usize];
    while let Some(i) = stack.pop() {
        if nodes.len() >= SEARCH_BUDGET {
            break;
        }
        let succ: Vec<(NCPoly, Trace)> = collapses(&nodes[i].0, rels).collect();
        for (next, t) in succ.into_iter().rev() {
            if !seen.insert(next.clone()) {
                continue;
            }
            let zero = next.is_zero();
            nodes.push((next, Some(i), t));
            let id = nodes.len() - 1;
            if zero {
                let mut cur = Some(id);
                let mut path = Vec::new();
                while let Some(c) = cur {
                    path.push(c);
                    cur = nodes[c].1;
                }
                for c in path.into_iter().rev() {
                    trace.merge(&nodes[c].2);
                }
                return NCPoly::zero();
            }
            stack.push(id);
        }
    }
    trace.merge(&greedy_trace);
    greedy
}

/// Normal form under `rels`, recording rule applications in `trace`.
pub fn normal_form_traced(p: &NCPoly, rels: &RelationSet, trace: &mut Trace) -> NCPoly {
    let mut cur = monomial_pass(p, rels, trace);
    while let Some(next) = collapse_once(&cur, rels, trace) {
        cur = next;
    }
    cur
}

/// Fixed point of monomial reduction and sum-collapse.
pub fn normal_form(p: &NCPoly, rels: &RelationSet) -> NCPoly {
    normal_form_traced(p, rels, &mut Trace::new())
}

/// `ProvedZero` iff some sequence of rewrites takes `p` to zero; never
/// concludes nonzero.
pub fn is_zero(p: &NCPoly, rels: &RelationSet) -> Verdict {
    if normal_form_search(p, rels, &mut Trace::new()).is_zero() {
        Verdict::ProvedZero
    } else {
        Verdict::Unknown
    }
}

/// `WitnessedNonzero` when some provider maps `p` far from zero.
pub fn witness_nonzero(p: &NCPoly, providers: &[RepresentationProvider]) -> Verdict {
    match find_witness(p, providers) {
        Some(w) => Verdict::WitnessedNonzero {
            provider: w.provider,
            norm: w.norm,
        },
        None => Verdict::Unknown,
    }
}

/// Leg-wise normal form: alternately normalizes the right legs grouped by
/// left word and the left legs grouped by right word until stable.
pub fn tensor_normal_form_traced(t: &TensorPoly, rels: &RelationSet, trace: &mut Trace) -> TensorPoly {
    let mut cur = t.clone();
    loop {
        let mut next = TensorPoly::zero();
        for (a, pb) in cur.by_left() {
            let Some(a) = reduce_word(&a, rels, trace) else {
                continue;
            };
            for (b, c) in normal_form_search(&pb, rels, trace).terms() {
                next.add_term(a.clone(), b.clone(), c.clone());
            }
        }
        let mut next2 = TensorPoly::zero();
        for (b, pa) in next.by_right() {
            for (a, c) in normal_form_search(&pa, rels, trace).terms() {
                next2.add_term(a.clone(), b.clone(), c.clone());
            }
        }
        if next2 == cur {
            return cur;
        }
        cur = next2;
    }
}

pub fn tensor_normal_form(t: &TensorPoly, rels: &RelationSet) -> TensorPoly {
    tensor_normal_form_traced(t, rels, &mut Trace::new())
}

fn comultiply_gen(g: Gen, n: usize) -> TensorPoly {
    let mut t = TensorPoly::zero();
    let one = Q::one();
    match g {
        Gen::Q(..) | Gen::U(..) | Gen::UStar(..) => {
            let (i, j) = g.indices().expect("matrix generator");
            let make = |a: usize, b: usize| match g {
                Gen::Q(..) => Gen::q(a, b),
                Gen::U(..) => Gen::u(a, b),
                _ => Gen::u_star(a, b),
            };
            for k in 0..n {
                t.add_term(Word(vec![make(i, k)]), Word(vec![make(k, j)]), one.clone());
            }
        }
        Gen::W | Gen::WStar => t.add_term(Word(vec![g]), Word(vec![g]), one),
    }
    t
}

/// The algebra homomorphism `Δ` determined by `Δ(g_{ij}) = Σ_k g_{ik} ⊗ g_{kj}`
/// on an index set of size `n`; the formal unitary is group-like.
pub fn comultiply(p: &NCPoly, n: usize) -> TensorPoly {
    let mut out = TensorPoly::zero();
    for (w, c) in p.terms() {
        let mut acc = TensorPoly::zero();
        acc.add_term(Word::unit(), Word::unit(), c.clone());
        for &g in w.gens() {
            acc = acc.mul(&comultiply_gen(g, n));
        }
        out.add_scaled(&acc, &Q::one());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q;
    use crate::fixtures;
    use crate::nc::provider::{classical_rep, free_unitary_portfolio};
    use crate::nc::relations::{free_unitary_relations, magic_relations, qaut_relations};

    fn g(i: usize, j: usize) -> NCPoly {
        NCPoly::gen(Gen::q(i, j))
    }

    #[test]
    fn row_sum_collapse() {
        let rels = magic_relations(3);
        let s: NCPoly = (0..3).map(|k| &g(0, k) * &g(1, 2)).sum();
        assert_eq!(is_zero(&(&s - &g(1, 2)), &rels), Verdict::ProvedZero);
    }

    #[test]
    fn orthogonality_and_idempotency() {
        let rels = magic_relations(3);
        let p = &(&(&g(0, 1) * &g(0, 2)) + &(&g(0, 1) * &g(0, 1))) - &g(0, 1);
        assert_eq!(is_zero(&p, &rels), Verdict::ProvedZero);
        assert_eq!(is_zero(&g(0, 0), &rels), Verdict::Unknown);
    }

    #[test]
    fn overlapping_groups_collapse() {
        let rels = magic_relations(3);
        let rows: NCPoly = (0..3).map(|k| g(0, k)).sum();
        let cols: NCPoly = (0..3).map(|k| g(k, 0)).sum();
        let p = &(&rows + &cols) - &NCPoly::constant(q(2));
        assert_eq!(is_zero(&p, &rels), Verdict::ProvedZero);
    }

    #[test]
    fn free_unitary_rules() {
        let rels = free_unitary_relations(2);
        let u = |i, j| NCPoly::gen(Gen::u(i, j));
        let us = |i, j| NCPoly::gen(Gen::u_star(i, j));
        let diag: NCPoly = (0..2).map(|k| &us(k, 0) * &u(k, 0)).sum();
        assert!(is_zero(&(&diag - &NCPoly::one()), &rels).is_proved_zero());
        let off: NCPoly = (0..2).map(|k| &us(k, 0) * &u(k, 1)).sum();
        assert!(is_zero(&off, &rels).is_proved_zero());
        let sq = &u(0, 0) * &u(0, 0);
        assert_eq!(normal_form(&sq, &rels), sq);
        let row = &(&u(0, 0) + &u(0, 1)) - &NCPoly::one();
        assert_eq!(is_zero(&row, &rels), Verdict::Unknown);
        assert!(witness_nonzero(&row, &free_unitary_portfolio(2)).is_witnessed());
    }

    #[test]
    fn formal_unitary_cancels() {
        let rels = free_unitary_relations(2).with_formal_unitary();
        let p = NCPoly::product([Gen::u(0, 1), Gen::W, Gen::WStar]);
        assert_eq!(normal_form(&p, &rels), NCPoly::gen(Gen::u(0, 1)));
    }

    #[test]
    fn isometry_sum_on_k3() {
        // Σ_ζ x_{s(ζ)} Q_{ζλ}* Q_{ζλ} − x_{s(λ)} at degree 1
        let k3 = fixtures::k3();
        let rels = qaut_relations(&k3).unwrap();
        let third = crate::exact::frac(1, 3);
        for lam in k3.edges() {
            let mut p = NCPoly::constant(-third.clone());
            for z in k3.edges() {
                let qz = NCPoly::product([Gen::q(z.range, lam.range), Gen::q(z.source, lam.source)]);
                p.add_scaled(&(&qz.adjoint() * &qz), &third);
            }
            let mut trace = Trace::new();
            assert!(normal_form_traced(&p, &rels, &mut trace).is_zero());
            assert!(trace.steps() > 0);
            let rep = classical_rep(&k3);
            assert!(rep.norm_of(&p).unwrap() < 1e-12);
        }
    }

    #[test]
    fn comultiply_examples() {
        assert_eq!(
            comultiply(&NCPoly::one(), 3),
            TensorPoly::simple(&NCPoly::one(), &NCPoly::one())
        );
        let d = comultiply(&g(0, 1), 3);
        assert_eq!(d.len(), 3);
        let rels = magic_relations(3);
        let prod = &g(0, 0) * &g(0, 1);
        assert_eq!(comultiply(&prod, 3).len(), 9);
        assert!(tensor_normal_form(&comultiply(&prod, 3), &rels).is_zero());
    }

    #[test]
    fn traces_are_deterministic() {
        let rels = magic_relations(3);
        let s: NCPoly = (0..3).map(|k| &g(0, k) * &g(1, 2)).sum();
        let mut a = Trace::new();
        let mut b = Trace::new();
        normal_form_traced(&s, &rels, &mut a);
        normal_form_traced(&s, &rels, &mut b);
        assert_eq!(a.digest(), b.digest());
        assert_eq!(a.counts().get("row-sum"), Some(&1));
    }
}
