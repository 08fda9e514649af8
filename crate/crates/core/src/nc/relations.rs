use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_traits::One;
use serde::Serialize;

use super::generator::{Gen, Word};
use super::poly::NCPoly;
use super::provider::classical_rep;
use crate::error::Result;
use crate::exact::{self, Q};
use crate::graph::{DirectedGraph, ValidationProfile};
use crate::perron::perron;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    /// A defining relation of the quantum group.
    Axiom,
    /// A consequence of an external theorem, admitted as a rule and checked
    /// numerically.
    DerivedFromTheorem,
    /// Derived from the enabled rules by [`RelationSet::complete`].
    Consequence,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RuleKind {
    Monomial,
    SumCollapse,
    Linear,
}

/// A named group of rules that is enabled or dropped as a unit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RuleFamily {
    pub name: String,
    pub kind: RuleKind,
    pub provenance: Provenance,
    pub enabled: bool,
}

/// Right-hand side of a two-letter monomial rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairRhs {
    Zero,
    One,
    Gen(Gen),
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairRule {
    pub lhs: (Gen, Gen),
    pub rhs: PairRhs,
    pub family: usize,
}

/// `Σ_k weights[k] · letters[k] = result`, with all letters of equal length.
#[derive(Debug, Clone, PartialEq)]
pub struct SumSchema {
    pub letters: Vec<Word>,
    pub weights: Vec<Q>,
    pub result: NCPoly,
    pub family: usize,
}

/// A polynomial asserted to vanish, kept for numeric validation.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearRelation {
    pub poly: NCPoly,
    pub family: usize,
}

/// Rules of a quantum group presentation, organised for rewriting.
#[derive(Debug, Clone)]
pub struct RelationSet {
    pub name: String,
    /// Size of the index set of the matrix generators.
    pub n: usize,
    pub families: Vec<RuleFamily>,
    pub pair_rules: Vec<PairRule>,
    pub schemas: Vec<SumSchema>,
    pub linear: Vec<LinearRelation>,
    /// Human-readable record of dropped or disabled families.
    pub events: Vec<String>,
    /// Generators identified with a smaller one by completion.
    pub aliases: BTreeMap<Gen, Gen>,
    /// Generators shown to vanish by completion.
    pub zeros: BTreeSet<Gen>,
    /// Absorption rules `ab = a` or `ab = b` found by completion.
    pub derived_pairs: Vec<PairRule>,
    pair_index: HashMap<(Gen, Gen), (PairRhs, usize)>,
    schema_index: HashMap<Gen, Vec<(usize, usize)>>,
    compiled: Vec<SumSchema>,
}

impl RelationSet {
    pub fn new(name: impl Into<String>, n: usize) -> Self {
        RelationSet {
            name: name.into(),
            n,
            families: Vec::new(),
            pair_rules: Vec::new(),
            schemas: Vec::new(),
            linear: Vec::new(),
            events: Vec::new(),
            aliases: BTreeMap::new(),
            zeros: BTreeSet::new(),
            derived_pairs: Vec::new(),
            pair_index: HashMap::new(),
            schema_index: HashMap::new(),
            compiled: Vec::new(),
        }
    }

    pub fn family(&mut self, name: &str, kind: RuleKind, provenance: Provenance) -> usize {
        self.families.push(RuleFamily {
            name: name.to_string(),
            kind,
            provenance,
            enabled: true,
        });
        self.families.len() - 1
    }

    pub fn family_index(&self, name: &str) -> Option<usize> {
        self.families.iter().position(|f| f.name == name)
    }

    pub fn pair(&mut self, family: usize, a: Gen, b: Gen, rhs: PairRhs) {
        self.pair_rules.push(PairRule {
            lhs: (a, b),
            rhs,
            family,
        });
        let (a, b) = (self.canonical(a), self.canonical(b));
        let rhs = self.canonical_rhs(rhs);
        self.pair_index.entry((a, b)).or_insert((rhs, family));
    }

    pub fn schema(&mut self, family: usize, letters: Vec<Word>, weights: Vec<Q>, result: NCPoly) {
        debug_assert!(letters.windows(2).all(|w| w[0].len() == w[1].len()));
        self.schemas.push(SumSchema {
            letters,
            weights,
            result,
            family,
        });
        self.rebuild();
    }

    pub fn linear_relation(&mut self, family: usize, poly: NCPoly) {
        self.linear.push(LinearRelation { poly, family });
    }

    pub fn is_enabled(&self, family: usize) -> bool {
        self.families[family].enabled
    }

    /// Disables a family and records why. Completion results are discarded
    /// since they may depend on the dropped rules.
    pub fn drop_family(&mut self, family: usize, reason: String) {
        self.families[family].enabled = false;
        self.events.push(reason);
        self.aliases.clear();
        self.zeros.clear();
        self.derived_pairs.clear();
        self.rebuild();
    }

    /// Representative of `g` after identifications.
    pub fn canonical(&self, g: Gen) -> Gen {
        let mut g = g;
        while let Some(&h) = self.aliases.get(&g) {
            g = h;
        }
        g
    }

    pub fn is_zero_gen(&self, g: Gen) -> bool {
        self.zeros.contains(&self.canonical(g))
    }

    fn canonical_rhs(&self, rhs: PairRhs) -> PairRhs {
        match rhs {
            PairRhs::Gen(h) if self.is_zero_gen(h) => PairRhs::Zero,
            PairRhs::Gen(h) => PairRhs::Gen(self.canonical(h)),
            other => other,
        }
    }

    fn canonical_word(&self, w: &Word) -> Option<Word> {
        w.gens()
            .iter()
            .map(|&g| (!self.is_zero_gen(g)).then(|| self.canonical(g)))
            .collect::<Option<Vec<_>>>()
            .map(Word)
    }

    fn canonical_poly(&self, p: &NCPoly) -> NCPoly {
        let mut out = NCPoly::zero();
        for (w, c) in p.terms() {
            if let Some(w) = self.canonical_word(w) {
                out.add_term(w, c.clone());
            }
        }
        out
    }

    fn rebuild(&mut self) {
        self.pair_index.clear();
        let rules: Vec<PairRule> = self
            .pair_rules
            .iter()
            .filter(|r| self.families[r.family].enabled)
            .chain(&self.derived_pairs)
            .cloned()
            .collect();
        for r in rules {
            let lhs = (self.canonical(r.lhs.0), self.canonical(r.lhs.1));
            let rhs = self.canonical_rhs(r.rhs);
            self.pair_index.entry(lhs).or_insert((rhs, r.family));
        }
        self.compiled.clear();
        self.schema_index.clear();
        for s in &self.schemas {
            if !self.families[s.family].enabled {
                continue;
            }
            let mut merged: BTreeMap<Word, Q> = BTreeMap::new();
            for (l, w) in s.letters.iter().zip(&s.weights) {
                if let Some(l) = self.canonical_word(l) {
                    *merged.entry(l).or_default() += w;
                }
            }
            merged.retain(|_, w| *w != Q::default());
            if merged.is_empty() {
                continue;
            }
            let (letters, weights) = merged.into_iter().unzip();
            self.compiled.push(SumSchema {
                letters,
                weights,
                result: self.canonical_poly(&s.result),
                family: s.family,
            });
        }
        for (id, s) in self.compiled.iter().enumerate() {
            for (k, l) in s.letters.iter().enumerate() {
                self.schema_index.entry(l.gens()[0]).or_default().push((id, k));
            }
        }
    }

    /// Schema with index `id` as used by the rewriting engine, after
    /// identifications.
    pub fn compiled_schema(&self, id: usize) -> &SumSchema {
        &self.compiled[id]
    }

    /// Closes the rules under a simple consequence: if `Σ_l l = 1` is a
    /// schema and `a·l` vanishes for all letters but one, `l₀`, then
    /// `a = a·l₀` (and symmetrically `a = l₀·a`). If `a·l₀` already reduces
    /// to a generator `b ≠ a`, then `a = b` and the larger generator is
    /// identified with the smaller one; if every `a·l` vanishes, `a = 0`.
    /// Repeats until nothing new is found.
    pub fn complete(&mut self) {
        let fam = match self.family_index("support-consequence") {
            Some(f) => f,
            None => self.family("support-consequence", RuleKind::Monomial, Provenance::Consequence),
        };
        loop {
            let gens: BTreeSet<Gen> = self
                .compiled
                .iter()
                .flat_map(|s| s.letters.iter().flat_map(|l| l.gens().iter().copied()))
                .collect();
            let mut changed = false;
            let unit_schemas: Vec<SumSchema> = self
                .compiled
                .iter()
                .filter(|s| {
                    s.result == NCPoly::one()
                        && s.letters.iter().all(|l| l.len() == 1)
                        && s.weights.iter().all(|w| w.is_one())
                })
                .cloned()
                .collect();
            'outer: for s in &unit_schemas {
                for &a in &gens {
                    for left in [true, false] {
                        let survivors: Vec<Word> = s
                            .letters
                            .iter()
                            .filter_map(|l| {
                                let w = if left {
                                    Word(vec![a, l.gens()[0]])
                                } else {
                                    Word(vec![l.gens()[0], a])
                                };
                                self.reduce_plain(&w)
                            })
                            .collect();
                        match survivors.as_slice() {
                            [] => {
                                self.zeros.insert(a);
                                changed = true;
                            }
                            [w] if w.len() == 1 && w.gens()[0] != a => {
                                let b = w.gens()[0];
                                let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                                self.aliases.insert(hi, lo);
                                changed = true;
                            }
                            [w] if w.len() == 2 => {
                                let rule = PairRule {
                                    lhs: (w.gens()[0], w.gens()[1]),
                                    rhs: PairRhs::Gen(a),
                                    family: fam,
                                };
                                let existing = self.lookup_pair(rule.lhs.0, rule.lhs.1);
                                match existing {
                                    Some((PairRhs::Gen(b), _)) if b != a => {
                                        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                                        self.aliases.insert(hi, lo);
                                    }
                                    Some(_) => continue,
                                    None => self.derived_pairs.push(rule),
                                }
                                changed = true;
                            }
                            _ => continue,
                        }
                        self.rebuild();
                        break 'outer;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        let summary = format!(
            "completion on {}: {} identifications, {} vanishing generators, {} absorption rules",
            self.name,
            self.aliases.len(),
            self.zeros.len(),
            self.derived_pairs.len()
        );
        if !self.aliases.is_empty() || !self.zeros.is_empty() || !self.derived_pairs.is_empty() {
            self.events.push(summary);
        }
    }

    /// Two-letter reduction without tracing.
    fn reduce_plain(&self, w: &Word) -> Option<Word> {
        let w = self.canonical_word(w)?;
        let g = w.gens();
        if g.len() != 2 {
            return Some(w);
        }
        match self.lookup_pair(g[0], g[1]) {
            None => Some(w),
            Some((PairRhs::Zero, _)) => None,
            Some((PairRhs::One, _)) => Some(Word::unit()),
            Some((PairRhs::Gen(h), _)) => Some(Word(vec![h])),
        }
    }

    pub fn lookup_pair(&self, a: Gen, b: Gen) -> Option<(PairRhs, usize)> {
        self.pair_index.get(&(a, b)).copied()
    }

    /// Schema instances `(schema, k)` whose `k`-th letter starts with `g`.
    pub fn schemas_starting_with(&self, g: Gen) -> &[(usize, usize)] {
        self.schema_index.get(&g).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn enabled_pair_rules(&self) -> impl Iterator<Item = &PairRule> {
        self.pair_rules.iter().filter(|r| self.families[r.family].enabled)
    }

    pub fn enabled_schemas(&self) -> impl Iterator<Item = &SumSchema> {
        self.schemas.iter().filter(|s| self.families[s.family].enabled)
    }

    pub fn enabled_linear(&self) -> impl Iterator<Item = &LinearRelation> {
        self.linear.iter().filter(|r| self.families[r.family].enabled)
    }

    /// Formal unitary `w` with `w w* = w* w = 1`.
    pub fn with_formal_unitary(mut self) -> Self {
        let f = self.family("formal-unitary", RuleKind::Monomial, Provenance::Axiom);
        self.pair(f, Gen::W, Gen::WStar, PairRhs::One);
        self.pair(f, Gen::WStar, Gen::W, PairRhs::One);
        self
    }

    /// Rule families as `(name, kind, provenance, enabled, rule count)`.
    pub fn summary(&self) -> Vec<(String, RuleKind, Provenance, bool, usize)> {
        self.families
            .iter()
            .enumerate()
            .map(|(i, f)| {
                let count = self.pair_rules.iter().filter(|r| r.family == i).count()
                    + self.schemas.iter().filter(|s| s.family == i).count()
                    + self.linear.iter().filter(|l| l.family == i).count()
                    + self.derived_pairs.iter().filter(|r| r.family == i).count();
                (f.name.clone(), f.kind, f.provenance, f.enabled, count)
            })
            .collect()
    }
}

/// The magic-unitary relations of order `n`: projections, orthogonal within
/// each row and column, rows and columns summing to 1.
pub fn magic_relations(n: usize) -> RelationSet {
    let mut r = RelationSet::new(format!("magic-{n}"), n);
    let idem = r.family("idempotency", RuleKind::Monomial, Provenance::Axiom);
    let row = r.family("row-orthogonality", RuleKind::Monomial, Provenance::Axiom);
    let col = r.family("column-orthogonality", RuleKind::Monomial, Provenance::Axiom);
    let row_sum = r.family("row-sum", RuleKind::SumCollapse, Provenance::Axiom);
    let col_sum = r.family("column-sum", RuleKind::SumCollapse, Provenance::Axiom);
    for i in 0..n {
        for j in 0..n {
            r.pair(idem, Gen::q(i, j), Gen::q(i, j), PairRhs::Gen(Gen::q(i, j)));
            for k in 0..n {
                if j != k {
                    r.pair(row, Gen::q(i, j), Gen::q(i, k), PairRhs::Zero);
                    r.pair(col, Gen::q(j, i), Gen::q(k, i), PairRhs::Zero);
                }
            }
        }
    }
    let ones = vec![Q::one(); n];
    for i in 0..n {
        let letters = (0..n).map(|k| Word(vec![Gen::q(i, k)])).collect();
        r.schema(row_sum, letters, ones.clone(), NCPoly::one());
        let letters = (0..n).map(|k| Word(vec![Gen::q(k, i)])).collect();
        r.schema(col_sum, letters, ones.clone(), NCPoly::one());
    }
    r
}

/// Names of the four edge-support rule families: row or column form, with
/// the unordered pair `(i,k)` read either as (source, range) or as
/// (range, source).
pub const EDGE_SUPPORT_FAMILIES: [&str; 4] = [
    "edge-support-row/source-range",
    "edge-support-row/range-source",
    "edge-support-column/source-range",
    "edge-support-column/range-source",
];

/// Relations of the quantum automorphism group of `g`.
///
/// Besides the magic-unitary axioms this installs the edge-support zero
/// rules in every index orientation, the weighted column schema
/// `Σ_k x_k q_{kj} = x_j` coming from invariance of the KMS state, and the
/// adjacency-commutation relations `UA = AU` as linear relations. Every
/// orientation of the edge-support rules is evaluated under the classical
/// automorphism representation; those that fail are dropped and reported.
pub fn qaut_relations(g: &DirectedGraph) -> Result<RelationSet> {
    g.validate(ValidationProfile::AUT_PLUS).ensure()?;
    let n = g.vertex_count();
    let mut r = magic_relations(n);
    r.name = format!("qaut-{}", g.name());

    let fams: Vec<usize> = EDGE_SUPPORT_FAMILIES
        .iter()
        .map(|name| r.family(name, RuleKind::Monomial, Provenance::Axiom))
        .collect();
    for e in g.edges() {
        let (s, t) = (e.source, e.range);
        for i in 0..n {
            for k in 0..n {
                // (i,k) as (source, range): no edge with s=i, r=k
                let sr_missing = !g.has_edge(k, i);
                // (i,k) as (range, source): no edge with r=i, s=k
                let rs_missing = !g.has_edge(i, k);
                for (missing, row_f, col_f) in [(sr_missing, fams[0], fams[2]), (rs_missing, fams[1], fams[3])] {
                    if !missing {
                        continue;
                    }
                    r.pair(row_f, Gen::q(s, i), Gen::q(t, k), PairRhs::Zero);
                    r.pair(row_f, Gen::q(t, k), Gen::q(s, i), PairRhs::Zero);
                    r.pair(col_f, Gen::q(i, s), Gen::q(k, t), PairRhs::Zero);
                    r.pair(col_f, Gen::q(k, t), Gen::q(i, s), PairRhs::Zero);
                }
            }
        }
    }

    let pf = perron(g)?;
    let weighted = r.family("weighted-column-sum", RuleKind::SumCollapse, Provenance::DerivedFromTheorem);
    match pf.exact_x() {
        Some(x) => {
            for j in 0..n {
                let letters = (0..n).map(|k| Word(vec![Gen::q(k, j)])).collect();
                r.schema(weighted, letters, x.to_vec(), NCPoly::constant(x[j].clone()));
            }
        }
        None => {
            r.drop_family(
                weighted,
                "weighted-column-sum disabled: Perron vector is not rational".into(),
            );
        }
    }

    let adj = r.family("adjacency-commutation", RuleKind::Linear, Provenance::Axiom);
    let a = g.adjacency_matrix();
    for i in 0..n {
        for j in 0..n {
            let mut p = NCPoly::zero();
            for k in 0..n {
                p.add_term(Word(vec![Gen::q(i, k)]), exact::q(a[k][j] as i64));
                p.add_term(Word(vec![Gen::q(k, j)]), -exact::q(a[i][k] as i64));
            }
            if !p.is_zero() {
                r.linear_relation(adj, p);
            }
        }
    }

    let provider = classical_rep(g);
    for &f in &fams {
        let failing = r
            .pair_rules
            .iter()
            .filter(|rule| rule.family == f)
            .find(|rule| !provider.pair_rule_holds(rule));
        if let Some(rule) = failing {
            let witness = format!("{} {}", rule.lhs.0, rule.lhs.1);
            let name = r.families[f].name.clone();
            r.drop_family(
                f,
                format!("{name} dropped on {}: {witness} is nonzero under the classical representation", g.name()),
            );
        }
    }
    r.complete();
    Ok(r)
}

/// Relations of the free unitary quantum group `U_n⁺`: `u` and its
/// entrywise adjoint are both unitary.
pub fn free_unitary_relations(n: usize) -> RelationSet {
    let mut r = RelationSet::new(format!("free-unitary-{n}"), n);
    let fams = [
        r.family("unitary u*u", RuleKind::SumCollapse, Provenance::Axiom),
        r.family("unitary uu*", RuleKind::SumCollapse, Provenance::Axiom),
        r.family("conjugate-unitary", RuleKind::SumCollapse, Provenance::Axiom),
        r.family("conjugate-unitary*", RuleKind::SumCollapse, Provenance::Axiom),
    ];
    let ones = vec![Q::one(); n];
    for i in 0..n {
        for j in 0..n {
            let delta = if i == j { NCPoly::one() } else { NCPoly::zero() };
            let schemas: [Vec<Word>; 4] = [
                (0..n).map(|k| Word(vec![Gen::u_star(k, i), Gen::u(k, j)])).collect(),
                (0..n).map(|k| Word(vec![Gen::u(i, k), Gen::u_star(j, k)])).collect(),
                (0..n).map(|k| Word(vec![Gen::u(k, i), Gen::u_star(k, j)])).collect(),
                (0..n).map(|k| Word(vec![Gen::u_star(i, k), Gen::u(j, k)])).collect(),
            ];
            for (f, letters) in fams.iter().zip(schemas) {
                r.schema(*f, letters, ones.clone(), delta.clone());
            }
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn magic_rule_counts() {
        let r = magic_relations(3);
        assert_eq!(r.lookup_pair(Gen::q(0, 0), Gen::q(0, 1)).map(|x| x.0), Some(PairRhs::Zero));
        assert_eq!(
            r.lookup_pair(Gen::q(1, 2), Gen::q(1, 2)).map(|x| x.0),
            Some(PairRhs::Gen(Gen::q(1, 2)))
        );
        assert_eq!(r.lookup_pair(Gen::q(0, 0), Gen::q(1, 1)), None);
        assert_eq!(r.schemas.len(), 6);
    }

    #[test]
    fn k3_keeps_both_orientations() {
        let r = qaut_relations(&fixtures::k3()).unwrap();
        assert!(r.events.is_empty(), "{:?}", r.events);
        // (i,k) ∉ E iff i = k, so q_{s(γ)i} q_{r(γ)i} → 0 for every edge γ
        let g = fixtures::k3();
        for e in g.edges() {
            for i in 0..3 {
                let rule = r.lookup_pair(Gen::q(e.source, i), Gen::q(e.range, i));
                assert_eq!(rule.map(|x| x.0), Some(PairRhs::Zero));
            }
        }
    }

    #[test]
    fn cycle_drops_wrong_orientation() {
        let r = qaut_relations(&fixtures::cycle3()).unwrap();
        let drops = r.events.iter().filter(|e| e.contains("dropped")).count();
        assert_eq!(drops, 2, "{:?}", r.events);
        // the quantum automorphism group of a cycle is classical: nine
        // generators collapse to three classes
        assert_eq!(r.aliases.len(), 6);
        for name in [EDGE_SUPPORT_FAMILIES[1], EDGE_SUPPORT_FAMILIES[3]] {
            assert!(!r.is_enabled(r.family_index(name).unwrap()));
        }
        for name in [EDGE_SUPPORT_FAMILIES[0], EDGE_SUPPORT_FAMILIES[2]] {
            assert!(r.is_enabled(r.family_index(name).unwrap()));
        }
    }

    #[test]
    fn loops_are_rejected() {
        assert!(qaut_relations(&fixtures::cuntz(2)).is_err());
    }

    #[test]
    fn free_unitary_has_no_monomial_rules() {
        let r = free_unitary_relations(2);
        assert!(r.pair_rules.is_empty());
        assert_eq!(r.schemas.len(), 16);
        let r = r.with_formal_unitary();
        assert_eq!(r.lookup_pair(Gen::W, Gen::WStar).map(|x| x.0), Some(PairRhs::One));
    }
}
