//! The corepresentation `U` of the quantum automorphism group on the level
//! spaces, the action `α` on the graph algebra, and the identity suite
//! showing that `U` is a unitary corepresentation implementing `α` and
//! commuting with the Dirac operator.
//!
//! Every identity is reduced to finitely many polynomial obligations, one per
//! basis coordinate. Each obligation is sent through the rewriting engine and
//! evaluated under the registered numeric representations.

use std::collections::BTreeMap;
use std::time::Instant;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{self, Q};
use crate::graph::{Convention, DirectedGraph, EdgeIx, Path, VertexIx};
use crate::hilbert::{dirac, AlphaSpec, PathSpace};
use crate::nc::normal::{normal_form_search, tensor_normal_form_traced, Trace, TraceSummary};
use crate::nc::provider::CMatrix;
use crate::nc::{comultiply, Gen, NCPoly, RelationSet, RepresentationProvider, TensorPoly};
use crate::perron::PerronData;

/// Which generators appear in `U` and `α`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ActionScheme {
    /// Edge coefficient `q_{r(e')r(e)} q_{s(e')s(e)}`, vertex coefficient `q_{ji}`.
    GraphQaut,
    /// Loop-indexed linear action on a one-vertex graph: edge coefficient
    /// `u_{le}` (or `q_{le}`), vertex coefficient `1`.
    CuntzLinear { magic: bool },
}

impl ActionScheme {
    /// Size of the index set of the matrix generators.
    pub fn index_size(&self, g: &DirectedGraph) -> usize {
        match self {
            ActionScheme::GraphQaut => g.vertex_count(),
            ActionScheme::CuntzLinear { .. } => g.edge_count(),
        }
    }

    pub fn edge_coeff(&self, g: &DirectedGraph, row: EdgeIx, col: EdgeIx) -> Vec<Gen> {
        match self {
            ActionScheme::GraphQaut => vec![
                Gen::q(g.range(row), g.range(col)),
                Gen::q(g.source(row), g.source(col)),
            ],
            ActionScheme::CuntzLinear { magic: true } => vec![Gen::q(row, col)],
            ActionScheme::CuntzLinear { magic: false } => vec![Gen::u(row, col)],
        }
    }

    pub fn vertex_coeff(&self, row: VertexIx, col: VertexIx) -> Vec<Gen> {
        match self {
            ActionScheme::GraphQaut => vec![Gen::q(row, col)],
            ActionScheme::CuntzLinear { .. } => Vec::new(),
        }
    }

    /// `Q_{ηλ}` for paths of equal degree.
    pub fn path_coeff(&self, g: &DirectedGraph, eta: &Path, lam: &Path) -> NCPoly {
        debug_assert_eq!(eta.degree(), lam.degree());
        if lam.is_vertex() {
            return NCPoly::product(self.vertex_coeff(eta.range(), lam.range()));
        }
        NCPoly::product(
            eta.edges()
                .iter()
                .zip(lam.edges())
                .flat_map(|(&a, &b)| self.edge_coeff(g, a, b)),
        )
    }
}

/// The matrix of `U` on the degree-`k` basis: entry `(η, λ)` is `Q_{ηλ}`.
#[derive(Debug, Clone)]
pub struct LevelCorep {
    pub k: usize,
    pub basis: Vec<Path>,
    pub entries: Vec<Vec<NCPoly>>,
}

pub fn build_corep(g: &DirectedGraph, scheme: ActionScheme, k: usize) -> LevelCorep {
    let basis = g.enumerate_paths(k);
    let entries = basis
        .iter()
        .map(|eta| basis.iter().map(|lam| scheme.path_coeff(g, eta, lam)).collect())
        .collect();
    LevelCorep { k, basis, entries }
}

/// `α(S_e) = Σ_l S_{e_l} ⊗ c_{l,e}` and `α(p_i) = Σ_k p_k ⊗ c_{k,i}`.
#[derive(Debug, Clone)]
pub struct ActionImage {
    pub edges: Vec<Vec<(EdgeIx, NCPoly)>>,
    pub vertices: Vec<Vec<(VertexIx, NCPoly)>>,
}

pub fn build_action(g: &DirectedGraph, scheme: ActionScheme) -> ActionImage {
    let edges = (0..g.edge_count())
        .map(|e| {
            (0..g.edge_count())
                .map(|l| (l, NCPoly::product(scheme.edge_coeff(g, l, e))))
                .collect()
        })
        .collect();
    let vertices = (0..g.vertex_count())
        .map(|i| {
            (0..g.vertex_count())
                .map(|k| (k, NCPoly::product(scheme.vertex_coeff(k, i))))
                .collect()
        })
        .collect();
    ActionImage { edges, vertices }
}

/// `ρ^{half_power/2} Σ_η χ_[η] ⊗ a_η` on a fixed level.
#[derive(Debug, Clone, PartialEq)]
pub struct ModuleVec {
    pub level: usize,
    pub half_power: i64,
    pub coeffs: BTreeMap<usize, NCPoly>,
}

impl ModuleVec {
    pub fn zero(level: usize, half_power: i64) -> Self {
        ModuleVec {
            level,
            half_power,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn add_at(&mut self, idx: usize, p: &NCPoly) {
        let e = self.coeffs.entry(idx).or_default();
        e.add_scaled(p, &exact::q(1));
    }

    /// Coordinates of `self − other`; both must live on the same level with
    /// the same power of `ρ`.
    pub fn difference(&self, other: &ModuleVec, dim: usize) -> Vec<NCPoly> {
        assert_eq!((self.level, self.half_power), (other.level, other.half_power));
        (0..dim)
            .map(|i| {
                let a = self.coeffs.get(&i).cloned().unwrap_or_default();
                let b = other.coeffs.get(&i).cloned().unwrap_or_default();
                &a - &b
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckStatus {
    Pass,
    Fail,
}

/// Outcome of one identity check over all its basis instances.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub graph: String,
    pub levels: BTreeMap<String, usize>,
    pub status: CheckStatus,
    /// Polynomial obligations examined.
    pub obligations: usize,
    /// Obligations whose normal form vanished.
    pub proved_zero: usize,
    /// Largest norm of an obligation under the numeric representations.
    pub numeric_residual: Option<f64>,
    /// A few obligations that did not reduce to zero, in normal form.
    pub unresolved: Vec<String>,
    pub notes: Vec<String>,
    pub trace: TraceSummary,
    pub wall_ms: u128,
}

impl CheckRecord {
    pub fn passed(&self) -> bool {
        self.status == CheckStatus::Pass
    }
}

const NUMERIC_TOL: f64 = 1e-10;
const MAX_UNRESOLVED: usize = 3;

/// Collects obligations for one check.
struct Obligations<'a> {
    name: String,
    graph: String,
    levels: BTreeMap<String, usize>,
    rels: &'a RelationSet,
    providers: &'a [RepresentationProvider],
    trace: Trace,
    count: usize,
    proved: usize,
    residual: Option<f64>,
    unresolved: Vec<String>,
    notes: Vec<String>,
    symbolic: bool,
    start: Instant,
}

impl<'a> Obligations<'a> {
    fn new(v: &'a Verifier<'_>, name: &str, levels: &[(&str, usize)]) -> Self {
        Obligations {
            name: name.to_string(),
            graph: v.graph.name().to_string(),
            levels: levels.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            rels: &v.rels,
            providers: &v.providers,
            trace: Trace::new(),
            count: 0,
            proved: 0,
            residual: None,
            unresolved: Vec::new(),
            notes: Vec::new(),
            symbolic: true,
            start: Instant::now(),
        }
    }

    fn numeric(&mut self, p: &NCPoly) {
        for prov in self.providers {
            if let Some(r) = prov.norm_of(p) {
                self.residual = Some(self.residual.map_or(r, |x: f64| x.max(r)));
            }
        }
    }

    fn push(&mut self, p: &NCPoly) {
        self.count += 1;
        self.numeric(p);
        if !self.symbolic {
            return;
        }
        let nf = normal_form_search(p, self.rels, &mut self.trace);
        if nf.is_zero() {
            self.proved += 1;
        } else if self.unresolved.len() < MAX_UNRESOLVED {
            self.unresolved.push(nf.to_string());
        }
    }

    fn push_tensor(&mut self, t: &TensorPoly) {
        self.count += 1;
        for prov in self.providers {
            if let Some(r) = tensor_norm(prov, t) {
                self.residual = Some(self.residual.map_or(r, |x: f64| x.max(r)));
            }
        }
        let nf = tensor_normal_form_traced(t, self.rels, &mut self.trace);
        if nf.is_zero() {
            self.proved += 1;
        } else if self.unresolved.len() < MAX_UNRESOLVED {
            self.unresolved.push(nf.to_string());
        }
    }

    fn finish(self) -> CheckRecord {
        let numeric_ok = self.residual.is_none_or(|r| r < NUMERIC_TOL);
        let symbolic_ok = !self.symbolic || self.proved == self.count;
        let has_evidence = self.symbolic || self.residual.is_some();
        let status = if numeric_ok && symbolic_ok && has_evidence {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        };
        CheckRecord {
            name: self.name,
            graph: self.graph,
            levels: self.levels,
            status,
            obligations: self.count,
            proved_zero: self.proved,
            numeric_residual: self.residual,
            unresolved: self.unresolved,
            notes: self.notes,
            trace: self.trace.summary(),
            wall_ms: self.start.elapsed().as_millis(),
        }
    }
}

/// Frobenius norm of `Σ c · A(a) ⊗ A(b)` under one provider.
pub fn tensor_norm(prov: &RepresentationProvider, t: &TensorPoly) -> Option<f64> {
    let d = prov.dim;
    let mut acc = CMatrix::zeros(d * d, d * d);
    for ((a, b), c) in t.terms() {
        let ea = prov.evaluate_word(a)?;
        let eb = prov.evaluate_word(b)?;
        acc += ea.kronecker(&eb) * Complex64::new(exact::to_f64(c), 0.0);
    }
    Some(acc.norm())
}

/// Everything needed to run the identity suite on one graph.
pub struct Verifier<'g> {
    pub graph: &'g DirectedGraph,
    pub pf: &'g PerronData,
    pub space: PathSpace<'g>,
    pub rels: RelationSet,
    pub scheme: ActionScheme,
    pub providers: Vec<RepresentationProvider>,
}

impl<'g> Verifier<'g> {
    /// Registers every provider against `rels` before use.
    pub fn new(
        graph: &'g DirectedGraph,
        pf: &'g PerronData,
        n: usize,
        rels: RelationSet,
        scheme: ActionScheme,
        providers: Vec<RepresentationProvider>,
    ) -> Result<Self> {
        let providers = providers
            .into_iter()
            .map(|p| p.register(&rels))
            .collect::<Result<Vec<_>>>()?;
        Ok(Verifier {
            graph,
            pf,
            space: PathSpace::new(graph, pf, n),
            rels,
            scheme,
            providers,
        })
    }

    fn basis(&self, k: usize) -> &[Path] {
        &self.space.level(k).basis
    }

    fn index(&self, k: usize, p: &Path) -> usize {
        self.space.level(k).index_of(p).expect("path in level")
    }

    fn coeff(&self, eta: &Path, lam: &Path) -> NCPoly {
        self.scheme.path_coeff(self.graph, eta, lam)
    }

    /// `U(χ_[λ]) = Σ_η χ_[η] ⊗ Q_{ηλ}`.
    pub fn apply_u(&self, lam: &Path) -> ModuleVec {
        let k = lam.degree();
        let mut out = ModuleVec::zero(k, 0);
        for (i, eta) in self.basis(k).iter().enumerate() {
            out.add_at(i, &self.coeff(eta, lam));
        }
        out
    }

    /// Re-expresses a level-`l` module vector on level `k` through the
    /// source-append refinement.
    pub fn embed_vec(&self, v: &ModuleVec, k: usize) -> ModuleVec {
        let mut out = ModuleVec::zero(k, v.half_power);
        for (i, p) in &v.coeffs {
            let eta = &self.basis(v.level)[*i];
            for mu in self.graph.refine(eta, k - v.level, Convention::SourceAppend) {
                out.add_at(self.index(k, &mu), p);
            }
        }
        out
    }

    /// `Σ_η π(op_λ)χ_[η] ⊗ a_η`, for `op_λ` either `S_λ` or `S_λ*`.
    pub fn apply_pi(&self, lam: &Path, star: bool, v: &ModuleVec) -> Result<ModuleVec> {
        let op = if star {
            crate::hilbert::Op::SStar(lam.clone())
        } else {
            crate::hilbert::Op::S(lam.clone())
        };
        let m = self.space.represent_op(&op, v.level)?;
        let mut out = ModuleVec::zero(m.to, v.half_power + m.half_power);
        for (i, a) in &v.coeffs {
            for (j, c) in &m.cols[*i] {
                out.coeffs.entry(*j).or_default().add_scaled(a, c);
            }
        }
        Ok(out)
    }

    /// `Σ_η χ_[η] ⊗ x·a_η` (right multiplication of coefficients).
    pub fn right_mul(v: &ModuleVec, x: &NCPoly) -> ModuleVec {
        ModuleVec {
            level: v.level,
            half_power: v.half_power,
            coeffs: v.coeffs.iter().map(|(i, a)| (*i, x * a)).collect(),
        }
    }

    /// Well-definedness across levels: `U_l(χ_[λ])`, embedded into level
    /// `k`, equals `Σ U_k(χ_[ν])` over the refinement of `λ` on `side`.
    pub fn check_welldefined(&self, l: usize, k: usize, side: Convention) -> CheckRecord {
        let mut ob = Obligations::new(self, "welldefined", &[("l", l), ("k", k)]);
        if side != Convention::SourceAppend {
            ob.notes.push(format!("refinement side forced to {side}"));
        }
        let dim = self.space.level(k).dim();
        for lam in self.basis(l) {
            let lhs = self.embed_vec(&self.apply_u(lam), k);
            let mut rhs = ModuleVec::zero(k, 0);
            for nu in self.graph.refine(lam, k - l, side) {
                let u = self.apply_u(&nu);
                for (i, p) in &u.coeffs {
                    rhs.add_at(*i, p);
                }
            }
            for p in lhs.difference(&rhs, dim) {
                ob.push(&p);
            }
        }
        ob.finish()
    }

    /// Inner-product preservation on the basis of levels `l ≤ k`:
    /// `⟨U χ_[λ], U χ_[η]⟩ = ⟨χ_[λ], χ_[η]⟩` with `d(λ) = l`, `d(η) = k`.
    pub fn check_isometry(&self, l: usize, k: usize) -> CheckRecord {
        let mut ob = Obligations::new(self, "isometry", &[("l", l), ("k", k)]);
        let x: Vec<Q> = match self.pf.exact_x() {
            Some(x) => x.to_vec(),
            None => {
                ob.symbolic = false;
                ob.notes
                    .push("Perron vector is irrational; numeric evaluation only".into());
                self.pf.x.iter().map(|v| exact::approximate(*v, 1 << 40).unwrap_or_default()).collect()
            }
        };
        for lam in self.basis(l) {
            let a = self.embed_vec(&self.apply_u(lam), k);
            for eta in self.basis(k) {
                let b = self.apply_u(eta);
                let mut p = NCPoly::zero();
                for (z, zeta) in self.basis(k).iter().enumerate() {
                    let (Some(az), Some(bz)) = (a.coeffs.get(&z), b.coeffs.get(&z)) else {
                        continue;
                    };
                    p.add_scaled(&(&az.adjoint() * bz), &x[zeta.source()]);
                }
                if eta.has_prefix(lam) {
                    p.add_term(Default::default(), -x[eta.source()].clone());
                }
                ob.push(&p);
            }
        }
        ob.finish()
    }

    /// `(U ⊗ id)U = (id ⊗ Δ)U` on the level-`k` basis.
    pub fn check_comultiplicative(&self, k: usize) -> CheckRecord {
        let mut ob = Obligations::new(self, "comultiplicative", &[("k", k)]);
        let n = self.scheme.index_size(self.graph);
        let basis = self.basis(k);
        for lam in basis {
            for mu in basis {
                let mut lhs = TensorPoly::zero();
                for eta in basis {
                    lhs.add_scaled(
                        &TensorPoly::simple(&self.coeff(mu, eta), &self.coeff(eta, lam)),
                        &exact::q(1),
                    );
                }
                let rhs = comultiply(&self.coeff(mu, lam), n);
                ob.push_tensor(&(&lhs - &rhs));
            }
        }
        ob.finish()
    }

    /// `Σ_μ U(χ_[μ]) · Q_{λμ}* = χ_[λ] ⊗ 1`, the explicit combination that
    /// shows the range of `U` is dense.
    pub fn check_density(&self, lam: &Path) -> CheckRecord {
        let k = lam.degree();
        let mut ob = Obligations::new(self, "density", &[("k", k)]);
        let basis = self.basis(k);
        let mut total = ModuleVec::zero(k, 0);
        for mu in basis {
            let u = self.apply_u(mu);
            let c = self.coeff(lam, mu).adjoint();
            for (i, p) in &u.coeffs {
                total.add_at(*i, &(p * &c));
            }
        }
        let mut target = ModuleVec::zero(k, 0);
        target.add_at(self.index(k, lam), &NCPoly::one());
        for p in total.difference(&target, basis.len()) {
            ob.push(&p);
        }
        ob.finish()
    }

    /// `(π⊗id)α(S_λ^♯)U(χ_[η]) = U(π(S_λ^♯)χ_[η])` for `♯ ∈ {*, none}`.
    pub fn implementation_obligations(&self, lam: &Path, eta: &Path, star: bool) -> Result<Vec<NCPoly>> {
        let d = lam.degree();
        let u_eta = self.apply_u(eta);
        let mut lhs: Option<ModuleVec> = None;
        for xi in self.basis(d) {
            let c = self.coeff(xi, lam);
            let c = if star { c.adjoint() } else { c };
            let term = self.apply_pi(xi, star, &Self::right_mul(&u_eta, &c))?;
            lhs = Some(match lhs {
                None => term,
                Some(mut acc) => {
                    for (i, p) in &term.coeffs {
                        acc.add_at(*i, p);
                    }
                    acc
                }
            });
        }
        let lhs = lhs.expect("every degree has a path");

        let mut unit = ModuleVec::zero(eta.degree(), 0);
        unit.add_at(self.index(eta.degree(), eta), &NCPoly::one());
        let image = self.apply_pi(lam, star, &unit)?;
        let mut rhs = ModuleVec::zero(image.level, image.half_power);
        for (j, c) in &image.coeffs {
            let target = &self.basis(image.level)[*j];
            let u = self.apply_u(target);
            for (i, p) in &u.coeffs {
                let mut scaled = NCPoly::zero();
                scaled.add_scaled(p, &c.constant_term());
                rhs.add_at(*i, &scaled);
            }
        }
        Ok(lhs.difference(&rhs, self.space.level(lhs.level).dim()))
    }

    /// Implementation identities for all `λ, η` with `d(λ) ≤ max_lambda`,
    /// `d(η) ≤ max_eta`, starred and unstarred, wherever the truncation
    /// allows.
    pub fn check_implementation(&self, max_lambda: usize, max_eta: usize) -> CheckRecord {
        let mut ob = Obligations::new(
            self,
            "implementation",
            &[("lambda", max_lambda), ("eta", max_eta), ("N", self.space.n)],
        );
        let mut skipped = 0;
        for dl in 0..=max_lambda {
            for de in 0..=max_eta {
                for lam in self.basis(dl) {
                    for eta in self.basis(de) {
                        for star in [true, false] {
                            match self.implementation_obligations(lam, eta, star) {
                                Ok(ps) => ps.iter().for_each(|p| ob.push(p)),
                                Err(Error::TruncationOverflow { .. }) => skipped += 1,
                                Err(e) => panic!("unexpected error: {e}"),
                            }
                        }
                    }
                }
            }
        }
        if skipped > 0 {
            ob.notes
                .push(format!("{skipped} instances skipped: image above truncation level"));
        }
        ob.finish()
    }

    /// `(φ⊗id)α(S_λ S_μ*) = φ(S_λ S_μ*)·1` for all `λ, μ` of degree `≤ max`.
    pub fn check_kms_invariance(&self, max: usize) -> CheckRecord {
        let mut ob = Obligations::new(self, "kms-invariance", &[("degree", max)]);
        let Some(x) = self.pf.exact_x() else {
            ob.symbolic = false;
            ob.notes.push("Perron vector is irrational; skipped".into());
            return ob.finish();
        };
        for d in 0..=max {
            let basis = self.basis(d);
            for lam in basis {
                for mu in basis {
                    let mut p = NCPoly::zero();
                    for xi in basis {
                        let term = &self.coeff(xi, lam) * &self.coeff(xi, mu).adjoint();
                        p.add_scaled(&term, &x[xi.source()]);
                    }
                    if lam == mu {
                        p.add_term(Default::default(), -x[lam.source()].clone());
                    }
                    ob.push(&p);
                }
            }
        }
        ob.finish()
    }

    /// Evaluates `U` on the level-`N` basis under `prov` as a block matrix.
    pub fn evaluate_u(&self, prov: &RepresentationProvider, assign: &dyn Fn(&NCPoly) -> Option<CMatrix>) -> Option<CMatrix> {
        let n = self.space.n;
        let basis = self.basis(n);
        let d = prov.dim;
        let mut m = CMatrix::zeros(basis.len() * d, basis.len() * d);
        for (i, eta) in basis.iter().enumerate() {
            for (j, lam) in basis.iter().enumerate() {
                let block = assign(&self.coeff(eta, lam))?;
                m.view_mut((i * d, j * d), (d, d)).copy_from(&block);
            }
        }
        Some(m)
    }

    /// Structural part (well-definedness between all levels) plus the
    /// numeric commutator `[U, D ⊗ 1]` and Gram-unitarity of `U` under each
    /// provider.
    pub fn check_dirac_commutation(&self, alpha: AlphaSpec) -> Result<CheckRecord> {
        let n = self.space.n;
        let mut ob = Obligations::new(self, "dirac-commutation", &[("N", n)]);
        for k in 1..=n {
            for l in 0..k {
                let rec = self.check_welldefined(l, k, Convention::SourceAppend);
                ob.count += rec.obligations;
                ob.proved += rec.proved_zero;
                if let Some(r) = rec.numeric_residual {
                    ob.residual = Some(ob.residual.map_or(r, |x: f64| x.max(r)));
                }
                ob.unresolved.extend(rec.unresolved.into_iter().take(MAX_UNRESOLVED));
            }
        }
        let triple = dirac(self.graph, self.pf, n, alpha)?;
        for prov in &self.providers {
            let Some(u) = self.evaluate_u(prov, &|p| prov.evaluate(p)) else {
                continue;
            };
            let (comm, unit) = commutator_and_unitarity(&u, &triple.dirac, &triple.gram, prov.dim);
            ob.notes.push(format!(
                "{}: commutator {comm:.3e}, Gram-unitarity {unit:.3e}",
                prov.name
            ));
            let r = comm.max(unit);
            ob.residual = Some(ob.residual.map_or(r, |x: f64| x.max(r)));
        }
        Ok(ob.finish())
    }
}

/// `‖U(D⊗1) − (D⊗1)U‖` and `‖U*(G⊗1)U − G⊗1‖` (largest entry modulus).
pub fn commutator_and_unitarity(
    u: &CMatrix,
    d: &DMatrix<f64>,
    gram: &nalgebra::DVector<f64>,
    rep_dim: usize,
) -> (f64, f64) {
    let id = CMatrix::identity(rep_dim, rep_dim);
    let dc = d.map(|v| Complex64::new(v, 0.0)).kronecker(&id);
    let g = CMatrix::from_diagonal(&gram.map(|v| Complex64::new(v, 0.0))).kronecker(&id);
    let comm = (u * &dc - &dc * u).camax();
    let unit = (u.adjoint() * &g * u - &g).camax();
    (comm, unit)
}

/// `U` on level `N` with every `q_{ij}` replaced by a scalar `o_{ij}`; for a
/// non-magic orthogonal `o` this breaks the corepresentation and serves as a
/// negative control for the commutation check.
pub fn scalar_substitution(v: &Verifier<'_>, o: &DMatrix<f64>) -> Option<CMatrix> {
    let mut prov = RepresentationProvider::new("scalar-substitution", 1);
    for i in 0..o.nrows() {
        for j in 0..o.ncols() {
            prov.assign(Gen::q(i, j), CMatrix::from_element(1, 1, Complex64::new(o[(i, j)], 0.0)));
        }
    }
    v.evaluate_u(&prov, &|p| prov.evaluate(p))
}

/// The identity suite at levels `l < k ≤ max_level` with truncation `N`;
/// `side` is the refinement used on the right of the well-definedness
/// checks.
pub fn run_suite(
    v: &Verifier<'_>,
    max_level: usize,
    alpha: AlphaSpec,
    side: Convention,
) -> Result<Vec<CheckRecord>> {
    let mut out = Vec::new();
    for k in 1..=max_level {
        for l in 0..k {
            out.push(v.check_welldefined(l, k, side));
        }
    }
    for k in 0..=max_level {
        for l in 0..=k {
            out.push(v.check_isometry(l, k));
        }
    }
    for k in 0..=max_level {
        out.push(v.check_comultiplicative(k));
    }
    for k in 0..=max_level {
        let mut merged: Option<CheckRecord> = None;
        for lam in v.graph.enumerate_paths(k) {
            let rec = v.check_density(&lam);
            merged = Some(match merged {
                None => rec,
                Some(acc) => merge_records(acc, rec),
            });
        }
        out.extend(merged);
    }
    out.push(v.check_dirac_commutation(alpha)?);
    out.push(v.check_implementation(max_level, max_level));
    out.push(v.check_kms_invariance(max_level));
    Ok(out)
}

fn merge_records(mut a: CheckRecord, b: CheckRecord) -> CheckRecord {
    a.obligations += b.obligations;
    a.proved_zero += b.proved_zero;
    a.numeric_residual = match (a.numeric_residual, b.numeric_residual) {
        (Some(x), Some(y)) => Some(x.max(y)),
        (x, y) => x.or(y),
    };
    for u in b.unresolved {
        if a.unresolved.len() < MAX_UNRESOLVED {
            a.unresolved.push(u);
        }
    }
    a.notes.extend(b.notes);
    a.status = if a.status == CheckStatus::Pass && b.status == CheckStatus::Pass {
        CheckStatus::Pass
    } else {
        CheckStatus::Fail
    };
    a.trace.steps += b.trace.steps;
    for (k, c) in b.trace.rules {
        *a.trace.rules.entry(k).or_default() += c;
    }
    a.trace.digest = {
        use sha2::{Digest, Sha256};
        hex::encode(Sha256::digest(format!("{}{}", a.trace.digest, b.trace.digest)))
    };
    a.wall_ms += b.wall_ms;
    a
}
