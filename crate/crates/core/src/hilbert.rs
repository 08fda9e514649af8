//! Finite truncations of `L²(Λ^∞, M)`: level spaces spanned by cylinder
//! indicators, embeddings between levels, the path-space representation of
//! the graph algebra, and the Dirac operator built from the level filtration.
//!
//! Operators are stored exactly as `ρ^{h/2} · M` with `M` a sparse rational
//! matrix, so Cuntz–Krieger identities hold exactly even when `ρ` is
//! irrational.

use std::collections::{BTreeMap, HashMap};

use nalgebra::{DMatrix, DVector};
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{self, Q};
use crate::graph::{Convention, DirectedGraph, Path, VertexIx};
use crate::perron::{cylinder_measure, PerronData};

/// Sparse column: basis index to coefficient.
pub type SparseCol = BTreeMap<usize, Q>;

/// Degree-`k` cylinder indicators `χ_[η]` with their Gram weights `M([η])`.
#[derive(Debug, Clone)]
pub struct LevelSpace {
    pub k: usize,
    pub basis: Vec<Path>,
    pub gram: Vec<f64>,
    pub gram_exact: Option<Vec<Q>>,
    index: HashMap<Path, usize>,
}

impl LevelSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn index_of(&self, p: &Path) -> Option<usize> {
        self.index.get(p).copied()
    }
}

pub fn level_space(g: &DirectedGraph, pf: &PerronData, k: usize) -> LevelSpace {
    let basis = g.enumerate_paths(k);
    let measures: Vec<_> = basis.iter().map(|p| cylinder_measure(pf, p)).collect();
    let gram = measures.iter().map(|m| m.value).collect();
    let gram_exact = measures.iter().map(|m| m.exact.clone()).collect();
    let index = basis.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    LevelSpace {
        k,
        basis,
        gram,
        gram_exact,
        index,
    }
}

/// A linear map from level `from` to level `to`, equal to `ρ^{half_power/2}`
/// times the rational matrix whose columns are `cols`.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelMap {
    pub from: usize,
    pub to: usize,
    pub half_power: i64,
    pub cols: Vec<SparseCol>,
}

impl LevelMap {
    pub fn zero(from: usize, to: usize, from_dim: usize) -> Self {
        LevelMap {
            from,
            to,
            half_power: 0,
            cols: vec![SparseCol::new(); from_dim],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.is_empty())
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &LevelMap) -> LevelMap {
        assert_eq!(other.to, self.from, "level mismatch in composition");
        let cols = other
            .cols
            .iter()
            .map(|col| {
                let mut out = SparseCol::new();
                for (i, c) in col {
                    for (j, d) in &self.cols[*i] {
                        let e = out.entry(*j).or_insert_with(Q::zero);
                        *e += c * d;
                    }
                }
                out.retain(|_, v| !v.is_zero());
                out
            })
            .collect();
        LevelMap {
            from: other.from,
            to: self.to,
            half_power: self.half_power + other.half_power,
            cols,
        }
    }

    /// Entrywise sum of maps with identical levels and powers of `ρ`.
    pub fn add(&self, other: &LevelMap) -> Result<LevelMap> {
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if (self.from, self.to, self.half_power) != (other.from, other.to, other.half_power) {
            return Err(Error::Inexact(format!(
                "cannot add maps {}→{} (ρ^{}/2) and {}→{} (ρ^{}/2) exactly",
                self.from, self.to, self.half_power, other.from, other.to, other.half_power
            )));
        }
        let cols = self
            .cols
            .iter()
            .zip(&other.cols)
            .map(|(a, b)| {
                let mut out = a.clone();
                for (i, v) in b {
                    *out.entry(*i).or_insert_with(Q::zero) += v;
                }
                out.retain(|_, v| !v.is_zero());
                out
            })
            .collect();
        Ok(LevelMap {
            from: self.from,
            to: self.to,
            half_power: self.half_power,
            cols,
        })
    }

    pub fn scale(&self, c: &Q) -> LevelMap {
        let mut out = self.clone();
        for col in out.cols.iter_mut() {
            for v in col.values_mut() {
                *v *= c;
            }
            col.retain(|_, v| !v.is_zero());
        }
        out
    }

    pub fn neg(&self) -> LevelMap {
        self.scale(&exact::q(-1))
    }

    /// Largest absolute matrix entry, before the `ρ` power.
    pub fn max_abs_entry(&self) -> Q {
        exact::max_abs(self.cols.iter().flat_map(|c| c.values().cloned()))
    }

    pub fn to_dmatrix(&self, to_dim: usize, rho: f64) -> DMatrix<f64> {
        let scale = rho.powf(self.half_power as f64 / 2.0);
        let mut m = DMatrix::zeros(to_dim, self.cols.len());
        for (j, col) in self.cols.iter().enumerate() {
            for (i, v) in col {
                m[(*i, j)] = scale * exact::to_f64(v);
            }
        }
        m
    }
}

/// A generator of the graph algebra acting on path space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Op {
    /// `S_λ`; for a vertex path this is `p_v`.
    S(Path),
    /// `S_λ*`.
    SStar(Path),
    /// `p_v`.
    P(VertexIx),
}

/// The level spaces `R_0 … R_N` of a graph, coordinatized by cylinders.
#[derive(Debug, Clone)]
pub struct PathSpace<'g> {
    pub graph: &'g DirectedGraph,
    pub pf: &'g PerronData,
    pub n: usize,
    levels: Vec<LevelSpace>,
}

impl<'g> PathSpace<'g> {
    pub fn new(graph: &'g DirectedGraph, pf: &'g PerronData, n: usize) -> Self {
        let levels = (0..=n).map(|k| level_space(graph, pf, k)).collect();
        PathSpace {
            graph,
            pf,
            n,
            levels,
        }
    }

    pub fn level(&self, k: usize) -> &LevelSpace {
        &self.levels[k]
    }

    fn check_level(&self, k: usize) -> Result<()> {
        if k > self.n {
            return Err(Error::TruncationOverflow {
                requested: k,
                limit: self.n,
            });
        }
        Ok(())
    }

    /// `χ_[λ] ↦ Σ χ_[λμ]`, the inclusion `R_l ⊆ R_k` in cylinder coordinates.
    pub fn embed(&self, l: usize, k: usize) -> Result<LevelMap> {
        self.embed_with(l, k, Convention::SourceAppend)
    }

    /// Embedding that refines on the chosen side. Only the source-append side
    /// is measure-consistent; the other exists for negative controls.
    pub fn embed_with(&self, l: usize, k: usize, side: Convention) -> Result<LevelMap> {
        self.check_level(k)?;
        assert!(l <= k, "embedding goes upward");
        let target = &self.levels[k];
        let cols = self.levels[l]
            .basis
            .iter()
            .map(|lam| {
                self.graph
                    .refine(lam, k - l, side)
                    .iter()
                    .map(|mu| (target.index_of(mu).expect("refinement lies in level"), exact::q(1)))
                    .collect()
            })
            .collect();
        Ok(LevelMap {
            from: l,
            to: k,
            half_power: 0,
            cols,
        })
    }

    /// Re-expresses `m` with target level `k ≥ m.to`.
    pub fn lift(&self, m: &LevelMap, k: usize) -> Result<LevelMap> {
        if m.to == k {
            return Ok(m.clone());
        }
        Ok(self.embed(m.to, k)?.compose(m))
    }

    /// `Eᵀ G_k E − G_l` as an exact residual, or `None` without exact Perron data.
    pub fn embed_gram_residual(&self, l: usize, k: usize) -> Result<Option<Q>> {
        let e = self.embed(l, k)?;
        let (Some(gk), Some(gl)) = (&self.levels[k].gram_exact, &self.levels[l].gram_exact) else {
            return Ok(None);
        };
        let mut worst = Q::zero();
        for (a, ca) in e.cols.iter().enumerate() {
            for (b, cb) in e.cols.iter().enumerate() {
                let mut s = Q::zero();
                for (i, va) in ca {
                    if let Some(vb) = cb.get(i) {
                        s += va * vb * &gk[*i];
                    }
                }
                if a == b {
                    s -= &gl[a];
                }
                let s = s.abs();
                if s > worst {
                    worst = s;
                }
            }
        }
        Ok(Some(worst))
    }

    /// `π(op)` restricted to level `k`.
    pub fn represent_op(&self, op: &Op, k: usize) -> Result<LevelMap> {
        self.check_level(k)?;
        let input = &self.levels[k];
        match op {
            Op::P(v) => {
                let cols = input
                    .basis
                    .iter()
                    .enumerate()
                    .map(|(i, eta)| {
                        let mut c = SparseCol::new();
                        if eta.range() == *v {
                            c.insert(i, exact::q(1));
                        }
                        c
                    })
                    .collect();
                Ok(LevelMap {
                    from: k,
                    to: k,
                    half_power: 0,
                    cols,
                })
            }
            Op::S(lam) if lam.is_vertex() => self.represent_op(&Op::P(lam.range()), k),
            Op::SStar(lam) if lam.is_vertex() => self.represent_op(&Op::P(lam.range()), k),
            Op::S(lam) => {
                let d = lam.degree();
                let to = k + d;
                self.check_level(to)?;
                let target = &self.levels[to];
                let cols = input
                    .basis
                    .iter()
                    .map(|eta| {
                        let mut c = SparseCol::new();
                        if let Ok(p) = self.graph.compose(lam, eta) {
                            c.insert(target.index_of(&p).expect("composed path in level"), exact::q(1));
                        }
                        c
                    })
                    .collect();
                Ok(LevelMap {
                    from: k,
                    to,
                    half_power: d as i64,
                    cols,
                })
            }
            Op::SStar(lam) => {
                let d = lam.degree();
                let to = k.saturating_sub(d);
                let target = &self.levels[to];
                let cols = input
                    .basis
                    .iter()
                    .map(|eta| {
                        let mut c = SparseCol::new();
                        let image = if d >= k {
                            lam.has_prefix(eta).then(|| Path::vertex(lam.source()))
                        } else if eta.has_prefix(lam) {
                            Some(self.graph.split(eta, d).1)
                        } else {
                            None
                        };
                        if let Some(p) = image {
                            c.insert(target.index_of(&p).expect("image path in level"), exact::q(1));
                        }
                        c
                    })
                    .collect();
                Ok(LevelMap {
                    from: k,
                    to,
                    half_power: -(d as i64),
                    cols,
                })
            }
        }
    }

    /// `π(w)` on level `k` for an operator word (rightmost factor acts first).
    pub fn represent(&self, word: &[Op], k: usize) -> Result<LevelMap> {
        let mut acc: Option<LevelMap> = None;
        let mut level = k;
        for op in word.iter().rev() {
            let m = self.represent_op(op, level)?;
            level = m.to;
            acc = Some(match acc {
                None => m,
                Some(prev) => m.compose(&prev),
            });
        }
        Ok(acc.unwrap_or_else(|| {
            let dim = self.levels[k].dim();
            LevelMap {
                from: k,
                to: k,
                half_power: 0,
                cols: (0..dim).map(|i| SparseCol::from([(i, exact::q(1))])).collect(),
            }
        }))
    }

    /// `a − b` after lifting both to a common target level; `None` when the
    /// powers of `ρ` differ and cannot be compared exactly.
    pub fn difference(&self, a: &LevelMap, b: &LevelMap) -> Result<Option<LevelMap>> {
        let top = a.to.max(b.to);
        let la = self.lift(a, top)?;
        let lb = self.lift(b, top)?;
        if la.is_zero() || lb.is_zero() || la.half_power == lb.half_power {
            return Ok(Some(la.add(&lb.neg())?));
        }
        let Some(rho) = self.pf.exact_rho() else {
            return Ok(None);
        };
        let delta = la.half_power - lb.half_power;
        if delta % 2 != 0 {
            return Ok(None);
        }
        let lb = LevelMap {
            half_power: la.half_power,
            ..lb.scale(&exact::pow_i(rho, -delta / 2))
        };
        Ok(Some(la.add(&lb.neg())?))
    }

    /// Numeric operator norm proxy (max abs entry) of `a − b`.
    pub fn numeric_difference(&self, a: &LevelMap, b: &LevelMap) -> Result<f64> {
        let top = a.to.max(b.to);
        let la = self.lift(a, top)?;
        let lb = self.lift(b, top)?;
        let dim = self.levels[top].dim();
        let diff = la.to_dmatrix(dim, self.pf.rho) - lb.to_dmatrix(dim, self.pf.rho);
        Ok(diff.amax())
    }
}

/// One Cuntz–Krieger relation family with its worst residual.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RelationResidual {
    pub relation: String,
    pub instances: usize,
    pub max_residual: f64,
    pub exact: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CuntzKriegerReport {
    pub truncation: usize,
    pub relations: Vec<RelationResidual>,
}

impl CuntzKriegerReport {
    pub fn passed(&self) -> bool {
        self.relations.iter().all(|r| r.exact && r.max_residual == 0.0)
    }
}

/// Checks `S_e* S_e = p_{s(e)}` and `p_v = Σ_{r(e)=v} S_e S_e*` on every
/// interior level `k ≤ N − 1`.
pub fn cuntz_krieger_check(g: &DirectedGraph, pf: &PerronData, n: usize) -> Result<CuntzKriegerReport> {
    let space = PathSpace::new(g, pf, n);
    let mut first = RelationResidual {
        relation: "S_e* S_e = p_s(e)".into(),
        instances: 0,
        max_residual: 0.0,
        exact: true,
    };
    let mut second = RelationResidual {
        relation: "p_v = sum_{r(e)=v} S_e S_e*".into(),
        instances: 0,
        max_residual: 0.0,
        exact: true,
    };
    let record = |r: &mut RelationResidual, diff: Option<LevelMap>, lhs: &LevelMap, rhs: &LevelMap| -> Result<()> {
        r.instances += 1;
        match diff {
            Some(d) => {
                let v = exact::to_f64(&d.max_abs_entry()) * pf.rho.powf(d.half_power as f64 / 2.0);
                r.max_residual = r.max_residual.max(v);
            }
            None => {
                r.exact = false;
                r.max_residual = r.max_residual.max(space.numeric_difference(lhs, rhs)?);
            }
        }
        Ok(())
    };
    for k in 0..n {
        for e in 0..g.edge_count() {
            let lam = g.edge_path(e);
            let lhs = space.represent(&[Op::SStar(lam.clone()), Op::S(lam)], k)?;
            let rhs = space.represent(&[Op::P(g.source(e))], k)?;
            let diff = space.difference(&lhs, &rhs)?;
            record(&mut first, diff, &lhs, &rhs)?;
        }
        for v in 0..g.vertex_count() {
            let lhs = space.represent(&[Op::P(v)], k)?;
            let mut rhs: Option<LevelMap> = None;
            for e in g.edges_with_range(v) {
                let lam = g.edge_path(e);
                let term = space.represent(&[Op::S(lam.clone()), Op::SStar(lam)], k)?;
                rhs = Some(match rhs {
                    None => term,
                    Some(acc) => acc.add(&term)?,
                });
            }
            let rhs = rhs.unwrap_or_else(|| LevelMap::zero(k, k, space.level(k).dim()));
            let diff = space.difference(&lhs, &rhs)?;
            record(&mut second, diff, &lhs, &rhs)?;
        }
    }
    Ok(CuntzKriegerReport {
        truncation: n,
        relations: vec![first, second],
    })
}

/// The eigenvalue sequence `α_q` of the Dirac operator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum AlphaSpec {
    /// `α_q = q^{1/2 + ε}`.
    Power { epsilon: f64 },
    /// `α_q = q`.
    Linear,
}

impl Default for AlphaSpec {
    fn default() -> Self {
        AlphaSpec::Power { epsilon: 0.25 }
    }
}

impl AlphaSpec {
    pub fn alpha(&self, q: usize) -> f64 {
        match self {
            AlphaSpec::Power { epsilon } => (q as f64).powf(0.5 + epsilon),
            AlphaSpec::Linear => q as f64,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            AlphaSpec::Power { epsilon } if !(*epsilon > 0.0 && *epsilon < 0.5) => {
                Err(Error::Usage(format!("epsilon must lie in (0, 1/2), got {epsilon}")))
            }
            _ => Ok(()),
        }
    }
}

/// Number of degree-`k` paths for `k = 0..=max`, from powers of the
/// adjacency matrix.
pub fn path_counts(g: &DirectedGraph, max: usize) -> Vec<u128> {
    let a = g.adjacency_matrix();
    let n = a.len();
    let mut power: Vec<Vec<u128>> = (0..n)
        .map(|i| (0..n).map(|j| u128::from(i == j)).collect())
        .collect();
    let mut out = Vec::with_capacity(max + 1);
    for _ in 0..=max {
        out.push(power.iter().flatten().sum());
        power = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).map(|l| power[i][l] * u128::from(a[l][j])).sum())
                    .collect()
            })
            .collect();
    }
    out
}

/// `n_q = dim R_q − dim R_{q−1}` for `q = 0..=max`, with `dim R_{−1} = 1`.
pub fn multiplicities(g: &DirectedGraph, max: usize) -> Vec<u128> {
    let counts = path_counts(g, max);
    (0..=max)
        .map(|q| counts[q] - if q == 0 { 1 } else { counts[q - 1] })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumEntry {
    pub q: usize,
    pub alpha_q: f64,
    pub multiplicity: u128,
}

pub fn spectrum(g: &DirectedGraph, alpha: AlphaSpec, max: usize) -> Vec<SpectrumEntry> {
    multiplicities(g, max)
        .into_iter()
        .enumerate()
        .map(|(q, m)| SpectrumEntry {
            q,
            alpha_q: alpha.alpha(q),
            multiplicity: m,
        })
        .collect()
}

/// `Σ_{q ≤ Q} e^{−t α_q²} n_q`, the partial trace of `e^{−tD²}`.
pub fn theta_partial_trace(g: &DirectedGraph, alpha: AlphaSpec, t: f64, upto: usize) -> f64 {
    multiplicities(g, upto)
        .iter()
        .enumerate()
        .map(|(q, &n)| (-t * alpha.alpha(q).powi(2)).exp() * n as f64)
        .sum()
}

/// `e^{−t α_q²} m^q`, the `q`-th term of the dominating series, `m = |E|`.
pub fn theta_bound_term(m: usize, alpha: AlphaSpec, t: f64, q: usize) -> f64 {
    (-t * alpha.alpha(q).powi(2) + q as f64 * (m as f64).ln()).exp()
}

/// `(Q, partial trace)` rows for `Q = 0..=upto`, as CSV text.
pub fn partial_trace_csv(g: &DirectedGraph, alpha: AlphaSpec, t: f64, upto: usize) -> String {
    let mut out = String::from("Q,value\n");
    for q in 0..=upto {
        out.push_str(&format!("{q},{:.17e}\n", theta_partial_trace(g, alpha, t, q)));
    }
    out
}

/// The Dirac operator on the level-`N` truncation together with the
/// filtration projections, all as real matrices in cylinder coordinates.
#[derive(Debug, Clone)]
pub struct TruncatedTriple {
    pub n: usize,
    pub alpha: Vec<f64>,
    /// Diagonal Gram weights of the level-`N` basis.
    pub gram: DVector<f64>,
    /// `Ξ_q` for `q = −1..=N`, stored at index `q + 1`.
    pub xi: Vec<DMatrix<f64>>,
    /// `Ξ̂_{q,q−1}` for `q = 0..=N`.
    pub xi_hat: Vec<DMatrix<f64>>,
    pub dirac: DMatrix<f64>,
    pub multiplicities: Vec<u128>,
}

/// Projection onto the span of the columns of `e` (an embedding of a level
/// with diagonal Gram `gl`), orthogonal for the Gram form `gn`.
fn gram_projection(e: &DMatrix<f64>, gl: &DVector<f64>, gn: &DVector<f64>) -> DMatrix<f64> {
    let inv = DMatrix::from_diagonal(&gl.map(|v| 1.0 / v));
    e * inv * e.transpose() * DMatrix::from_diagonal(gn)
}

pub fn dirac(g: &DirectedGraph, pf: &PerronData, n: usize, alpha: AlphaSpec) -> Result<TruncatedTriple> {
    alpha.validate()?;
    let space = PathSpace::new(g, pf, n);
    let top = space.level(n);
    let dim = top.dim();
    let gn = DVector::from_vec(top.gram.clone());

    let ones = DMatrix::from_element(dim, 1, 1.0);
    let total = DVector::from_element(1, gn.sum());
    let mut xi = vec![gram_projection(&ones, &total, &gn)];
    for q in 0..=n {
        let e = space.embed(q, n)?.to_dmatrix(dim, pf.rho);
        let gq = DVector::from_vec(space.level(q).gram.clone());
        xi.push(gram_projection(&e, &gq, &gn));
    }
    let xi_hat: Vec<DMatrix<f64>> = (0..=n).map(|q| &xi[q + 1] - &xi[q]).collect();
    let alphas: Vec<f64> = (0..=n).map(|q| alpha.alpha(q)).collect();
    let mut d = DMatrix::zeros(dim, dim);
    for (q, p) in xi_hat.iter().enumerate() {
        d += p * alphas[q];
    }
    Ok(TruncatedTriple {
        n,
        alpha: alphas,
        gram: gn,
        xi,
        xi_hat,
        dirac: d,
        multiplicities: multiplicities(g, n),
    })
}

/// Largest residual of each structural invariant of a truncated triple.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TripleInvariants {
    pub idempotent: f64,
    pub gram_self_adjoint: f64,
    pub nested: f64,
    pub hat_orthogonal: f64,
    pub resolution_of_identity: f64,
    pub dirac_self_adjoint: f64,
    pub dirac_commutes: f64,
    /// `|trace(Ξ̂_q) − n_q|`.
    pub multiplicity: f64,
}

impl TripleInvariants {
    pub fn max(&self) -> f64 {
        [
            self.idempotent,
            self.gram_self_adjoint,
            self.nested,
            self.hat_orthogonal,
            self.resolution_of_identity,
            self.dirac_self_adjoint,
            self.dirac_commutes,
            self.multiplicity,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

impl TruncatedTriple {
    pub fn dim(&self) -> usize {
        self.gram.len()
    }

    /// `Ξ_q` for `q ≥ −1`.
    pub fn projection(&self, q: isize) -> &DMatrix<f64> {
        &self.xi[(q + 1) as usize]
    }

    fn gram_adjoint(&self, m: &DMatrix<f64>) -> DMatrix<f64> {
        let g = DMatrix::from_diagonal(&self.gram);
        let ginv = DMatrix::from_diagonal(&self.gram.map(|v| 1.0 / v));
        ginv * m.transpose() * g
    }

    pub fn check_invariants(&self) -> TripleInvariants {
        let mut inv = TripleInvariants {
            idempotent: 0.0,
            gram_self_adjoint: 0.0,
            nested: 0.0,
            hat_orthogonal: 0.0,
            resolution_of_identity: 0.0,
            dirac_self_adjoint: 0.0,
            dirac_commutes: 0.0,
            multiplicity: 0.0,
        };
        for (i, p) in self.xi.iter().enumerate() {
            inv.idempotent = inv.idempotent.max((p * p - p).amax());
            inv.gram_self_adjoint = inv.gram_self_adjoint.max((self.gram_adjoint(p) - p).amax());
            if i > 0 {
                let prev = &self.xi[i - 1];
                inv.nested = inv.nested.max((prev * p - prev).amax());
            }
            inv.dirac_commutes = inv
                .dirac_commutes
                .max((&self.dirac * p - p * &self.dirac).amax());
        }
        for (a, pa) in self.xi_hat.iter().enumerate() {
            for pb in self.xi_hat.iter().skip(a + 1) {
                inv.hat_orthogonal = inv.hat_orthogonal.max((pa * pb).amax());
            }
            inv.multiplicity = inv
                .multiplicity
                .max((pa.trace() - self.multiplicities[a] as f64).abs());
        }
        let mut sum = self.xi[0].clone();
        for p in &self.xi_hat {
            sum += p;
        }
        inv.resolution_of_identity = (sum - DMatrix::identity(self.dim(), self.dim())).amax();
        inv.dirac_self_adjoint = (self.gram_adjoint(&self.dirac) - &self.dirac).amax();
        inv
    }

    /// `Σ_{q ≤ Q} e^{−t α_q²} n_q` computed from the truncation itself.
    pub fn theta_partial_trace(&self, t: f64, upto: usize) -> Result<f64> {
        if upto > self.n {
            return Err(Error::TruncationOverflow {
                requested: upto,
                limit: self.n,
            });
        }
        Ok((0..=upto)
            .map(|q| (-t * self.alpha[q].powi(2)).exp() * self.xi_hat[q].trace())
            .sum())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{frac, q};
    use crate::fixtures;
    use crate::perron::perron;

    #[test]
    fn level_space_examples() {
        let c = fixtures::cycle3();
        let pc = perron(&c).unwrap();
        assert_eq!(level_space(&c, &pc, 4).dim(), 3);
        let k = fixtures::k3();
        let pk = perron(&k).unwrap();
        assert_eq!(level_space(&k, &pk, 2).dim(), 12);
        let l0 = level_space(&k, &pk, 0);
        assert_eq!(l0.gram_exact.unwrap(), vec![frac(1, 3); 3]);
    }

    #[test]
    fn embed_examples() {
        let k = fixtures::k3();
        let pk = perron(&k).unwrap();
        let s = PathSpace::new(&k, &pk, 3);
        let id = s.embed(2, 2).unwrap();
        assert!(id.cols.iter().enumerate().all(|(i, c)| c.len() == 1 && c[&i] == q(1)));
        let e = s.embed(1, 2).unwrap();
        assert!(e.cols.iter().all(|c| c.len() == 2));
        for l in 0..3 {
            for m in l..=3 {
                assert_eq!(s.embed_gram_residual(l, m).unwrap(), Some(Q::zero()));
            }
        }
        // composition of embeddings is the embedding
        assert_eq!(
            s.embed(1, 3).unwrap(),
            s.embed(2, 3).unwrap().compose(&s.embed(1, 2).unwrap())
        );
    }

    #[test]
    fn represent_examples() {
        let k = fixtures::k3();
        let pk = perron(&k).unwrap();
        let s = PathSpace::new(&k, &pk, 3);
        // π(S_e) χ_[η] = ρ^{1/2} χ_[eη] when s(e) = r(η)
        let e = k.edge_path(0);
        let m = s.represent(&[Op::S(e.clone())], 1).unwrap();
        assert_eq!(m.half_power, 1);
        for (i, eta) in s.level(1).basis.iter().enumerate() {
            let expect = k.compose(&e, eta).ok();
            match expect {
                Some(p) => assert_eq!(m.cols[i].keys().copied().collect::<Vec<_>>(), vec![s.level(2).index_of(&p).unwrap()]),
                None => assert!(m.cols[i].is_empty()),
            }
        }
        // π(S_λ*) χ_[η] with λ = ηβ lands on χ_[s(λ)]
        let lam = &s.level(2).basis[0];
        let (eta, _) = k.split(lam, 1);
        let m = s.represent(&[Op::SStar(lam.clone())], 1).unwrap();
        assert_eq!((m.to, m.half_power), (0, -2));
        let col = &m.cols[s.level(1).index_of(&eta).unwrap()];
        assert_eq!(col.keys().copied().collect::<Vec<_>>(), vec![lam.source()]);
        // same degree, λ ≠ η gives 0
        let m = s.represent(&[Op::SStar(k.edge_path(0))], 1).unwrap();
        for (i, c) in m.cols.iter().enumerate() {
            assert_eq!(c.is_empty(), i != 0);
        }
    }

    #[test]
    fn represent_respects_composition() {
        let k = fixtures::k3();
        let pk = perron(&k).unwrap();
        let s = PathSpace::new(&k, &pk, 4);
        for a in 0..k.edge_count() {
            for b in 0..k.edge_count() {
                let (ea, eb) = (k.edge_path(a), k.edge_path(b));
                let prod = s.represent(&[Op::S(ea.clone()), Op::S(eb.clone())], 1).unwrap();
                match k.compose(&ea, &eb) {
                    Ok(p) => assert_eq!(prod, s.represent(&[Op::S(p)], 1).unwrap()),
                    Err(_) => assert!(prod.is_zero()),
                }
            }
        }
    }

    #[test]
    fn overflow_is_reported() {
        let k = fixtures::k3();
        let pk = perron(&k).unwrap();
        let s = PathSpace::new(&k, &pk, 2);
        let err = s.represent(&[Op::S(k.edge_path(0))], 2).unwrap_err();
        assert!(matches!(err, Error::TruncationOverflow { requested: 3, limit: 2 }));
    }

    #[test]
    fn cuntz_krieger_examples() {
        for (g, n) in [(fixtures::k3(), 3), (fixtures::cycle3(), 4), (fixtures::cuntz(2), 3)] {
            let pf = perron(&g).unwrap();
            let r = cuntz_krieger_check(&g, &pf, n).unwrap();
            assert!(r.passed(), "{}: {:?}", g.name(), r);
        }
    }

    #[test]
    fn cuntz_krieger_exact_for_irrational_radius() {
        let g = DirectedGraph::new(
            "plastic",
            &["1", "2", "3"],
            &[("a", "2", "1"), ("b", "3", "2"), ("c", "1", "3"), ("d", "1", "2")],
        )
        .unwrap();
        let pf = perron(&g).unwrap();
        assert!(pf.exact.is_none());
        assert!(cuntz_krieger_check(&g, &pf, 4).unwrap().passed());
    }

    #[test]
    fn multiplicities_examples() {
        assert_eq!(multiplicities(&fixtures::cycle3(), 4), vec![2, 0, 0, 0, 0]);
        assert_eq!(multiplicities(&fixtures::k3(), 4), vec![2, 3, 6, 12, 24]);
        assert_eq!(multiplicities(&fixtures::cuntz(2), 3), vec![0, 1, 2, 4]);
    }

    #[test]
    fn dirac_invariants_hold() {
        for g in [fixtures::cycle3(), fixtures::k3(), fixtures::asym4()] {
            let pf = perron(&g).unwrap();
            let t = dirac(&g, &pf, 3, AlphaSpec::default()).unwrap();
            let inv = t.check_invariants();
            assert!(inv.max() < 1e-10, "{}: {inv:?}", g.name());
        }
    }

    #[test]
    fn theta_partial_trace_agrees_with_truncation() {
        let k = fixtures::k3();
        let pf = perron(&k).unwrap();
        let t = dirac(&k, &pf, 3, AlphaSpec::default()).unwrap();
        for q in 0..=3 {
            let a = t.theta_partial_trace(1.0, q).unwrap();
            let b = theta_partial_trace(&k, AlphaSpec::default(), 1.0, q);
            assert!((a - b).abs() < 1e-9);
        }
    }
}
