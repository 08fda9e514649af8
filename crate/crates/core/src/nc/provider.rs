use std::collections::HashMap;
use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use super::generator::{Gen, Word};
use super::poly::NCPoly;
use super::relations::{PairRhs, PairRule, RelationSet};
use crate::error::{Error, Result};
use crate::exact;
use crate::graph::{permutations, DirectedGraph};

pub type CMatrix = DMatrix<Complex64>;

pub const DEFAULT_TOL: f64 = 1e-10;

/// A finite-dimensional representation of the generators, used to witness
/// that a polynomial is nonzero and to cross-check proofs.
#[derive(Debug, Clone)]
pub struct RepresentationProvider {
    pub name: String,
    pub dim: usize,
    pub tol: f64,
    assign: HashMap<Gen, CMatrix>,
}

impl RepresentationProvider {
    pub fn new(name: impl Into<String>, dim: usize) -> Self {
        RepresentationProvider {
            name: name.into(),
            dim,
            tol: DEFAULT_TOL,
            assign: HashMap::new(),
        }
    }

    pub fn assign(&mut self, g: Gen, m: CMatrix) {
        assert_eq!(m.shape(), (self.dim, self.dim));
        self.assign.insert(g, m);
    }

    pub fn get(&self, g: Gen) -> Option<&CMatrix> {
        self.assign.get(&g)
    }

    pub fn covers(&self, g: Gen) -> bool {
        self.assign.contains_key(&g)
    }

    pub fn evaluate_word(&self, w: &Word) -> Option<CMatrix> {
        let mut acc = CMatrix::identity(self.dim, self.dim);
        for g in w.gens() {
            acc *= self.assign.get(g)?;
        }
        Some(acc)
    }

    /// Image of `p`, or `None` if it mentions an unassigned generator.
    pub fn evaluate(&self, p: &NCPoly) -> Option<CMatrix> {
        let mut acc = CMatrix::zeros(self.dim, self.dim);
        for (w, c) in p.terms() {
            acc += self.evaluate_word(w)? * Complex64::new(exact::to_f64(c), 0.0);
        }
        Some(acc)
    }

    /// Frobenius norm of the image.
    pub fn norm_of(&self, p: &NCPoly) -> Option<f64> {
        self.evaluate(p).map(|m| m.norm())
    }

    pub(crate) fn pair_rule_holds(&self, rule: &PairRule) -> bool {
        let lhs = NCPoly::product([rule.lhs.0, rule.lhs.1]);
        let rhs = match rule.rhs {
            PairRhs::Zero => NCPoly::zero(),
            PairRhs::One => NCPoly::one(),
            PairRhs::Gen(g) => NCPoly::gen(g),
        };
        match self.norm_of(&(&lhs - &rhs)) {
            Some(r) => r <= self.tol,
            None => true,
        }
    }

    /// Checks every enabled relation that only mentions assigned generators.
    pub fn check_relations(&self, rels: &RelationSet) -> Result<()> {
        let fail = |relation: String, residual: f64| Error::ProviderRelation {
            provider: self.name.clone(),
            relation,
            residual,
        };
        for rule in rels.enabled_pair_rules() {
            if !self.pair_rule_holds(rule) {
                let lhs = NCPoly::product([rule.lhs.0, rule.lhs.1]);
                return Err(fail(
                    format!("{} ({})", lhs, rels.families[rule.family].name),
                    self.norm_of(&lhs).unwrap_or(f64::NAN),
                ));
            }
        }
        for s in rels.enabled_schemas() {
            let mut p = -&s.result;
            for (l, w) in s.letters.iter().zip(&s.weights) {
                p.add_term(l.clone(), w.clone());
            }
            if let Some(r) = self.norm_of(&p) {
                if r > self.tol {
                    return Err(fail(format!("{p} = 0 ({})", rels.families[s.family].name), r));
                }
            }
        }
        for l in rels.enabled_linear() {
            if let Some(r) = self.norm_of(&l.poly) {
                if r > self.tol {
                    return Err(fail(format!("{} = 0", l.poly), r));
                }
            }
        }
        Ok(())
    }

    /// Validates against `rels` and returns the provider on success.
    pub fn register(self, rels: &RelationSet) -> Result<Self> {
        self.check_relations(rels)?;
        Ok(self)
    }
}

fn real(v: f64) -> Complex64 {
    Complex64::new(v, 0.0)
}

/// `q_{ij} ↦ diag_σ δ_{i,σ(j)}` over the automorphism group of `g`.
pub fn classical_rep(g: &DirectedGraph) -> RepresentationProvider {
    let autos = g.automorphisms();
    permutation_rep(&format!("classical-{}", g.name()), g.vertex_count(), &autos)
}

/// The same construction over all of `S_n`: a representation of the magic
/// unitary relations of order `n`.
pub fn symmetric_group_rep(n: usize) -> RepresentationProvider {
    let mut all = Vec::new();
    let mut perm: Vec<usize> = (0..n).collect();
    permutations(&mut perm, 0, &mut |p| all.push(p.to_vec()));
    permutation_rep(&format!("symmetric-group-{n}"), n, &all)
}

fn permutation_rep(name: &str, n: usize, perms: &[Vec<usize>]) -> RepresentationProvider {
    let mut p = RepresentationProvider::new(name, perms.len());
    for i in 0..n {
        for j in 0..n {
            let diag: Vec<Complex64> = perms.iter().map(|s| real(f64::from(u8::from(s[j] == i)))).collect();
            p.assign(Gen::q(i, j), CMatrix::from_diagonal(&nalgebra::DVector::from_vec(diag)));
        }
    }
    p
}

/// Scalar representation of the free unitary relations given by a concrete
/// unitary matrix `v`: `u_{ij} ↦ v_{ij}`, `u*_{ij} ↦ conj(v_{ij})`, and the
/// formal unitary `w ↦ e^{iπ/5}`.
pub fn unitary_provider(name: &str, v: &CMatrix) -> RepresentationProvider {
    let n = v.nrows();
    let mut p = RepresentationProvider::new(name, 1);
    for i in 0..n {
        for j in 0..n {
            p.assign(Gen::u(i, j), CMatrix::from_element(1, 1, v[(i, j)]));
            p.assign(Gen::u_star(i, j), CMatrix::from_element(1, 1, v[(i, j)].conj()));
        }
    }
    let w = Complex64::from_polar(1.0, PI / 5.0);
    p.assign(Gen::W, CMatrix::from_element(1, 1, w));
    p.assign(Gen::WStar, CMatrix::from_element(1, 1, w.conj()));
    p
}

/// Rotation by 45° in the first two coordinates, identity elsewhere.
pub fn rotation45(n: usize) -> CMatrix {
    let mut m = CMatrix::identity(n, n);
    let c = std::f64::consts::FRAC_1_SQRT_2;
    m[(0, 0)] = real(c);
    m[(0, 1)] = real(-c);
    m[(1, 0)] = real(c);
    m[(1, 1)] = real(c);
    m
}

/// `F_{jk} = ω^{jk}/√n` with `ω = e^{2πi/n}`.
pub fn fourier(n: usize) -> CMatrix {
    let s = 1.0 / (n as f64).sqrt();
    CMatrix::from_fn(n, n, |j, k| Complex64::from_polar(s, 2.0 * PI * (j * k) as f64 / n as f64))
}

/// Identity, 45° rotation, and Fourier providers, in that order.
pub fn free_unitary_portfolio(n: usize) -> Vec<RepresentationProvider> {
    vec![
        unitary_provider("identity", &CMatrix::identity(n, n)),
        unitary_provider("rotation-45", &rotation45(n)),
        unitary_provider("fourier", &fourier(n)),
    ]
}

/// Outcome of an attempt to show `p ≠ 0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub provider: String,
    pub norm: f64,
}

/// First provider mapping `p` to a matrix of norm `> 10 · tol`.
pub fn find_witness(p: &NCPoly, providers: &[RepresentationProvider]) -> Option<Witness> {
    providers.iter().find_map(|prov| {
        let norm = prov.norm_of(p)?;
        (norm > 10.0 * prov.tol).then(|| Witness {
            provider: prov.name.clone(),
            norm,
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::nc::relations::{free_unitary_relations, magic_relations, qaut_relations};

    #[test]
    fn classical_dimensions() {
        assert_eq!(classical_rep(&fixtures::cycle3()).dim, 3);
        assert_eq!(classical_rep(&fixtures::k3()).dim, 6);
        assert_eq!(classical_rep(&fixtures::asym4()).dim, 1);
    }

    #[test]
    fn classical_rep_registers() {
        for g in [fixtures::cycle3(), fixtures::k3(), fixtures::asym4(), fixtures::cycle2()] {
            let rels = qaut_relations(&g).unwrap();
            classical_rep(&g).register(&rels).unwrap();
        }
        symmetric_group_rep(3).register(&magic_relations(3)).unwrap();
    }

    #[test]
    fn unitary_portfolio_registers() {
        for n in [2, 3] {
            let rels = free_unitary_relations(n).with_formal_unitary();
            for p in free_unitary_portfolio(n) {
                p.register(&rels).unwrap();
            }
        }
    }

    #[test]
    fn non_unitary_is_rejected() {
        let mut m = CMatrix::identity(2, 2);
        m[(0, 1)] = real(1.0);
        let p = unitary_provider("shear", &m);
        assert!(matches!(
            p.register(&free_unitary_relations(2)),
            Err(Error::ProviderRelation { .. })
        ));
    }

    #[test]
    fn rotation_witnesses_row_sum() {
        let p = &NCPoly::gen(Gen::u(1, 0)) + &NCPoly::gen(Gen::u(1, 1));
        let p = &p - &NCPoly::one();
        let w = find_witness(&p, &free_unitary_portfolio(2)).unwrap();
        assert_eq!(w.provider, "rotation-45");
        assert!((w.norm - (2f64.sqrt() - 1.0)).abs() < 1e-12);
        assert!(find_witness(&NCPoly::zero(), &free_unitary_portfolio(2)).is_none());
        let q11 = NCPoly::gen(Gen::q(0, 0));
        assert!(find_witness(&q11, &[classical_rep(&fixtures::cycle3())]).is_some());
    }
}
