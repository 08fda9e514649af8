//! The Cuntz algebra `O_n` as the graph algebra of one vertex with `n` loops:
//! the linear action of the free unitary quantum group is not isometric,
//! while the quantum permutation group acts isometrically.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::Serialize;

use crate::corep::{run_suite, ActionScheme, CheckRecord, ModuleVec, Verifier};
use crate::error::{Error, Result};
use crate::fixtures;
use crate::graph::{Convention, DirectedGraph, Path, ValidationProfile};
use crate::hilbert::AlphaSpec;
use crate::nc::normal::{normal_form_search, witness_nonzero, Trace, TraceSummary, Verdict};
use crate::nc::provider::{fourier, rotation45, unitary_provider, CMatrix};
use crate::nc::{
    free_unitary_relations, magic_relations, symmetric_group_rep, Gen, NCPoly, RelationSet,
    RepresentationProvider,
};
use crate::perron::{perron, PerronData};

/// Which quantum group acts on the loops.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Flavor {
    /// `U_n⁺`: `u` and `ū` unitary.
    FreeUnitary,
    /// `S_n⁺`: `q` a magic unitary.
    Magic,
}

impl Flavor {
    pub const ALL: [Flavor; 2] = [Flavor::FreeUnitary, Flavor::Magic];

    pub fn as_str(&self) -> &'static str {
        match self {
            Flavor::FreeUnitary => "free-unitary",
            Flavor::Magic => "magic",
        }
    }
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Flavor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "free-unitary" => Ok(Flavor::FreeUnitary),
            "magic" => Ok(Flavor::Magic),
            other => Err(Error::Usage(format!(
                "unknown flavor `{other}` (expected free-unitary or magic)"
            ))),
        }
    }
}

/// The `n`-loop graph with the relations of the acting quantum group,
/// extended by a formal unitary `w`.
#[derive(Debug, Clone)]
pub struct CuntzSetup {
    pub n: usize,
    pub flavor: Flavor,
    pub graph: DirectedGraph,
    pub pf: PerronData,
    pub rels: RelationSet,
}

pub fn cuntz_setup(n: usize, flavor: Flavor) -> Result<CuntzSetup> {
    if n < 2 {
        return Err(Error::Usage(format!("the Cuntz graph needs at least 2 loops, got {n}")));
    }
    let graph = fixtures::cuntz(n);
    graph.validate(ValidationProfile::SPECTRAL_TRIPLE).ensure()?;
    let pf = perron(&graph)?;
    let rels = match flavor {
        Flavor::FreeUnitary => free_unitary_relations(n),
        Flavor::Magic => magic_relations(n),
    }
    .with_formal_unitary();
    Ok(CuntzSetup {
        n,
        flavor,
        graph,
        pf,
        rels,
    })
}

/// Identity, 45° rotation and Fourier matrices; each is a representation of
/// the free unitary relations.
pub fn unitary_portfolio(n: usize) -> Vec<(String, CMatrix)> {
    vec![
        ("identity".to_string(), CMatrix::identity(n, n)),
        ("rotation-45".to_string(), rotation45(n)),
        ("fourier".to_string(), fourier(n)),
    ]
}

impl CuntzSetup {
    pub fn scheme(&self) -> ActionScheme {
        ActionScheme::CuntzLinear {
            magic: self.flavor == Flavor::Magic,
        }
    }

    /// Numeric representations of the relations: the unitary portfolio for
    /// `U_n⁺`, the regular permutation representation for `S_n⁺`.
    pub fn providers(&self) -> Vec<RepresentationProvider> {
        match self.flavor {
            Flavor::FreeUnitary => unitary_portfolio(self.n)
                .iter()
                .map(|(name, m)| unitary_provider(name, m))
                .collect(),
            Flavor::Magic => vec![symmetric_group_rep(self.n)],
        }
    }

    pub fn verifier(&self, truncation: usize) -> Result<Verifier<'_>> {
        Verifier::new(
            &self.graph,
            &self.pf,
            truncation,
            self.rels.clone(),
            self.scheme(),
            self.providers(),
        )
    }

    fn coeff_gen(&self, row: usize, col: usize) -> Gen {
        match self.flavor {
            Flavor::FreeUnitary => Gen::u(row, col),
            Flavor::Magic => Gen::q(row, col),
        }
    }
}

/// One step of the replayed argument.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DerivationStep {
    pub step: usize,
    pub statement: String,
    pub polys: Vec<String>,
}

/// The per-row obligation `Σ_i g_{ki} − 1` and its status.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RowObligation {
    /// 1-based row index `k`.
    pub row: usize,
    pub poly: String,
    #[serde(flatten)]
    pub verdict: Verdict,
    #[serde(skip)]
    pub normal_form: NCPoly,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DerivationReport {
    pub n: usize,
    pub flavor: Flavor,
    pub steps: Vec<DerivationStep>,
    pub obligations: Vec<RowObligation>,
    pub trace: TraceSummary,
}

fn module_terms(v: &ModuleVec, basis: &[Path], g: &DirectedGraph) -> Vec<String> {
    v.coeffs
        .iter()
        .filter(|(_, p)| !p.is_zero())
        .map(|(i, p)| format!("χ[{}] ⊗ ({p})", g.path_label(&basis[*i])))
        .collect()
}

/// Replays the non-isometry argument as polynomial identities:
///
/// 1. `R_0` is spanned by `χ_v`, so `U(χ_v) = χ_v ⊗ w` for a unitary `w`;
/// 2. implementing `α(S_{e_i})` forces `U(χ_{e_i}) = Σ_j χ_{e_j} ⊗ g_{ji} w`;
/// 3. `χ_v = Σ_i χ_{e_i}`, so comparing coefficients of `χ_{e_k}` leaves
///    `Σ_i g_{ki} w − w`;
/// 4. right multiplication by `w*` leaves `Σ_i g_{ki} − 1`.
///
/// Each obligation is reduced under the flavor's relations and, if it does
/// not vanish, tested against the numeric providers.
pub fn derive_contradiction(setup: &CuntzSetup) -> Result<DerivationReport> {
    let v = setup.verifier(1)?;
    let g = &setup.graph;
    let n = setup.n;
    let mut trace = Trace::new();
    let mut steps = Vec::new();
    let level0 = v.space.level(0).basis.clone();
    let level1 = v.space.level(1).basis.clone();
    let w = NCPoly::gen(Gen::W);

    let mut u0 = ModuleVec::zero(0, 0);
    u0.add_at(0, &w);
    steps.push(DerivationStep {
        step: 1,
        statement: "R_0 is one-dimensional: U(χ[v]) = χ[v] ⊗ w with w unitary".into(),
        polys: module_terms(&u0, &level0, g),
    });

    // α(S_{e_i}) U(χ_v) = Σ_j π(S_{e_j})χ_v ⊗ g_{ji} w = ρ^{1/2} U(χ_{e_i})
    let mut images = Vec::with_capacity(n);
    for i in 0..n {
        let mut lhs: Option<ModuleVec> = None;
        for (j, ej) in level1.iter().enumerate() {
            let c = NCPoly::gen(setup.coeff_gen(j, i));
            let term = v.apply_pi(ej, false, &Verifier::right_mul(&u0, &c))?;
            lhs = Some(match lhs {
                None => term,
                Some(mut acc) => {
                    for (k, p) in &term.coeffs {
                        acc.add_at(*k, p);
                    }
                    acc
                }
            });
        }
        let lhs = lhs.expect("n ≥ 2 loops");
        // π(S_{e_i})χ_v = ρ^{1/2} χ_{e_i}: strip the common factor
        let image = ModuleVec {
            level: lhs.level,
            half_power: 0,
            coeffs: lhs.coeffs,
        };
        steps.push(DerivationStep {
            step: 2,
            statement: format!(
                "implementing α(S[{}]) gives U(χ[{}])",
                g.path_label(&level1[i]),
                g.path_label(&level1[i])
            ),
            polys: module_terms(&image, &level1, g),
        });
        images.push(image);
    }

    let embedded = v.embed_vec(&u0, 1);
    let mut summed = ModuleVec::zero(1, 0);
    for im in &images {
        for (k, p) in &im.coeffs {
            summed.add_at(*k, p);
        }
    }
    debug_assert_eq!(
        g.refine(&level0[0], 1, Convention::SourceAppend).len(),
        n,
        "χ_v refines to every loop"
    );
    let raw = summed.difference(&embedded, level1.len());
    steps.push(DerivationStep {
        step: 3,
        statement: "χ[v] = Σ_i χ[e_i]: coefficient of each χ[e_k] in Σ_i U(χ[e_i]) − U(χ[v])".into(),
        polys: raw.iter().map(ToString::to_string).collect(),
    });

    let w_star = NCPoly::gen(Gen::WStar);
    let mut obligations = Vec::with_capacity(n);
    let mut reduced = Vec::with_capacity(n);
    let providers = v.providers.clone();
    for (k, p) in raw.iter().enumerate() {
        let q = &normal_form_search(&(p * &w_star), &setup.rels, &mut trace);
        reduced.push(q.to_string());
        let verdict = if q.is_zero() {
            Verdict::ProvedZero
        } else {
            witness_nonzero(q, &providers)
        };
        let poly = row_sum_obligation(setup, k);
        obligations.push(RowObligation {
            row: k + 1,
            poly: poly.to_string(),
            verdict,
            normal_form: q.clone(),
        });
    }
    steps.push(DerivationStep {
        step: 4,
        statement: "right multiplication by w* and reduction".into(),
        polys: reduced,
    });

    Ok(DerivationReport {
        n,
        flavor: setup.flavor,
        steps,
        obligations,
        trace: trace.summary(),
    })
}

/// `Σ_i g_{ki} − 1`.
pub fn row_sum_obligation(setup: &CuntzSetup, k: usize) -> NCPoly {
    let mut p = -&NCPoly::one();
    for i in 0..setup.n {
        p = &p + &NCPoly::gen(setup.coeff_gen(k, i));
    }
    p
}

/// Outcome of the non-isometry test.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum IsometryVerdict {
    /// A concrete unitary violates a row-sum obligation, so no unitary
    /// corepresentation implements the action.
    NotIsometric {
        row: usize,
        provider: String,
        deviation: f64,
        /// The witnessing matrix as `[re, im]` pairs, row-major.
        matrix: Vec<Vec<[f64; 2]>>,
    },
    /// Every obligation reduced to zero.
    NoContradiction,
    /// Neither proof nor witness.
    Inconclusive,
}

impl IsometryVerdict {
    pub fn is_not_isometric(&self) -> bool {
        matches!(self, IsometryVerdict::NotIsometric { .. })
    }
}

/// Picks the first provider (in portfolio order) that witnesses some
/// obligation and reports its largest row deviation.
pub fn non_isometry_verdict(setup: &CuntzSetup, report: &DerivationReport) -> IsometryVerdict {
    if report.obligations.iter().all(|o| o.verdict.is_proved_zero()) {
        return IsometryVerdict::NoContradiction;
    }
    let matrices: Vec<(String, CMatrix)> = match setup.flavor {
        Flavor::FreeUnitary => unitary_portfolio(setup.n),
        Flavor::Magic => Vec::new(),
    };
    for (name, m) in &matrices {
        let prov = unitary_provider(name, m);
        let best = report
            .obligations
            .iter()
            .filter_map(|o| prov.norm_of(&o.normal_form).map(|d| (o.row, d)))
            .filter(|(_, d)| *d > 10.0 * prov.tol)
            .max_by(|a, b| a.1.total_cmp(&b.1));
        if let Some((row, deviation)) = best {
            return IsometryVerdict::NotIsometric {
                row,
                provider: name.clone(),
                deviation,
                matrix: complex_rows(m),
            };
        }
    }
    IsometryVerdict::Inconclusive
}

fn complex_rows(m: &CMatrix) -> Vec<Vec<[f64; 2]>> {
    m.row_iter()
        .map(|r| r.iter().map(|z: &Complex64| [z.re, z.im]).collect())
        .collect()
}

/// The corepresentation identity suite for `S_n⁺` acting on the `n`-loop
/// graph, at levels `≤ levels` with truncation `levels + 1`.
pub fn sn_plus_isometry_suite(n: usize, levels: usize) -> Result<Vec<CheckRecord>> {
    let setup = cuntz_setup(n, Flavor::Magic)?;
    let v = setup.verifier(levels + 1)?;
    run_suite(&v, levels, AlphaSpec::default(), Convention::SourceAppend)
}

/// The same identities for `U_n⁺` at levels `0` and `1`: the mixed-degree
/// well-definedness and isometry checks fail with a numeric witness.
pub fn free_unitary_negative_control(n: usize) -> Result<Vec<CheckRecord>> {
    let setup = cuntz_setup(n, Flavor::FreeUnitary)?;
    let v = setup.verifier(2)?;
    Ok(vec![
        v.check_welldefined(0, 1, Convention::SourceAppend),
        v.check_isometry(0, 1),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn setup_validates() {
        assert!(cuntz_setup(1, Flavor::Magic).is_err());
        let s = cuntz_setup(3, Flavor::FreeUnitary).unwrap();
        assert_eq!(s.pf.exact_rho(), Some(&crate::exact::q(3)));
        assert_eq!(s.graph.edge_count(), 3);
        assert_eq!("magic".parse::<Flavor>().unwrap(), Flavor::Magic);
    }

    #[test]
    fn free_unitary_contradiction() {
        for n in [2, 3] {
            let s = cuntz_setup(n, Flavor::FreeUnitary).unwrap();
            let r = derive_contradiction(&s).unwrap();
            assert_eq!(r.obligations.len(), n);
            for o in &r.obligations {
                assert_eq!(o.normal_form, row_sum_obligation(&s, o.row - 1));
                assert!(!o.verdict.is_proved_zero());
            }
            match non_isometry_verdict(&s, &r) {
                IsometryVerdict::NotIsometric { deviation, provider, .. } => {
                    assert_eq!(provider, "rotation-45");
                    assert!(deviation >= 0.4);
                }
                other => panic!("{other:?}"),
            }
        }
    }

    #[test]
    fn magic_flavor_has_no_contradiction() {
        let s = cuntz_setup(2, Flavor::Magic).unwrap();
        let r = derive_contradiction(&s).unwrap();
        assert!(r.obligations.iter().all(|o| o.verdict.is_proved_zero()));
        assert_eq!(non_isometry_verdict(&s, &r), IsometryVerdict::NoContradiction);
    }

    #[test]
    fn negative_control_fails() {
        for rec in free_unitary_negative_control(2).unwrap() {
            assert!(!rec.passed(), "{rec:?}");
            assert!(rec.numeric_residual.unwrap() > 0.1);
        }
    }

    #[test]
    fn sn_plus_suite_passes_for_two_loops() {
        for rec in sn_plus_isometry_suite(2, 1).unwrap() {
            assert!(rec.passed(), "{rec:?}");
        }
    }
}
