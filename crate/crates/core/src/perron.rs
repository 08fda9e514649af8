//! Perron–Frobenius data, the cylinder-set measure on infinite paths, and
//! values of the KMS state on vertex projections.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{self, Q};
use crate::graph::{Convention, DirectedGraph, Hypothesis, Path, ValidationProfile, VertexIx};

pub const DEFAULT_TOL: f64 = 1e-12;
pub const DEFAULT_MAX_ITER: usize = 1_000_000;
const MAX_DENOMINATOR: i64 = 1_000_000;

/// Exact Perron data, present when `ρ` is rational and the eigenvector
/// verifies exactly.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExactPerron {
    #[serde(serialize_with = "ser_q")]
    pub rho: Q,
    #[serde(serialize_with = "ser_qs")]
    pub x: Vec<Q>,
}

/// Spectral radius and normalized Perron–Frobenius vector (`Σ x_v = 1`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PerronData {
    pub rho: f64,
    pub x: Vec<f64>,
    pub exact: Option<ExactPerron>,
    pub tol: f64,
    pub iterations: usize,
}

impl PerronData {
    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    pub fn exact_rho(&self) -> Option<&Q> {
        self.exact.as_ref().map(|e| &e.rho)
    }

    pub fn exact_x(&self) -> Option<&[Q]> {
        self.exact.as_ref().map(|e| e.x.as_slice())
    }

    /// Exact data or an [`Error::Inexact`] naming the caller's need.
    pub fn require_exact(&self, what: &str) -> Result<&ExactPerron> {
        self.exact
            .as_ref()
            .ok_or_else(|| Error::Inexact(format!("{what} needs a rational Perron vector")))
    }
}

/// Power iteration on `A + I` with 1-norm renormalization, followed by an
/// exact verification pass when `ρ` rounds to a rational with small
/// denominator.
pub fn perron(g: &DirectedGraph) -> Result<PerronData> {
    perron_with(g, DEFAULT_TOL, DEFAULT_MAX_ITER)
}

pub fn perron_with(g: &DirectedGraph, tol: f64, max_iter: usize) -> Result<PerronData> {
    let report = g.validate(ValidationProfile {
        strongly_connected: true,
        no_loops: false,
        no_multiple_edges: false,
        no_sources: false,
    });
    if let Some(fail) = report.failure(Hypothesis::StronglyConnected) {
        return Err(Error::Validation {
            hypothesis: "StronglyConnected".into(),
            witness: fail.witness.clone().unwrap_or_default(),
        });
    }
    let a = g.adjacency_matrix();
    let n = g.vertex_count();
    let af: Vec<Vec<f64>> = a
        .iter()
        .map(|row| row.iter().map(|&v| v as f64).collect())
        .collect();

    // The shift by I makes the iteration matrix primitive, so periodic
    // graphs (cycles) converge too; the eigenvector is unchanged.
    let mut x = vec![1.0 / n as f64; n];
    let mut iterations = 0;
    let mut last_change = f64::INFINITY;
    while iterations < max_iter {
        iterations += 1;
        let mut y: Vec<f64> = (0..n)
            .map(|i| x[i] + (0..n).map(|j| af[i][j] * x[j]).sum::<f64>())
            .collect();
        let norm: f64 = y.iter().sum();
        for v in y.iter_mut() {
            *v /= norm;
        }
        last_change = y
            .iter()
            .zip(&x)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        x = y;
        if last_change < tol {
            break;
        }
    }
    if last_change >= tol {
        return Err(Error::NoConvergence {
            iterations,
            last_change,
        });
    }
    let rho: f64 = (0..n)
        .map(|i| (0..n).map(|j| af[i][j] * x[j]).sum::<f64>())
        .sum();

    let exact = exact_pass(&a, rho);
    let (rho, x) = match &exact {
        Some(e) => (exact::to_f64(&e.rho), e.x.iter().map(exact::to_f64).collect()),
        None => (rho, x),
    };
    Ok(PerronData {
        rho,
        x,
        exact,
        tol,
        iterations,
    })
}

fn exact_pass(a: &[Vec<u64>], rho: f64) -> Option<ExactPerron> {
    let rho_q = exact::approximate(rho, MAX_DENOMINATOR)?;
    let n = a.len();
    let m: Vec<Vec<Q>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let v = exact::q(a[i][j] as i64);
                    if i == j {
                        v - &rho_q
                    } else {
                        v
                    }
                })
                .collect()
        })
        .collect();
    let ns = exact::nullspace(&m);
    if ns.len() != 1 {
        return None;
    }
    let v = &ns[0];
    let total: Q = v.iter().cloned().sum();
    if total.is_zero() {
        return None;
    }
    let x: Vec<Q> = v.iter().map(|c| c / &total).collect();
    if x.iter().any(|c| !c.is_positive()) {
        return None;
    }
    // A x = ρ x, exactly
    for i in 0..n {
        let ax: Q = (0..n).map(|j| exact::q(a[i][j] as i64) * &x[j]).sum();
        if ax != &rho_q * &x[i] {
            return None;
        }
    }
    Some(ExactPerron { rho: rho_q, x })
}

/// `M([λ])`, exact when the Perron data is.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CylinderMeasure {
    pub value: f64,
    #[serde(serialize_with = "ser_opt_q")]
    pub exact: Option<Q>,
}

impl CylinderMeasure {
    /// Exact rational string when available, decimal otherwise.
    pub fn display(&self) -> String {
        match &self.exact {
            Some(q) => q.to_string(),
            None => format!("{:.17e}", self.value),
        }
    }
}

/// `M([λ]) = ρ^{-d(λ)} x_{s(λ)}`.
pub fn cylinder_measure(pf: &PerronData, lambda: &Path) -> CylinderMeasure {
    let d = lambda.degree() as i32;
    let value = pf.rho.powi(-d) * pf.x[lambda.source()];
    let exact = pf
        .exact
        .as_ref()
        .map(|e| exact::pow_i(&e.rho, -(d as i64)) * &e.x[lambda.source()]);
    CylinderMeasure { value, exact }
}

/// `φ(p_v) = x_v`.
pub fn kms_vertex_value(pf: &PerronData, v: VertexIx) -> f64 {
    pf.x[v]
}

/// Absolute difference between a cylinder's measure and the total measure of
/// its refinements.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Residual {
    pub value: f64,
    #[serde(serialize_with = "ser_opt_q")]
    pub exact: Option<Q>,
}

impl Residual {
    pub fn is_exact_zero(&self) -> bool {
        matches!(&self.exact, Some(q) if q.is_zero())
    }
}

/// `|M([λ]) − Σ_{μ ∈ refine(λ, n, side)} M([μ])|`.
pub fn additivity_residual(
    g: &DirectedGraph,
    pf: &PerronData,
    lambda: &Path,
    n: usize,
    side: Convention,
) -> Residual {
    let parent = cylinder_measure(pf, lambda);
    let children: Vec<CylinderMeasure> = g
        .refine(lambda, n, side)
        .iter()
        .map(|mu| cylinder_measure(pf, mu))
        .collect();
    let value = (parent.value - children.iter().map(|c| c.value).sum::<f64>()).abs();
    let exact = parent.exact.as_ref().map(|p| {
        let s: Q = children
            .iter()
            .map(|c| c.exact.clone().expect("exact parent implies exact children"))
            .sum();
        (p - s).abs()
    });
    Residual { value, exact }
}

/// Outcome of convention selection across a set of graphs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConventionSelection {
    pub adopted: Convention,
    /// `(graph, side, max residual)` for every graph consulted.
    pub residuals: Vec<(String, Convention, f64)>,
}

/// Largest additivity residual over all paths of degree `≤ max_degree`
/// and refinement depths `1..=max_depth`.
pub fn max_additivity_residual(
    g: &DirectedGraph,
    pf: &PerronData,
    side: Convention,
    max_degree: usize,
    max_depth: usize,
) -> Residual {
    let mut worst = Residual {
        value: 0.0,
        exact: pf.exact.as_ref().map(|_| Q::zero()),
    };
    for d in 0..=max_degree {
        for lambda in g.enumerate_paths(d) {
            for n in 1..=max_depth {
                let r = additivity_residual(g, pf, &lambda, n, side);
                worst.value = worst.value.max(r.value);
                worst.exact = match (worst.exact.take(), r.exact) {
                    (Some(a), Some(b)) => Some(if b > a { b } else { a }),
                    _ => None,
                };
            }
        }
    }
    worst
}

/// Picks the refinement side whose residual vanishes on every graph.
///
/// A side is consistent on a graph when its exact residual is zero, or, for
/// graphs without exact Perron data, when the floating residual is below
/// `1e-12`.
pub fn select_convention(graphs: &[DirectedGraph]) -> Result<ConventionSelection> {
    let mut residuals = Vec::new();
    let mut consistent = [true, true];
    for g in graphs {
        let pf = perron(g)?;
        for (i, side) in Convention::ALL.iter().enumerate() {
            let r = max_additivity_residual(g, &pf, *side, 3, 2);
            let zero = match &r.exact {
                Some(q) => q.is_zero(),
                None => r.value < 1e-12,
            };
            consistent[i] &= zero;
            residuals.push((g.name().to_string(), *side, r.value));
        }
    }
    let adopted = match consistent {
        [true, _] => Convention::SourceAppend,
        [false, true] => Convention::RangePrepend,
        [false, false] => {
            return Err(Error::Inexact(
                "no refinement side is measure-consistent on the test graphs".into(),
            ))
        }
    };
    Ok(ConventionSelection { adopted, residuals })
}

/// `{path label: measure}` for every path of degree `≤ max_degree`.
pub fn measure_table(
    g: &DirectedGraph,
    pf: &PerronData,
    max_degree: usize,
) -> BTreeMap<String, String> {
    let mut out = BTreeMap::new();
    for d in 0..=max_degree {
        for p in g.enumerate_paths(d) {
            out.insert(g.path_label(&p), cylinder_measure(pf, &p).display());
        }
    }
    out
}

fn ser_q<S: serde::Serializer>(q: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&q.to_string())
}

fn ser_qs<S: serde::Serializer>(qs: &[Q], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(qs.iter().map(|q| q.to_string()))
}

fn ser_opt_q<S: serde::Serializer>(q: &Option<Q>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match q {
        Some(q) => s.serialize_some(&q.to_string()),
        None => s.serialize_none(),
    }
}
