//! Property tests for the rewriting engine, the graph layer and the measure.

mod common;

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

use common::*;
use qiso::fixtures;
use qiso::hilbert::{path_counts, PathSpace};
use qiso::nc::{comultiply, is_zero, normal_form, parse_poly, Verdict};
use qiso::perron::{additivity_residual, cylinder_measure, perron};
use qiso::{parse_graph, Convention, DirectedGraph};

fn subject_strategy() -> impl Strategy<Value = usize> {
    0..subjects().len()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn proofs_are_numerically_sound(idx in subject_strategy(), seed in any::<u64>()) {
        let s = &subjects()[idx];
        let mut rng = StdRng::seed_from_u64(seed);
        let p = random_ideal_element(&mut rng, &relators(&s.rels), &alphabet(&s.rels));
        if is_zero(&p, &s.rels) == Verdict::ProvedZero {
            let norm = max_numeric_norm(&p, &s.providers).unwrap_or(0.0);
            prop_assert!(norm < 1e-10, "{p} has norm {norm}");
        }
    }

    #[test]
    fn normal_form_is_idempotent_and_value_preserving(idx in subject_strategy(), seed in any::<u64>()) {
        let s = &subjects()[idx];
        let mut rng = StdRng::seed_from_u64(seed);
        let p = random_poly(&mut rng, &alphabet(&s.rels));
        let nf = normal_form(&p, &s.rels);
        prop_assert_eq!(normal_form(&nf, &s.rels), nf.clone());
        let drift = max_numeric_norm(&(&nf - &p), &s.providers).unwrap_or(0.0);
        prop_assert!(drift < 1e-10);
    }

    #[test]
    fn proofs_are_closed_under_adjoint(idx in subject_strategy(), seed in any::<u64>()) {
        let s = &subjects()[idx];
        let mut rng = StdRng::seed_from_u64(seed);
        let p = random_ideal_element(&mut rng, &relators(&s.rels), &alphabet(&s.rels));
        if is_zero(&p, &s.rels) == Verdict::ProvedZero {
            prop_assert_eq!(is_zero(&p.adjoint(), &s.rels), Verdict::ProvedZero);
        }
        prop_assert_eq!(p.adjoint().adjoint(), p);
    }

    #[test]
    fn adjoint_commutes_with_evaluation(idx in subject_strategy(), seed in any::<u64>()) {
        let s = &subjects()[idx];
        let mut rng = StdRng::seed_from_u64(seed);
        let p = random_poly(&mut rng, &alphabet(&s.rels));
        for prov in &s.providers {
            if let (Some(a), Some(b)) = (prov.evaluate(&p), prov.evaluate(&p.adjoint())) {
                prop_assert!((a.adjoint() - b).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn comultiplication_is_multiplicative(i in 0usize..3, j in 0usize..3, k in 0usize..3, l in 0usize..3) {
        let a = parse_poly(&format!("q[{},{}]", i + 1, j + 1), 3).unwrap();
        let b = parse_poly(&format!("q[{},{}]", k + 1, l + 1), 3).unwrap();
        prop_assert_eq!(comultiply(&(&a * &b), 3), comultiply(&a, 3).mul(&comultiply(&b, 3)));
    }
}

/// A strongly connected graph on `n` vertices: a directed cycle plus extra
/// edges chosen by `extra`.
fn random_strong_graph(n: usize, extra: &[(usize, usize)]) -> DirectedGraph {
    let mut text = format!("# generated\ngraph random{n}\n");
    for v in 0..n {
        text.push_str(&format!("v v{v}\n"));
    }
    let mut id = 0;
    for v in 0..n {
        text.push_str(&format!("e c{id} v{} v{}\n", v, (v + 1) % n));
        id += 1;
    }
    for &(r, s) in extra {
        text.push_str(&format!("e x{id} v{} v{}\n", r % n, s % n));
        id += 1;
    }
    parse_graph(&text).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn path_counts_match_brute_force(n in 1usize..5, extra in prop::collection::vec((0usize..5, 0usize..5), 0..5)) {
        let g = random_strong_graph(n, &extra);
        let counts = path_counts(&g, 4);
        for (k, count) in counts.iter().enumerate() {
            prop_assert_eq!(*count, brute_force_paths(&g, k).len() as u128);
            if k > 0 {
                prop_assert!(*count <= (g.edge_count() as u128).pow(k as u32));
            }
        }
    }

    #[test]
    fn graph_text_round_trips(n in 1usize..5, extra in prop::collection::vec((0usize..5, 0usize..5), 0..5)) {
        let g = random_strong_graph(n, &extra);
        let again = parse_graph(&g.to_graph_text()).unwrap();
        prop_assert_eq!(again.to_graph_text(), g.to_graph_text());
        prop_assert_eq!(again.edge_count(), g.edge_count());
    }

    #[test]
    fn measure_is_additive_when_exact(n in 1usize..5, extra in prop::collection::vec((0usize..5, 0usize..5), 0..5)) {
        let g = random_strong_graph(n, &extra);
        let pf = perron(&g).unwrap();
        let total: f64 = pf.x.iter().sum();
        prop_assert!((total - 1.0).abs() < 1e-9);
        for d in 0..=2 {
            for lam in g.enumerate_paths(d) {
                let r = additivity_residual(&g, &pf, &lam, 1, Convention::SourceAppend);
                prop_assert!(r.value < 1e-9, "residual {} at {}", r.value, g.path_label(&lam));
                if pf.is_exact() {
                    prop_assert!(r.is_exact_zero());
                }
            }
        }
    }

    #[test]
    fn level_gram_sums_to_one(n in 1usize..5, extra in prop::collection::vec((0usize..5, 0usize..5), 0..4), k in 0usize..4) {
        let g = random_strong_graph(n, &extra);
        let pf = perron(&g).unwrap();
        let space = PathSpace::new(&g, &pf, k);
        let total: f64 = space.level(k).gram.iter().sum();
        prop_assert!((total - 1.0).abs() < 1e-9);
        for p in &space.level(k).basis {
            prop_assert!(cylinder_measure(&pf, p).value > 0.0);
        }
    }
}

#[test]
fn fixture_graphs_are_strongly_connected() {
    for g in fixtures::convention_test_graphs() {
        assert!(g.reachable_from(0).iter().all(|&r| r), "{}", g.name());
    }
}
