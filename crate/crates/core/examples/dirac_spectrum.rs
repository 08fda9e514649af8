//! Dirac multiplicities and partial traces of the heat operator.

use qiso::fixtures;
use qiso::hilbert::{dirac, spectrum, theta_bound_term, theta_partial_trace, AlphaSpec};
use qiso::perron::perron;

fn main() -> qiso::Result<()> {
    let g = fixtures::k3();
    let alpha = AlphaSpec::Power { epsilon: 0.25 };
    for s in spectrum(&g, alpha, 6) {
        println!("q = {}: α_q = {:.4}, multiplicity {}", s.q, s.alpha_q, s.multiplicity);
    }
    for t in [0.5, 1.0, 2.0] {
        let partial = theta_partial_trace(&g, alpha, t, 20);
        let bound: f64 = (0..=20).map(|q| theta_bound_term(g.edge_count(), alpha, t, q)).sum();
        println!("t = {t}: Tr e^(-tD²) up to q = 20 is {partial:.12}, dominating series {bound:.6}");
    }

    let pf = perron(&g)?;
    let triple = dirac(&g, &pf, 3, alpha)?;
    println!(
        "truncated triple on R_3: dim {}, projection invariants within {:.1e}",
        triple.dim(),
        triple.check_invariants().max()
    );
    Ok(())
}
