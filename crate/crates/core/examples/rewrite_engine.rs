//! The noncommutative rewriting engine: parse, reduce, and look for a
//! numeric witness when a polynomial does not vanish.

use qiso::fixtures;
use qiso::nc::{
    classical_rep, free_unitary_portfolio, free_unitary_relations, normal_form, parse_poly,
    qaut_relations, witness_nonzero, Verdict,
};

fn main() -> qiso::Result<()> {
    let g = fixtures::k3();
    let rels = qaut_relations(&g)?;
    for (name, kind, provenance, enabled, count) in rels.summary() {
        println!("{name:<36} {kind:?} {provenance:?} enabled={enabled} rules={count}");
    }
    for src in [
        "sum(k, q[1,k]) - 1",
        "q[1,2] * q[1,3]",
        "sum(k, q[k,1] * q[2,1]) - q[2,1]",
        "q[1,1] - q[2,2]",
    ] {
        let p = parse_poly(src, rels.n)?;
        let nf = normal_form(&p, &rels);
        let verdict = if nf.is_zero() {
            Verdict::ProvedZero
        } else {
            witness_nonzero(&nf, &[classical_rep(&g)])
        };
        println!("{src:<40} → {nf:<24} {verdict:?}");
    }

    let free = free_unitary_relations(2);
    let p = parse_poly("u[1,1] + u[1,2] - 1", 2)?;
    let nf = normal_form(&p, &free);
    println!("free unitary row sum: {nf} → {:?}", witness_nonzero(&nf, &free_unitary_portfolio(2)));
    Ok(())
}
