//! The corepresentation identity suite on the 3-cycle and K3.

use qiso::corep::{run_suite, ActionScheme, Verifier};
use qiso::fixtures;
use qiso::hilbert::AlphaSpec;
use qiso::nc::{classical_rep, qaut_relations};
use qiso::perron::perron;
use qiso::Convention;

fn main() -> qiso::Result<()> {
    for g in [fixtures::cycle3(), fixtures::k3()] {
        let pf = perron(&g)?;
        let rels = qaut_relations(&g)?;
        for event in &rels.events {
            println!("{event}");
        }
        let v = Verifier::new(&g, &pf, 3, rels, ActionScheme::GraphQaut, vec![classical_rep(&g)])?;
        for rec in run_suite(&v, 2, AlphaSpec::default(), Convention::SourceAppend)? {
            println!(
                "{:<7} {:<18} {:<24} {:?} {}/{} numeric {:.1e}",
                rec.graph,
                rec.name,
                format!("{:?}", rec.levels),
                rec.status,
                rec.proved_zero,
                rec.obligations,
                rec.numeric_residual.unwrap_or(f64::NAN)
            );
        }
    }
    Ok(())
}
