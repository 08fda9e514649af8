//! Forcing the refinement that is not measure-consistent breaks
//! well-definedness on a graph with non-uniform in-degrees.

use qiso::corep::{ActionScheme, Verifier};
use qiso::fixtures;
use qiso::nc::{classical_rep, qaut_relations};
use qiso::perron::perron;
use qiso::Convention;

fn main() -> qiso::Result<()> {
    let g = fixtures::asym4();
    let pf = perron(&g)?;
    let rels = qaut_relations(&g)?;
    let v = Verifier::new(&g, &pf, 3, rels, ActionScheme::GraphQaut, vec![classical_rep(&g)])?;
    for side in Convention::ALL {
        let rec = v.check_welldefined(1, 2, side);
        println!(
            "{side:<14} {:?}: {}/{} obligations proved, numeric residual {:.3}",
            rec.status,
            rec.proved_zero,
            rec.obligations,
            rec.numeric_residual.unwrap_or(f64::NAN)
        );
        if let Some(u) = rec.unresolved.first() {
            println!("  e.g. {u}");
        }
    }
    Ok(())
}
