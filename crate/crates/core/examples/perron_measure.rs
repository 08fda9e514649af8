//! Perron data, cylinder measures and the choice of refinement side.

use qiso::fixtures;
use qiso::perron::{max_additivity_residual, measure_table, perron, select_convention};
use qiso::Convention;

fn main() -> qiso::Result<()> {
    for g in [fixtures::cycle3(), fixtures::k3(), fixtures::asym4(), fixtures::cuntz(3)] {
        let pf = perron(&g)?;
        match &pf.exact {
            Some(e) => {
                let x: Vec<String> = e.x.iter().map(ToString::to_string).collect();
                println!("{}: rho = {}, x = ({})", g.name(), e.rho, x.join(", "));
            }
            None => println!("{}: rho ≈ {:.12}, x ≈ {:?}", g.name(), pf.rho, pf.x),
        }
        for side in Convention::ALL {
            let r = max_additivity_residual(&g, &pf, side, 3, 2);
            println!("  {side:<14} max additivity residual {:.3e}", r.value);
        }
        for (path, m) in measure_table(&g, &pf, 1) {
            println!("  M([{path}]) = {m}");
        }
    }
    let sel = select_convention(&fixtures::convention_test_graphs())?;
    println!("adopted refinement: {}", sel.adopted);
    Ok(())
}
