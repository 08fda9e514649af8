//! Level spaces, the Gram form, and the Cuntz–Krieger relations of the
//! path-space representation at a finite truncation.

use qiso::fixtures;
use qiso::hilbert::{cuntz_krieger_check, Op, PathSpace};
use qiso::perron::perron;

fn main() -> qiso::Result<()> {
    let g = fixtures::k3();
    let pf = perron(&g)?;
    let space = PathSpace::new(&g, &pf, 4);
    for k in 0..=4 {
        let level = space.level(k);
        println!("R_{k}: dim {} (Gram weight of first basis vector {})", level.dim(), level.gram_exact.as_ref().map(|g| g[0].to_string()).unwrap_or_default());
    }

    // S_e* S_e = p_{s(e)} on level 2, exactly
    let e = g.edge_path(0);
    let lhs = space.represent(&[Op::SStar(e.clone()), Op::S(e.clone())], 2)?;
    let rhs = space.represent(&[Op::P(e.source())], 2)?;
    println!(
        "S_e* S_e − p_s(e) on R_2 vanishes exactly: {}",
        space.difference(&lhs, &rhs)?.is_some_and(|d| d.is_zero())
    );

    for g in [fixtures::cycle3(), fixtures::k3(), fixtures::asym4(), fixtures::cuntz(2)] {
        let pf = perron(&g)?;
        let report = cuntz_krieger_check(&g, &pf, 4)?;
        for r in &report.relations {
            println!("{:<8} {:<28} {} instances, max residual {}", g.name(), r.relation, r.instances, r.max_residual);
        }
    }
    Ok(())
}
