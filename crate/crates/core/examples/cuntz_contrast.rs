//! On the Cuntz graph the free unitary action is not isometric while the
//! quantum permutation action is.

use qiso::cuntz::{cuntz_setup, derive_contradiction, non_isometry_verdict, sn_plus_isometry_suite, Flavor};

fn main() -> qiso::Result<()> {
    for n in [2, 3] {
        for flavor in Flavor::ALL {
            let setup = cuntz_setup(n, flavor)?;
            let report = derive_contradiction(&setup)?;
            println!("n = {n}, {flavor}");
            for step in &report.steps {
                println!("  step {}: {}", step.step, step.statement);
                for p in &step.polys {
                    println!("      {p}");
                }
            }
            println!("  verdict: {:?}", non_isometry_verdict(&setup, &report));
        }
        let passed = sn_plus_isometry_suite(n, 2)?.iter().filter(|r| r.passed()).count();
        println!("n = {n}: {passed} identity checks pass for the magic flavor");
    }
    Ok(())
}
