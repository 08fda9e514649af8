//! Parse graph files, check the hypothesis profiles and list short paths.

use qiso::fixtures;
use qiso::graph::ValidationProfile;
use qiso::parse_graph;

fn main() -> qiso::Result<()> {
    for g in [fixtures::cycle3(), fixtures::k3(), fixtures::asym4(), fixtures::cuntz(2)] {
        println!("{}: {} vertices, {} edges", g.name(), g.vertex_count(), g.edge_count());
        for (name, profile) in [
            ("aut-plus", ValidationProfile::AUT_PLUS),
            ("spectral-triple", ValidationProfile::SPECTRAL_TRIPLE),
        ] {
            let report = g.validate(profile);
            let failures: Vec<String> = report
                .checks
                .iter()
                .filter(|c| !c.passed)
                .map(|c| format!("{:?}: {}", c.hypothesis, c.witness.as_deref().unwrap_or("")))
                .collect();
            if failures.is_empty() {
                println!("  {name:<16} pass");
            } else {
                println!("  {name:<16} fail ({})", failures.join("; "));
            }
        }
        let paths: Vec<String> = g.enumerate_paths(2).iter().map(|p| g.path_label(p)).collect();
        println!("  degree-2 paths: {}", paths.join(" "));
    }

    let err = parse_graph("graph broken\nv 1\nv 2\ne a 1 3\n").unwrap_err();
    println!("malformed file: {err}");
    Ok(())
}
