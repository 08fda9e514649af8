//! Build the JSON report that `qiso verify` writes.

use qiso::fixtures;
use qiso::report::{cmd_verify, RunConfig};

fn main() -> qiso::Result<()> {
    let dir = std::env::temp_dir().join("qiso-example");
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("k3.graph");
    std::fs::write(&path, fixtures::K3)?;
    let config = RunConfig {
        graph: Some(path),
        ..RunConfig::default()
    };
    let report = cmd_verify(&config)?;
    print!("{}", report.summary());
    let json = report.without_timing().to_json();
    println!("{} bytes of JSON, schema {}", json.len(), report.schema);
    Ok(())
}
