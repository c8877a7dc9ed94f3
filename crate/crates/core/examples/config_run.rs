//! Runs a TOML configuration and lists the files it writes.
//!
//! cargo run --example config_run -- examples/configs/mixture2.toml

use envcontour::config::parse_config;
use envcontour::output::run;

fn main() -> envcontour::Result<()> {
    let path = std::env::args().nth(1).unwrap_or_else(|| {
        concat!(
            env!("CARGO_MANIFEST_DIR"),
            "/examples/configs/sea_state_hdc.toml"
        )
        .into()
    });
    let mut config = parse_config(&std::fs::read_to_string(&path)?)?;
    config.output_dir = std::env::temp_dir()
        .join("envcontour-example")
        .to_string_lossy()
        .into_owned();
    println!("config sha256 {}", config.hash());
    let report = run(&config)?;
    for line in report.summary {
        println!("{line}");
    }
    for f in report.files {
        println!("wrote {}", f.display());
    }
    Ok(())
}
