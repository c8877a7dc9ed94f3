use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use envcontour::config::{parse_config, Method, PerDim, RunConfig};
use envcontour::output::run;
use envcontour::{Error, Result};

#[derive(Parser)]
#[command(
    name = "envcontour",
    version,
    about = "Environmental contours from joint probability models"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Highest density contours
    Hdc(Overrides),
    /// IFORM contours
    Iform(Overrides),
    /// Equi-shape (inflated IFORM) contours
    Equishape(Overrides),
    /// Monte Carlo halfspace contours
    Mc(Overrides),
    /// f_m over a range of cell sizes
    GridStudy(Overrides),
    /// Seeded samples from the joint model
    Sample(Overrides),
    /// Run the method named in the config file
    Run(Overrides),
}

#[derive(Args)]
struct Overrides {
    /// TOML configuration file
    #[arg(long)]
    config: Option<PathBuf>,
    /// Built-in model when no config file is given
    #[arg(long, default_value = "vanem2012")]
    preset: String,
    /// Return period in years; repeat for several
    #[arg(long = "return-period")]
    return_period: Vec<f64>,
    /// Grid cell size applied to every dimension
    #[arg(long)]
    cell_size: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory
    #[arg(long)]
    out: Option<PathBuf>,
    /// Number of points for the sample method
    #[arg(long)]
    count: Option<usize>,
}

fn load(method: Option<Method>, o: Overrides) -> Result<RunConfig> {
    let mut config = match &o.config {
        Some(path) => parse_config(&std::fs::read_to_string(path)?)?,
        None => RunConfig::with_preset(method.unwrap_or(Method::Hdc), &o.preset),
    };
    if let Some(m) = method {
        config.method = m;
    }
    if !o.return_period.is_empty() {
        config.return_periods = o.return_period;
    }
    if let Some(c) = o.cell_size {
        config.grid.cell_size = PerDim::All(c);
    }
    if let Some(s) = o.seed {
        config.seed = s;
    }
    if let Some(out) = o.out {
        config.output_dir = out.to_string_lossy().into_owned();
    }
    if let Some(n) = o.count {
        config.sample_count = n;
    }
    config.validate()?;
    Ok(config)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (method, overrides) = match cli.command {
        Command::Hdc(o) => (Some(Method::Hdc), o),
        Command::Iform(o) => (Some(Method::Iform), o),
        Command::Equishape(o) => (Some(Method::Equishape), o),
        Command::Mc(o) => (Some(Method::Mc), o),
        Command::GridStudy(o) => (Some(Method::GridStudy), o),
        Command::Sample(o) => (Some(Method::Sample), o),
        Command::Run(o) => (None, o),
    };
    match load(method, overrides).and_then(|c| run(&c)) {
        Ok(report) => {
            for line in &report.summary {
                println!("{line}");
            }
            for f in &report.files {
                println!("wrote {}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => report_error(&e),
    }
}

fn report_error(e: &Error) -> ExitCode {
    let class = e.class();
    let record = serde_json::json!({
        "error": {
            "class": class.as_str(),
            "exit_code": class.exit_code(),
            "message": e.to_string(),
        }
    });
    eprintln!("{record}");
    ExitCode::from(class.exit_code() as u8)
}
