use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qiso::cuntz::Flavor;
use qiso::hilbert::AlphaSpec;
use qiso::nc::Verdict;
use qiso::report::{
    cmd_cuntz, cmd_reduce, cmd_spectral, cmd_validate, cmd_verify, ConventionChoice, RunConfig,
    SuiteReport,
};
use qiso::Error;

#[derive(Parser)]
#[command(name = "qiso", version, about = "Finite-level checks for graph spectral triples and quantum automorphism corepresentations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the graph against the hypothesis profiles
    Validate(Common),
    /// Perron data, measures, level dimensions, Dirac spectrum, Θ traces
    Spectral(Common),
    /// Run the corepresentation identity suite
    Verify(Common),
    /// Free unitary versus quantum permutation action on the Cuntz graph
    Cuntz(Common),
    /// Reduce a polynomial expression to normal form
    Reduce {
        /// e.g. "sum(k, q[1,k]) - 1"
        expr: String,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    /// Graph file
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Truncation level N
    #[arg(long, default_value_t = 3)]
    level: usize,
    /// Highest level used by the identity checks
    #[arg(long, default_value_t = 2)]
    k: usize,
    /// Highest lower level in mixed-level checks
    #[arg(long, default_value_t = 1)]
    l: usize,
    /// Exponent ε in α_q = q^{1/2+ε}
    #[arg(long, default_value_t = 0.25)]
    epsilon: f64,
    /// Use α_q = q instead of q^{1/2+ε}
    #[arg(long)]
    linear: bool,
    /// Heat parameters for the partial traces
    #[arg(long, value_delimiter = ',', default_values_t = [0.5, 1.0, 2.0])]
    t: Vec<f64>,
    /// auto, source-append or range-prepend
    #[arg(long, default_value = "auto")]
    convention: String,
    /// free-unitary or magic
    #[arg(long)]
    flavor: Option<String>,
    /// Restrict numeric providers by name (repeatable)
    #[arg(long = "provider")]
    providers: Vec<String>,
    /// Number of loops of the Cuntz graph
    #[arg(long, default_value_t = 2)]
    loops: usize,
    /// Write the JSON report here
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Common {
    fn config(&self) -> Result<RunConfig, Error> {
        let convention: ConventionChoice = self.convention.parse()?;
        let flavor = self.flavor.as_deref().map(str::parse::<Flavor>).transpose()?;
        Ok(RunConfig {
            graph: self.graph.clone(),
            truncation: self.level,
            k: self.k,
            l: self.l,
            alpha: if self.linear {
                AlphaSpec::Linear
            } else {
                AlphaSpec::Power { epsilon: self.epsilon }
            },
            t: self.t.clone(),
            convention,
            providers: self.providers.clone(),
            flavor,
            loops: self.loops,
            out: self.out.clone(),
        })
    }
}

fn emit(report: &SuiteReport, out: Option<&PathBuf>) -> Result<(), Error> {
    print!("{}", report.summary());
    if let Some(path) = out {
        std::fs::write(path, report.to_json())?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool, Error> {
    let (report, config) = match &cli.command {
        Command::Validate(c) => {
            let config = c.config()?;
            (cmd_validate(&config)?, config)
        }
        Command::Spectral(c) => {
            let config = c.config()?;
            (cmd_spectral(&config)?, config)
        }
        Command::Verify(c) => {
            let config = c.config()?;
            (cmd_verify(&config)?, config)
        }
        Command::Cuntz(c) => {
            let config = c.config()?;
            (cmd_cuntz(&config)?, config)
        }
        Command::Reduce { expr, common } => {
            let config = common.config()?;
            let (outcome, report) = cmd_reduce(expr, &config)?;
            let verdict = match &outcome.verdict {
                Verdict::ProvedZero => "proved-zero".to_string(),
                Verdict::Unknown => "unknown".to_string(),
                Verdict::WitnessedNonzero { provider, norm } => format!("witnessed-nonzero by {provider} (norm {norm:.3e})"),
            };
            println!("{}  [{verdict}]", outcome.normal_form);
            (report, config)
        }
    };
    emit(&report, config.out.as_ref())?;
    Ok(report.passed())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
