use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use selfcup::commands::{frobenius_scan, module_info, theta_check, verify_core, Outcome, ThetaInput, VerifyOptions};
use selfcup::CliResult;
use selfcup_core::cohomology::{CohomologyOptions, DEFAULT_SEED};
use selfcup_core::suite::SuiteOptions;

#[derive(Parser, Debug)]
#[command(name = "selfcup", version, about = "Self cup products, central extensions and theta torsors of finite groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Seed for sampled classes and random sections.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED, value_parser = parse_seed)]
    seed: u64,
    /// Largest group order for which H^2 is enumerated.
    #[arg(long, global = true, default_value_t = 200, value_parser = clap::value_parser!(u64).range(1..))]
    h2_cap: u64,
    /// Print the JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
}

impl Common {
    fn cohomology(&self) -> CohomologyOptions {
        CohomologyOptions {
            h2_cap: self.h2_cap as usize,
            seed: self.seed,
            ..CohomologyOptions::default()
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the verification grid; exit 0 iff every check passes.
    VerifyCore {
        /// Only grid cells over this group (Z2, Z3, Z4, Klein, S3, D4, Q8, S4).
        #[arg(long)]
        group: Option<String>,
        /// Only grid cells whose module label contains this text.
        #[arg(long)]
        module: Option<String>,
        /// Suites to run, 1 to 10. Defaults to 1-5, or 1 alone with a filter.
        #[arg(long, value_delimiter = ',')]
        criteria: Option<Vec<u8>>,
        /// Compare against a cup product that ignores the action.
        #[arg(long, hide = true)]
        corrupt_cup: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Theta torsor class, cyclic restrictions and the Jacobian identity.
    ThetaCheck {
        /// Ascending integer coefficients, e.g. "6,1,0,0,0,0,1".
        #[arg(long, conflicts_with = "generators", required_unless_present = "generators")]
        poly: Option<String>,
        /// Galois action on the roots in 1-based cycle notation.
        #[arg(long)]
        generators: Option<String>,
        #[arg(long)]
        genus: Option<usize>,
        #[arg(long, default_value_t = 2000)]
        prime_bound: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Frobenius cycle types, discriminant and ramified primes.
    FrobeniusScan {
        #[arg(long)]
        poly: String,
        #[arg(long, default_value_t = 2000)]
        prime_bound: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Cohomology of a module given by a JSON description file.
    ModuleInfo {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
    },
}

fn parse_seed(s: &str) -> Result<u64, String> {
    let parsed = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => s.parse(),
    };
    parsed.map_err(|e| format!("invalid seed {s:?}: {e}"))
}

fn run(command: Command) -> (bool, CliResult<Outcome>) {
    match command {
        Command::VerifyCore {
            group,
            module,
            criteria,
            corrupt_cup,
            common,
        } => {
            let filtered = group.is_some() || module.is_some();
            let criteria = criteria.unwrap_or_else(|| if filtered { vec![1] } else { vec![1, 2, 3, 4, 5] });
            let opts = VerifyOptions {
                suite: SuiteOptions {
                    cohomology: common.cohomology(),
                    ..SuiteOptions::default()
                },
                group,
                module,
                criteria,
                corrupt_cup,
            };
            (common.json, verify_core(&opts))
        }
        Command::ThetaCheck {
            poly,
            generators,
            genus,
            prime_bound,
            common,
        } => {
            let input = match (poly, generators) {
                (Some(coeffs), _) => ThetaInput::Poly { coeffs, prime_bound },
                (None, Some(g)) => ThetaInput::Generators(g),
                (None, None) => unreachable!("clap requires one of --poly/--generators"),
            };
            (common.json, theta_check(&input, genus, &common.cohomology()))
        }
        Command::FrobeniusScan {
            poly,
            prime_bound,
            common,
        } => (common.json, frobenius_scan(&poly, prime_bound)),
        Command::ModuleInfo { file, common } => (common.json, module_info(&file, &common.cohomology())),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (json, result) = run(cli.command);
    match result {
        Ok(outcome) => {
            let text = if json {
                serde_json::to_string_pretty(&outcome.json).expect("valid JSON value") + "\n"
            } else {
                outcome.text
            };
            // a closed pipe (e.g. `| head`) is not an error worth reporting
            let _ = std::io::stdout().lock().write_all(text.as_bytes());
            ExitCode::from(outcome.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
