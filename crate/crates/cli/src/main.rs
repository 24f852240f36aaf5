mod commands;
mod session;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use session::{Config, Session};

#[derive(Parser)]
#[command(
    name = "hvalued",
    version,
    about = "Heyting-valued models and lifted locale morphisms"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Highest name rank in sweeps.
    #[arg(long, default_value_t = 2, global = true)]
    rank: u32,
    /// Largest domain at every level of a swept name.
    #[arg(long, default_value_t = 2, global = true)]
    max_domain: usize,
    /// Most instances a sweep visits before switching to seeded sampling;
    /// also the ceiling on the number of enumerated names.
    #[arg(long, default_value_t = 10_000_000, global = true)]
    budget: u64,
    /// Seed for sampled sweeps.
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
    /// Also write the report as JSON to this path.
    #[arg(long, global = true)]
    json: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Validate or print an algebra file.
    Algebra {
        #[command(subcommand)]
        action: AlgebraAction,
        #[command(flatten)]
        common: Common,
    },
    /// Evaluate the formulas of a script.
    Eval {
        script: PathBuf,
        /// Algebra used when the script has no `algebra` line.
        #[arg(long, default_value = "four")]
        algebra: String,
        #[command(flatten)]
        common: Common,
    },
    /// Lift every name bound in a file along a locale morphism.
    Lift {
        /// Morphism file, or one of f, i, collapse_low, collapse_high.
        morphism: String,
        /// `let` bindings over the source algebra.
        names: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Run a theorem suite.
    Check {
        #[command(subcommand)]
        suite: Suite,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Subcommand)]
enum AlgebraAction {
    Check { file: String },
    Show { file: String },
}

#[derive(Subcommand)]
enum Suite {
    /// Atomic and positive bounded preservation on the swept names.
    Preservation {
        #[arg(long, default_value = "f")]
        morphism: String,
    },
    /// Identity lifts, and lifting along `f` then `g` against `g . f`.
    Functoriality {
        #[arg(long, default_value = "i")]
        first: String,
        #[arg(long, default_value = "f")]
        then: String,
    },
    /// The eleven valuation laws on the swept names.
    Properties {
        #[arg(long, default_value = "four")]
        algebra: String,
    },
    /// The four-to-two name with no strict image.
    Counterexample,
    /// Category laws on small H-sets, lambda roundtrips, and the H-sets and
    /// morphisms of an optional file.
    HsetLaws {
        #[arg(long, default_value = "four")]
        algebra: String,
        file: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let session = Session::new();
    let (common, outcome) = match cli.command {
        Command::Algebra { action, common } => {
            let out = match action {
                AlgebraAction::Check { file } => commands::algebra_check(&session, &file),
                AlgebraAction::Show { file } => commands::algebra_show(&session, &file),
            };
            (common, out)
        }
        Command::Eval {
            script,
            algebra,
            common,
        } => {
            let out = commands::eval(&session, &script, &algebra);
            (common, out)
        }
        Command::Lift {
            morphism,
            names,
            common,
        } => {
            let out = commands::lift(&session, &morphism, &names);
            (common, out)
        }
        Command::Check { suite, common } => {
            let config = config(&common);
            let out = match suite {
                Suite::Preservation { morphism } => {
                    commands::preservation(&session, &config, &morphism)
                }
                Suite::Functoriality { first, then } => {
                    commands::functoriality(&session, &config, &first, &then)
                }
                Suite::Properties { algebra } => commands::properties(&session, &config, &algebra),
                Suite::Counterexample => commands::counterexample(&session),
                Suite::HsetLaws { algebra, file } => {
                    commands::hset_laws(&session, &config, &algebra, file.as_deref())
                }
            };
            (common, out)
        }
    };
    let config = config(&common);
    match outcome.and_then(|o| commands::finish(&session, &config, o, common.json.as_deref())) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {}", message(&e));
            ExitCode::from(2)
        }
    }
}

/// The error chain, skipping causes already spelled out by their parent.
fn message(e: &anyhow::Error) -> String {
    let mut out = String::new();
    for cause in e.chain() {
        let text = cause.to_string();
        if !out.contains(&text) {
            if !out.is_empty() {
                out.push_str(": ");
            }
            out.push_str(&text);
        }
    }
    out
}

fn config(c: &Common) -> Config {
    Config {
        rank: c.rank,
        max_domain: c.max_domain,
        budget: c.budget,
        seed: c.seed,
    }
}
