use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use evidence_lab::cli::{
    exit_code_for, format_sig9, load_config, run_experiment, RunOptions, EXIT_OK, EXIT_VALIDATION,
    SEED_ENV,
};
use evidence_lab::consistency::pvalue_limit;

#[derive(Parser)]
#[command(
    name = "evidence-lab",
    version,
    about = "Monte Carlo checks of the consistency of evidence measures"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment and write convergence.csv, manifest.json and verdict.json.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Overrides run.seed and the EVIDENCE_LAB_SEED variable.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out_dir: Option<PathBuf>,
        /// Exit with status 4 when any verdict is inconclusive.
        #[arg(long)]
        strict: bool,
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Print the limit of Pr(H1 | p-value in S) for significance level A and weight W.
    Oracle {
        #[arg(long)]
        alpha_s: f64,
        #[arg(long)]
        w: f64,
    },
    /// Parse and validate a config, printing the resolved document.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Run {
            config,
            seed,
            out_dir,
            strict,
            workers,
        } => {
            let env_seed = std::env::var(SEED_ENV).ok();
            let opts = RunOptions {
                seed,
                out_dir,
                strict,
                workers,
            };
            match load_config(&config).and_then(|c| run_experiment(&c, &opts, env_seed.as_deref()))
            {
                Ok(report) => {
                    for s in &report.scenarios {
                        for v in &s.verdicts {
                            println!(
                                "w={} {} n={} estimate={} limit={} {}",
                                s.w,
                                v.measure,
                                v.n,
                                v.estimate
                                    .map(format_sig9)
                                    .unwrap_or_else(|| "undefined".into()),
                                format_sig9(v.limit),
                                v.verdict.as_str()
                            );
                        }
                    }
                    println!("outputs in {}", report.out_dir.display());
                    report.exit_code
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    exit_code_for(&e)
                }
            }
        }
        Command::Oracle { alpha_s, w } => match pvalue_limit(alpha_s, w) {
            Ok(v) => {
                println!("{v}");
                EXIT_OK
            }
            Err(e) => {
                eprintln!("error: {e}");
                EXIT_VALIDATION
            }
        },
        Command::Validate { config } => match load_config(&config) {
            Ok(c) => {
                print!("{}", c.to_document());
                EXIT_OK
            }
            Err(e) => {
                eprintln!("error: {e}");
                exit_code_for(&e)
            }
        },
    };
    ExitCode::from(code as u8)
}
