//! `serrekb`: Serre functors, AR translates and almost split triangles from
//! the command line.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails, 2 on usage
//! or input errors.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serrekb::suite::DEFAULT_SEED;
use serrekb::Error;

#[derive(Parser, Debug)]
#[command(name = "serrekb", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Algebra file (TOML).
    #[arg(long, global = true)]
    pub algebra: Option<PathBuf>,
    /// Complex file (TOML) over the algebra.
    #[arg(long, global = true)]
    pub complex: Option<PathBuf>,
    /// Module placed as a stalk in degree 0: a name from the algebra file,
    /// or `P:v`, `P:v/k`, `I:v`, `S:v`.
    #[arg(long, global = true)]
    pub module: Option<String>,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Print the report as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Accept endomorphism rings whose locality cannot be certified.
    #[arg(long, global = true)]
    pub assert_local: bool,
    #[arg(long, global = true, value_enum, default_value_t = Probes::Default)]
    pub probes: Probes,
    /// Directory of algebra files for `suite` (default: the bundled corpus).
    #[arg(long, global = true)]
    pub corpus: Option<PathBuf>,
    /// Run batches sequentially.
    #[arg(long, global = true)]
    pub sequential: bool,
}

#[derive(Subcommand, Debug, Clone, Copy)]
pub enum Command {
    /// S X by the staircase presentation.
    Serre,
    /// S X by the presentation-free double complex.
    SerreAlt,
    /// The quasi-inverse S⁻ X.
    SerreInverse,
    /// Classical τ = D Tr of a module.
    Tau,
    /// The almost split triangle ending in X.
    ArTriangle,
    Verify {
        #[command(subcommand)]
        property: Property,
    },
    /// Every acceptance check on the corpus.
    Suite,
}

#[derive(Subcommand, Debug, Clone, Copy)]
pub enum Property {
    /// dim Hom_K(M, X) = dim Hom_K(X, S M) over the probe family.
    Duality,
    /// The defect formula on seeded random extensions.
    Defect,
    /// Non-degeneracy of composition into S X over the probe family.
    Nondegeneracy,
    /// S(cone f) ≃ cone(S f) on seeded random maps out of X.
    TriangleFunctor,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Probes {
    Default,
    Extended,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    std::panic::set_hook(Box::new(|info| eprintln!("error: internal failure: {info}")));
    let outcome = std::panic::catch_unwind(|| commands::run(&cli));
    match outcome {
        Ok(Ok(report)) => {
            if cli.json {
                println!("{}", report.to_json());
            } else {
                print!("{}", report.to_text());
            }
            ExitCode::from(if report.passed() { 0 } else { 1 })
        }
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Internal(_) => 1,
                _ => 2,
            })
        }
        Err(_) => ExitCode::from(2),
    }
}
