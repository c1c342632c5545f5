//! `hypo`: command-line front end for the hypo-core checks.

mod commands;
mod report;

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(
    name = "hypo",
    version,
    about = "Hypo structures on nilpotent Lie algebras and their Calabi-Yau evolutions"
)]
pub struct Cli {
    /// Emit the structured report instead of text.
    #[arg(long, global = true)]
    pub json: bool,

    /// Structure catalog file (default: $HYPO_CATALOG, then the bundled catalog).
    #[arg(long, global = true, value_name = "PATH")]
    pub catalog: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse a Lie algebra and report Jacobi, b1, b2 and nilpotency step.
    Parse(AlgebraArg),
    /// Check dω1 = 0, d(α∧ω2) = 0, d(α∧ω3) = 0.
    CheckHypo(StructureArgs),
    /// Decompose the intrinsic torsion and test the hypo pattern.
    Torsion(StructureArgs),
    /// Integrate the evolution equations for one of the two diagonal examples.
    Flow(FlowArgs),
    /// Ricci tensor and holonomy span of the evolved metrics.
    Curvature(CurvatureArgs),
    /// Search for hypo structures by defect minimization.
    Classify(ClassifyArgs),
    /// Rank and compatibility of the polar-space system at a hypo frame.
    Polar(StructureArgs),
    /// Closedness and phases of the special Lagrangian pencil.
    Pencil(PencilArgs),
    /// Reproduce the classification table for nilpotent algebras.
    Table(SearchArgs),
}

#[derive(Args, Debug)]
pub struct AlgebraArg {
    /// Salamon notation, e.g. "(0,0,0,12,13)", or `table:N` for row N.
    #[arg(long)]
    pub algebra: String,
}

#[derive(Args, Debug)]
pub struct StructureArgs {
    #[command(flatten)]
    pub algebra: AlgebraArg,
    /// `catalog:N`, or inline forms "α;ω1;ω2;ω3" such as "1;35+24;32+45;34+52".
    #[arg(long)]
    pub structure: String,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Example {
    #[value(name = "1")]
    One,
    #[value(name = "2")]
    Two,
}

#[derive(Args, Debug)]
pub struct FlowArgs {
    #[arg(long, value_enum, default_value = "1")]
    pub example: Example,
    #[arg(long, default_value_t = 1000)]
    pub steps: usize,
    /// End time (default 0.45 for example 1, 0.7 for example 2); the start is t = 0.
    #[arg(long, allow_hyphen_values = true)]
    pub t_end: Option<f64>,
    /// Tolerance on the deviation from the closed-form solution.
    #[arg(long, default_value_t = 1e-9, value_parser = positive)]
    pub tol: f64,
    /// Print the trajectory table.
    #[arg(long)]
    pub table: bool,
}

#[derive(Args, Debug)]
pub struct CurvatureArgs {
    #[arg(long, value_enum, default_value = "1")]
    pub example: Example,
    /// Sample points: `t` for example 1, `u` for example 2.
    #[arg(long, num_args = 1.., allow_hyphen_values = true)]
    pub at: Vec<f64>,
    #[arg(long, default_value_t = 1e-8, value_parser = positive)]
    pub tol: f64,
}

#[derive(Args, Debug)]
pub struct SearchArgs {
    #[arg(long, default_value_t = 200)]
    pub starts: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug)]
pub struct ClassifyArgs {
    #[command(flatten)]
    pub algebra: AlgebraArg,
    #[command(flatten)]
    pub search: SearchArgs,
}

#[derive(Args, Debug)]
pub struct PencilArgs {
    #[arg(long, num_args = 1.., allow_hyphen_values = true)]
    pub t: Vec<f64>,
    #[arg(long, default_value_t = 1e-12, value_parser = positive)]
    pub tol: f64,
}

fn positive(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(x) if x > 0.0 && x.is_finite() => Ok(x),
        Ok(_) => Err("tolerance must be positive".into()),
        Err(e) => Err(e.to_string()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(report) => {
            if cli.json {
                print!("{}", report.to_json());
            } else {
                print!("{}", report.to_text());
            }
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
