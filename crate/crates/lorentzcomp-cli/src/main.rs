mod commands;
mod config;
mod doc;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::commands::Outcome;
use crate::config::RunConfig;

#[derive(Parser)]
#[command(
    name = "lorentzcomp",
    version,
    about = "Comparison geometry in two-dimensional Lorentzian model spaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Curvature; a comma-separated list for `survey`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    k: Vec<f64>,
    #[arg(long = "in")]
    input: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = lorentzcomp::compare::VERDICT_TOL)]
    tol: f64,
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    /// Dyadic level `n` of the finite-stage majorant.
    #[arg(long)]
    level: Option<u32>,
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Four-point upper-bound verdicts for a CSV of gauges.
    CheckFourpoint {
        #[command(flatten)]
        common: Common,
    },
    /// Convex majorant of a loop file.
    Majorize {
        #[command(flatten)]
        common: Common,
    },
    /// Poisson sprinkling of a region into a causal-set file.
    Sprinkle {
        #[command(flatten)]
        common: Common,
        /// `diamond t x t x` or `box t0 t1 x0 x1`.
        #[arg(long)]
        region: String,
        #[arg(long)]
        rho: f64,
    },
    /// Four-point survey of a causal-set file.
    Survey {
        #[command(flatten)]
        common: Common,
    },
    /// SVG drawing of a triangle, quadrilateral, loop or point file.
    Render {
        #[command(flatten)]
        common: Common,
    },
    /// Law of Cosines: the opposite side from `--omega`, or the angle from `--c`.
    LocSolve {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        a: f64,
        #[arg(long)]
        b: f64,
        #[arg(long)]
        c: Option<f64>,
        #[arg(long)]
        omega: Option<f64>,
        #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
        sigma: i8,
    },
}

fn config(name: &str, c: &Common) -> RunConfig {
    RunConfig {
        command: name.into(),
        k: c.k.clone(),
        input: c.input.clone(),
        output: c.out.clone(),
        svg: c.svg.clone(),
        seed: c.seed,
        tol: c.tol,
        samples: c.samples,
        level: c.level,
        extra: Vec::new(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::CheckFourpoint { common } => {
            commands::check_fourpoint(&config("check-fourpoint", &common))
        }
        Command::Majorize { common } => commands::majorize(&config("majorize", &common)),
        Command::Sprinkle {
            common,
            region,
            rho,
        } => {
            let mut cfg = config("sprinkle", &common);
            cfg.extra.push(("region".into(), region.clone()));
            cfg.extra.push(("rho".into(), config::f17(rho)));
            commands::sprinkle(&cfg, &region, rho)
        }
        Command::Survey { common } => commands::survey(&config("survey", &common)),
        Command::Render { common } => commands::render(&config("render", &common)),
        Command::LocSolve {
            common,
            a,
            b,
            c,
            omega,
            sigma,
        } => {
            let mut cfg = config("loc-solve", &common);
            cfg.extra.push(("a".into(), config::f17(a)));
            cfg.extra.push(("b".into(), config::f17(b)));
            if let Some(c) = c {
                cfg.extra.push(("c".into(), config::f17(c)));
            }
            if let Some(w) = omega {
                cfg.extra.push(("omega".into(), config::f17(w)));
                cfg.extra.push(("sigma".into(), sigma.to_string()));
            }
            commands::loc_solve(&cfg, a, b, c, omega, sigma)
        }
    };
    match result {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
