//! The `wakexp` command line.
//!
//! Every subcommand prints one JSON document (single queries) or one CSV table
//! (sweeps) on standard output, or writes it to `--out`. Diagnostics go to
//! standard error. Exit codes: 0 success, 2 bad arguments or input, 3 domain
//! error, 4 solver found no feasible point.

pub mod io;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::dsbs::{dsbs_exponent, figure2_sweep, DsbsParams};
use crate::error::{Error, Result};
use crate::optim::SolverConfig;
use crate::pa::{pa_bound_from_exponent, pa_rate_tradeoff, pa_security_bound};
use crate::probkit::binary_entropy;
use crate::reductions::{
    exponent_ne, exponent_single_direct, exponent_single_parametric, gap_check, oohama_wak_bound,
    ThetaGrid,
};
use crate::wak::{default_nu, region_curve, region_min_r1, wak_exponent, RatePair};

use self::io::{load_pmf, load_source, parse_grid, to_json, CsvTable};

pub const TRADEOFF_HEADER: [&str; 3] = ["r2", "max_r1", "total_bound"];
pub const FIG2_HEADER: [&str; 8] = [
    "r1",
    "unconstrained",
    "constrained",
    "beta_u",
    "q0_u",
    "q1_u",
    "beta_c",
    "q_c",
];
pub const REGION_HEADER: [&str; 2] = ["r2", "min_r1"];

#[derive(Debug, Parser)]
#[command(name = "wakexp", version, about = "Strong converse exponents for source coding with encoded side information")]
struct Cli {
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Solver {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    starts: Option<usize>,
    #[arg(long)]
    grid_resolution: Option<usize>,
    #[arg(long)]
    max_iterations: Option<usize>,
    #[arg(long)]
    step_tolerance: Option<f64>,
    #[arg(long)]
    penalty_weight: Option<f64>,
}

impl Solver {
    fn config(&self) -> Result<SolverConfig> {
        let d = SolverConfig::default();
        let c = SolverConfig {
            seed: self.seed,
            starts: self.starts.unwrap_or(d.starts),
            grid_resolution: self.grid_resolution.unwrap_or(d.grid_resolution),
            max_iterations: self.max_iterations.unwrap_or(d.max_iterations),
            step_tolerance: self.step_tolerance.unwrap_or(d.step_tolerance),
            penalty_weight: self.penalty_weight.unwrap_or(d.penalty_weight),
        };
        c.validate()?;
        Ok(c)
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// The tight exponent F(R1, R2 | P_XY) with its decomposition.
    Exponent {
        #[arg(long)]
        source: String,
        #[arg(long)]
        r1: f64,
        #[arg(long)]
        r2: f64,
        /// Auxiliary alphabet size (default min(|X||Y|+2, 4)).
        #[arg(long)]
        nu: Option<usize>,
        #[command(flatten)]
        solver: Solver,
    },
    /// Smallest achievable R1 at R2, or the boundary over an R2 grid as CSV.
    Region {
        #[arg(long)]
        source: String,
        #[arg(long, conflicts_with = "r2_grid", required_unless_present = "r2_grid")]
        r2: Option<f64>,
        /// `start:stop:step` or a comma-separated list.
        #[arg(long)]
        r2_grid: Option<String>,
        /// Also report whether (r1, r2) is achievable.
        #[arg(long, requires = "r2")]
        r1: Option<f64>,
        #[command(flatten)]
        solver: Solver,
    },
    /// The exponent with uncoded side information.
    Ne {
        #[arg(long)]
        source: String,
        #[arg(long)]
        r1: f64,
        #[command(flatten)]
        solver: Solver,
    },
    /// The single-user exponent, direct and parametric.
    Single {
        /// JSON array of probabilities or a file holding one.
        #[arg(long)]
        pmf: String,
        #[arg(long)]
        r1: f64,
        #[command(flatten)]
        solver: Solver,
    },
    /// Oohama's lower bound on the exponent.
    Oohama {
        #[arg(long)]
        source: String,
        #[arg(long)]
        r1: f64,
        #[arg(long)]
        r2: f64,
        /// Auxiliary alphabet size (default |Y|).
        #[arg(long)]
        nu: Option<usize>,
        #[command(flatten)]
        solver: Solver,
    },
    /// Gap between the single-user exponent and Oohama's bound.
    Gap {
        #[arg(long)]
        pmf: String,
        #[arg(long)]
        r1: f64,
    },
    /// The binary-auxiliary bound for a doubly symmetric binary source.
    Dsbs {
        /// Crossover probability of the source, in (0, 1/2).
        #[arg(long)]
        p: f64,
        #[arg(long)]
        r1: f64,
        #[arg(long)]
        r2: f64,
        /// Restrict to q0 = q1 (U − Y − X Markov).
        #[arg(long)]
        markov: bool,
        #[command(flatten)]
        solver: Solver,
    },
    /// Sweep of both binary-auxiliary bounds over R1 as CSV.
    Fig2 {
        /// Crossover probability of the source, in (0, 1/2).
        #[arg(long)]
        p: f64,
        /// A rate, or `auto` for 1 − h(0.2).
        #[arg(long, default_value = "auto")]
        r2: String,
        #[arg(long, default_value = "0:1:0.05")]
        r1_grid: String,
        #[command(flatten)]
        solver: Solver,
    },
    /// Privacy-amplification security bound.
    Pa {
        #[arg(long)]
        source: String,
        #[arg(long)]
        r1: f64,
        #[arg(long)]
        r2: f64,
        #[arg(long)]
        delta: f64,
        #[arg(long)]
        n: u64,
        /// Use this exponent instead of solving for F(r1 + delta, r2).
        #[arg(long)]
        exponent: Option<f64>,
        #[arg(long)]
        nu: Option<usize>,
        #[command(flatten)]
        solver: Solver,
    },
    /// Largest key rate meeting a security target, per storage rate, as CSV.
    PaTradeoff {
        #[arg(long)]
        source: String,
        #[arg(long)]
        target: f64,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        delta: f64,
        #[arg(long)]
        r2_grid: String,
        #[arg(long, default_value = "0:1:0.1")]
        r1_grid: String,
        #[arg(long)]
        nu: Option<usize>,
        #[command(flatten)]
        solver: Solver,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionReport {
    pub r2: f64,
    pub min_r1: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inside: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NeReport {
    pub r1: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingleReport {
    pub r1: f64,
    pub direct: f64,
    pub parametric: f64,
    pub theta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OohamaReport {
    pub r1: f64,
    pub r2: f64,
    pub value: f64,
    pub mu: f64,
    pub alpha: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DsbsReport {
    pub r1: f64,
    pub r2: f64,
    pub markov_constrained: bool,
    pub value: f64,
    pub argmin: DsbsParams,
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Domain(_) => 3,
        Error::Infeasible => 4,
        Error::Dimension(_) | Error::InvalidPmf(_) | Error::Parse(_) | Error::Io(_) => 2,
    }
}

/// Parses `args` (including the program name) and runs the subcommand.
/// Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                2
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    let result = execute(cli.command, err).and_then(|text| match &cli.out {
        Some(path) => Ok(std::fs::write(path, text)?),
        None => Ok(out.write_all(text.as_bytes())?),
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn execute(command: Command, err: &mut dyn Write) -> Result<String> {
    match command {
        Command::Exponent { source, r1, r2, nu, solver } => {
            let src = load_source(&source)?;
            let nu = nu.unwrap_or_else(|| default_nu(&src));
            to_json(&wak_exponent(&src, RatePair::new(r1, r2)?, &solver.config()?, nu)?)
        }
        Command::Region { source, r2, r2_grid, r1, solver } => {
            let src = load_source(&source)?;
            let config = solver.config()?;
            match (r2, r2_grid) {
                (Some(r2), _) => {
                    let min_r1 = region_min_r1(&src, r2, &config)?;
                    if let Some(r1) = r1 {
                        RatePair::new(r1, r2)?;
                    }
                    let inside = r1.map(|r1| r1 >= min_r1 - crate::wak::REGION_TOLERANCE);
                    to_json(&RegionReport { r2, min_r1, r1, inside })
                }
                (None, Some(grid)) => {
                    let curve = region_curve(&src, &parse_grid(&grid)?, &config)?;
                    let mut t = CsvTable::new(&REGION_HEADER);
                    for (r2, r1) in curve.points {
                        t.push(vec![Some(r2), Some(r1)]);
                    }
                    t.to_csv()
                }
                (None, None) => Err(Error::Parse("one of --r2, --r2-grid is required".into())),
            }
        }
        Command::Ne { source, r1, solver } => {
            let src = load_source(&source)?;
            to_json(&NeReport { r1, value: exponent_ne(&src, r1, &solver.config()?)? })
        }
        Command::Single { pmf, r1, solver } => {
            let p = load_pmf(&pmf)?;
            let direct = exponent_single_direct(&p, r1, &solver.config()?)?;
            let par = exponent_single_parametric(&p, r1, &ThetaGrid::standard())?;
            to_json(&SingleReport { r1, direct, parametric: par.value, theta: par.theta })
        }
        Command::Oohama { source, r1, r2, nu, solver } => {
            let src = load_source(&source)?;
            let nu = nu.unwrap_or(src.ny());
            let v = oohama_wak_bound(&src, RatePair::new(r1, r2)?, nu, &solver.config()?)?;
            to_json(&OohamaReport { r1, r2, value: v.value, mu: v.mu, alpha: v.alpha })
        }
        Command::Gap { pmf, r1 } => to_json(&gap_check(&load_pmf(&pmf)?, r1)?),
        Command::Dsbs { p, r1, r2, markov, solver } => {
            let (value, argmin) = dsbs_exponent(p, r1, r2, markov, &solver.config()?)?;
            to_json(&DsbsReport { r1, r2, markov_constrained: markov, value, argmin })
        }
        Command::Fig2 { p, r2, r1_grid, solver } => {
            let r2 = if r2 == "auto" {
                let v = 1.0 - binary_entropy(0.2);
                let _ = writeln!(err, "r2 = 1 - h(0.2) = {v}");
                v
            } else {
                r2.parse().map_err(|_| Error::Parse(format!("bad rate {r2:?}")))?
            };
            let points = figure2_sweep(p, r2, &parse_grid(&r1_grid)?, &solver.config()?)?;
            let mut t = CsvTable::new(&FIG2_HEADER);
            for pt in points {
                let (bu, q0, q1) = pt.argmin_unconstrained;
                let (bc, qc) = pt.argmin_constrained;
                t.push(
                    [pt.r1, pt.unconstrained, pt.constrained, bu, q0, q1, bc, qc]
                        .map(Some)
                        .to_vec(),
                );
            }
            t.to_csv()
        }
        Command::Pa { source, r1, r2, delta, n, exponent, nu, solver } => {
            let rates = RatePair::new(r1, r2)?;
            let report = match exponent {
                Some(e) => pa_bound_from_exponent(e, rates, delta, n)?,
                None => {
                    let src = load_source(&source)?;
                    let nu = nu.unwrap_or_else(|| default_nu(&src));
                    pa_security_bound(&src, rates, delta, n, &solver.config()?, nu)?
                }
            };
            to_json(&report)
        }
        Command::PaTradeoff { source, target, n, delta, r2_grid, r1_grid, nu, solver } => {
            let src = load_source(&source)?;
            let nu = nu.unwrap_or_else(|| default_nu(&src));
            let rows = pa_rate_tradeoff(
                &src,
                target,
                n,
                delta,
                &parse_grid(&r2_grid)?,
                &parse_grid(&r1_grid)?,
                &solver.config()?,
                nu,
            )?;
            let mut t = CsvTable::new(&TRADEOFF_HEADER);
            for r in rows {
                t.push(vec![Some(r.r2), r.max_r1, r.total_bound]);
            }
            t.to_csv()
        }
    }
}
