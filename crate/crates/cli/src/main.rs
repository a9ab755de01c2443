use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;
use tropfw_core::datagen::GenMode;
use tropfw_core::search::{search_lex_with, search_priority_with, SearchOutcome};
use tropfw_core::{fermat_weber_point_with, project_onto_tconv, FwSolver, Scalar, TropicalPoint};
use tropfw_cli::experiment::{self, ExperimentConfig, ExperimentId};
use tropfw_cli::io::{format_row, read_matrix, InputError};

/// Exact tropical Fermat-Weber points, projections and triangle search.
#[derive(Parser)]
#[command(name = "tropfw", version)]
struct Cli {
    /// Fermat-Weber solver.
    #[arg(long, global = true, value_enum, default_value_t = SolverArg::Network)]
    solver: SolverArg,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print a Fermat-Weber point of the rows of FILE and the optimal distance sum.
    Fw {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Project every row of FILE onto the tropical hull of the generator rows.
    Project {
        file: PathBuf,
        #[arg(long)]
        generators: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Search column pairs for a triangle that keeps the Fermat-Weber point.
    Search {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Algorithm::Lex)]
        algorithm: Algorithm,
        #[arg(long)]
        json: bool,
    },
    /// Run a seeded experiment and write JSON and CSV reports.
    Experiment {
        /// table1, table2, table3 or steps.
        id: ExperimentId,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long)]
        seed: u64,
        /// Comma-separated list of row counts.
        #[arg(long, value_delimiter = ',')]
        m: Option<Vec<usize>>,
        /// Comma-separated list of column counts.
        #[arg(long, value_delimiter = ',')]
        n: Option<Vec<usize>>,
        /// Comma-separated list of variances.
        #[arg(long, value_delimiter = ',')]
        v: Option<Vec<f64>>,
        /// Worker threads (0: one per core).
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        #[arg(long, value_enum, default_value_t = GenModeArg::Normalize)]
        gen_mode: GenModeArg,
        /// Coordinate bound for random triangles.
        #[arg(long, default_value_t = 9999.0)]
        bound: f64,
        #[arg(long, default_value = "reports")]
        out_dir: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Algorithm {
    Lex,
    Priority,
}

#[derive(Clone, Copy, ValueEnum)]
enum SolverArg {
    Network,
    Simplex,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenModeArg {
    Normalize,
    FixFirst,
}

enum Failure {
    /// The search ran and found nothing.
    NotFound,
    Input(InputError),
}

impl From<InputError> for Failure {
    fn from(e: InputError) -> Self {
        Failure::Input(e)
    }
}

impl From<tropfw_core::Error> for Failure {
    fn from(e: tropfw_core::Error) -> Self {
        Failure::Input(e.into())
    }
}

fn scalar_json(s: &Scalar) -> serde_json::Value {
    json!({ "exact": s.to_string(), "approx": s.to_f64() })
}

fn point_json(p: &TropicalPoint) -> serde_json::Value {
    serde_json::Value::Array(p.coords().iter().map(|c| json!(c.to_string())).collect())
}

fn decimal(s: &Scalar) -> String {
    s.to_decimal_string(6)
}

fn print_outcome(out: &SearchOutcome, algorithm: Algorithm, as_json: bool) {
    let name = match algorithm {
        Algorithm::Lex => "lex",
        Algorithm::Priority => "priority",
    };
    if as_json {
        let doc = json!({
            "algorithm": name,
            "status": if out.is_success() { "success" } else { "fail" },
            "pair": out.winning_pair().map(|p| [p.d1(), p.d2()]),
            "triangle": out.triangle().map(|t| t.vertices().iter().map(point_json).collect::<Vec<_>>()),
            "steps": out.steps(),
            "visited": out.visited().iter().map(|p| [p.d1(), p.d2()]).collect::<Vec<_>>(),
            "fw_point": point_json(&out.fw.point),
            "fw_objective": scalar_json(&out.fw.objective),
        });
        println!("{}", serde_json::to_string_pretty(&doc).expect("json"));
        return;
    }
    println!("algorithm: {name}");
    match out.winning_pair() {
        Some(pair) => println!("status: success\npair: {pair}"),
        None => println!("status: FAIL"),
    }
    if let Some(t) = out.triangle() {
        for (i, v) in t.vertices().iter().enumerate() {
            println!("u{}: {v}", i + 1);
        }
    }
    println!("steps: {}", out.steps());
    let visited: Vec<String> = out.visited().iter().map(|p| p.to_string()).collect();
    println!("visited: {}", visited.join(" "));
    println!("fw point: {}", out.fw.point);
}

fn run(cli: Cli) -> Result<(), Failure> {
    let solver = match cli.solver {
        SolverArg::Network => FwSolver::Network,
        SolverArg::Simplex => FwSolver::Simplex,
    };
    match cli.command {
        Command::Fw { file, json } => {
            let x = read_matrix(&file)?;
            let fw = fermat_weber_point_with(&x, solver)?;
            if json {
                let doc = json!({ "point": point_json(&fw.point), "objective": scalar_json(&fw.objective) });
                println!("{}", serde_json::to_string_pretty(&doc).expect("json"));
            } else {
                println!("point: {}", fw.point);
                println!("objective: {} ({})", fw.objective, decimal(&fw.objective));
            }
        }
        Command::Project { file, generators, json } => {
            let x = read_matrix(&file)?;
            let gens = read_matrix(&generators)?;
            let rows = x
                .rows()
                .iter()
                .map(|r| project_onto_tconv(r, gens.rows()))
                .collect::<Result<Vec<_>, _>>()?;
            if json {
                let doc = json!({ "projections": rows.iter().map(point_json).collect::<Vec<_>>() });
                println!("{}", serde_json::to_string_pretty(&doc).expect("json"));
            } else {
                for r in &rows {
                    println!("{}", format_row(r));
                }
            }
        }
        Command::Search { file, algorithm, json } => {
            let x = read_matrix(&file)?;
            let out = match algorithm {
                Algorithm::Lex => search_lex_with(&x, solver)?,
                Algorithm::Priority => search_priority_with(&x, solver)?,
            };
            print_outcome(&out, algorithm, json);
            if !out.is_success() {
                return Err(Failure::NotFound);
            }
        }
        Command::Experiment {
            id,
            trials,
            seed,
            m,
            n,
            v,
            jobs,
            gen_mode,
            bound,
            out_dir,
        } => {
            let mut cfg = ExperimentConfig::new(id, trials, seed);
            cfg.ms = m.unwrap_or(cfg.ms);
            cfg.ns = n.unwrap_or(cfg.ns);
            cfg.vs = v.unwrap_or(cfg.vs);
            cfg.jobs = jobs;
            cfg.bound = bound;
            cfg.solver = solver;
            cfg.gen_mode = match gen_mode {
                GenModeArg::Normalize => GenMode::Normalize,
                GenModeArg::FixFirst => GenMode::FixFirst,
            };
            let report = experiment::run(&cfg)?;
            println!("{:>5} {:>5} {:>8} {:>7} {:>10} {:>8} {:>8} {:>8} {:>10} {:>10}", "m", "n", "v", "trials", "successes", "rate", "A1>A4", "A1<A4", "secs A1", "secs A4");
            for c in &report.cells {
                let rate = c.rate.as_ref().map_or("-".into(), |r| format!("{:.4}", r.approx));
                let secs = |s: Option<f64>| s.map_or("-".into(), |s| format!("{s:.4}"));
                println!(
                    "{:>5} {:>5} {:>8} {:>7} {:>10} {:>8} {:>8} {:>8} {:>10} {:>10}",
                    c.m, c.n, c.v, c.trials, c.successes, rate, c.a1_gt_a4, c.a1_lt_a4, secs(c.mean_secs_a1), secs(c.mean_secs_a4)
                );
            }
            let written = report
                .write_to(&out_dir)
                .map_err(|source| InputError::Io { path: out_dir.clone(), source })?;
            for path in written {
                println!("wrote {}", path.display());
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::NotFound) => ExitCode::from(1),
        Err(Failure::Input(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
