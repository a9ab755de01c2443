//! Seeded experiments over a grid of `(m, n, v)` cells.
//!
//! Trial `t` of cell `(m, n, v)` draws its data matrix from stream
//! `derive_stream([0, m, n, bits(v), t])`, so trials are independent of one
//! another and of the thread count. `table1` uses the trial-0 matrix of its
//! cell and draws triangle `t` from `derive_stream([1, m, n, bits(v), t])`.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use tropfw_core::datagen::{derive_stream, gen_normal_matrix, gen_random_triangle, GenConfig, GenMode, DECIMAL_DIGITS, PRNG_NAME};
use tropfw_core::fermat_weber::fermat_weber_point_with;
use tropfw_core::projection::fw_projection_holds;
use tropfw_core::search::{search_lex_with, search_priority_with, SearchOutcome, Verdict};
use tropfw_core::{DataMatrix, Error, FwSolver, Scalar};

use crate::report::{Cell, Exact, ExperimentReport, Metadata, Trial};

const DATA_TAG: u64 = 0;
const TRIANGLE_TAG: u64 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExperimentId {
    /// Random triangles against one fixed matrix per cell.
    Table1,
    /// Search success rate over a grid of sizes.
    Table2,
    /// Search success rate as the variance changes.
    Table3,
    /// Paired step counts of the two searches.
    Steps,
}

impl ExperimentId {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentId::Table1 => "table1",
            ExperimentId::Table2 => "table2",
            ExperimentId::Table3 => "table3",
            ExperimentId::Steps => "steps",
        }
    }

    pub fn default_ms(self) -> Vec<usize> {
        match self {
            ExperimentId::Table3 => vec![120],
            _ => vec![30, 60, 90, 120],
        }
    }

    pub fn default_ns(self) -> Vec<usize> {
        match self {
            ExperimentId::Table3 => vec![20],
            _ => vec![5, 10, 15, 20],
        }
    }

    pub fn default_vs(self) -> Vec<f64> {
        match self {
            ExperimentId::Table3 => vec![1.0, 5.0, 10.0, 50.0, 800.0],
            _ => vec![10.0],
        }
    }
}

impl FromStr for ExperimentId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "table1" => Ok(ExperimentId::Table1),
            "table2" => Ok(ExperimentId::Table2),
            "table3" => Ok(ExperimentId::Table3),
            "steps" => Ok(ExperimentId::Steps),
            other => Err(format!("unknown experiment `{other}` (expected table1, table2, table3 or steps)")),
        }
    }
}

impl fmt::Display for ExperimentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub id: ExperimentId,
    pub trials: usize,
    pub seed: u64,
    pub ms: Vec<usize>,
    pub ns: Vec<usize>,
    pub vs: Vec<f64>,
    /// Worker threads; 0 lets rayon decide.
    pub jobs: usize,
    pub gen_mode: GenMode,
    pub bound: f64,
    pub solver: FwSolver,
}

impl ExperimentConfig {
    pub fn new(id: ExperimentId, trials: usize, seed: u64) -> Self {
        ExperimentConfig {
            id,
            trials,
            seed,
            ms: id.default_ms(),
            ns: id.default_ns(),
            vs: id.default_vs(),
            jobs: 0,
            gen_mode: GenMode::default(),
            bound: 9999.0,
            solver: FwSolver::default(),
        }
    }

    pub fn grid(mut self, ms: Vec<usize>, ns: Vec<usize>, vs: Vec<f64>) -> Self {
        self.ms = ms;
        self.ns = ns;
        self.vs = vs;
        self
    }

    fn validate(&self) -> Result<(), Error> {
        if self.ms.is_empty() || self.ns.is_empty() || self.vs.is_empty() {
            return Err(Error::InvalidConfig("empty grid".into()));
        }
        for &m in &self.ms {
            for &n in &self.ns {
                for &v in &self.vs {
                    GenConfig::new(m, n, v, self.seed).validate()?;
                }
            }
        }
        if !(self.bound.is_finite() && self.bound > 0.0) {
            return Err(Error::InvalidConfig(format!("bound must be positive, got {}", self.bound)));
        }
        Ok(())
    }

    fn cells(&self) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::new();
        for &m in &self.ms {
            for &n in &self.ns {
                for &v in &self.vs {
                    out.push((m, n, v));
                }
            }
        }
        out
    }

    fn data_config(&self, m: usize, n: usize, v: f64, trial: usize) -> GenConfig {
        GenConfig::new(m, n, v, self.seed)
            .with_stream(data_stream(m, n, v, trial))
            .with_mode(self.gen_mode)
    }
}

pub fn data_stream(m: usize, n: usize, v: f64, trial: usize) -> u64 {
    derive_stream(&[DATA_TAG, m as u64, n as u64, v.to_bits(), trial as u64])
}

pub fn triangle_stream(m: usize, n: usize, v: f64, trial: usize) -> u64 {
    derive_stream(&[TRIANGLE_TAG, m as u64, n as u64, v.to_bits(), trial as u64])
}

/// The data matrix of one trial, exactly as the experiment generates it.
pub fn trial_matrix(cfg: &ExperimentConfig, m: usize, n: usize, v: f64, trial: usize) -> Result<DataMatrix, Error> {
    gen_normal_matrix(&cfg.data_config(m, n, v, trial))
}

pub fn run(cfg: &ExperimentConfig) -> Result<ExperimentReport, Error> {
    cfg.validate()?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if cfg.jobs > 0 {
        builder = builder.num_threads(cfg.jobs);
    }
    let pool = builder.build().map_err(|e| Error::InvalidConfig(e.to_string()))?;
    let grid = if cfg.trials == 0 { Vec::new() } else { cfg.cells() };

    let mut cells = Vec::with_capacity(grid.len());
    let mut trials = Vec::new();
    for (index, &(m, n, v)) in grid.iter().enumerate() {
        let cell_trials = pool.install(|| match cfg.id {
            ExperimentId::Table1 => table1_cell(cfg, index, m, n, v),
            _ => (0..cfg.trials)
                .into_par_iter()
                .map(|t| search_trial(cfg, index, m, n, v, t))
                .collect::<Result<Vec<_>, _>>(),
        })?;
        cells.push(aggregate(m, n, v, &cell_trials));
        trials.extend(cell_trials);
    }

    Ok(ExperimentReport {
        experiment: cfg.id.name().to_string(),
        metadata: Metadata {
            seed: cfg.seed,
            prng: PRNG_NAME.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            gen_mode: cfg.gen_mode.to_string(),
            solver: format!("{:?}", cfg.solver).to_lowercase(),
            trials_per_cell: cfg.trials,
            bound: (cfg.id == ExperimentId::Table1).then_some(cfg.bound),
            decimal_digits: DECIMAL_DIGITS,
            stream_rule: match cfg.id {
                ExperimentId::Table1 => "matrix: derive_stream([0,m,n,bits(v),0]); triangle t: derive_stream([1,m,n,bits(v),t])",
                _ => "trial t: derive_stream([0,m,n,bits(v),t])",
            }
            .to_string(),
        },
        cells,
        trials,
    })
}

fn table1_cell(cfg: &ExperimentConfig, cell: usize, m: usize, n: usize, v: f64) -> Result<Vec<Trial>, Error> {
    let x = trial_matrix(cfg, m, n, v, 0)?;
    let fw = fermat_weber_point_with(&x, cfg.solver)?;
    (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            let stream = triangle_stream(m, n, v, t);
            let triangle = gen_random_triangle(n, cfg.bound, cfg.seed, stream)?;
            let start = Instant::now();
            let success = fw_projection_holds(&x, &fw.point, triangle.vertices())?;
            Ok(Trial {
                cell,
                trial: t,
                stream,
                success,
                success_a4: None,
                steps_a1: None,
                steps_a4: None,
                winning_pair: None,
                verify_failures: usize::from(!success),
                exclusivity_violation: false,
                secs_a1: Some(start.elapsed().as_secs_f64()),
                secs_a4: None,
            })
        })
        .collect()
}

enum Run {
    Done(SearchOutcome, f64),
    Violation,
}

fn timed(f: impl FnOnce() -> Result<SearchOutcome, Error>) -> Result<Run, Error> {
    let start = Instant::now();
    match f() {
        Ok(out) => Ok(Run::Done(out, start.elapsed().as_secs_f64())),
        Err(Error::ExclusivityViolated { .. }) => Ok(Run::Violation),
        Err(e) => Err(e),
    }
}

fn failures(out: &SearchOutcome) -> usize {
    out.trace.iter().filter(|p| p.verdict != Verdict::Verified).count()
}

fn search_trial(cfg: &ExperimentConfig, cell: usize, m: usize, n: usize, v: f64, t: usize) -> Result<Trial, Error> {
    let x = trial_matrix(cfg, m, n, v, t)?;
    let a1 = timed(|| search_lex_with(&x, cfg.solver))?;
    let a4 = timed(|| search_priority_with(&x, cfg.solver))?;
    let mut trial = Trial {
        cell,
        trial: t,
        stream: data_stream(m, n, v, t),
        success: false,
        success_a4: None,
        steps_a1: None,
        steps_a4: None,
        winning_pair: None,
        verify_failures: 0,
        exclusivity_violation: false,
        secs_a1: None,
        secs_a4: None,
    };
    match a1 {
        Run::Done(out, secs) => {
            trial.success = out.is_success();
            trial.steps_a1 = Some(out.steps());
            trial.winning_pair = out.winning_pair().map(|p| p.to_string());
            trial.verify_failures += failures(&out);
            trial.secs_a1 = Some(secs);
        }
        Run::Violation => trial.exclusivity_violation = true,
    }
    match a4 {
        Run::Done(out, secs) => {
            trial.success_a4 = Some(out.is_success());
            trial.steps_a4 = Some(out.steps());
            trial.verify_failures += failures(&out);
            trial.secs_a4 = Some(secs);
        }
        Run::Violation => trial.exclusivity_violation = true,
    }
    Ok(trial)
}

fn mean_exact(values: &[usize]) -> Option<Exact> {
    Exact::ratio(values.iter().sum::<usize>() as u64, values.len() as u64)
}

fn mean_f64(values: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, count) = values.fold((0.0, 0usize), |(s, c), v| (s + v, c + 1));
    (count > 0).then(|| sum / count as f64)
}

fn aggregate(m: usize, n: usize, v: f64, trials: &[Trial]) -> Cell {
    let successes = trials.iter().filter(|t| t.success).count();
    let paired: Vec<(usize, usize)> = trials
        .iter()
        .filter(|t| t.success && t.success_a4 == Some(true))
        .filter_map(|t| Some((t.steps_a1?, t.steps_a4?)))
        .collect();
    let a1: Vec<usize> = paired.iter().map(|p| p.0).collect();
    let a4: Vec<usize> = paired.iter().map(|p| p.1).collect();
    Cell {
        m,
        n,
        v,
        trials: trials.len(),
        successes,
        rate: Exact::ratio(successes as u64, trials.len() as u64),
        status_mismatches: trials
            .iter()
            .filter(|t| t.success_a4.is_some_and(|s| s != t.success))
            .count(),
        mean_steps_a1: mean_exact(&a1),
        mean_steps_a4: mean_exact(&a4),
        a1_gt_a4: paired.iter().filter(|(a, b)| a > b).count(),
        a1_lt_a4: paired.iter().filter(|(a, b)| a < b).count(),
        a1_eq_a4: paired.iter().filter(|(a, b)| a == b).count(),
        verify_failures: trials.iter().map(|t| t.verify_failures).sum(),
        exclusivity_violations: trials.iter().filter(|t| t.exclusivity_violation).count(),
        mean_secs_a1: mean_f64(trials.iter().filter_map(|t| t.secs_a1)),
        mean_secs_a4: mean_f64(trials.iter().filter_map(|t| t.secs_a4)),
    }
}

/// Success rate of a cell as an exact scalar, if it ran any trials.
pub fn rate(cell: &Cell) -> Option<Scalar> {
    (cell.trials > 0).then(|| Scalar::from_ratio(cell.successes as i64, cell.trials as i64).expect("nonzero"))
}
