//! Experiment reports and their JSON / CSV forms.
//!
//! Every ratio is stored twice: as an exact fraction string and as a decimal
//! approximation. Timings are wall-clock seconds and are the only fields that
//! differ between two runs with the same seed.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use tropfw_core::Scalar;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Exact {
    pub exact: String,
    pub approx: f64,
}

impl Exact {
    pub fn ratio(num: u64, den: u64) -> Option<Self> {
        if den == 0 {
            return None;
        }
        let s = Scalar::from_ratio(num as i64, den as i64).ok()?;
        Some(Exact::from(&s))
    }
}

impl From<&Scalar> for Exact {
    fn from(s: &Scalar) -> Self {
        Exact {
            exact: s.to_string(),
            approx: s.to_f64(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub seed: u64,
    pub prng: String,
    pub version: String,
    pub gen_mode: String,
    pub solver: String,
    pub trials_per_cell: usize,
    /// Coordinate bound of the random triangles (table1 only).
    pub bound: Option<f64>,
    pub decimal_digits: u32,
    /// How each trial's stream is derived from the seed.
    pub stream_rule: String,
}

/// Aggregates for one `(m, n, v)` grid cell.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub m: usize,
    pub n: usize,
    pub v: f64,
    pub trials: usize,
    pub successes: usize,
    pub rate: Option<Exact>,
    /// Trials where the two searches disagreed on success.
    pub status_mismatches: usize,
    pub mean_steps_a1: Option<Exact>,
    pub mean_steps_a4: Option<Exact>,
    pub a1_gt_a4: usize,
    pub a1_lt_a4: usize,
    pub a1_eq_a4: usize,
    /// Failed verifications seen across both searches.
    pub verify_failures: usize,
    /// Failed verifications whose image matched in both kept coordinates.
    pub exclusivity_violations: usize,
    pub mean_secs_a1: Option<f64>,
    pub mean_secs_a4: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trial {
    pub cell: usize,
    pub trial: usize,
    /// Stream passed to the generator; with the seed it replays the trial.
    pub stream: u64,
    pub success: bool,
    pub success_a4: Option<bool>,
    pub steps_a1: Option<usize>,
    pub steps_a4: Option<usize>,
    pub winning_pair: Option<String>,
    pub verify_failures: usize,
    pub exclusivity_violation: bool,
    pub secs_a1: Option<f64>,
    pub secs_a4: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub experiment: String,
    pub metadata: Metadata,
    pub cells: Vec<Cell>,
    pub trials: Vec<Trial>,
}

impl ExperimentReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn cells_csv(&self) -> csv::Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record([
            "m",
            "n",
            "v",
            "trials",
            "successes",
            "rate",
            "rate_decimal",
            "status_mismatches",
            "mean_steps_a1",
            "mean_steps_a4",
            "a1_gt_a4",
            "a1_lt_a4",
            "a1_eq_a4",
            "verify_failures",
            "exclusivity_violations",
            "mean_secs_a1",
            "mean_secs_a4",
        ])?;
        let exact = |e: &Option<Exact>| e.as_ref().map_or(String::new(), |e| e.exact.clone());
        let approx = |e: &Option<Exact>| e.as_ref().map_or(String::new(), |e| e.approx.to_string());
        let secs = |s: Option<f64>| s.map_or(String::new(), |s| format!("{s:.6}"));
        for c in &self.cells {
            w.write_record([
                c.m.to_string(),
                c.n.to_string(),
                c.v.to_string(),
                c.trials.to_string(),
                c.successes.to_string(),
                exact(&c.rate),
                approx(&c.rate),
                c.status_mismatches.to_string(),
                exact(&c.mean_steps_a1),
                exact(&c.mean_steps_a4),
                c.a1_gt_a4.to_string(),
                c.a1_lt_a4.to_string(),
                c.a1_eq_a4.to_string(),
                c.verify_failures.to_string(),
                c.exclusivity_violations.to_string(),
                secs(c.mean_secs_a1),
                secs(c.mean_secs_a4),
            ])?;
        }
        Ok(String::from_utf8(w.into_inner().expect("in-memory writer")).expect("csv is utf-8"))
    }

    pub fn trials_csv(&self) -> csv::Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record([
            "cell",
            "m",
            "n",
            "v",
            "trial",
            "stream",
            "success",
            "success_a4",
            "steps_a1",
            "steps_a4",
            "winning_pair",
            "verify_failures",
            "exclusivity_violation",
            "secs_a1",
            "secs_a4",
        ])?;
        let opt = |o: Option<String>| o.unwrap_or_default();
        for t in &self.trials {
            let c = &self.cells[t.cell];
            w.write_record([
                t.cell.to_string(),
                c.m.to_string(),
                c.n.to_string(),
                c.v.to_string(),
                t.trial.to_string(),
                t.stream.to_string(),
                t.success.to_string(),
                opt(t.success_a4.map(|b| b.to_string())),
                opt(t.steps_a1.map(|s| s.to_string())),
                opt(t.steps_a4.map(|s| s.to_string())),
                opt(t.winning_pair.clone()),
                t.verify_failures.to_string(),
                t.exclusivity_violation.to_string(),
                opt(t.secs_a1.map(|s| format!("{s:.6}"))),
                opt(t.secs_a4.map(|s| format!("{s:.6}"))),
            ])?;
        }
        Ok(String::from_utf8(w.into_inner().expect("in-memory writer")).expect("csv is utf-8"))
    }

    /// Writes `<id>.json`, `<id>_cells.csv` and `<id>_trials.csv` under `dir`.
    pub fn write_to(&self, dir: &Path) -> std::io::Result<Vec<PathBuf>> {
        fs::create_dir_all(dir)?;
        let to_io = |e: csv::Error| std::io::Error::other(e);
        let files = [
            (format!("{}.json", self.experiment), self.to_json()),
            (format!("{}_cells.csv", self.experiment), self.cells_csv().map_err(to_io)?),
            (format!("{}_trials.csv", self.experiment), self.trials_csv().map_err(to_io)?),
        ];
        let mut written = Vec::new();
        for (name, body) in files {
            let path = dir.join(name);
            fs::write(&path, body)?;
            written.push(path);
        }
        Ok(written)
    }
}
