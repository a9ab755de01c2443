//! Tropical Fermat-Weber points of a data matrix.
//!
//! A Fermat-Weber point minimizes the sum of tropical distances to the rows.
//! The minimizers form a polytope, so only the optimal objective is unique;
//! the point returned is whichever optimum the chosen solver lands on, and it
//! is the same on every call.

use crate::error::{Error, Result};
use crate::linprog::{lp_solve, LpProblem, LpStatus, Sense};
use crate::network;
use crate::scalar::Scalar;
use crate::tropical::{distance_sum, DataMatrix, TropicalPoint};

/// How the Fermat-Weber optimum is computed. Both routes are exact.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum FwSolver {
    /// Min-cost flow on the dual transportation network.
    #[default]
    Network,
    /// Dense Bland simplex on the pairwise-constraint program built by
    /// [`fw_lp_build`].
    Simplex,
}

impl std::str::FromStr for FwSolver {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "network" => Ok(FwSolver::Network),
            "simplex" => Ok(FwSolver::Simplex),
            other => Err(Error::Parse(format!("unknown solver `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FwResult {
    /// An optimal point, first coordinate zero.
    pub point: TropicalPoint,
    /// The minimal distance sum; equals `distance_sum(point, X)`.
    pub objective: Scalar,
}

/// The linear program whose optimal `y` are the Fermat-Weber points of `x`.
///
/// Variables are `gamma_1..gamma_m` followed by `y_2..y_n` (`y_1` is pinned to
/// zero and left out). For each row `i` and each pair `k < l` there are two
/// rows, `gamma_i >= +(y_k - x_ik - y_l + x_il)` and
/// `gamma_i >= -(y_k - x_ik - y_l + x_il)`, in that order. The objective is
/// `sum gamma_i`.
pub fn fw_lp_build(x: &DataMatrix) -> LpProblem {
    let (m, n) = (x.nrows(), x.ncols());
    let nvars = m + n - 1;
    let mut objective = vec![Scalar::zero(); nvars];
    for c in objective.iter_mut().take(m) {
        *c = Scalar::one();
    }
    let mut lp = LpProblem::minimize(objective);
    let y_var = |k: usize| if k == 1 { None } else { Some(m + k - 2) };
    for (i, row) in x.rows().iter().enumerate() {
        for k in 1..=n {
            for l in k + 1..=n {
                // gamma_i - y_k + y_l >= x_il - x_ik
                // gamma_i + y_k - y_l >= x_ik - x_il
                let diff = row.coord(l) - row.coord(k);
                for sign in [1i64, -1] {
                    let mut coeffs = vec![Scalar::zero(); nvars];
                    coeffs[i] = Scalar::one();
                    if let Some(v) = y_var(k) {
                        coeffs[v] = Scalar::from(-sign);
                    }
                    if let Some(v) = y_var(l) {
                        coeffs[v] = Scalar::from(sign);
                    }
                    let rhs = if sign == 1 { diff.clone() } else { -&diff };
                    lp.add_constraint(coeffs, Sense::Ge, rhs)
                        .expect("row width matches by construction");
                }
            }
        }
    }
    lp
}

pub fn fermat_weber_point(x: &DataMatrix) -> Result<FwResult> {
    fermat_weber_point_with(x, FwSolver::default())
}

pub fn fermat_weber_point_with(x: &DataMatrix, solver: FwSolver) -> Result<FwResult> {
    let (raw, objective) = match solver {
        FwSolver::Network => network::solve(x)?,
        FwSolver::Simplex => {
            let m = x.nrows();
            let sol = lp_solve(&fw_lp_build(x))?;
            match sol.status {
                LpStatus::Optimal => {}
                LpStatus::Infeasible => return Err(Error::LpStatus("infeasible")),
                LpStatus::Unbounded => return Err(Error::LpStatus("unbounded")),
            }
            let mut y = Vec::with_capacity(x.ncols());
            y.push(Scalar::zero());
            y.extend(sol.primal[m..].iter().cloned());
            (y, sol.objective)
        }
    };
    let point = TropicalPoint::normalize(raw)?;
    let attained = distance_sum(&point, x)?;
    if attained != objective {
        return Err(Error::Internal(format!(
            "{solver:?} solver returned a point with distance sum {attained}, objective {objective}"
        )));
    }
    Ok(FwResult { point, objective })
}

/// Outcome of testing whether the last row of a matrix is one of its
/// Fermat-Weber points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verification {
    pub holds: bool,
    /// Distance sum from the last row to all rows (the last included).
    pub last_row_sum: Scalar,
    /// The computed Fermat-Weber point the last row was compared against.
    pub fw: FwResult,
}

pub fn verify_fw_point(x: &DataMatrix) -> Result<bool> {
    Ok(verify_fw_point_detailed(x, FwSolver::default())?.holds)
}

pub fn verify_fw_point_detailed(x: &DataMatrix, solver: FwSolver) -> Result<Verification> {
    if x.nrows() < 2 {
        return Err(Error::Empty("rows before the last one"));
    }
    let fw = fermat_weber_point_with(x, solver)?;
    let last_row_sum = distance_sum(x.last_row(), x)?;
    Ok(Verification {
        holds: last_row_sum == fw.objective,
        last_row_sum,
        fw,
    })
}

/// `x` with one of its Fermat-Weber points appended as the last row.
pub fn augment_with_fw(x: &DataMatrix) -> Result<DataMatrix> {
    augment_with_fw_using(x, FwSolver::default()).map(|(aug, _)| aug)
}

pub fn augment_with_fw_using(x: &DataMatrix, solver: FwSolver) -> Result<(DataMatrix, FwResult)> {
    let fw = fermat_weber_point_with(x, solver)?;
    Ok((x.with_row(fw.point.clone())?, fw))
}
