//! Dense two-phase simplex over exact rationals.
//!
//! Pivoting follows Bland's least-index rule in both phases, so the solver
//! terminates on degenerate problems and always returns the same vertex for
//! the same input.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

impl fmt::Display for Sense {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sense::Le => "<=",
            Sense::Ge => ">=",
            Sense::Eq => "=",
        })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum VarBound {
    #[default]
    Free,
    NonNegative,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<Scalar>,
    pub sense: Sense,
    pub rhs: Scalar,
}

impl Constraint {
    pub fn is_satisfied_by(&self, x: &[Scalar]) -> bool {
        let lhs: Scalar = self.coeffs.iter().zip(x).map(|(a, v)| a * v).sum();
        match self.sense {
            Sense::Le => lhs <= self.rhs,
            Sense::Ge => lhs >= self.rhs,
            Sense::Eq => lhs == self.rhs,
        }
    }
}

/// Minimize `objective . z` subject to `constraints`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpProblem {
    pub objective: Vec<Scalar>,
    pub bounds: Vec<VarBound>,
    pub constraints: Vec<Constraint>,
}

impl LpProblem {
    /// A problem over `objective.len()` free variables with no constraints yet.
    pub fn minimize(objective: Vec<Scalar>) -> Self {
        let bounds = vec![VarBound::Free; objective.len()];
        LpProblem {
            objective,
            bounds,
            constraints: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn set_bound(&mut self, var: usize, bound: VarBound) {
        self.bounds[var] = bound;
    }

    pub fn add_constraint(&mut self, coeffs: Vec<Scalar>, sense: Sense, rhs: Scalar) -> Result<()> {
        if coeffs.len() != self.num_vars() {
            return Err(Error::MalformedLp(format!(
                "constraint has {} coefficients, problem has {} variables",
                coeffs.len(),
                self.num_vars()
            )));
        }
        self.constraints.push(Constraint { coeffs, sense, rhs });
        Ok(())
    }

    pub fn is_feasible_point(&self, x: &[Scalar]) -> bool {
        x.len() == self.num_vars()
            && self
                .bounds
                .iter()
                .zip(x)
                .all(|(b, v)| *b == VarBound::Free || !v.is_negative())
            && self.constraints.iter().all(|c| c.is_satisfied_by(x))
    }

    pub fn objective_at(&self, x: &[Scalar]) -> Scalar {
        self.objective.iter().zip(x).map(|(c, v)| c * v).sum()
    }

    fn validate(&self) -> Result<()> {
        if self.bounds.len() != self.num_vars() {
            return Err(Error::MalformedLp(format!(
                "{} bounds for {} variables",
                self.bounds.len(),
                self.num_vars()
            )));
        }
        if let Some((i, c)) = self
            .constraints
            .iter()
            .enumerate()
            .find(|(_, c)| c.coeffs.len() != self.num_vars())
        {
            return Err(Error::MalformedLp(format!(
                "constraint {i} has {} coefficients, problem has {} variables",
                c.coeffs.len(),
                self.num_vars()
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Values of the original variables; empty unless `Optimal`.
    pub primal: Vec<Scalar>,
    /// `objective . primal`; zero unless `Optimal`.
    pub objective: Scalar,
}

impl LpSolution {
    fn without_point(status: LpStatus) -> Self {
        LpSolution {
            status,
            primal: Vec::new(),
            objective: Scalar::zero(),
        }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

/// Solves `p` to an optimal basic solution, or reports infeasibility or
/// unboundedness.
pub fn lp_solve(p: &LpProblem) -> Result<LpSolution> {
    p.validate()?;
    let mut tableau = Tableau::standard_form(p);

    // Phase 1: drive the artificial variables to zero.
    let phase1_costs: Vec<Scalar> = (0..tableau.ncols)
        .map(|j| {
            if tableau.is_artificial(j) {
                Scalar::one()
            } else {
                Scalar::zero()
            }
        })
        .collect();
    tableau.set_costs(&phase1_costs);
    if tableau.run(true) == PhaseEnd::Unbounded {
        return Err(Error::Internal("phase 1 cannot be unbounded".into()));
    }
    if tableau.obj_value.is_positive() {
        return Ok(LpSolution::without_point(LpStatus::Infeasible));
    }
    tableau.expel_artificials();

    // Phase 2 on the real objective, artificial columns barred from entering.
    let mut costs = vec![Scalar::zero(); tableau.ncols];
    for (j, map) in tableau.column_map.iter().enumerate() {
        match *map {
            Column::Positive(v) => costs[j] = p.objective[v].clone(),
            Column::Negative(v) => costs[j] = -&p.objective[v],
            _ => {}
        }
    }
    tableau.set_costs(&costs);
    if tableau.run(false) == PhaseEnd::Unbounded {
        return Ok(LpSolution::without_point(LpStatus::Unbounded));
    }

    let mut primal = vec![Scalar::zero(); p.num_vars()];
    for (row, &col) in tableau.basis.iter().enumerate() {
        match tableau.column_map[col] {
            Column::Positive(v) => primal[v] += &tableau.rhs[row],
            Column::Negative(v) => primal[v] -= &tableau.rhs[row],
            _ => {}
        }
    }
    let objective = p.objective_at(&primal);
    Ok(LpSolution {
        status: LpStatus::Optimal,
        primal,
        objective,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Column {
    Positive(usize),
    Negative(usize),
    Slack,
    Artificial,
}

#[derive(Debug, PartialEq, Eq)]
enum PhaseEnd {
    Optimal,
    Unbounded,
}

struct Tableau {
    ncols: usize,
    column_map: Vec<Column>,
    rows: Vec<Vec<Scalar>>,
    rhs: Vec<Scalar>,
    basis: Vec<usize>,
    reduced: Vec<Scalar>,
    obj_value: Scalar,
}

impl Tableau {
    fn standard_form(p: &LpProblem) -> Self {
        let mut column_map = Vec::new();
        let mut var_cols = Vec::with_capacity(p.num_vars());
        for (v, bound) in p.bounds.iter().enumerate() {
            let pos = column_map.len();
            column_map.push(Column::Positive(v));
            let neg = match bound {
                VarBound::Free => {
                    column_map.push(Column::Negative(v));
                    Some(pos + 1)
                }
                VarBound::NonNegative => None,
            };
            var_cols.push((pos, neg));
        }

        // Flip rows so every right-hand side is nonnegative.
        let normalized: Vec<(Vec<Scalar>, Sense, Scalar)> = p
            .constraints
            .iter()
            .map(|c| {
                if c.rhs.is_negative() {
                    let sense = match c.sense {
                        Sense::Le => Sense::Ge,
                        Sense::Ge => Sense::Le,
                        Sense::Eq => Sense::Eq,
                    };
                    (c.coeffs.iter().map(|a| -a).collect(), sense, -&c.rhs)
                } else {
                    (c.coeffs.clone(), c.sense, c.rhs.clone())
                }
            })
            .collect();

        let mut extra: Vec<(usize, Column, Scalar)> = Vec::new();
        let mut basis = Vec::with_capacity(normalized.len());
        let mut next = column_map.len();
        for (i, (_, sense, _)) in normalized.iter().enumerate() {
            match sense {
                Sense::Le => {
                    extra.push((i, Column::Slack, Scalar::one()));
                    basis.push(next);
                    next += 1;
                }
                Sense::Ge => {
                    extra.push((i, Column::Slack, -Scalar::one()));
                    extra.push((i, Column::Artificial, Scalar::one()));
                    basis.push(next + 1);
                    next += 2;
                }
                Sense::Eq => {
                    extra.push((i, Column::Artificial, Scalar::one()));
                    basis.push(next);
                    next += 1;
                }
            }
        }
        let ncols = next;
        let mut rows = Vec::with_capacity(normalized.len());
        let mut rhs = Vec::with_capacity(normalized.len());
        for (coeffs, _, b) in normalized {
            let mut row = vec![Scalar::zero(); ncols];
            for (v, a) in coeffs.into_iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                let (pos, neg) = var_cols[v];
                if let Some(neg) = neg {
                    row[neg] = -&a;
                }
                row[pos] = a;
            }
            rows.push(row);
            rhs.push(b);
        }
        let mut col = column_map.len();
        for (i, kind, coeff) in extra {
            rows[i][col] = coeff;
            column_map.push(kind);
            col += 1;
        }
        Tableau {
            ncols,
            column_map,
            rows,
            rhs,
            basis,
            reduced: vec![Scalar::zero(); ncols],
            obj_value: Scalar::zero(),
        }
    }

    fn is_artificial(&self, col: usize) -> bool {
        self.column_map[col] == Column::Artificial
    }

    /// Installs a cost vector and prices out the current basis.
    fn set_costs(&mut self, costs: &[Scalar]) {
        self.reduced = costs.to_vec();
        self.obj_value = Scalar::zero();
        for (row, &b) in self.basis.iter().enumerate() {
            let cb = &costs[b];
            if cb.is_zero() {
                continue;
            }
            for (j, a) in self.rows[row].iter().enumerate() {
                if !a.is_zero() {
                    self.reduced[j] -= &(cb * a);
                }
            }
            self.obj_value += cb * &self.rhs[row];
        }
    }

    fn run(&mut self, allow_artificial: bool) -> PhaseEnd {
        loop {
            let entering = (0..self.ncols).find(|&j| {
                self.reduced[j].is_negative() && (allow_artificial || !self.is_artificial(j))
            });
            let Some(col) = entering else {
                return PhaseEnd::Optimal;
            };
            let mut leaving: Option<(usize, Scalar)> = None;
            for (row, r) in self.rows.iter().enumerate() {
                let a = &r[col];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[row] / a;
                let better = match &leaving {
                    None => true,
                    Some((best_row, best)) => {
                        ratio < *best || (ratio == *best && self.basis[row] < self.basis[*best_row])
                    }
                };
                if better {
                    leaving = Some((row, ratio));
                }
            }
            let Some((row, _)) = leaving else {
                return PhaseEnd::Unbounded;
            };
            self.pivot(row, col);
        }
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let pivot = self.rows[row][col].clone();
        if pivot != Scalar::one() {
            for a in self.rows[row].iter_mut() {
                if !a.is_zero() {
                    *a = &*a / &pivot;
                }
            }
            self.rhs[row] = &self.rhs[row] / &pivot;
        }
        let pivot_row = std::mem::take(&mut self.rows[row]);
        let nonzero: Vec<usize> = (0..self.ncols).filter(|&j| !pivot_row[j].is_zero()).collect();
        let pivot_rhs = self.rhs[row].clone();
        for (i, r) in self.rows.iter_mut().enumerate() {
            if i == row || r[col].is_zero() {
                continue;
            }
            let factor = r[col].clone();
            for &j in &nonzero {
                r[j] -= &(&factor * &pivot_row[j]);
            }
            self.rhs[i] -= &(&factor * &pivot_rhs);
        }
        let factor = self.reduced[col].clone();
        if !factor.is_zero() {
            for &j in &nonzero {
                self.reduced[j] -= &(&factor * &pivot_row[j]);
            }
            self.obj_value += &(&factor * &pivot_rhs);
        }
        self.rows[row] = pivot_row;
        self.basis[row] = col;
    }

    /// After a successful phase 1 every artificial in the basis sits at zero.
    /// Pivot each one out on any structural column, or drop its row when the
    /// row has no structural entries left (a redundant constraint).
    fn expel_artificials(&mut self) {
        let mut row = 0;
        while row < self.rows.len() {
            if !self.is_artificial(self.basis[row]) {
                row += 1;
                continue;
            }
            let replacement = (0..self.ncols)
                .find(|&j| !self.is_artificial(j) && !self.rows[row][j].is_zero());
            match replacement {
                Some(col) => {
                    self.pivot(row, col);
                    row += 1;
                }
                None => {
                    self.rows.remove(row);
                    self.rhs.remove(row);
                    self.basis.remove(row);
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: i64) -> Scalar {
        Scalar::from(v)
    }

    fn sv(v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|&x| s(x)).collect()
    }

    #[test]
    fn max_of_two_lower_bounds() {
        let mut p = LpProblem::minimize(sv(&[1]));
        p.add_constraint(sv(&[1]), Sense::Ge, s(1)).unwrap();
        p.add_constraint(sv(&[1]), Sense::Ge, s(-1)).unwrap();
        let sol = lp_solve(&p).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert_eq!(sol.primal, sv(&[1]));
        assert_eq!(sol.objective, s(1));
    }

    #[test]
    fn classic_two_variable_problem() {
        // max 3x + 5y st x <= 4, 2y <= 12, 3x + 2y <= 18, x, y >= 0 -> (2, 6), 36
        let mut p = LpProblem::minimize(sv(&[-3, -5]));
        p.set_bound(0, VarBound::NonNegative);
        p.set_bound(1, VarBound::NonNegative);
        p.add_constraint(sv(&[1, 0]), Sense::Le, s(4)).unwrap();
        p.add_constraint(sv(&[0, 2]), Sense::Le, s(12)).unwrap();
        p.add_constraint(sv(&[3, 2]), Sense::Le, s(18)).unwrap();
        let sol = lp_solve(&p).unwrap();
        assert_eq!(sol.primal, sv(&[2, 6]));
        assert_eq!(sol.objective, s(-36));
    }

    #[test]
    fn equality_and_fractional_vertex() {
        // min x + y st x + 3y = 2, x - y >= 0 -> x = y = 1/2
        let mut p = LpProblem::minimize(sv(&[1, 1]));
        p.add_constraint(sv(&[1, 3]), Sense::Eq, s(2)).unwrap();
        p.add_constraint(sv(&[1, -1]), Sense::Ge, s(0)).unwrap();
        p.add_constraint(sv(&[0, 1]), Sense::Ge, s(0)).unwrap();
        let sol = lp_solve(&p).unwrap();
        let half = Scalar::from_ratio(1, 2).unwrap();
        assert_eq!(sol.primal, vec![half.clone(), half]);
        assert_eq!(sol.objective, s(1));
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut p = LpProblem::minimize(sv(&[1]));
        p.add_constraint(sv(&[1]), Sense::Ge, s(2)).unwrap();
        p.add_constraint(sv(&[1]), Sense::Le, s(1)).unwrap();
        assert_eq!(lp_solve(&p).unwrap().status, LpStatus::Infeasible);

        let mut p = LpProblem::minimize(sv(&[-1, 0]));
        p.add_constraint(sv(&[1, -1]), Sense::Le, s(1)).unwrap();
        assert_eq!(lp_solve(&p).unwrap().status, LpStatus::Unbounded);
    }

    #[test]
    fn redundant_equalities_are_dropped() {
        let mut p = LpProblem::minimize(sv(&[1, 2]));
        p.set_bound(0, VarBound::NonNegative);
        p.set_bound(1, VarBound::NonNegative);
        p.add_constraint(sv(&[1, 1]), Sense::Eq, s(3)).unwrap();
        p.add_constraint(sv(&[2, 2]), Sense::Eq, s(6)).unwrap();
        let sol = lp_solve(&p).unwrap();
        assert_eq!(sol.primal, sv(&[3, 0]));
    }

    #[test]
    fn degenerate_problem_terminates() {
        // Beale's cycling example for the textbook rule; Bland must finish.
        let q = |n: i64, d: i64| Scalar::from_ratio(n, d).unwrap();
        let mut p = LpProblem::minimize(vec![q(-3, 4), s(150), q(-1, 50), s(6)]);
        for v in 0..4 {
            p.set_bound(v, VarBound::NonNegative);
        }
        p.add_constraint(vec![q(1, 4), s(-60), q(-1, 25), s(9)], Sense::Le, s(0)).unwrap();
        p.add_constraint(vec![q(1, 2), s(-90), q(-1, 50), s(3)], Sense::Le, s(0)).unwrap();
        p.add_constraint(vec![s(0), s(0), s(1), s(0)], Sense::Le, s(1)).unwrap();
        let sol = lp_solve(&p).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert_eq!(sol.objective, q(-1, 20));
        assert!(p.is_feasible_point(&sol.primal));
    }

    #[test]
    fn malformed_rows_are_rejected() {
        let mut p = LpProblem::minimize(sv(&[1, 1]));
        assert!(p.add_constraint(sv(&[1]), Sense::Le, s(0)).is_err());
        p.constraints.push(Constraint {
            coeffs: sv(&[1, 2, 3]),
            sense: Sense::Le,
            rhs: s(0),
        });
        assert!(matches!(lp_solve(&p), Err(Error::MalformedLp(_))));
    }
}
