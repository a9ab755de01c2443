//! Fermat-Weber points through the dual transportation network.
//!
//! Write the Fermat-Weber objective as `sum_i (a_i - b_i)` with
//! `a_i >= y_k - x_ik >= b_i` for every coordinate `k`. Its dual is a flow
//! problem on three layers of nodes: a source node per row (supply 1), a node
//! per coordinate, and a sink node per row (demand 1). Arc `S_i -> K_k` costs
//! `x_ik`, arc `K_k -> T_j` costs `-x_jk`. The minimum cost is minus the
//! optimal objective, and shortest-path potentials on the coordinate nodes of
//! the optimal residual network are an optimal `y`.
//!
//! All data is scaled by the common denominator so the flow runs on
//! integers; `i128` when the magnitudes allow it, `BigInt` otherwise.

use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::tropical::DataMatrix;

/// Optimal `y` (not normalized, length `n`) and the optimal objective.
pub(crate) fn solve(x: &DataMatrix) -> Result<(Vec<Scalar>, Scalar)> {
    let denom = x
        .rows()
        .iter()
        .flat_map(|r| r.coords())
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let scaled: Vec<Vec<BigInt>> = x
        .rows()
        .iter()
        .map(|r| {
            r.coords()
                .iter()
                .map(|c| c.numer() * (&denom / c.denom()))
                .collect()
        })
        .collect();
    let max_abs = scaled
        .iter()
        .flatten()
        .map(|v| v.abs())
        .max()
        .unwrap_or_default();
    let nodes = 2 * x.nrows() + x.ncols() + 2;
    // Potentials and path costs stay within a few multiples of
    // `nodes * max_abs`; leave ample headroom below i128::MAX.
    let fits = (&max_abs * BigInt::from(8 * nodes as u64))
        .to_i128()
        .is_some_and(|v| v < (1i128 << 120));
    let (y, cost) = if fits {
        let costs: Vec<Vec<i128>> = scaled
            .iter()
            .map(|r| r.iter().map(|v| v.to_i128().expect("checked")).collect())
            .collect();
        let (y, cost) = Network::build(&costs).run()?;
        (y.into_iter().map(BigInt::from).collect::<Vec<_>>(), BigInt::from(cost))
    } else {
        Network::build(&scaled).run()?
    };
    let unscale = |v: BigInt| Scalar::from_bigints(v, denom.clone());
    let y = y.into_iter().map(unscale).collect::<Result<Vec<_>>>()?;
    let objective = unscale(-cost)?;
    Ok((y, objective))
}

trait Cost: Clone + Ord + Zero + Add<Output = Self> + Sub<Output = Self> + Neg<Output = Self> {}

impl<T> Cost for T where T: Clone + Ord + Zero + Add<Output = T> + Sub<Output = T> + Neg<Output = T> {}

struct Arc<T> {
    to: usize,
    cap: usize,
    cost: T,
    rev: usize,
}

struct Network<T> {
    rows: usize,
    cols: usize,
    adj: Vec<Vec<Arc<T>>>,
    potential: Vec<T>,
}

impl<T: Cost> Network<T> {
    fn source_node(&self) -> usize {
        2 * self.rows + self.cols
    }

    fn sink_node(&self) -> usize {
        2 * self.rows + self.cols + 1
    }

    fn coord_node(&self, k: usize) -> usize {
        self.rows + k
    }

    fn build(x: &[Vec<T>]) -> Self {
        let rows = x.len();
        let cols = x[0].len();
        let mut net = Network {
            rows,
            cols,
            adj: (0..2 * rows + cols + 2).map(|_| Vec::new()).collect(),
            potential: Vec::new(),
        };
        let (s, t) = (net.source_node(), net.sink_node());
        for i in 0..rows {
            net.add_arc(s, i, 1, T::zero());
        }
        for (i, row) in x.iter().enumerate() {
            for (k, v) in row.iter().enumerate() {
                net.add_arc(i, rows + k, rows, v.clone());
            }
        }
        for k in 0..cols {
            for (j, row) in x.iter().enumerate() {
                net.add_arc(rows + k, rows + cols + j, rows, -row[k].clone());
            }
        }
        for j in 0..rows {
            net.add_arc(rows + cols + j, t, 1, T::zero());
        }

        // The network is layered, so initial potentials are exact shortest
        // distances computed layer by layer.
        let mut pot = vec![T::zero(); 2 * rows + cols + 2];
        for k in 0..cols {
            pot[rows + k] = x.iter().map(|r| r[k].clone()).min().expect("rows > 0");
        }
        for (j, row) in x.iter().enumerate() {
            pot[rows + cols + j] = (0..cols)
                .map(|k| pot[rows + k].clone() - row[k].clone())
                .min()
                .expect("cols > 0");
        }
        pot[t] = pot[rows + cols..rows + cols + rows]
            .iter()
            .min()
            .expect("rows > 0")
            .clone();
        net.potential = pot;
        net
    }

    fn add_arc(&mut self, from: usize, to: usize, cap: usize, cost: T) {
        let rev_from = self.adj[to].len();
        let rev_to = self.adj[from].len();
        self.adj[from].push(Arc {
            to,
            cap,
            cost: cost.clone(),
            rev: rev_from,
        });
        self.adj[to].push(Arc {
            to: from,
            cap: 0,
            cost: -cost,
            rev: rev_to,
        });
    }

    /// Successive shortest paths, one unit per row, then optimal potentials.
    fn run(mut self) -> Result<(Vec<T>, T)> {
        let (s, t) = (self.source_node(), self.sink_node());
        let nodes = self.adj.len();
        let mut total = T::zero();
        for _ in 0..self.rows {
            let mut dist: Vec<Option<T>> = vec![None; nodes];
            let mut prev: Vec<Option<(usize, usize)>> = vec![None; nodes];
            let mut done = vec![false; nodes];
            dist[s] = Some(T::zero());
            loop {
                let mut best: Option<usize> = None;
                for v in 0..nodes {
                    if done[v] {
                        continue;
                    }
                    if let Some(d) = &dist[v] {
                        if best.map_or(true, |b| d < dist[b].as_ref().expect("set")) {
                            best = Some(v);
                        }
                    }
                }
                let Some(u) = best else { break };
                done[u] = true;
                let du = dist[u].clone().expect("set");
                for (e, arc) in self.adj[u].iter().enumerate() {
                    if arc.cap == 0 || done[arc.to] {
                        continue;
                    }
                    let reduced = arc.cost.clone() + self.potential[u].clone()
                        - self.potential[arc.to].clone();
                    debug_assert!(reduced >= T::zero(), "negative reduced cost");
                    let cand = du.clone() + reduced;
                    if dist[arc.to].as_ref().map_or(true, |d| cand < *d) {
                        dist[arc.to] = Some(cand);
                        prev[arc.to] = Some((u, e));
                    }
                }
            }
            if dist[t].is_none() {
                return Err(Error::Internal("flow network lost its augmenting path".into()));
            }
            for v in 0..nodes {
                if let Some(d) = &dist[v] {
                    self.potential[v] = self.potential[v].clone() + d.clone();
                }
            }
            let mut v = t;
            while let Some((u, e)) = prev[v] {
                let rev = self.adj[u][e].rev;
                total = total + self.adj[u][e].cost.clone();
                self.adj[u][e].cap -= 1;
                self.adj[v][rev].cap += 1;
                v = u;
            }
        }

        // Bellman-Ford on the residual network of the row and coordinate
        // nodes from a virtual root joined to every node at cost zero.
        let inner = 2 * self.rows + self.cols;
        let mut dist = vec![T::zero(); inner];
        let mut rounds = 0;
        loop {
            let mut changed = false;
            for u in 0..inner {
                for arc in &self.adj[u] {
                    if arc.cap == 0 || arc.to >= inner {
                        continue;
                    }
                    let cand = dist[u].clone() + arc.cost.clone();
                    if cand < dist[arc.to] {
                        dist[arc.to] = cand;
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
            rounds += 1;
            if rounds > inner {
                return Err(Error::Internal("negative cycle in optimal residual network".into()));
            }
        }
        let y = (0..self.cols)
            .map(|k| dist[self.coord_node(k)].clone())
            .collect();
        Ok((y, total))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tropical::{distance_sum, TropicalPoint};

    #[test]
    fn small_example_objective_and_point() {
        let x = DataMatrix::from_ints(&[&[0, 1, 5], &[0, 2, 4], &[0, 3, 1], &[0, 4, 3]]).unwrap();
        let (y, obj) = solve(&x).unwrap();
        let y = TropicalPoint::normalize(y).unwrap();
        assert_eq!(distance_sum(&y, &x).unwrap(), obj);
        assert_eq!(obj, Scalar::from(9));
    }

    #[test]
    fn single_row_is_its_own_optimum() {
        let x = DataMatrix::from_ints(&[&[0, -3, 8, 2]]).unwrap();
        let (y, obj) = solve(&x).unwrap();
        assert_eq!(TropicalPoint::normalize(y).unwrap(), *x.row(0));
        assert!(obj.is_zero());
    }

    #[test]
    fn huge_entries_take_the_bigint_path() {
        let big = "123456789012345678901234567890";
        let rows = vec![
            TropicalPoint::parse(&["0", big, "1"]).unwrap(),
            TropicalPoint::parse(&["0", "5", big]).unwrap(),
            TropicalPoint::parse(&["0", "-7", "1/3"]).unwrap(),
        ];
        let x = DataMatrix::new(rows).unwrap();
        let (y, obj) = solve(&x).unwrap();
        let y = TropicalPoint::normalize(y).unwrap();
        assert_eq!(distance_sum(&y, &x).unwrap(), obj);
    }
}
