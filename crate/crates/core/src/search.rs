//! Searching column pairs for a triangle on which the projection of a
//! Fermat-Weber point stays a Fermat-Weber point of the projected data.
//!
//! Both searches first append a Fermat-Weber point `F` of the input to get
//! the augmented matrix. For a pair `(d1, d2)` they build the projection
//! matrix of the augmented matrix and test whether its last row (the image of
//! `F`) attains the Fermat-Weber objective. The first pair that passes yields
//! the triangle from [`compute_triangle`].
//!
//! [`search_lex`] visits pairs in lexicographic order. [`search_priority`]
//! walks the same order but, after a failed pair whose image agrees with the
//! computed Fermat-Weber point in exactly one kept coordinate, queues that
//! column and explores the pairs containing it first.

use std::collections::{HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::fermat_weber::{augment_with_fw_using, verify_fw_point_detailed, FwResult, FwSolver};
use crate::projection::{compute_triangle, projection_matrix, PairIndex};
use crate::tropical::{DataMatrix, TropicalTriangle};

/// `[(2,3), (2,4), ..., (2,n), (3,4), ..., (n-1,n)]`.
pub fn pair_order_lex(n: usize) -> Result<Vec<PairIndex>> {
    if n < 3 {
        return Err(Error::DimensionTooSmall(n));
    }
    let mut pairs = Vec::with_capacity((n - 1) * (n - 2) / 2);
    for d1 in 2..n {
        for d2 in d1 + 1..=n {
            pairs.push(PairIndex::new(d1, d2, n)?);
        }
    }
    Ok(pairs)
}

/// The pairs of [`pair_order_lex`] that contain column `omega`, in that order.
pub fn pairs_containing(omega: usize, n: usize) -> Result<Vec<PairIndex>> {
    if n < 3 {
        return Err(Error::DimensionTooSmall(n));
    }
    if !(2..=n).contains(&omega) {
        return Err(Error::InvalidIndex { omega, n });
    }
    Ok(pair_order_lex(n)?
        .into_iter()
        .filter(|p| p.contains(omega))
        .collect())
}

/// What one visited pair revealed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    /// The image of the Fermat-Weber point is a Fermat-Weber point of the
    /// projection matrix.
    Verified,
    /// Not verified; the image agrees with the computed Fermat-Weber point in
    /// column `d1` only.
    FirstMatches,
    /// Not verified; agreement in column `d2` only.
    SecondMatches,
    /// Not verified; agreement in neither kept column.
    NoMatch,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Probe {
    pub pair: PairIndex,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchStatus {
    Success {
        pair: PairIndex,
        triangle: TropicalTriangle,
    },
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOutcome {
    pub status: SearchStatus,
    /// Every pair for which a projection matrix was built and checked, in
    /// visiting order.
    pub trace: Vec<Probe>,
    /// The Fermat-Weber point of the input that was appended.
    pub fw: FwResult,
    /// The input with `fw.point` appended.
    pub augmented: DataMatrix,
}

impl SearchOutcome {
    pub fn is_success(&self) -> bool {
        matches!(self.status, SearchStatus::Success { .. })
    }

    pub fn steps(&self) -> usize {
        self.trace.len()
    }

    pub fn visited(&self) -> Vec<PairIndex> {
        self.trace.iter().map(|p| p.pair).collect()
    }

    pub fn winning_pair(&self) -> Option<PairIndex> {
        match &self.status {
            SearchStatus::Success { pair, .. } => Some(*pair),
            SearchStatus::Fail => None,
        }
    }

    pub fn triangle(&self) -> Option<&TropicalTriangle> {
        match &self.status {
            SearchStatus::Success { triangle, .. } => Some(triangle),
            SearchStatus::Fail => None,
        }
    }
}

/// Checks one pair of the augmented matrix.
///
/// A failed check whose image matches the computed Fermat-Weber point in both
/// kept columns is impossible in exact arithmetic, since such an image would
/// itself attain the optimum; it is reported as
/// [`Error::ExclusivityViolated`].
pub fn probe_pair(augmented: &DataMatrix, pair: PairIndex, solver: FwSolver) -> Result<Probe> {
    let projected = projection_matrix(augmented, pair)?;
    let check = verify_fw_point_detailed(&projected, solver)?;
    let verdict = if check.holds {
        Verdict::Verified
    } else {
        let r = projected.last_row();
        let f = &check.fw.point;
        let first = r.coord(pair.d1()) == f.coord(pair.d1());
        let second = r.coord(pair.d2()) == f.coord(pair.d2());
        match (first, second) {
            (true, true) => return Err(Error::ExclusivityViolated { pair }),
            (true, false) => Verdict::FirstMatches,
            (false, true) => Verdict::SecondMatches,
            (false, false) => Verdict::NoMatch,
        }
    };
    Ok(Probe { pair, verdict })
}

impl Probe {
    /// The single column whose match promotes it into the priority queue.
    fn matched_column(&self) -> Option<usize> {
        match self.verdict {
            Verdict::FirstMatches => Some(self.pair.d1()),
            Verdict::SecondMatches => Some(self.pair.d2()),
            Verdict::Verified | Verdict::NoMatch => None,
        }
    }
}

fn prepare(x: &DataMatrix, solver: FwSolver) -> Result<(DataMatrix, FwResult)> {
    if x.ncols() < 3 {
        return Err(Error::DimensionTooSmall(x.ncols()));
    }
    augment_with_fw_using(x, solver)
}

fn success(augmented: DataMatrix, fw: FwResult, trace: Vec<Probe>, pair: PairIndex) -> Result<SearchOutcome> {
    let triangle = compute_triangle(&augmented, pair)?;
    Ok(SearchOutcome {
        status: SearchStatus::Success { pair, triangle },
        trace,
        fw,
        augmented,
    })
}

pub fn search_lex(x: &DataMatrix) -> Result<SearchOutcome> {
    search_lex_with(x, FwSolver::default())
}

pub fn search_lex_with(x: &DataMatrix, solver: FwSolver) -> Result<SearchOutcome> {
    let (augmented, fw) = prepare(x, solver)?;
    let mut trace = Vec::new();
    for pair in pair_order_lex(x.ncols())? {
        let probe = probe_pair(&augmented, pair, solver)?;
        let verified = probe.verdict == Verdict::Verified;
        trace.push(probe);
        if verified {
            return success(augmented, fw, trace, pair);
        }
    }
    Ok(SearchOutcome {
        status: SearchStatus::Fail,
        trace,
        fw,
        augmented,
    })
}

pub fn search_priority(x: &DataMatrix) -> Result<SearchOutcome> {
    search_priority_with(x, FwSolver::default())
}

pub fn search_priority_with(x: &DataMatrix, solver: FwSolver) -> Result<SearchOutcome> {
    let (augmented, fw) = prepare(x, solver)?;
    let n = x.ncols();
    let order = pair_order_lex(n)?;
    let total = order.len();
    let mut seen: HashSet<PairIndex> = HashSet::with_capacity(total);
    let mut queue: VecDeque<usize> = VecDeque::new();
    let mut trace = Vec::with_capacity(total);

    // `cursor` is the paused position in the lexicographic walk; the queue
    // phase never rewinds it.
    let mut cursor = 0;
    while seen.len() < total && cursor < total {
        let pair = order[cursor];
        cursor += 1;
        if !seen.insert(pair) {
            continue;
        }
        let probe = probe_pair(&augmented, pair, solver)?;
        trace.push(probe.clone());
        if probe.verdict == Verdict::Verified {
            return success(augmented, fw, trace, pair);
        }
        let Some(column) = probe.matched_column() else {
            continue;
        };
        queue.push_back(column);
        while let Some(&omega) = queue.front() {
            for candidate in pairs_containing(omega, n)? {
                if !seen.insert(candidate) {
                    continue;
                }
                let probe = probe_pair(&augmented, candidate, solver)?;
                trace.push(probe.clone());
                if probe.verdict == Verdict::Verified {
                    return success(augmented, fw, trace, candidate);
                }
                if let Some(j) = probe.matched_column() {
                    if !queue.contains(&j) {
                        queue.push_back(j);
                    }
                }
            }
            queue.pop_front();
        }
    }
    Ok(SearchOutcome {
        status: SearchStatus::Fail,
        trace,
        fw,
        augmented,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pairs(v: &[(usize, usize)], n: usize) -> Vec<PairIndex> {
        v.iter().map(|&(a, b)| PairIndex::new(a, b, n).unwrap()).collect()
    }

    #[test]
    fn lexicographic_order() {
        assert_eq!(
            pair_order_lex(5).unwrap(),
            pairs(&[(2, 3), (2, 4), (2, 5), (3, 4), (3, 5), (4, 5)], 5)
        );
        assert_eq!(pair_order_lex(3).unwrap(), pairs(&[(2, 3)], 3));
        assert_eq!(pair_order_lex(6).unwrap().len(), 10);
        assert!(pair_order_lex(2).is_err());
    }

    #[test]
    fn pairs_through_a_column() {
        assert_eq!(pairs_containing(2, 5).unwrap(), pairs(&[(2, 3), (2, 4), (2, 5)], 5));
        assert_eq!(pairs_containing(5, 5).unwrap(), pairs(&[(2, 5), (3, 5), (4, 5)], 5));
        assert_eq!(pairs_containing(3, 3).unwrap(), pairs(&[(2, 3)], 3));
        assert!(pairs_containing(1, 5).is_err());
        assert!(pairs_containing(6, 5).is_err());
    }

    #[test]
    fn single_point_succeeds_immediately() {
        let x = DataMatrix::from_ints(&[&[0, 4, -1, 7]]).unwrap();
        for out in [search_lex(&x).unwrap(), search_priority(&x).unwrap()] {
            assert_eq!(out.winning_pair(), Some(PairIndex::new(2, 3, 4).unwrap()));
            assert_eq!(out.steps(), 1);
        }
    }

    #[test]
    fn three_columns_means_one_pair() {
        let x = DataMatrix::from_ints(&[&[0, 1, 5], &[0, 2, 4], &[0, 3, 1], &[0, 4, 3]]).unwrap();
        let lex = search_lex(&x).unwrap();
        let pri = search_priority(&x).unwrap();
        assert_eq!(lex.status, pri.status);
        assert_eq!(lex.trace, pri.trace);
        assert_eq!(lex.steps(), 1);
    }

    #[test]
    fn two_columns_rejected() {
        let x = DataMatrix::from_ints(&[&[0, 1], &[0, 2]]).unwrap();
        assert!(matches!(search_lex(&x), Err(Error::DimensionTooSmall(2))));
        assert!(matches!(search_priority(&x), Err(Error::DimensionTooSmall(2))));
    }
}
