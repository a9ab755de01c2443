//! Axis-aligned tropical triangles and the projection matrices they induce.
//!
//! For a column pair `(d1, d2)` the triangle built by [`compute_triangle`]
//! sits below every data point and spans the data's range in columns `d1`
//! and `d2`. Projecting onto it keeps those two coordinates and floors every
//! other coordinate to `t`, the smallest entry of the matrix. The resulting
//! rows are exactly [`projection_matrix`].

use std::fmt;

use crate::error::{Error, Result};
use crate::fermat_weber::fermat_weber_point;
use crate::scalar::Scalar;
use crate::tropical::{distance_sum, project_onto_tconv, DataMatrix, TropicalPoint, TropicalTriangle};

/// A column pair `(d1, d2)`, 1-based, with `2 <= d1 < d2 <= n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PairIndex {
    d1: usize,
    d2: usize,
}

impl PairIndex {
    pub fn new(d1: usize, d2: usize, n: usize) -> Result<Self> {
        if d1 < 2 || d1 >= d2 || d2 > n {
            return Err(Error::InvalidPair { d1, d2, n });
        }
        Ok(PairIndex { d1, d2 })
    }

    pub fn d1(&self) -> usize {
        self.d1
    }

    pub fn d2(&self) -> usize {
        self.d2
    }

    pub fn contains(&self, column: usize) -> bool {
        self.d1 == column || self.d2 == column
    }

    fn check(&self, n: usize) -> Result<()> {
        PairIndex::new(self.d1, self.d2, n).map(|_| ())
    }
}

impl fmt::Display for PairIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.d1, self.d2)
    }
}

pub fn projection_matrix(x: &DataMatrix, pair: PairIndex) -> Result<DataMatrix> {
    projection_matrix_with_floor(x, pair, &x.min_entry())
}

/// [`projection_matrix`] with an explicit floor `t <= min entry`.
pub fn projection_matrix_with_floor(x: &DataMatrix, pair: PairIndex, floor: &Scalar) -> Result<DataMatrix> {
    check_floor(x, pair, floor)?;
    let rows = x
        .rows()
        .iter()
        .map(|row| {
            let coords = (1..=x.ncols())
                .map(|k| match k {
                    1 => Scalar::zero(),
                    k if pair.contains(k) => row.coord(k).clone(),
                    _ => floor.clone(),
                })
                .collect();
            TropicalPoint::normalize(coords)
        })
        .collect::<Result<_>>()?;
    DataMatrix::new(rows)
}

pub fn compute_triangle(x: &DataMatrix, pair: PairIndex) -> Result<TropicalTriangle> {
    compute_triangle_with_floor(x, pair, &x.min_entry())
}

/// The three generators for `pair` with off-pair coordinates set to `floor`:
///
/// ```text
/// u1 = (min d1 - 1, min d2 - 1)
/// u2 = (min d1 + 1, max d2 + 1)
/// u3 = (max d1 + 1, min d2 + 1)
/// ```
pub fn compute_triangle_with_floor(x: &DataMatrix, pair: PairIndex, floor: &Scalar) -> Result<TropicalTriangle> {
    check_floor(x, pair, floor)?;
    let one = Scalar::one();
    let (lo1, hi1) = column_range(x, pair.d1());
    let (lo2, hi2) = column_range(x, pair.d2());
    let make = |a: Scalar, b: Scalar| {
        let coords = (1..=x.ncols())
            .map(|k| {
                if k == 1 {
                    Scalar::zero()
                } else if k == pair.d1() {
                    a.clone()
                } else if k == pair.d2() {
                    b.clone()
                } else {
                    floor.clone()
                }
            })
            .collect();
        TropicalPoint::normalize(coords)
    };
    TropicalTriangle::new(
        make(&lo1 - &one, &lo2 - &one)?,
        make(&lo1 + &one, &hi2 + &one)?,
        make(&hi1 + &one, &lo2 + &one)?,
    )
}

/// Whether projecting every row onto [`compute_triangle`] reproduces the
/// corresponding row of [`projection_matrix`].
pub fn check_vertical_projection(x: &DataMatrix, pair: PairIndex) -> Result<bool> {
    check_vertical_projection_with_floor(x, pair, &x.min_entry())
}

pub fn check_vertical_projection_with_floor(x: &DataMatrix, pair: PairIndex, floor: &Scalar) -> Result<bool> {
    let triangle = compute_triangle_with_floor(x, pair, floor)?;
    let expected = projection_matrix_with_floor(x, pair, floor)?;
    for (row, want) in x.rows().iter().zip(expected.rows()) {
        if &triangle.project(row)? != want {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Projects `points` and `fw_point` onto `tconv(generators)` and reports
/// whether the projected point attains the Fermat-Weber objective of the
/// projected points.
pub fn fw_projection_holds(points: &DataMatrix, fw_point: &TropicalPoint, generators: &[TropicalPoint]) -> Result<bool> {
    let projected = DataMatrix::new(
        points
            .rows()
            .iter()
            .map(|r| project_onto_tconv(r, generators))
            .collect::<Result<_>>()?,
    )?;
    let image = project_onto_tconv(fw_point, generators)?;
    let best = fermat_weber_point(&projected)?.objective;
    Ok(distance_sum(&image, &projected)? == best)
}

fn check_floor(x: &DataMatrix, pair: PairIndex, floor: &Scalar) -> Result<()> {
    if x.ncols() < 3 {
        return Err(Error::DimensionTooSmall(x.ncols()));
    }
    pair.check(x.ncols())?;
    let min = x.min_entry();
    if *floor > min {
        return Err(Error::FloorTooHigh {
            floor: floor.to_string(),
            min: min.to_string(),
        });
    }
    Ok(())
}

fn column_range(x: &DataMatrix, k: usize) -> (Scalar, Scalar) {
    let mut col = x.column(k);
    let first = col.next().expect("non-empty").clone();
    col.fold((first.clone(), first), |(lo, hi), v| {
        if *v < lo {
            (v.clone(), hi)
        } else if *v > hi {
            (lo, v.clone())
        } else {
            (lo, hi)
        }
    })
}
