//! Max-plus arithmetic on the tropical projective torus R^n / R1.
//!
//! Points are stored as their canonical representative, the one whose first
//! coordinate is zero. Two points are equal exactly when their
//! representatives agree coordinate-wise.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TropicalPoint {
    coords: Vec<Scalar>,
}

impl TropicalPoint {
    /// Canonical representative `(0, x2 - x1, ..., xn - x1)` of `raw`.
    pub fn normalize(raw: Vec<Scalar>) -> Result<Self> {
        if raw.len() < 2 {
            return Err(Error::TooFewCoordinates(raw.len()));
        }
        if raw[0].is_zero() {
            return Ok(TropicalPoint { coords: raw });
        }
        let shift = raw[0].clone();
        let coords = raw.into_iter().map(|c| c - &shift).collect();
        Ok(TropicalPoint { coords })
    }

    pub fn from_ints(raw: &[i64]) -> Result<Self> {
        Self::normalize(raw.iter().map(|&v| Scalar::from(v)).collect())
    }

    /// Parses each coordinate with [`Scalar::from_str`](std::str::FromStr).
    pub fn parse(raw: &[&str]) -> Result<Self> {
        let coords = raw.iter().map(|s| s.parse()).collect::<Result<Vec<Scalar>>>()?;
        Self::normalize(coords)
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    /// Coordinate `k`, 1-based.
    pub fn coord(&self, k: usize) -> &Scalar {
        &self.coords[k - 1]
    }

    pub fn into_coords(self) -> Vec<Scalar> {
        self.coords
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coords.iter().map(Scalar::to_f64).collect()
    }

    fn check_dim(&self, other: &TropicalPoint) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for TropicalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for TropicalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// The tropical convex hull of three points.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TropicalTriangle {
    vertices: [TropicalPoint; 3],
}

impl TropicalTriangle {
    pub fn new(u1: TropicalPoint, u2: TropicalPoint, u3: TropicalPoint) -> Result<Self> {
        u1.check_dim(&u2)?;
        u1.check_dim(&u3)?;
        Ok(TropicalTriangle {
            vertices: [u1, u2, u3],
        })
    }

    pub fn vertices(&self) -> &[TropicalPoint; 3] {
        &self.vertices
    }

    pub fn dim(&self) -> usize {
        self.vertices[0].dim()
    }

    pub fn project(&self, x: &TropicalPoint) -> Result<TropicalPoint> {
        project_onto_tconv(x, &self.vertices)
    }

    pub fn contains(&self, x: &TropicalPoint) -> Result<bool> {
        tconv_contains(x, &self.vertices)
    }
}

/// Ordered rows of common dimension; row order matters because the last row
/// of an augmented matrix is its Fermat-Weber point.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DataMatrix {
    rows: Vec<TropicalPoint>,
}

impl DataMatrix {
    pub fn new(rows: Vec<TropicalPoint>) -> Result<Self> {
        let first = rows.first().ok_or(Error::Empty("data matrix"))?;
        let n = first.dim();
        if let Some(bad) = rows.iter().find(|r| r.dim() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: bad.dim(),
            });
        }
        Ok(DataMatrix { rows })
    }

    pub fn from_ints(rows: &[&[i64]]) -> Result<Self> {
        Self::new(
            rows.iter()
                .map(|r| TropicalPoint::from_ints(r))
                .collect::<Result<_>>()?,
        )
    }

    pub fn rows(&self) -> &[TropicalPoint] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<TropicalPoint> {
        self.rows
    }

    pub fn row(&self, i: usize) -> &TropicalPoint {
        &self.rows[i]
    }

    pub fn last_row(&self) -> &TropicalPoint {
        self.rows.last().expect("non-empty by construction")
    }

    /// Number of rows `m`.
    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    /// Number of columns `n`.
    pub fn ncols(&self) -> usize {
        self.rows[0].dim()
    }

    /// Column `k`, 1-based.
    pub fn column(&self, k: usize) -> impl Iterator<Item = &Scalar> {
        self.rows.iter().map(move |r| r.coord(k))
    }

    /// Smallest entry over the whole matrix. The first column is all zeros,
    /// so this is never positive.
    pub fn min_entry(&self) -> Scalar {
        self.rows
            .iter()
            .flat_map(|r| r.coords())
            .min()
            .expect("non-empty")
            .clone()
    }

    /// A copy with `row` appended at the end.
    pub fn with_row(&self, row: TropicalPoint) -> Result<Self> {
        let mut rows = self.rows.clone();
        rows.push(row);
        Self::new(rows)
    }

    /// The rows with repeats removed, first occurrence kept.
    pub fn distinct(&self) -> Self {
        let mut seen = std::collections::HashSet::new();
        let rows = self.rows.iter().filter(|r| seen.insert(*r)).cloned().collect();
        DataMatrix { rows }
    }

    /// The first `k` rows.
    pub fn head(&self, k: usize) -> Result<Self> {
        Self::new(self.rows[..k.min(self.rows.len())].to_vec())
    }
}

/// `max_i (coeffs[i] + points[i])` coordinate-wise, normalized.
pub fn trop_combine(coeffs: &[Scalar], points: &[TropicalPoint]) -> Result<TropicalPoint> {
    if points.is_empty() {
        return Err(Error::Empty("generator list"));
    }
    if coeffs.len() != points.len() {
        return Err(Error::DimensionMismatch {
            expected: points.len(),
            found: coeffs.len(),
        });
    }
    let n = points[0].dim();
    for p in points {
        points[0].check_dim(p)?;
    }
    let coords = (0..n)
        .map(|k| {
            coeffs
                .iter()
                .zip(points)
                .map(|(c, p)| c + &p.coords[k])
                .max()
                .expect("non-empty")
        })
        .collect();
    TropicalPoint::normalize(coords)
}

/// `max_i (u_i - v_i) - min_i (u_i - v_i)`.
pub fn trop_distance(u: &TropicalPoint, v: &TropicalPoint) -> Result<Scalar> {
    u.check_dim(v)?;
    let mut diffs = u.coords.iter().zip(&v.coords).map(|(a, b)| a - b);
    let first = diffs.next().expect("dim >= 2");
    let (lo, hi) = diffs.fold((first.clone(), first), |(lo, hi), d| {
        if d < lo {
            (d, hi)
        } else if d > hi {
            (lo, d)
        } else {
            (lo, hi)
        }
    });
    Ok(hi - lo)
}

/// Sum of tropical distances from `y` to every row of `x`.
pub fn distance_sum(y: &TropicalPoint, x: &DataMatrix) -> Result<Scalar> {
    x.rows.iter().map(|row| trop_distance(y, row)).sum()
}

/// Tropical projection of `x` onto `tconv(generators)`:
/// `lambda_i = min_k (x_k - u_k^(i))`, then the tropical combination.
pub fn project_onto_tconv(x: &TropicalPoint, generators: &[TropicalPoint]) -> Result<TropicalPoint> {
    if generators.is_empty() {
        return Err(Error::Empty("generator list"));
    }
    let lambdas = generators
        .iter()
        .map(|u| {
            x.check_dim(u)?;
            Ok(x.coords
                .iter()
                .zip(&u.coords)
                .map(|(a, b)| a - b)
                .min()
                .expect("dim >= 2"))
        })
        .collect::<Result<Vec<_>>>()?;
    trop_combine(&lambdas, generators)
}

/// Membership in `tconv(generators)` via the projection fixed point.
pub fn tconv_contains(x: &TropicalPoint, generators: &[TropicalPoint]) -> Result<bool> {
    Ok(&project_onto_tconv(x, generators)? == x)
}
