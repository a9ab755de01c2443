//! Seeded random data matrices and triangles.
//!
//! Every draw comes from a ChaCha8 generator keyed by `(seed, stream)`, so a
//! single trial can be replayed from its seed and stream alone. Floating
//! point draws are rounded to [`DECIMAL_DIGITS`] places and then converted
//! exactly.

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, Uniform};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::tropical::{DataMatrix, TropicalPoint, TropicalTriangle};

pub const DECIMAL_DIGITS: u32 = 12;

/// Name recorded in reports for the generator behind [`rng_for`].
pub const PRNG_NAME: &str = "ChaCha8Rng(rand_chacha 0.9, seed_from_u64 + set_stream)";

pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// How the n drawn coordinates become a point of R^n / R1.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum GenMode {
    /// Draw all `n` coordinates, then subtract the first from each.
    #[default]
    Normalize,
    /// Set the first coordinate to zero and draw the other `n - 1`.
    FixFirst,
}

impl FromStr for GenMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "normalize" => Ok(GenMode::Normalize),
            "fix-first" => Ok(GenMode::FixFirst),
            other => Err(Error::InvalidConfig(format!("unknown generation mode `{other}`"))),
        }
    }
}

impl fmt::Display for GenMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GenMode::Normalize => "normalize",
            GenMode::FixFirst => "fix-first",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GenConfig {
    pub m: usize,
    pub n: usize,
    /// Variance of each coordinate.
    pub variance: f64,
    pub seed: u64,
    pub stream: u64,
    pub mode: GenMode,
}

impl GenConfig {
    pub fn new(m: usize, n: usize, variance: f64, seed: u64) -> Self {
        GenConfig {
            m,
            n,
            variance,
            seed,
            stream: 0,
            mode: GenMode::default(),
        }
    }

    pub fn with_stream(mut self, stream: u64) -> Self {
        self.stream = stream;
        self
    }

    pub fn with_mode(mut self, mode: GenMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.m < 1 {
            return Err(Error::InvalidConfig("m must be at least 1".into()));
        }
        if self.n < 3 {
            return Err(Error::InvalidConfig(format!("n must be at least 3, got {}", self.n)));
        }
        if !(self.variance.is_finite() && self.variance > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "variance must be positive, got {}",
                self.variance
            )));
        }
        Ok(())
    }
}

/// The raw `m x n` normal draws before rounding or normalization. In
/// [`GenMode::FixFirst`] the first column is zero.
pub fn raw_normal_rows(cfg: &GenConfig) -> Result<Vec<Vec<f64>>> {
    cfg.validate()?;
    let normal = Normal::new(0.0, cfg.variance.sqrt())
        .map_err(|e| Error::InvalidConfig(e.to_string()))?;
    let mut rng = rng_for(cfg.seed, cfg.stream);
    Ok((0..cfg.m)
        .map(|_| {
            (0..cfg.n)
                .map(|k| match (cfg.mode, k) {
                    (GenMode::FixFirst, 0) => 0.0,
                    _ => normal.sample(&mut rng),
                })
                .collect()
        })
        .collect())
}

/// `m` points with i.i.d. `Normal(0, variance)` coordinates.
pub fn gen_normal_matrix(cfg: &GenConfig) -> Result<DataMatrix> {
    let rows = raw_normal_rows(cfg)?
        .into_iter()
        .map(|raw| {
            let coords = raw
                .into_iter()
                .map(|v| Scalar::from_f64_rounded(v, DECIMAL_DIGITS))
                .collect::<Result<Vec<_>>>()?;
            TropicalPoint::normalize(coords)
        })
        .collect::<Result<_>>()?;
    DataMatrix::new(rows)
}

/// Three points with first coordinate zero and the others uniform on
/// `[-bound, bound]`.
pub fn gen_random_triangle(n: usize, bound: f64, seed: u64, stream: u64) -> Result<TropicalTriangle> {
    if n < 3 {
        return Err(Error::InvalidConfig(format!("n must be at least 3, got {n}")));
    }
    if !(bound.is_finite() && bound > 0.0) {
        return Err(Error::InvalidConfig(format!("bound must be positive, got {bound}")));
    }
    let uniform = Uniform::new_inclusive(-bound, bound).map_err(|e| Error::InvalidConfig(e.to_string()))?;
    let mut rng = rng_for(seed, stream);
    let point = |rng: &mut ChaCha8Rng| {
        let mut coords = vec![Scalar::zero()];
        for _ in 1..n {
            coords.push(Scalar::from_f64_rounded(uniform.sample(rng), DECIMAL_DIGITS)?);
        }
        TropicalPoint::normalize(coords)
    };
    let u1 = point(&mut rng)?;
    let u2 = point(&mut rng)?;
    let u3 = point(&mut rng)?;
    TropicalTriangle::new(u1, u2, u3)
}

/// Mixes a base stream id with a trial index (SplitMix64 finalizer) so that
/// distinct experiment cells and trials never share a stream.
pub fn derive_stream(parts: &[u64]) -> u64 {
    parts.iter().fold(0x9E37_79B9_7F4A_7C15u64, |acc, &p| splitmix(acc ^ splitmix(p)))
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
