//! Seeded Monte-Carlo estimates of the mean triangle area (rectangle,
//! square frame) and mean tetrahedron volume (cube).
//!
//! Samples are split into `chunks` contiguous work units. Chunk `c` draws
//! from ChaCha8 keyed by `seed` (expanded with `SeedableRng::seed_from_u64`)
//! on stream `c`, so every chunk is an independent substream and its output
//! does not depend on which thread runs it. Chunk accumulators are merged
//! in chunk order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::frame::Side;
use crate::geometry::{
    signed_area_raw, signed_volume_tetra_raw, CubeDomain, Point2, Point3, RectDomain,
};
use crate::scalar::Real;
use crate::stats::RunningStats;

pub type Seed = u64;

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959964;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum McError {
    #[error("sample count must be >= 2, got {0}")]
    TooFewSamples(u64),
    #[error("chunk count must be in 1..=n (n = {n}), got {chunks}")]
    InvalidChunks { n: u64, chunks: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Problem<T> {
    /// Triangle with vertices uniform in a rectangle.
    InteriorTriangle { domain: RectDomain<T> },
    /// Triangle with vertices uniform (by arc length) on the unit square's boundary.
    FrameTriangle,
    /// Tetrahedron with vertices uniform in a cube; samples `|volume|`.
    CubeTetrahedron { domain: CubeDomain<T> },
}

impl<T: Real> Problem<T> {
    pub fn name(&self) -> &'static str {
        match self {
            Problem::InteriorTriangle { .. } => "interior",
            Problem::FrameTriangle => "frame",
            Problem::CubeTetrahedron { .. } => "tetra",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimateResult<T> {
    pub mean: T,
    /// Unbiased sample variance.
    pub variance: T,
    pub stderr: T,
    pub ci95_low: T,
    pub ci95_high: T,
    pub n: u64,
    pub seed: Seed,
    pub chunks: u64,
}

impl<T: Real> EstimateResult<T> {
    /// Whether `target` lies within `k` standard errors of the mean.
    pub fn within(&self, target: T, k: T) -> bool {
        (self.mean - target).abs() <= k * self.stderr
    }
}

/// Independent generator for chunk `chunk` of a run keyed by `seed`.
pub fn chunk_rng(seed: Seed, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    rng
}

#[inline]
fn unit<T: Real, R: Rng + ?Sized>(rng: &mut R) -> T {
    T::c(rng.random::<f64>())
}

/// Uniform point in the rectangle.
#[inline]
pub fn sample_interior<T: Real, R: Rng + ?Sized>(rng: &mut R, d: &RectDomain<T>) -> Point2<T> {
    let x = unit::<T, R>(rng) * *d.a();
    let y = unit::<T, R>(rng) * *d.b();
    Point2::new(x, y)
}

/// Point uniform by arc length on the unit square's boundary: `t = 4u` on
/// `[0, 4)`, mapped like [`crate::frame::frame_point`].
#[inline]
pub fn sample_frame<T: Real, R: Rng + ?Sized>(rng: &mut R) -> Point2<T> {
    // 4u is exact in f64, so splitting off the side index loses nothing.
    let t = 4.0 * rng.random::<f64>();
    let k = t.floor();
    Side::ALL[k as usize].point(T::c(t - k))
}

#[inline]
pub fn sample_cube<T: Real, R: Rng + ?Sized>(rng: &mut R, d: &CubeDomain<T>) -> Point3<T> {
    let s = *d.side();
    Point3::new(
        unit::<T, R>(rng) * s,
        unit::<T, R>(rng) * s,
        unit::<T, R>(rng) * s,
    )
}

/// One draw of the quantity whose mean is estimated.
#[inline]
pub fn sample_value<T: Real, R: Rng + ?Sized>(problem: &Problem<T>, rng: &mut R) -> T {
    match problem {
        Problem::InteriorTriangle { domain } => {
            let a = sample_interior(rng, domain);
            let b = sample_interior(rng, domain);
            let c = sample_interior(rng, domain);
            signed_area_raw(&a, &b, &c).abs()
        }
        Problem::FrameTriangle => {
            let a = sample_frame::<T, R>(rng);
            let b = sample_frame::<T, R>(rng);
            let c = sample_frame::<T, R>(rng);
            signed_area_raw(&a, &b, &c).abs()
        }
        Problem::CubeTetrahedron { domain } => {
            let a = sample_cube(rng, domain);
            let b = sample_cube(rng, domain);
            let c = sample_cube(rng, domain);
            let d = sample_cube(rng, domain);
            signed_volume_tetra_raw(&a, &b, &c, &d).abs()
        }
    }
}

/// Number of samples assigned to `chunk`: the first `n % chunks` chunks take
/// one extra.
pub fn chunk_len(n: u64, chunks: u64, chunk: u64) -> u64 {
    n / chunks + u64::from(chunk < n % chunks)
}

fn run_chunk<T: Real>(
    problem: &Problem<T>,
    n: u64,
    seed: Seed,
    chunks: u64,
    chunk: u64,
) -> RunningStats<T> {
    let mut rng = chunk_rng(seed, chunk);
    let mut stats = RunningStats::new();
    for _ in 0..chunk_len(n, chunks, chunk) {
        stats.push(sample_value(problem, &mut rng));
    }
    stats
}

/// Mean of `n` i.i.d. samples with a normal-approximation 95% interval.
///
/// The result is a pure function of `(problem, n, seed, chunks)`.
pub fn estimate<T: Real>(
    problem: &Problem<T>,
    n: u64,
    seed: Seed,
    chunks: u64,
) -> Result<EstimateResult<T>, McError> {
    if n < 2 {
        return Err(McError::TooFewSamples(n));
    }
    if chunks < 1 || chunks > n {
        return Err(McError::InvalidChunks { n, chunks });
    }
    let partials: Vec<RunningStats<T>> = (0..chunks)
        .into_par_iter()
        .map(|c| run_chunk(problem, n, seed, chunks, c))
        .collect();
    let stats = partials
        .iter()
        .fold(RunningStats::new(), |acc, p| acc.merge(p));
    let mean = stats.mean();
    let stderr = stats.std_error();
    let half = T::c(Z95) * stderr;
    Ok(EstimateResult {
        mean,
        variance: stats.variance(),
        stderr,
        ci95_low: mean - half,
        ci95_high: mean + half,
        n,
        seed,
        chunks,
    })
}
