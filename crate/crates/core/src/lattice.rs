//! Exact mean triangle area over the midpoint lattice of the unit square's
//! boundary.
//!
//! Each side is cut into `n` equal parts and the `4n` part midpoints are
//! the candidate vertices. The mean of the area over all `(4n)^3` ordered
//! triples, degenerate ones included, is computed exactly: coordinates are
//! scaled by `2n` to integers, doubled areas are then integers, and the sum
//! is divided once at the end.

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use thiserror::Error;

use crate::geometry::{triangle_area, Point2};

pub type Rational = BigRational;

/// Default cap on the number of ordered triples, `(4n)^3 <= 10^8`.
pub const DEFAULT_WORK_LIMIT: u64 = 100_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("subdivision count must be >= 1, got {0}")]
    InvalidSubdivisions(u64),
    #[error("n = {n} needs {triples} triples, above the work limit {limit}")]
    WorkLimitExceeded { n: u64, triples: u64, limit: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnumerationMode {
    /// Every ordered triple.
    Full,
    /// `p1` on the bottom side only, weighted by 4 (quarter-turn symmetry).
    Symmetric,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumConfig {
    pub work_limit: u64,
    pub mode: EnumerationMode,
}

impl Default for EnumConfig {
    fn default() -> Self {
        Self {
            work_limit: DEFAULT_WORK_LIMIT,
            mode: EnumerationMode::Full,
        }
    }
}

/// The `4n` side midpoints, ordered bottom, right, top, left, each side in
/// counter-clockwise order.
#[derive(Debug, Clone, PartialEq)]
pub struct MidpointLattice {
    n: u64,
    points: Vec<Point2<Rational>>,
}

impl MidpointLattice {
    pub fn new(n: u64) -> Result<Self, LatticeError> {
        if n < 1 {
            return Err(LatticeError::InvalidSubdivisions(n));
        }
        let den = BigInt::from(2 * n);
        let points = integer_points(n)
            .into_iter()
            .map(|(x, y)| {
                Point2::new(
                    BigRational::new(BigInt::from(x), den.clone()),
                    BigRational::new(BigInt::from(y), den.clone()),
                )
            })
            .collect();
        Ok(Self { n, points })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn points(&self) -> &[Point2<Rational>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

pub fn midpoint_lattice(n: u64) -> Result<MidpointLattice, LatticeError> {
    MidpointLattice::new(n)
}

/// Lattice points scaled by `2n`: bottom `(2k-1, 0)`, right `(2n, 2k-1)`,
/// top `(2n-2k+1, 2n)`, left `(0, 2n-2k+1)` for `k = 1..n`.
pub fn integer_points(n: u64) -> Vec<(i64, i64)> {
    let m = 2 * n as i64;
    let odd = |k: i64| 2 * k - 1;
    let ks = 1..=n as i64;
    ks.clone()
        .map(|k| (odd(k), 0))
        .chain(ks.clone().map(|k| (m, odd(k))))
        .chain(ks.clone().map(|k| (m - odd(k), m)))
        .chain(ks.map(|k| (0, m - odd(k))))
        .collect()
}

#[inline]
fn twice_area(a: (i64, i64), b: (i64, i64), c: (i64, i64)) -> u64 {
    ((b.0 - a.0) * (c.1 - a.1) - (c.0 - a.0) * (b.1 - a.1)).unsigned_abs()
}

/// Sum of doubled (integer) areas over all triples with `p1` drawn from
/// `firsts`. Partitioned by `p1` across threads; integer sums are exact, so
/// the partition does not matter.
fn twice_area_sum(firsts: &[(i64, i64)], points: &[(i64, i64)]) -> u128 {
    firsts
        .par_iter()
        .map(|&a| {
            let mut acc: u128 = 0;
            for &b in points {
                let mut row: u64 = 0;
                for &c in points {
                    row += twice_area(a, b, c);
                }
                acc += row as u128;
            }
            acc
        })
        .sum()
}

pub fn triple_count(n: u64) -> Option<u64> {
    let m = 4u64.checked_mul(n)?;
    m.checked_mul(m)?.checked_mul(m)
}

pub fn enumerate_mean_area_with(n: u64, cfg: &EnumConfig) -> Result<Rational, LatticeError> {
    if n < 1 {
        return Err(LatticeError::InvalidSubdivisions(n));
    }
    let triples = triple_count(n).unwrap_or(u64::MAX);
    if triples > cfg.work_limit {
        return Err(LatticeError::WorkLimitExceeded {
            n,
            triples,
            limit: cfg.work_limit,
        });
    }
    let points = integer_points(n);
    let sum = match cfg.mode {
        EnumerationMode::Full => twice_area_sum(&points, &points),
        EnumerationMode::Symmetric => 4 * twice_area_sum(&points[..n as usize], &points),
    };
    // area = twice_area / (2 * (2n)^2) in unit-square coordinates.
    let scale = 2 * (2 * n as u128).pow(2) * triples as u128;
    Ok(BigRational::new(BigInt::from(sum), BigInt::from(scale)))
}

/// Exact mean area over all `(4n)^3` ordered midpoint triples.
pub fn enumerate_mean_area(n: u64) -> Result<Rational, LatticeError> {
    enumerate_mean_area_with(n, &EnumConfig::default())
}

/// Mean area over all ordered triples of an arbitrary point set, evaluated
/// triple by triple in rational arithmetic. Slow; reference use only.
pub fn mean_area_rational(points: &[Point2<Rational>]) -> Rational {
    let mut total = BigRational::from_integer(0.into());
    for a in points {
        for b in points {
            for c in points {
                total += triangle_area(a, b, c).expect("rationals are finite");
            }
        }
    }
    let count = BigInt::from(points.len()).pow(3);
    total / BigRational::from_integer(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn q(n: i64, d: i64) -> Rational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn lattice_n1() {
        let l = midpoint_lattice(1).unwrap();
        let expect = [
            (q(1, 2), q(0, 1)),
            (q(1, 1), q(1, 2)),
            (q(1, 2), q(1, 1)),
            (q(0, 1), q(1, 2)),
        ];
        assert_eq!(l.len(), 4);
        for (p, (x, y)) in l.points().iter().zip(expect) {
            assert_eq!((p.x.clone(), p.y.clone()), (x, y));
        }
    }

    #[test]
    fn lattice_n2_and_n10() {
        let l = midpoint_lattice(2).unwrap();
        assert_eq!(l.len(), 8);
        assert!(l.points().contains(&Point2::new(q(1, 4), q(0, 1))));
        assert!(l.points().contains(&Point2::new(q(3, 4), q(0, 1))));
        let l = midpoint_lattice(10).unwrap();
        assert_eq!(l.len(), 40);
        assert_eq!(l.points()[0], Point2::new(q(1, 20), q(0, 1)));
    }

    #[test]
    fn lattice_points_on_boundary_with_small_denominators() {
        let n = 7;
        for p in midpoint_lattice(n).unwrap().points() {
            let on_edge = |v: &Rational| *v == q(0, 1) || *v == q(1, 1);
            assert!(on_edge(&p.x) || on_edge(&p.y));
            for v in [&p.x, &p.y] {
                assert_eq!((2 * n as i64) % v.denom().to_i64().unwrap(), 0);
            }
        }
    }

    #[test]
    fn invalid_n_and_work_limit() {
        assert_eq!(
            midpoint_lattice(0),
            Err(LatticeError::InvalidSubdivisions(0))
        );
        assert!(enumerate_mean_area(0).is_err());
        let cfg = EnumConfig {
            work_limit: 1000,
            ..Default::default()
        };
        assert!(matches!(
            enumerate_mean_area_with(3, &cfg),
            Err(LatticeError::WorkLimitExceeded { triples: 1728, .. })
        ));
        // (4 * 117)^3 > 10^8
        assert!(matches!(
            enumerate_mean_area(117),
            Err(LatticeError::WorkLimitExceeded { .. })
        ));
    }

    #[test]
    fn small_cases() {
        assert_eq!(enumerate_mean_area(1).unwrap(), q(3, 32));
        assert_eq!(enumerate_mean_area(2).unwrap(), q(9, 64));
        assert_eq!(enumerate_mean_area(3).unwrap(), q(43, 288));
    }

    #[test]
    fn integer_path_matches_rational_path() {
        for n in 1..=3 {
            let l = midpoint_lattice(n).unwrap();
            assert_eq!(
                mean_area_rational(l.points()),
                enumerate_mean_area(n).unwrap()
            );
        }
    }

    #[test]
    fn symmetric_mode_is_identical() {
        let sym = EnumConfig {
            mode: EnumerationMode::Symmetric,
            ..Default::default()
        };
        for n in [1, 2, 5, 10] {
            assert_eq!(
                enumerate_mean_area_with(n, &sym).unwrap(),
                enumerate_mean_area(n).unwrap()
            );
        }
    }

    #[test]
    fn n10_value() {
        assert_eq!(enumerate_mean_area(10).unwrap(), q(249, 1600));
    }
}
