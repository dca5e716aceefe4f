//! The case decomposition of the random-triangle integral.
//!
//! Points are ordered `x1 < x2 < x3`. The line through `p1` and `p2` leaves
//! the rectangle either through the side opposite to where it entered or
//! through an adjacent one, and `p3` lies above or below it. Each case is a
//! six-variable region on which the signed area has a fixed sign, so the
//! expectation of `|s|` becomes a signed sum of polynomial integrals.
//!
//! * `I1..I5` cover `y2 > y1` (the slope of `p1 p2` is compared with the
//!   slope `k1` from `p1` to the top-right corner).
//! * `I6..I10` cover `y2 < y1` (compared with `k3`, the slope to the
//!   bottom-right corner). They are the mirror images of `I4, I5, I1, I2,
//!   I3` under `y -> B - y`, written out explicitly.
//! * `J*` are the same regions with a unit integrand, giving the volume of
//!   the ordered configuration space.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{signed_area_raw, Point2, RectDomain};
use crate::quadrature::{
    gauss_legendre3, integrate, integrate_par, nonempty, Estimate, LevelTol, QuadConfig, QuadError,
};
use crate::scalar::Real;

/// Depth cap of the magnitude pilot pass.
const PILOT_DEPTH: u32 = 4;

/// Variable order shared by every region.
pub const VARIABLES: [&str; 6] = ["x1", "y1", "x2", "y2", "x3", "y3"];

/// Bound of one variable as a function of the variables bound before it.
pub type BoundFn<T> = Arc<dyn Fn(&[T]) -> T + Send + Sync>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CatalogError {
    #[error("unknown catalog entry {0:?}")]
    UnknownName(String),
    #[error("region must have exactly 6 variables in order x1, y1, x2, y2, x3, y3")]
    MalformedRegion,
    #[error(transparent)]
    Domain(#[from] crate::geometry::GeometryError),
    #[error(transparent)]
    Quad(#[from] QuadError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Integrand {
    SignedArea,
    One,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn factor<T: Real>(self) -> T {
        match self {
            Sign::Plus => T::one(),
            Sign::Minus => -T::one(),
        }
    }
}

#[derive(Clone)]
pub struct Variable<T> {
    pub name: &'static str,
    pub lower: BoundFn<T>,
    pub upper: BoundFn<T>,
}

impl<T> fmt::Debug for Variable<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Variable")
            .field("name", &self.name)
            .finish_non_exhaustive()
    }
}

impl<T: Real> Variable<T> {
    pub fn bounds(&self, bound: &[T]) -> (T, T) {
        ((self.lower)(bound), (self.upper)(bound))
    }
}

/// One region of the decomposition: a chain of six variables, each bounded
/// by functions of the previous ones, and the sign that makes
/// `sign * integrand` non-negative on it.
#[derive(Clone, Debug)]
pub struct RegionSpec<T> {
    name: String,
    vars: Vec<Variable<T>>,
    sign: Sign,
    integrand: Integrand,
}

impl<T: Real> RegionSpec<T> {
    pub fn new(
        name: impl Into<String>,
        vars: Vec<Variable<T>>,
        sign: Sign,
        integrand: Integrand,
    ) -> Result<Self, CatalogError> {
        if vars.len() != VARIABLES.len() || vars.iter().zip(VARIABLES).any(|(v, n)| v.name != n) {
            return Err(CatalogError::MalformedRegion);
        }
        Ok(Self {
            name: name.into(),
            vars,
            sign,
            integrand,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn vars(&self) -> &[Variable<T>] {
        &self.vars
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn integrand(&self) -> Integrand {
        self.integrand
    }

    /// The unit-integrand twin (`I3` becomes `J3`).
    pub fn normalizer(&self) -> Self {
        Self {
            name: self.name.replacen('I', "J", 1),
            vars: self.vars.clone(),
            sign: Sign::Plus,
            integrand: Integrand::One,
        }
    }

    /// `sign * integrand` at a full six-variable point.
    #[inline]
    pub fn weight(&self, v: &[T; 6]) -> T {
        match self.integrand {
            Integrand::One => self.sign.factor(),
            Integrand::SignedArea => {
                self.sign.factor::<T>()
                    * signed_area_raw(
                        &Point2::new(v[0], v[1]),
                        &Point2::new(v[2], v[3]),
                        &Point2::new(v[4], v[5]),
                    )
            }
        }
    }

    /// Whether a point satisfies every bound of the chain.
    pub fn contains(&self, v: &[T; 6]) -> bool {
        self.vars.iter().enumerate().all(|(i, var)| {
            let (lo, hi) = var.bounds(&v[..i]);
            v[i] >= lo && v[i] <= hi
        })
    }
}

fn bound<T, F>(f: F) -> BoundFn<T>
where
    F: Fn(&[T]) -> T + Send + Sync + 'static,
{
    Arc::new(f)
}

fn var<T>(name: &'static str, lower: BoundFn<T>, upper: BoundFn<T>) -> Variable<T> {
    Variable { name, lower, upper }
}

fn constant<T: Real>(c: T) -> BoundFn<T> {
    bound(move |_| c)
}

/// Which part of the `p3` range a region covers.
#[derive(Clone, Copy)]
enum Part {
    /// Between `x2` and where the line `p1 p2` exits; `p3` beyond the line
    /// (toward the exit side).
    NearBeyond,
    /// Between `x2` and the exit; `p3` on the other side of the line.
    NearBehind,
    /// Past the exit abscissa, any height.
    Far,
    /// Line exits through the right side; `p3` on the exit-corner side.
    SideBeyond,
    /// Line exits through the right side; `p3` on the other side.
    SideBehind,
}

/// Regions for `y2 > y1`, bounds as in the classic five-integral layout:
/// `Y2 = k1 (x2 - x1) + y1`, `Y3 = k2 (x3 - x1) + y1`, `X = (B - y2)/k2 + x2`.
fn upper_case<T: Real>(name: &str, a: T, b: T, part: Part) -> RegionSpec<T> {
    // k1 (x2 - x1) + y1, the height of the corner ray at x2.
    let y2m = move |v: &[T]| (b - v[1]) / (a - v[0]) * (v[2] - v[0]) + v[1];
    // k2 (x3 - x1) + y1
    let y3m = move |v: &[T]| (v[3] - v[1]) / (v[2] - v[0]) * (v[4] - v[0]) + v[1];
    // (B - y2) / k2 + x2
    let x3m = move |v: &[T]| (b - v[3]) * (v[2] - v[0]) / (v[3] - v[1]) + v[2];
    let zero = T::zero();
    let mut vars = vec![
        var("x1", constant(zero), constant(a)),
        var("y1", constant(zero), constant(b)),
        var("x2", bound(|v: &[T]| v[0]), constant(a)),
    ];
    let (sign, rest) = match part {
        Part::NearBeyond => (
            Sign::Plus,
            [
                var("y2", bound(y2m), constant(b)),
                var("x3", bound(|v: &[T]| v[2]), bound(x3m)),
                var("y3", bound(y3m), constant(b)),
            ],
        ),
        Part::NearBehind => (
            Sign::Minus,
            [
                var("y2", bound(y2m), constant(b)),
                var("x3", bound(|v: &[T]| v[2]), bound(x3m)),
                var("y3", constant(zero), bound(y3m)),
            ],
        ),
        Part::Far => (
            Sign::Minus,
            [
                var("y2", bound(y2m), constant(b)),
                var("x3", bound(x3m), constant(a)),
                var("y3", constant(zero), constant(b)),
            ],
        ),
        Part::SideBeyond => (
            Sign::Plus,
            [
                var("y2", bound(|v: &[T]| v[1]), bound(y2m)),
                var("x3", bound(|v: &[T]| v[2]), constant(a)),
                var("y3", bound(y3m), constant(b)),
            ],
        ),
        Part::SideBehind => (
            Sign::Minus,
            [
                var("y2", bound(|v: &[T]| v[1]), bound(y2m)),
                var("x3", bound(|v: &[T]| v[2]), constant(a)),
                var("y3", constant(zero), bound(y3m)),
            ],
        ),
    };
    vars.extend(rest);
    RegionSpec::new(name, vars, sign, Integrand::SignedArea).expect("well-formed")
}

/// Regions for `y2 < y1`: `k3 = y1 / (A - x1)`, `k4 = (y1 - y2) / (x2 - x1)`.
/// The line falls to the right; "beyond" now means below it.
fn lower_case<T: Real>(name: &str, a: T, b: T, part: Part) -> RegionSpec<T> {
    // y1 - k3 (x2 - x1)
    let y2m = move |v: &[T]| v[1] - v[1] / (a - v[0]) * (v[2] - v[0]);
    // y1 - k4 (x3 - x1)
    let y3m = move |v: &[T]| v[1] - (v[1] - v[3]) / (v[2] - v[0]) * (v[4] - v[0]);
    // y2 / k4 + x2, where the line meets y = 0
    let x3m = move |v: &[T]| v[3] * (v[2] - v[0]) / (v[1] - v[3]) + v[2];
    let zero = T::zero();
    let mut vars = vec![
        var("x1", constant(zero), constant(a)),
        var("y1", constant(zero), constant(b)),
        var("x2", bound(|v: &[T]| v[0]), constant(a)),
    ];
    let (sign, rest) = match part {
        Part::NearBeyond => (
            Sign::Minus,
            [
                var("y2", constant(zero), bound(y2m)),
                var("x3", bound(|v: &[T]| v[2]), bound(x3m)),
                var("y3", constant(zero), bound(y3m)),
            ],
        ),
        Part::NearBehind => (
            Sign::Plus,
            [
                var("y2", constant(zero), bound(y2m)),
                var("x3", bound(|v: &[T]| v[2]), bound(x3m)),
                var("y3", bound(y3m), constant(b)),
            ],
        ),
        Part::Far => (
            Sign::Plus,
            [
                var("y2", constant(zero), bound(y2m)),
                var("x3", bound(x3m), constant(a)),
                var("y3", constant(zero), constant(b)),
            ],
        ),
        Part::SideBeyond => (
            Sign::Minus,
            [
                var("y2", bound(y2m), bound(|v: &[T]| v[1])),
                var("x3", bound(|v: &[T]| v[2]), constant(a)),
                var("y3", constant(zero), bound(y3m)),
            ],
        ),
        Part::SideBehind => (
            Sign::Plus,
            [
                var("y2", bound(y2m), bound(|v: &[T]| v[1])),
                var("x3", bound(|v: &[T]| v[2]), constant(a)),
                var("y3", bound(y3m), constant(b)),
            ],
        ),
    };
    vars.extend(rest);
    RegionSpec::new(name, vars, sign, Integrand::SignedArea).expect("well-formed")
}

fn domain<T: Real>(a: T, b: T) -> Result<(), CatalogError> {
    RectDomain::new(a, b)?;
    Ok(())
}

/// `I1..I5`: the `y2 > y1` half of the ordered configuration space of an
/// `a x b` rectangle. Signs are `(+, -, -, +, -)`.
pub fn rectangle_regions<T: Real>(a: T, b: T) -> Result<Vec<RegionSpec<T>>, CatalogError> {
    domain(a, b)?;
    Ok(vec![
        upper_case("I1", a, b, Part::NearBeyond),
        upper_case("I2", a, b, Part::NearBehind),
        upper_case("I3", a, b, Part::Far),
        upper_case("I4", a, b, Part::SideBeyond),
        upper_case("I5", a, b, Part::SideBehind),
    ])
}

/// All ten regions `I1..I10` for an `a x b` rectangle.
///
/// `I6, I7, I8, I9, I10` are the reflections of `I4, I5, I1, I2, I3`.
pub fn full_regions<T: Real>(a: T, b: T) -> Result<Vec<RegionSpec<T>>, CatalogError> {
    let mut out = rectangle_regions(a, b)?;
    out.extend([
        lower_case("I6", a, b, Part::SideBeyond),
        lower_case("I7", a, b, Part::SideBehind),
        lower_case("I8", a, b, Part::NearBeyond),
        lower_case("I9", a, b, Part::NearBehind),
        lower_case("I10", a, b, Part::Far),
    ]);
    Ok(out)
}

/// The ten-region decomposition of the square of side `a`.
pub fn square_regions<T: Real>(a: T) -> Result<Vec<RegionSpec<T>>, CatalogError> {
    full_regions(a, a)
}

/// `J1..J5`: unit integrand over the regions of [`rectangle_regions`].
pub fn normalizer_regions<T: Real>(a: T, b: T) -> Result<Vec<RegionSpec<T>>, CatalogError> {
    Ok(rectangle_regions(a, b)?
        .iter()
        .map(RegionSpec::normalizer)
        .collect())
}

/// `J1..J10` for the full decomposition.
pub fn full_normalizer_regions<T: Real>(a: T, b: T) -> Result<Vec<RegionSpec<T>>, CatalogError> {
    Ok(full_regions(a, b)?
        .iter()
        .map(RegionSpec::normalizer)
        .collect())
}

/// Looks up a single region (`I1..I10` or `J1..J10`) by name.
pub fn region_by_name<T: Real>(name: &str, a: T, b: T) -> Result<RegionSpec<T>, CatalogError> {
    let all = full_regions(a, b)?;
    let base = name.replacen('J', "I", 1);
    let r = all
        .into_iter()
        .find(|r| r.name == base)
        .ok_or_else(|| CatalogError::UnknownName(name.to_string()))?;
    Ok(if name.starts_with('J') {
        r.normalizer()
    } else {
        r
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionResult<T> {
    pub name: String,
    pub value: T,
    pub est_error: T,
    pub evaluations: u64,
    /// Some level reached `max_depth` before meeting its tolerance.
    pub budget_exhausted: bool,
}

impl<T: Real> RegionResult<T> {
    /// Turns a flagged result into [`QuadError::BudgetExhausted`].
    pub fn strict(self) -> Result<Self, QuadError> {
        if self.budget_exhausted {
            Err(QuadError::BudgetExhausted {
                name: self.name,
                value: self.value.to_f64_lossy(),
                est_error: self.est_error.to_f64_lossy(),
            })
        } else {
            Ok(self)
        }
    }
}

/// Innermost `x3, y3` integral by exact rules: the `y3` bounds are affine
/// in `x3` and the integrand is affine in `y3`, so the midpoint rule in `y3`
/// and three-point Gauss-Legendre in `x3` (degree <= 3 integrand) are exact.
fn inner_exact<T: Real>(region: &RegionSpec<T>, v: &[T; 6]) -> Estimate<T> {
    let (lo, hi) = region.vars[4].bounds(&v[..4]);
    if !nonempty(lo, hi) {
        return Estimate::zero();
    }
    let mut p = *v;
    let value = gauss_legendre3(
        |x3| {
            p[4] = x3;
            let (ylo, yhi) = region.vars[5].bounds(&p[..5]);
            if !nonempty(ylo, yhi) {
                return T::zero();
            }
            let mut q = p;
            q[5] = (ylo + yhi) * T::c(0.5);
            (yhi - ylo) * region.weight(&q)
        },
        lo,
        hi,
    );
    Estimate {
        value,
        error: T::zero(),
        evaluations: 3,
        exhausted: false,
    }
}

fn level_integral<T: Real>(
    region: &RegionSpec<T>,
    plan: &[LevelTol<T>; 6],
    inner_analytic: bool,
    level: usize,
    v: [T; 6],
) -> Estimate<T> {
    if inner_analytic && level == 4 {
        return inner_exact(region, &v);
    }
    if level == 6 {
        return Estimate::exact(region.weight(&v));
    }
    let (lo, hi) = region.vars[level].bounds(&v[..level]);
    integrate(
        |t| {
            let mut w = v;
            w[level] = t;
            level_integral(region, plan, inner_analytic, level + 1, w)
        },
        lo,
        hi,
        &plan[level],
    )
}

fn run<T: Real>(
    region: &RegionSpec<T>,
    plan: &[LevelTol<T>; 6],
    inner_analytic: bool,
) -> Estimate<T> {
    let (lo, hi) = region.vars[0].bounds(&[]);
    let zero = [T::zero(); 6];
    integrate_par(
        |t| {
            let mut w = zero;
            w[0] = t;
            level_integral(region, plan, inner_analytic, 1, w)
        },
        lo,
        hi,
        &plan[0],
    )
}

/// Per-level tolerances. Level `k` gets relative budget `rel_tol / 2^(k+1)`
/// and, given the magnitude of the whole integral, an absolute floor
/// `rel_k * |total| / V_k` where `V_k` bounds the measure of the outer
/// variables: a pointwise error below the floor integrates to at most
/// `rel_k * |total|`.
fn level_plan<T: Real>(region: &RegionSpec<T>, cfg: &QuadConfig<T>, total: T) -> [LevelTol<T>; 6] {
    let (x0, x1) = region.vars[0].bounds(&[]);
    let (y0, y1) = region.vars[1].bounds(&[(x0 + x1) * T::c(0.5)]);
    let extent = [x1 - x0, y1 - y0];
    let mut measure = T::one();
    std::array::from_fn(|k| {
        let mut tol = cfg.level(k);
        tol.abs = tol.rel * total.abs() / measure;
        measure = measure * extent[k % 2].abs();
        tol
    })
}

/// Iterated adaptive quadrature of `sign * integrand` over a region.
///
/// A coarse pilot pass fixes the magnitude used for the inner levels'
/// absolute floors. The outermost level fans its nodes out on the rayon
/// pool; the summation order is fixed, so the value does not depend on the
/// thread count.
pub fn nested_quadrature<T: Real>(
    region: &RegionSpec<T>,
    cfg: &QuadConfig<T>,
) -> Result<RegionResult<T>, CatalogError> {
    cfg.validate()?;
    let (lo, hi) = region.vars[0].bounds(&[]);
    if !nonempty(lo, hi) {
        return Err(QuadError::DegenerateRegion(region.name.clone()).into());
    }
    let pilot_cfg = QuadConfig {
        rel_tol: cfg.rel_tol.max(T::c(1e-2)),
        max_depth: cfg.max_depth.min(PILOT_DEPTH),
        inner_analytic: cfg.inner_analytic,
    };
    let pilot = run(
        region,
        &level_plan(region, &pilot_cfg, T::zero()),
        cfg.inner_analytic,
    );
    let est = run(
        region,
        &level_plan(region, cfg, pilot.value),
        cfg.inner_analytic,
    );
    Ok(RegionResult {
        name: region.name.clone(),
        value: est.value,
        est_error: est.error,
        evaluations: pilot.evaluations + est.evaluations,
        budget_exhausted: est.exhausted,
    })
}

/// Quadrature of a list of regions, in order.
pub fn evaluate_all<T: Real>(
    regions: &[RegionSpec<T>],
    cfg: &QuadConfig<T>,
) -> Result<Vec<RegionResult<T>>, CatalogError> {
    regions.iter().map(|r| nested_quadrature(r, cfg)).collect()
}

/// Numerator, normalizer and their ratio.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeanArea<T> {
    pub numerator: T,
    pub numerator_error: T,
    pub normalizer: T,
    pub normalizer_error: T,
    pub value: T,
    /// First-order bound on the error of `value`.
    pub est_error: T,
    pub regions: Vec<RegionResult<T>>,
    pub normalizers: Vec<RegionResult<T>>,
}

impl<T: Real> MeanArea<T> {
    fn from_parts(regions: Vec<RegionResult<T>>, normalizers: Vec<RegionResult<T>>) -> Self {
        let sum = |rs: &[RegionResult<T>]| {
            rs.iter().fold((T::zero(), T::zero()), |(v, e), r| {
                (v + r.value, e + r.est_error)
            })
        };
        let (num, num_err) = sum(&regions);
        let (den, den_err) = sum(&normalizers);
        let value = num / den;
        let est_error = value.abs() * (num_err / num.abs() + den_err / den.abs());
        Self {
            numerator: num,
            numerator_error: num_err,
            normalizer: den,
            normalizer_error: den_err,
            value,
            est_error,
            regions,
            normalizers,
        }
    }
}

/// Mean triangle area in the `a x b` rectangle from the five-region catalog
/// (`I15 / J15`).
pub fn interior_breakdown<T: Real>(
    a: T,
    b: T,
    cfg: &QuadConfig<T>,
) -> Result<MeanArea<T>, CatalogError> {
    let regions = evaluate_all(&rectangle_regions(a, b)?, cfg)?;
    let normalizers = evaluate_all(&normalizer_regions(a, b)?, cfg)?;
    Ok(MeanArea::from_parts(regions, normalizers))
}

pub fn expected_area_interior<T: Real>(a: T, b: T, cfg: &QuadConfig<T>) -> Result<T, CatalogError> {
    Ok(interior_breakdown(a, b, cfg)?.value)
}

/// Mean triangle area from the full ten-region catalog (`II / JJ`).
pub fn full_breakdown<T: Real>(
    a: T,
    b: T,
    cfg: &QuadConfig<T>,
) -> Result<MeanArea<T>, CatalogError> {
    let regions = evaluate_all(&full_regions(a, b)?, cfg)?;
    let normalizers = evaluate_all(&full_normalizer_regions(a, b)?, cfg)?;
    Ok(MeanArea::from_parts(regions, normalizers))
}

pub type Rational = BigRational;

/// `(coefficient numerator, denominator, power of a, power of b)`.
fn reference_entry(name: &str) -> Option<(i64, i64, i32, i32)> {
    Some(match name {
        "I1" | "I8" => (1, 34560, 4, 4),
        "I2" | "I9" => (23, 34560, 4, 4),
        "I3" | "I10" => (140, 34560, 4, 4),
        "I4" | "I6" => (19, 34560, 4, 4),
        "I5" | "I7" => (37, 34560, 4, 4),
        "J1" | "J8" => (1, 432, 3, 3),
        "J2" | "J9" => (5, 432, 3, 3),
        "J3" | "J10" => (18, 432, 3, 3),
        "J4" | "J6" => (5, 432, 3, 3),
        "J5" | "J7" => (7, 432, 3, 3),
        "I15" => (11, 1728, 4, 4),
        "J15" => (1, 12, 3, 3),
        "II" => (11, 864, 4, 4),
        "JJ" => (1, 6, 3, 3),
        "RESULT" => (11, 144, 1, 1),
        _ => return None,
    })
}

/// Every name [`exact_reference`] accepts.
pub const REFERENCE_NAMES: [&str; 25] = [
    "I1", "I2", "I3", "I4", "I5", "I6", "I7", "I8", "I9", "I10", "J1", "J2", "J3", "J4", "J5",
    "J6", "J7", "J8", "J9", "J10", "I15", "J15", "II", "JJ", "RESULT",
];

/// Known closed-form value of a catalog entry for an `a x b` rectangle.
///
/// `II` and `JJ` are the full ten-region sums (`11 a^4 b^4 / 864` and
/// `a^3 b^3 / 6`); at `a = b` they reduce to `11 a^8 / 864` and `a^6 / 6`.
pub fn exact_reference<T: Real>(name: &str, a: T, b: T) -> Result<Rational, CatalogError> {
    let (num, den, pa, pb) =
        reference_entry(name).ok_or_else(|| CatalogError::UnknownName(name.to_string()))?;
    let to_rat = |v: T| {
        BigRational::from_float(v.to_f64_lossy()).ok_or(CatalogError::Domain(
            crate::geometry::GeometryError::NonFinite,
        ))
    };
    domain(a, b)?;
    let (ra, rb) = (to_rat(a)?, to_rat(b)?);
    let mut v = BigRational::new(BigInt::from(num), BigInt::from(den));
    v *= num_traits::pow(ra, pa as usize);
    v *= num_traits::pow(rb, pb as usize);
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn cfg() -> QuadConfig<f64> {
        QuadConfig::default()
    }

    fn refv(name: &str, a: f64, b: f64) -> f64 {
        exact_reference(name, a, b).unwrap().to_f64().unwrap()
    }

    #[test]
    fn i1_structure_matches_layout() {
        let rs = rectangle_regions(1.0, 1.0).unwrap();
        let names: Vec<_> = rs.iter().map(|r| r.name().to_string()).collect();
        assert_eq!(names, ["I1", "I2", "I3", "I4", "I5"]);
        let signs: Vec<_> = rs.iter().map(|r| r.sign()).collect();
        use Sign::*;
        assert_eq!(signs, [Plus, Minus, Minus, Plus, Minus]);
        let i1 = &rs[0];
        let v = [0.2, 0.3, 0.5, 0.0, 0.0, 0.0];
        assert_eq!(i1.vars()[0].bounds(&[]), (0.0, 1.0));
        assert_eq!(i1.vars()[1].bounds(&v[..1]), (0.0, 1.0));
        assert_eq!(i1.vars()[2].bounds(&v[..2]), (0.2, 1.0));
        // Y2 = k1 (x2 - x1) + y1 with k1 = 0.7 / 0.8
        let (lo, hi) = i1.vars()[3].bounds(&v[..3]);
        assert!((lo - (0.7f64 / 0.8 * 0.3 + 0.3)).abs() < 1e-15);
        assert_eq!(hi, 1.0);
    }

    #[test]
    fn i3_takes_the_far_strip() {
        let rs = rectangle_regions(1.0, 1.0).unwrap();
        let i3 = &rs[2];
        assert_eq!(i3.sign(), Sign::Minus);
        let v = [0.1, 0.2, 0.3, 0.6, 0.0, 0.0];
        // X = (1 - 0.6) * 0.2 / 0.4 + 0.3 = 0.5
        let (lo, hi): (f64, f64) = i3.vars()[4].bounds(&v[..4]);
        assert!((lo - 0.5).abs() < 1e-15);
        assert_eq!(hi, 1.0);
        assert_eq!(i3.vars()[5].bounds(&[0.1, 0.2, 0.3, 0.6, 0.7]), (0.0, 1.0));
    }

    #[test]
    fn parameters_substitute() {
        let rs = rectangle_regions(2.0, 3.0).unwrap();
        assert_eq!(rs[0].vars()[0].bounds(&[]), (0.0, 2.0));
        assert_eq!(rs[0].vars()[1].bounds(&[1.0]), (0.0, 3.0));
        assert!(rectangle_regions(0.0, 1.0).is_err());
        assert!(square_regions(-1.0).is_err());
    }

    #[test]
    fn normalizers_are_unit_plus() {
        let js = normalizer_regions(1.0, 1.0).unwrap();
        assert_eq!(js[2].name(), "J3");
        assert!(js
            .iter()
            .all(|j| j.sign() == Sign::Plus && j.integrand() == Integrand::One));
        assert_eq!(region_by_name("J10", 1.0, 1.0).unwrap().name(), "J10");
        assert_eq!(region_by_name("I7", 1.0, 1.0).unwrap().name(), "I7");
        assert!(region_by_name::<f64>("I11", 1.0, 1.0).is_err());
    }

    #[test]
    fn malformed_region_rejected() {
        let r = rectangle_regions(1.0, 1.0).unwrap();
        let mut vars = r[0].vars().to_vec();
        vars.pop();
        assert_eq!(
            RegionSpec::new("X", vars, Sign::Plus, Integrand::One).unwrap_err(),
            CatalogError::MalformedRegion
        );
        let mut vars = r[0].vars().to_vec();
        vars.swap(0, 1);
        assert!(RegionSpec::new("X", vars, Sign::Plus, Integrand::One).is_err());
    }

    #[test]
    fn references() {
        assert_eq!(
            exact_reference("I4", 1.0, 1.0).unwrap(),
            BigRational::new(19.into(), 34560.into())
        );
        assert_eq!(
            exact_reference("J15", 1.0, 1.0).unwrap(),
            BigRational::new(1.into(), 12.into())
        );
        assert_eq!(
            exact_reference("RESULT", 1.0, 1.0).unwrap(),
            BigRational::new(11.into(), 144.into())
        );
        assert_eq!(
            exact_reference("RESULT", 2.0, 3.0).unwrap(),
            BigRational::new(11.into(), 24.into())
        );
        assert_eq!(
            exact_reference("II", 2.0, 2.0).unwrap(),
            BigRational::new((11 * 256).into(), 864.into())
        );
        assert!(matches!(
            exact_reference("I99", 1.0, 1.0),
            Err(CatalogError::UnknownName(_))
        ));
        // Sums agree with the named totals.
        let s: BigRational = ["I1", "I2", "I3", "I4", "I5"]
            .iter()
            .map(|n| exact_reference(n, 1.0, 1.0).unwrap())
            .sum();
        assert_eq!(s, exact_reference("I15", 1.0, 1.0).unwrap());
        let s: BigRational = REFERENCE_NAMES[..10]
            .iter()
            .map(|n| exact_reference(n, 1.0, 1.0).unwrap())
            .sum();
        assert_eq!(s, exact_reference("II", 1.0, 1.0).unwrap());
        let s: BigRational = REFERENCE_NAMES[10..20]
            .iter()
            .map(|n| exact_reference(n, 1.0, 1.0).unwrap())
            .sum();
        assert_eq!(s, exact_reference("JJ", 1.0, 1.0).unwrap());
    }

    #[test]
    fn i1_quadrature() {
        let r = nested_quadrature(&rectangle_regions(1.0, 1.0).unwrap()[0], &cfg()).unwrap();
        let truth = 1.0 / 34560.0;
        assert!((r.value - truth).abs() <= 1e-4 * truth, "{r:?}");
        assert!(r.est_error >= 0.0);
    }

    #[test]
    fn i5_and_j2_quadrature() {
        let i5 = nested_quadrature(&region_by_name("I5", 1.0, 1.0).unwrap(), &cfg()).unwrap();
        assert!(
            (i5.value / refv("I5", 1.0, 1.0) - 1.0).abs() < 1e-4,
            "{i5:?}"
        );
        let j2 = nested_quadrature(&region_by_name("J2", 1.0, 1.0).unwrap(), &cfg()).unwrap();
        assert!(
            (j2.value - 5.0 / 432.0).abs() < 1e-4 * 5.0 / 432.0,
            "{j2:?}"
        );
    }

    #[test]
    fn mirrored_regions_reproduce_their_partners() {
        for (m, o) in [
            ("I6", "I4"),
            ("I7", "I5"),
            ("I8", "I1"),
            ("I9", "I2"),
            ("I10", "I3"),
        ] {
            let rm = nested_quadrature(&region_by_name(m, 1.0, 1.0).unwrap(), &cfg()).unwrap();
            let ro = nested_quadrature(&region_by_name(o, 1.0, 1.0).unwrap(), &cfg()).unwrap();
            assert!(
                (rm.value - ro.value).abs() <= 2.0 * (rm.est_error + ro.est_error),
                "{rm:?} vs {ro:?}"
            );
        }
    }

    #[test]
    fn interior_mean_on_unit_square() {
        let m = interior_breakdown(1.0, 1.0, &cfg()).unwrap();
        assert!((m.numerator / (11.0 / 1728.0) - 1.0).abs() < 2e-4);
        assert!((m.normalizer - 1.0 / 12.0).abs() < 2e-4 / 12.0);
        assert!((m.value / (11.0 / 144.0) - 1.0).abs() < 2e-4, "{}", m.value);
    }

    #[test]
    fn degenerate_and_invalid_config() {
        let r = &rectangle_regions(1.0, 1.0).unwrap()[0];
        let bad = QuadConfig::with_rel_tol(2.0);
        assert!(nested_quadrature(r, &bad).is_err());
        let vars = r
            .vars()
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, mut v)| {
                if i == 0 {
                    v.upper = constant(0.0);
                }
                v
            })
            .collect();
        let empty = RegionSpec::new("E", vars, Sign::Plus, Integrand::One).unwrap();
        assert!(matches!(
            nested_quadrature(&empty, &cfg()),
            Err(CatalogError::Quad(QuadError::DegenerateRegion(_)))
        ));
    }

    #[test]
    fn budget_flag_surfaces_through_strict() {
        let r = &rectangle_regions(1.0, 1.0).unwrap()[2];
        let tight = QuadConfig {
            rel_tol: 1e-13,
            max_depth: 1,
            inner_analytic: true,
        };
        let res = nested_quadrature(r, &tight).unwrap();
        assert!(res.budget_exhausted);
        assert!(matches!(
            res.strict(),
            Err(QuadError::BudgetExhausted { .. })
        ));
    }

    #[test]
    fn full_numeric_inner_levels_agree_with_exact_inner() {
        // Unit integrand keeps the six-level numeric run cheap.
        let j1 = region_by_name("J1", 1.0, 1.0).unwrap();
        let numeric = QuadConfig {
            rel_tol: 1e-3,
            max_depth: 8,
            inner_analytic: false,
        };
        let r = nested_quadrature(&j1, &numeric).unwrap();
        assert!((r.value * 432.0f64 - 1.0).abs() < 1e-3, "{r:?}");
    }

    #[test]
    fn region_sign_holds_on_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for region in full_regions(1.0, 1.0).unwrap() {
            let mut hits = 0;
            while hits < 2000 {
                let v: [f64; 6] = std::array::from_fn(|_| rng.random());
                if region.contains(&v) {
                    hits += 1;
                    assert!(region.weight(&v) >= -1e-12, "{} at {v:?}", region.name());
                }
            }
        }
    }
}
