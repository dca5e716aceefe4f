//! One-dimensional adaptive Gauss-Kronrod quadrature that composes into
//! iterated (nested) integrals.
//!
//! An integrand returns an [`Estimate`] rather than a bare value so that the
//! error of an inner integral can be carried outward. The rule error of a
//! level drives subdivision at that level; inner errors are only accumulated
//! into the reported bound, since bisecting the outer interval cannot reduce
//! them.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::Real;

// 15-point Kronrod abscissae on [-1, 1] (positive half, descending) and
// weights, with the weights of the embedded 7-point Gauss rule at the odd
// Kronrod abscissae.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Number of integrand calls per Gauss-Kronrod panel.
pub const GK15_POINTS: usize = 15;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuadError {
    #[error("invalid quadrature config: {0}")]
    InvalidConfig(String),
    #[error("outermost integration interval of region {0} is empty")]
    DegenerateRegion(String),
    #[error("subdivision budget exhausted for {name}: value {value:e}, est. error {est_error:e}")]
    BudgetExhausted {
        name: String,
        value: f64,
        est_error: f64,
    },
}

/// Controls for iterated quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadConfig<T> {
    /// Target relative error of the complete iterated integral.
    pub rel_tol: T,
    /// Bisection depth cap per level; a panel of width `(b - a) / 2^max_depth`
    /// is never split further.
    pub max_depth: u32,
    /// Integrate the two innermost variables with exact polynomial rules.
    pub inner_analytic: bool,
}

impl<T: Real> Default for QuadConfig<T> {
    fn default() -> Self {
        Self {
            rel_tol: T::c(1e-4),
            max_depth: 16,
            inner_analytic: true,
        }
    }
}

impl<T: Real> QuadConfig<T> {
    pub fn with_rel_tol(rel_tol: T) -> Self {
        Self {
            rel_tol,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), QuadError> {
        if !(self.rel_tol > T::zero() && self.rel_tol < T::one()) {
            return Err(QuadError::InvalidConfig(format!(
                "rel_tol must lie in (0, 1), got {:?}",
                self.rel_tol
            )));
        }
        if self.max_depth < 1 {
            return Err(QuadError::InvalidConfig("max_depth must be >= 1".into()));
        }
        Ok(())
    }

    /// Tolerance for level `level` of a `levels`-deep iterated integral.
    ///
    /// The budget halves at each level inward, so the sum over all levels
    /// stays below `rel_tol`.
    pub fn level(&self, level: usize) -> LevelTol<T> {
        let rel = self.rel_tol / T::c(2.0).powi(level as i32 + 1);
        LevelTol {
            rel,
            abs: T::zero(),
            max_depth: self.max_depth,
        }
    }
}

/// Stopping rule for one adaptive level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelTol<T> {
    pub rel: T,
    pub abs: T,
    pub max_depth: u32,
}

impl<T: Real> LevelTol<T> {
    pub fn new(rel: T, abs: T, max_depth: u32) -> Self {
        Self {
            rel,
            abs,
            max_depth,
        }
    }
}

/// A value with an error bound, the number of innermost integrand calls it
/// took, and whether any level hit its depth cap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate<T> {
    pub value: T,
    pub error: T,
    pub evaluations: u64,
    pub exhausted: bool,
}

impl<T: Real> Estimate<T> {
    pub fn exact(value: T) -> Self {
        Self {
            value,
            error: T::zero(),
            evaluations: 1,
            exhausted: false,
        }
    }

    pub fn zero() -> Self {
        Self {
            value: T::zero(),
            error: T::zero(),
            evaluations: 0,
            exhausted: false,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Panel<T> {
    a: T,
    b: T,
    depth: u32,
    value: T,
    rule_err: T,
    inner_err: T,
    evaluations: u64,
    exhausted: bool,
}

fn nodes<T: Real>(a: T, b: T) -> [T; GK15_POINTS] {
    let center = (a + b) * T::c(0.5);
    let half = (b - a) * T::c(0.5);
    let mut x = [center; GK15_POINTS];
    for j in 0..7 {
        let dx = half * T::c(XGK[j]);
        x[2 * j] = center - dx;
        x[2 * j + 1] = center + dx;
    }
    x
}

/// QUADPACK error heuristic: scale `|K - G|` against the variation of the
/// integrand and floor it at the roundoff level of the result.
fn rescale_error<T: Real>(err: T, resabs: T, resasc: T) -> T {
    let mut err = err.abs();
    if resasc != T::zero() && err != T::zero() {
        let scale = (T::c(200.0) * err / resasc).powf(T::c(1.5));
        err = if scale < T::one() {
            resasc * scale
        } else {
            resasc
        };
    }
    let eps = T::epsilon();
    if resabs > T::min_positive_value() / (T::c(50.0) * eps) {
        err = err.max(T::c(50.0) * eps * resabs);
    }
    err
}

fn combine<T: Real>(a: T, b: T, depth: u32, f: &[Estimate<T>; GK15_POINTS]) -> Panel<T> {
    let half = (b - a) * T::c(0.5);
    let fc = f[14].value;
    let mut kronrod = fc * T::c(WGK[7]);
    let mut gauss = fc * T::c(WG[3]);
    let mut resabs = fc.abs() * T::c(WGK[7]);
    let mut inner = f[14].error * T::c(WGK[7]);
    for j in 0..7 {
        let (lo, hi) = (&f[2 * j], &f[2 * j + 1]);
        let w = T::c(WGK[j]);
        kronrod = kronrod + w * (lo.value + hi.value);
        resabs = resabs + w * (lo.value.abs() + hi.value.abs());
        inner = inner + w * (lo.error + hi.error);
        if j % 2 == 1 {
            gauss = gauss + T::c(WG[j / 2]) * (lo.value + hi.value);
        }
    }
    let mean = kronrod * T::c(0.5);
    let mut resasc = T::c(WGK[7]) * (fc - mean).abs();
    for j in 0..7 {
        resasc = resasc
            + T::c(WGK[j]) * ((f[2 * j].value - mean).abs() + (f[2 * j + 1].value - mean).abs());
    }
    let h = half.abs();
    Panel {
        a,
        b,
        depth,
        value: kronrod * half,
        rule_err: rescale_error((kronrod - gauss) * half, resabs * h, resasc * h),
        inner_err: inner * h,
        evaluations: f.iter().map(|e| e.evaluations).sum(),
        exhausted: f.iter().any(|e| e.exhausted),
    }
}

fn adapt<T, P>(a: T, b: T, tol: &LevelTol<T>, mut panel: P) -> Estimate<T>
where
    T: Real,
    P: FnMut(T, T, u32) -> Panel<T>,
{
    // Reversed or empty intervals are measure-zero corner effects.
    if !nonempty(a, b) {
        return Estimate::zero();
    }
    let mut panels = vec![panel(a, b, 0)];
    let mut capped = false;
    loop {
        let value: T = panels.iter().fold(T::zero(), |s, p| s + p.value);
        let rule_err: T = panels.iter().fold(T::zero(), |s, p| s + p.rule_err);
        if rule_err <= tol.abs.max(tol.rel * value.abs()) || !rule_err.is_finite() {
            break;
        }
        let i = panels
            .iter()
            .enumerate()
            .max_by(|(_, p), (_, q)| p.rule_err.partial_cmp(&q.rule_err).unwrap())
            .map(|(i, _)| i)
            .expect("at least one panel");
        if panels[i].depth >= tol.max_depth {
            capped = true;
            break;
        }
        let p = panels[i];
        let mid = (p.a + p.b) * T::c(0.5);
        if !(mid > p.a && mid < p.b) {
            // Panel narrower than the float grid.
            capped = true;
            break;
        }
        panels[i] = panel(p.a, mid, p.depth + 1);
        panels.push(panel(mid, p.b, p.depth + 1));
    }
    panels.sort_by(|p, q| p.a.partial_cmp(&q.a).unwrap());
    let mut out = Estimate::zero();
    out.exhausted = capped;
    for p in &panels {
        out.value = out.value + p.value;
        out.error = out.error + p.rule_err + p.inner_err;
        out.evaluations += p.evaluations;
        out.exhausted |= p.exhausted;
    }
    out
}

/// Adaptive integral of `f` over `[a, b]`. Never evaluates `f` at the
/// endpoints. An interval with `b <= a` integrates to zero.
pub fn integrate<T, F>(f: F, a: T, b: T, tol: &LevelTol<T>) -> Estimate<T>
where
    T: Real,
    F: Fn(T) -> Estimate<T>,
{
    adapt(a, b, tol, |lo, hi, depth| {
        let x = nodes(lo, hi);
        let fx = x.map(&f);
        combine(lo, hi, depth, &fx)
    })
}

/// As [`integrate`], but evaluates the 15 nodes of each panel on the rayon
/// pool. The result is bitwise identical to the sequential version.
pub fn integrate_par<T, F>(f: F, a: T, b: T, tol: &LevelTol<T>) -> Estimate<T>
where
    T: Real,
    F: Fn(T) -> Estimate<T> + Sync,
{
    adapt(a, b, tol, |lo, hi, depth| {
        let x = nodes(lo, hi);
        let v: Vec<Estimate<T>> = x.par_iter().map(|&xi| f(xi)).collect();
        let fx: [Estimate<T>; GK15_POINTS] = v.try_into().expect("15 nodes");
        combine(lo, hi, depth, &fx)
    })
}

/// Plain-function convenience wrapper around [`integrate`].
pub fn integrate_fn<T, F>(f: F, a: T, b: T, tol: &LevelTol<T>) -> Estimate<T>
where
    T: Real,
    F: Fn(T) -> T,
{
    integrate(|x| Estimate::exact(f(x)), a, b, tol)
}

/// Three-point Gauss-Legendre rule; exact for polynomials of degree <= 5.
/// `lo < hi`, false when either is NaN.
pub(crate) fn nonempty<T: PartialOrd>(lo: T, hi: T) -> bool {
    hi.partial_cmp(&lo) == Some(Ordering::Greater)
}

pub fn gauss_legendre3<T, F>(mut f: F, a: T, b: T) -> T
where
    T: Real,
    F: FnMut(T) -> T,
{
    let center = (a + b) * T::c(0.5);
    let half = (b - a) * T::c(0.5);
    let d = half * T::c(0.6f64.sqrt());
    half * (T::c(8.0 / 9.0) * f(center) + T::c(5.0 / 9.0) * (f(center - d) + f(center + d)))
}
