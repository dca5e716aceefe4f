//! Random triangle on the boundary of the unit square.
//!
//! The first vertex is pinned to one side (the bottom, by symmetry), the
//! second runs over one of the four sides, and the third traces the whole
//! perimeter. With `p1` and `p2` fixed the signed area is affine in the
//! position of `p3` along a side, so the innermost path integral of `|s|` is
//! done in closed form, splitting at the sign change. The two outer
//! integrals are adaptive.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{signed_area_raw, Point2};
use crate::quadrature::{integrate, Estimate, LevelTol, QuadConfig, QuadError};
use crate::scalar::Real;

/// Measure of the configuration space once `p1` is restricted to a single
/// side: `p1` ranges over length 1, while `p2` and `p3` each range over the
/// full perimeter of length 4, i.e. four `p3` path integrals of length 4.
pub const FRAME_NORMALIZER: f64 = 16.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FrameError {
    #[error("perimeter parameter must lie in [0, 4), got {0}")]
    ParamOutOfRange(f64),
    #[error("side case must be 1..=4, got {0}")]
    InvalidCase(u8),
    #[error("position along side must lie in [0, 1], got {0}")]
    PositionOutOfRange(f64),
    #[error(transparent)]
    Quad(#[from] QuadError),
}

/// A side of the unit square, in counter-clockwise order from the origin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    Bottom,
    Right,
    Top,
    Left,
}

impl Side {
    pub const ALL: [Side; 4] = [Side::Bottom, Side::Right, Side::Top, Side::Left];

    pub fn index(self) -> usize {
        self as usize
    }

    /// Point at arc-length offset `u in [0, 1]` along this side, walking
    /// counter-clockwise.
    pub fn point<T: Real>(self, u: T) -> Point2<T> {
        let (o, l) = (T::zero(), T::one());
        match self {
            Side::Bottom => Point2::new(u, o),
            Side::Right => Point2::new(l, u),
            Side::Top => Point2::new(l - u, l),
            Side::Left => Point2::new(o, l - u),
        }
    }

    /// The side reached by a quarter turn counter-clockwise.
    pub fn rotate(self) -> Side {
        Side::ALL[(self.index() + 1) % 4]
    }
}

/// Arc-length coordinate on the unit square boundary, `0 <= t < 4`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct PerimeterParam<T>(T);

impl<T: Real> PerimeterParam<T> {
    pub fn new(t: T) -> Result<Self, FrameError> {
        if t >= T::zero() && t < T::c(4.0) {
            Ok(Self(t))
        } else {
            Err(FrameError::ParamOutOfRange(t.to_f64_lossy()))
        }
    }

    pub fn get(self) -> T {
        self.0
    }

    pub fn side(self) -> Side {
        let k = self.0.floor().to_f64_lossy() as usize;
        Side::ALL[k.min(3)]
    }

    pub fn point(self) -> Point2<T> {
        let side = self.side();
        side.point(self.0 - T::c(side.index() as f64))
    }
}

/// `t in [0,1) -> (t,0)`, `[1,2) -> (1,t-1)`, `[2,3) -> (3-t,1)`, `[3,4) -> (0,4-t)`.
pub fn frame_point<T: Real>(t: T) -> Result<Point2<T>, FrameError> {
    Ok(PerimeterParam::new(t)?.point())
}

/// Which side hosts `p2` when `p1` is on the bottom: 1 bottom, 2 right,
/// 3 top, 4 left.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SideCase(u8);

impl SideCase {
    pub const ALL: [SideCase; 4] = [SideCase(1), SideCase(2), SideCase(3), SideCase(4)];

    pub fn new(case_id: u8) -> Result<Self, FrameError> {
        if (1..=4).contains(&case_id) {
            Ok(Self(case_id))
        } else {
            Err(FrameError::InvalidCase(case_id))
        }
    }

    pub fn id(self) -> u8 {
        self.0
    }

    pub fn side(self) -> Side {
        Side::ALL[self.0 as usize - 1]
    }

    /// Known polynomial in `x1` for this case.
    pub fn closed_form<T: Real>(self, x1: T) -> T {
        let c = T::c;
        let x2 = x1 * x1;
        match self.0 {
            1 => c(0.5) - x1 + x2,
            2 => (c(11.0) - c(8.0) * x1 + c(3.0) * x2) / c(12.0),
            3 => (c(11.0) - c(6.0) * x1 + c(6.0) * x2) / c(12.0),
            _ => (c(6.0) + c(2.0) * x1 + c(3.0) * x2) / c(12.0),
        }
    }
}

/// `17/6 - 2 x1 + 2 x1^2`, the sum of the four case polynomials.
pub fn frame_sum_closed_form<T: Real>(x1: T) -> T {
    T::c(17.0 / 6.0) - T::c(2.0) * x1 + T::c(2.0) * x1 * x1
}

/// `int_0^1 |s0 + (s1 - s0) u| du`.
fn abs_affine_integral<T: Real>(s0: T, s1: T) -> T {
    if s0 * s1 >= T::zero() {
        (s0 + s1).abs() * T::c(0.5)
    } else {
        (s0 * s0 + s1 * s1) / (T::c(2.0) * (s0.abs() + s1.abs()))
    }
}

/// Exact path integral of the triangle area as `p3` runs along `side`.
pub fn side_path_integral<T: Real>(p1: &Point2<T>, p2: &Point2<T>, side: Side) -> T {
    let s0 = signed_area_raw(p1, p2, &side.point(T::zero()));
    let s1 = signed_area_raw(p1, p2, &side.point(T::one()));
    abs_affine_integral(s0, s1)
}

fn check_position<T: Real>(u: T) -> Result<(), FrameError> {
    if u >= T::zero() && u <= T::one() {
        Ok(())
    } else {
        Err(FrameError::PositionOutOfRange(u.to_f64_lossy()))
    }
}

/// Double path integral of the triangle area with `p1` at offset `u1` on
/// `p1_side`, `p2` over `p2_side` and `p3` over the sides in `p3_sides`.
pub fn path_case_estimate<T: Real>(
    p1_side: Side,
    u1: T,
    p2_side: Side,
    p3_sides: &[Side],
    cfg: &QuadConfig<T>,
) -> Result<Estimate<T>, FrameError> {
    cfg.validate()?;
    check_position(u1)?;
    let p1 = p1_side.point(u1);
    let tol = cfg.level(1);
    Ok(integrate(
        |u2| {
            let p2 = p2_side.point(u2);
            let v = p3_sides
                .iter()
                .fold(T::zero(), |acc, &s| acc + side_path_integral(&p1, &p2, s));
            Estimate::exact(v)
        },
        T::zero(),
        T::one(),
        &tol,
    ))
}

/// One of the four side cases with `p1 = (x1, 0)`, as a value with error.
pub fn side_case_estimate<T: Real>(
    case: SideCase,
    x1: T,
    cfg: &QuadConfig<T>,
) -> Result<Estimate<T>, FrameError> {
    path_case_estimate(Side::Bottom, x1, case.side(), &Side::ALL, cfg)
}

pub fn side_case_value<T: Real>(
    case: SideCase,
    x1: T,
    cfg: &QuadConfig<T>,
) -> Result<T, FrameError> {
    Ok(side_case_estimate(case, x1, cfg)?.value)
}

fn frame_sum_estimate<T: Real>(
    p1_side: Side,
    u1: T,
    cfg: &QuadConfig<T>,
) -> Result<Estimate<T>, FrameError> {
    let mut total = Estimate::zero();
    for p2_side in Side::ALL {
        let e = path_case_estimate(p1_side, u1, p2_side, &Side::ALL, cfg)?;
        total.value = total.value + e.value;
        total.error = total.error + e.error;
        total.evaluations += e.evaluations;
        total.exhausted |= e.exhausted;
    }
    Ok(total)
}

/// Sum of the four side cases at `p1 = (x1, 0)`.
pub fn frame_sum_poly<T: Real>(x1: T, cfg: &QuadConfig<T>) -> Result<T, FrameError> {
    Ok(frame_sum_estimate(Side::Bottom, x1, cfg)?.value)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameMean<T> {
    /// Integral of the four-case sum over the position of `p1`.
    pub numerator: T,
    pub value: T,
    pub est_error: T,
    pub evaluations: u64,
    pub budget_exhausted: bool,
}

/// Mean triangle area with `p1` restricted to `p1_side`. Every side gives
/// the same answer; the bottom is the canonical choice.
pub fn frame_breakdown_on<T: Real>(
    p1_side: Side,
    cfg: &QuadConfig<T>,
) -> Result<FrameMean<T>, FrameError> {
    cfg.validate()?;
    let tol: LevelTol<T> = cfg.level(0);
    let est = integrate(
        |u1| frame_sum_estimate(p1_side, u1, cfg).expect("u1 inside [0, 1]"),
        T::zero(),
        T::one(),
        &tol,
    );
    let norm = T::c(FRAME_NORMALIZER);
    Ok(FrameMean {
        numerator: est.value,
        value: est.value / norm,
        est_error: est.error / norm,
        evaluations: est.evaluations,
        budget_exhausted: est.exhausted,
    })
}

pub fn frame_breakdown<T: Real>(cfg: &QuadConfig<T>) -> Result<FrameMean<T>, FrameError> {
    frame_breakdown_on(Side::Bottom, cfg)
}

pub fn expected_area_frame<T: Real>(cfg: &QuadConfig<T>) -> Result<T, FrameError> {
    Ok(frame_breakdown(cfg)?.value)
}
