//! Planar and spatial primitives: signed triangle area, tetrahedron volume,
//! orientation and the host domains.
//!
//! Every checked operation rejects non-finite coordinates. The `*_raw`
//! variants skip the check and are meant for inner loops whose inputs are
//! finite by construction.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("non-finite coordinate in input")]
    NonFinite,
    #[error("invalid domain: {0}")]
    InvalidDomain(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2<T> {
    pub x: T,
    pub y: T,
}

impl<T> Point2<T> {
    pub const fn new(x: T, y: T) -> Self {
        Self { x, y }
    }
}

impl<T: Scalar> Point2<T> {
    pub fn is_finite(&self) -> bool {
        self.x.is_finite_value() && self.y.is_finite_value()
    }

    pub fn translate(&self, dx: &T, dy: &T) -> Self {
        Self::new(self.x.clone() + dx.clone(), self.y.clone() + dy.clone())
    }

    pub fn scale(&self, k: &T) -> Self {
        Self::new(self.x.clone() * k.clone(), self.y.clone() * k.clone())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point3<T> {
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T> Point3<T> {
    pub const fn new(x: T, y: T, z: T) -> Self {
        Self { x, y, z }
    }
}

impl<T: Scalar> Point3<T> {
    pub fn is_finite(&self) -> bool {
        self.x.is_finite_value() && self.y.is_finite_value() && self.z.is_finite_value()
    }
}

/// Axis-aligned rectangle `[0, a] x [0, b]`. The square is `a == b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RectDomain<T> {
    a: T,
    b: T,
}

impl<T: Scalar> RectDomain<T> {
    pub fn new(a: T, b: T) -> Result<Self, GeometryError> {
        if !a.is_finite_value() || !b.is_finite_value() || a <= T::zero() || b <= T::zero() {
            return Err(GeometryError::InvalidDomain(format!(
                "rectangle sides must be finite and positive, got a={a:?}, b={b:?}"
            )));
        }
        Ok(Self { a, b })
    }

    pub fn square(side: T) -> Result<Self, GeometryError> {
        Self::new(side.clone(), side)
    }

    pub fn a(&self) -> &T {
        &self.a
    }

    pub fn b(&self) -> &T {
        &self.b
    }

    pub fn area(&self) -> T {
        self.a.clone() * self.b.clone()
    }

    pub fn contains(&self, p: &Point2<T>) -> bool {
        p.x >= T::zero() && p.x <= self.a && p.y >= T::zero() && p.y <= self.b
    }
}

/// Axis-aligned cube `[0, side]^3`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CubeDomain<T> {
    side: T,
}

impl<T: Scalar> CubeDomain<T> {
    pub fn new(side: T) -> Result<Self, GeometryError> {
        if !side.is_finite_value() || side <= T::zero() {
            return Err(GeometryError::InvalidDomain(format!(
                "cube side must be finite and positive, got {side:?}"
            )));
        }
        Ok(Self { side })
    }

    pub fn side(&self) -> &T {
        &self.side
    }

    pub fn contains(&self, p: &Point3<T>) -> bool {
        let inside = |v: &T| *v >= T::zero() && *v <= self.side;
        inside(&p.x) && inside(&p.y) && inside(&p.z)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Orientation {
    CounterClockwise,
    Clockwise,
    Collinear,
}

/// Half the cross product `(p2 - p1) x (p3 - p1)`; positive for CCW order.
///
/// Algebraically equal to `(x1(y2-y3) + x2(y3-y1) + x3(y1-y2)) / 2`; the
/// difference form is used because it is exact under power-of-two scaling
/// and loses less to cancellation under translation.
#[inline]
pub fn signed_area_raw<T: Scalar>(p1: &Point2<T>, p2: &Point2<T>, p3: &Point2<T>) -> T {
    let ux = p2.x.clone() - p1.x.clone();
    let uy = p2.y.clone() - p1.y.clone();
    let vx = p3.x.clone() - p1.x.clone();
    let vy = p3.y.clone() - p1.y.clone();
    (ux * vy - vx * uy) * T::half()
}

pub fn signed_area<T: Scalar>(
    p1: &Point2<T>,
    p2: &Point2<T>,
    p3: &Point2<T>,
) -> Result<T, GeometryError> {
    if !(p1.is_finite() && p2.is_finite() && p3.is_finite()) {
        return Err(GeometryError::NonFinite);
    }
    Ok(signed_area_raw(p1, p2, p3))
}

pub fn triangle_area<T: Scalar>(
    p1: &Point2<T>,
    p2: &Point2<T>,
    p3: &Point2<T>,
) -> Result<T, GeometryError> {
    signed_area(p1, p2, p3).map(|s| s.abs())
}

/// Sign of the computed signed area, with no tolerance band around zero.
pub fn orientation<T: Scalar>(
    p1: &Point2<T>,
    p2: &Point2<T>,
    p3: &Point2<T>,
) -> Result<Orientation, GeometryError> {
    let s = signed_area(p1, p2, p3)?;
    Ok(if s > T::zero() {
        Orientation::CounterClockwise
    } else if s < T::zero() {
        Orientation::Clockwise
    } else {
        Orientation::Collinear
    })
}

/// `det[p2-p1, p3-p1, p4-p1] / 6`.
#[inline]
pub fn signed_volume_tetra_raw<T: Scalar>(
    p1: &Point3<T>,
    p2: &Point3<T>,
    p3: &Point3<T>,
    p4: &Point3<T>,
) -> T {
    let d = |q: &Point3<T>| {
        (
            q.x.clone() - p1.x.clone(),
            q.y.clone() - p1.y.clone(),
            q.z.clone() - p1.z.clone(),
        )
    };
    let (ax, ay, az) = d(p2);
    let (bx, by, bz) = d(p3);
    let (cx, cy, cz) = d(p4);
    let det = ax * (by.clone() * cz.clone() - bz.clone() * cy.clone())
        - ay * (bx.clone() * cz - bz * cx.clone())
        + az * (bx * cy - by * cx);
    det / T::from_u8(6).expect("6 is representable")
}

pub fn signed_volume_tetra<T: Scalar>(
    p1: &Point3<T>,
    p2: &Point3<T>,
    p3: &Point3<T>,
    p4: &Point3<T>,
) -> Result<T, GeometryError> {
    if !(p1.is_finite() && p2.is_finite() && p3.is_finite() && p4.is_finite()) {
        return Err(GeometryError::NonFinite);
    }
    Ok(signed_volume_tetra_raw(p1, p2, p3, p4))
}
