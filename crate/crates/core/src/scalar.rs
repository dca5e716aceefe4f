//! Scalar abstractions shared by every module.
//!
//! Geometry is written against [`Scalar`], which covers both IEEE floats and
//! exact rationals. Quadrature and sampling additionally need [`Real`].

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{Float, FromPrimitive, Num, Signed};

/// A number type the geometric formulas can be evaluated in.
pub trait Scalar: Clone + PartialOrd + Num + Signed + FromPrimitive + Debug {
    /// `false` for NaN and infinities; always `true` for exact types.
    fn is_finite_value(&self) -> bool;

    fn half() -> Self {
        Self::one() / (Self::one() + Self::one())
    }
}

macro_rules! impl_float_scalar {
    ($($t:ty),*) => {$(
        impl Scalar for $t {
            #[inline]
            fn is_finite_value(&self) -> bool {
                self.is_finite()
            }

            #[inline]
            fn half() -> Self {
                0.5
            }
        }
    )*};
}

impl_float_scalar!(f32, f64);

macro_rules! impl_ratio_scalar {
    ($($t:ty),*) => {$(
        impl Scalar for Ratio<$t> {
            #[inline]
            fn is_finite_value(&self) -> bool {
                true
            }
        }
    )*};
}

impl_ratio_scalar!(i64, i128, BigInt);

/// Floating-point scalar usable by the numeric routines (quadrature, Monte-Carlo).
pub trait Real: Scalar + Float + Copy + Send + Sync + 'static {
    /// Lossless for the constants used here (quadrature nodes, tolerances).
    #[inline]
    fn c(v: f64) -> Self {
        <Self as FromPrimitive>::from_f64(v).expect("finite constant")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        num_traits::ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    #[test]
    fn finiteness() {
        assert!(1.0f64.is_finite_value());
        assert!(!f64::NAN.is_finite_value());
        assert!(!f32::INFINITY.is_finite_value());
        assert!(BigRational::new(1.into(), 3.into()).is_finite_value());
    }

    #[test]
    fn half_is_exact() {
        assert_eq!(f64::half(), 0.5);
        assert_eq!(BigRational::half(), BigRational::new(1.into(), 2.into()));
        assert_eq!(
            Ratio::<i64>::half() * Ratio::from_integer(2),
            Ratio::from_integer(1)
        );
    }
}
