//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Real floating-point scalar: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + NumAssign + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal into the scalar type.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }

    /// Converts a count or index into the scalar type.
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar type")
    }

    /// A tolerance of `x`, floored at a small multiple of machine epsilon so
    /// that `f32` instantiations get attainable thresholds.
    fn tol(x: f64) -> Self {
        Self::lit(x).max(Self::epsilon() * Self::lit(64.0))
    }

    fn two_pi() -> Self {
        Self::TAU()
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Reduces an angle into the half-open interval (-pi, pi].
pub fn wrap_phase<T: Real>(phi: T) -> T {
    let tau = T::two_pi();
    let pi = T::PI();
    if phi > -pi && phi <= pi {
        return phi;
    }
    let mut r = phi - tau * ((phi + pi) / tau).floor();
    // r now lies in [-pi, pi); fold the lower endpoint onto +pi
    if r <= -pi {
        r += tau;
    }
    if r > pi {
        r -= tau;
    }
    r
}

/// Distance from `x` to the nearest integer.
pub fn distance_to_integer<T: Real>(x: T) -> T {
    (x - x.round()).abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn wrap_keeps_canonical_interval() {
        assert_eq!(wrap_phase(0.0_f64), 0.0);
        assert_eq!(wrap_phase(PI), PI);
        assert_eq!(wrap_phase(-PI), PI);
        assert!((wrap_phase(3.0 * PI / 2.0) + PI / 2.0).abs() < 1e-15);
        assert!((wrap_phase(2.0 * PI + PI / 3.0) - PI / 3.0).abs() < 1e-15);
        assert!((wrap_phase(-7.0 * PI) - PI).abs() < 1e-14);
    }

    #[test]
    fn wrap_output_in_range() {
        for i in -200..200 {
            let phi = i as f64 * 0.173;
            let w = wrap_phase(phi);
            assert!(w > -PI && w <= PI, "{phi} -> {w}");
            let turns = (phi - w) / (2.0 * PI);
            assert!((turns - turns.round()).abs() < 1e-12);
        }
    }

    #[test]
    fn tolerance_floor_for_f32() {
        assert_eq!(f64::tol(1e-12), 1e-12);
        assert!(f32::tol(1e-12) > f32::EPSILON);
    }

    #[test]
    fn integer_distance() {
        assert_eq!(distance_to_integer(2.0_f64), 0.0);
        assert!((distance_to_integer(2.5_f64) - 0.5).abs() < 1e-15);
        assert!((distance_to_integer(-0.9_f64) - 0.1).abs() < 1e-15);
    }
}
