//! Scalar types the coefficient functions are generic over.
//!
//! Every closed-form coefficient in this crate is a rational function of `x`
//! and `ν²`, so it can be evaluated in plain `f64`, in complex arithmetic (for
//! Taylor data by contour integration) and in double-double arithmetic (for
//! the residuals that drive eigenvalue refinement).

use num_complex::Complex64;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use twofloat::TwoFloat;

pub use twofloat::TwoFloat as Dd;

pub trait Field:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
{
    fn from_f64(v: f64) -> Self;
    fn from_dd(v: Dd) -> Self;

    fn zero() -> Self {
        Self::from_f64(0.0)
    }
    fn one() -> Self {
        Self::from_f64(1.0)
    }
    fn scale(self, c: f64) -> Self {
        self * Self::from_f64(c)
    }
    fn square(self) -> Self {
        self * self
    }
}

impl Field for f64 {
    fn from_f64(v: f64) -> Self {
        v
    }
    fn from_dd(v: Dd) -> Self {
        v.hi() + v.lo()
    }
}

impl Field for Complex64 {
    fn from_f64(v: f64) -> Self {
        Complex64::new(v, 0.0)
    }
    fn from_dd(v: Dd) -> Self {
        Complex64::new(v.hi() + v.lo(), 0.0)
    }
}

impl Field for Dd {
    fn from_f64(v: f64) -> Self {
        TwoFloat::from(v)
    }
    fn from_dd(v: Dd) -> Self {
        v
    }
}

/// π to double-double precision.
pub fn dd_pi() -> Dd {
    TwoFloat::new_add(std::f64::consts::PI, 1.224_646_799_147_353_2e-16)
}

/// Square root refined by one Newton step in double-double arithmetic.
pub fn dd_sqrt(a: Dd) -> Dd {
    let s = a.hi().sqrt();
    if s == 0.0 {
        return Dd::from(0.0);
    }
    let s = Dd::from(s);
    s + (a - s * s) / (s * 2.0)
}

/// Sine by Taylor series; accurate to double-double precision for |t| ≤ π.
///
/// twofloat's own trigonometric functions stop at roughly 1e-17 absolute,
/// which is not enough for the Gauss-Lobatto nodes near the interior pole
/// of the tensor operator.
pub fn dd_sin(t: Dd) -> Dd {
    let pi = dd_pi();
    // fold into [-π/2, π/2]
    let t = if t.hi() > std::f64::consts::FRAC_PI_2 {
        pi - t
    } else if t.hi() < -std::f64::consts::FRAC_PI_2 {
        -pi - t
    } else {
        t
    };
    let t2 = t * t;
    let mut term = t;
    let mut sum = t;
    let mut k = 1.0;
    while k < 60.0 {
        term = -term * t2 / ((k + 1.0) * (k + 2.0));
        k += 2.0;
        sum += term;
        if term.hi().abs() < 1e-34 {
            break;
        }
    }
    sum
}

/// Splits a double-double into the nearest `f64` and the remainder.
pub fn split(v: Dd) -> (f64, f64) {
    let hi = v.hi() + v.lo();
    let lo = (v - hi).hi();
    (hi, lo)
}
