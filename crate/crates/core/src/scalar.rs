//! Coefficient fields.
//!
//! Every algebraic routine in this crate is generic over [`Scalar`], which is
//! implemented for exact rationals ([`Q`]) and for `f64`. Static Lie-algebra
//! computations run over `Q`; flows and curvature run over `f64`.

use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational numbers.
pub type Q = BigRational;

pub trait Scalar:
    Clone
    + Debug
    + Display
    + PartialEq
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// True for the exact field.
    const EXACT: bool;

    fn from_i64(n: i64) -> Self;
    fn from_ratio(num: i64, den: i64) -> Self;
    fn from_f64_lossy(x: f64) -> Self;
    fn from_q(x: &Q) -> Self;
    fn to_f64(&self) -> f64;

    /// Zero test used for pivoting and pruning: exact for `Q`, `|x| <= tol` for `f64`.
    fn is_zero_tol(&self, tol: f64) -> bool;

    /// Square root when it exists in the field (perfect squares only for `Q`).
    fn sqrt_checked(&self) -> Option<Self>;

    fn abs_val(&self) -> Self {
        if self.to_f64() < 0.0 {
            -self.clone()
        } else {
            self.clone()
        }
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_i64(n: i64) -> Self {
        n as f64
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn from_f64_lossy(x: f64) -> Self {
        x
    }

    fn from_q(x: &Q) -> Self {
        <Q as Scalar>::to_f64(x)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn is_zero_tol(&self, tol: f64) -> bool {
        self.abs() <= tol
    }

    fn sqrt_checked(&self) -> Option<Self> {
        (*self >= 0.0).then(|| self.sqrt())
    }
}

impl Scalar for Q {
    const EXACT: bool = true;

    fn from_i64(n: i64) -> Self {
        Q::from_integer(BigInt::from(n))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Q::new(BigInt::from(num), BigInt::from(den))
    }

    fn from_f64_lossy(x: f64) -> Self {
        Q::from_float(x).unwrap_or_else(Q::zero)
    }

    fn from_q(x: &Q) -> Self {
        x.clone()
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn is_zero_tol(&self, _tol: f64) -> bool {
        self.is_zero()
    }

    fn sqrt_checked(&self) -> Option<Self> {
        if self.is_negative() {
            return None;
        }
        let n = self.numer().sqrt();
        let d = self.denom().sqrt();
        (&n * &n == *self.numer() && &d * &d == *self.denom()).then(|| Q::new(n, d))
    }

    fn abs_val(&self) -> Self {
        self.abs()
    }
}

/// Convenience constructor for an integer rational.
pub fn q(n: i64) -> Q {
    Q::from_i64(n)
}

/// Convenience constructor for `num/den`.
pub fn qr(num: i64, den: i64) -> Q {
    Q::from_ratio(num, den)
}

/// Best rational approximation of `x` with denominator at most `max_den`,
/// accepted only if it lies within `tol` of `x`. Uses continued fractions.
pub fn rationalize(x: f64, tol: f64, max_den: i64) -> Option<Q> {
    if !x.is_finite() {
        return None;
    }
    let (mut p0, mut q0, mut p1, mut q1) = (0i64, 1i64, 1i64, 0i64);
    let mut r = x;
    let mut best = None;
    for _ in 0..64 {
        let a = r.floor();
        if a.abs() > 1e15 {
            break;
        }
        let a = a as i64;
        let p2 = a.checked_mul(p1).and_then(|v| v.checked_add(p0))?;
        let q2 = a.checked_mul(q1).and_then(|v| v.checked_add(q0))?;
        if q2 > max_den {
            break;
        }
        if (p2 as f64 / q2 as f64 - x).abs() <= tol {
            best = Some(qr(p2, q2));
            break;
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let frac = r - r.floor();
        if frac.abs() < 1e-300 {
            break;
        }
        r = 1.0 / frac;
    }
    best
}
