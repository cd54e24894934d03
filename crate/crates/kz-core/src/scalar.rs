//! Scalar abstraction shared by the exact (rational) and numeric (f64) layers.
//!
//! Combinatorial algebra (shuffle regularization, normal forms, kernels) runs
//! over `BigRational` so that identities hold exactly; series whose
//! coefficients involve zeta values or polylogarithm evaluations run over
//! `f64`. A computation fixes one scalar kind throughout; conversions happen
//! only at the boundary via [`Scalar::from_rational`].

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

/// Coefficient ring for truncated series and shuffle polynomials.
///
/// Requirements beyond ring arithmetic: embedding of `ℚ`, exact division by
/// small integers (used for factorials in exponentials), and a magnitude for
/// residual reporting (`abs_f64` is exact for `f64`, approximate for
/// rationals, and used only for diagnostics and tolerance checks).
pub trait Scalar:
    Clone
    + PartialEq
    + Debug
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn from_rational(r: &BigRational) -> Self;

    fn from_i64(n: i64) -> Self;

    /// Exact division by a nonzero integer (always representable here:
    /// `f64` divides, rationals scale the denominator).
    fn div_int(&self, n: i64) -> Self;

    /// Magnitude as `f64`, for residual reports and zero-pruning of floats.
    fn abs_f64(&self) -> f64;

    /// Equality up to `tol` in magnitude; exact equality for rationals.
    fn approx_eq(&self, other: &Self, tol: f64) -> bool;

    /// JSON form: a number for `f64`, an exact `"num/den"` string for
    /// rationals.
    fn to_json(&self) -> serde_json::Value;

    fn from_json(v: &serde_json::Value) -> Option<Self>;
}

impl Scalar for f64 {
    fn from_rational(r: &BigRational) -> Self {
        rational_to_f64(r)
    }

    fn from_i64(n: i64) -> Self {
        n as f64
    }

    fn div_int(&self, n: i64) -> Self {
        self / (n as f64)
    }

    fn abs_f64(&self) -> f64 {
        self.abs()
    }

    fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        (self - other).abs() <= tol
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::json!(self)
    }

    fn from_json(v: &serde_json::Value) -> Option<Self> {
        v.as_f64()
    }
}

impl Scalar for BigRational {
    fn from_rational(r: &BigRational) -> Self {
        r.clone()
    }

    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn div_int(&self, n: i64) -> Self {
        assert!(n != 0, "division by zero integer");
        self / BigRational::from_integer(BigInt::from(n))
    }

    fn abs_f64(&self) -> f64 {
        rational_to_f64(&self.abs())
    }

    fn approx_eq(&self, other: &Self, _tol: f64) -> bool {
        self == other
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::Value::String(format!("{}/{}", self.numer(), self.denom()))
    }

    fn from_json(v: &serde_json::Value) -> Option<Self> {
        let s = v.as_str()?;
        let (n, d) = s.split_once('/').unwrap_or((s, "1"));
        Some(BigRational::new(n.parse().ok()?, d.parse().ok()?))
    }
}

/// Convert a rational to `f64` without overflowing on large numerators or
/// denominators: falls back to bit-length scaling when direct conversion
/// produces non-finite intermediates.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    // Scale both parts down by a common power of two.
    let shift = (r.numer().bits().max(r.denom().bits()) as i64 - 900).max(0) as u64;
    let n = (r.numer() >> shift).to_f64().unwrap_or(f64::NAN);
    let d = (r.denom() >> shift).to_f64().unwrap_or(f64::NAN);
    n / d
}

/// Exact rational from an integer pair, for test fixtures.
pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}
