//! Exact rational scalars and their wire format.
//!
//! Rationals cross every serialized interface as `"p/q"` strings (`"p"` when
//! the denominator is 1), never as floats, so reports stay exact.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::{Error, Result};

/// Exact scalar used throughout the group-side modules.
pub type Rational = BigRational;

/// Rational from an integer.
pub fn rat(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// Rational from numerator and denominator.
pub fn ratio(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    s.trim()
        .parse::<BigRational>()
        .map_err(|e| Error::Parse(format!("bad rational {s:?}: {e}")))
}

/// Formats as `"p/q"`, or `"p"` when the denominator is 1.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

/// Exact conversion of a finite float; every finite f64 is a dyadic rational.
pub fn rational_from_f64(x: f64) -> Result<Rational> {
    BigRational::from_float(x).ok_or_else(|| Error::Parse(format!("non-finite float {x}")))
}

/// Nearest-f64 view of a rational.
pub fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// |r| as a rational.
pub fn rational_abs(r: &Rational) -> Rational {
    r.abs()
}

/// True iff `r` is zero.
pub fn is_zero(r: &Rational) -> bool {
    r.is_zero()
}
