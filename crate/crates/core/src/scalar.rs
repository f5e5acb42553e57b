//! Scalar abstraction shared by the bound calculus and the valid-point
//! families.
//!
//! Everything that is a closed-form expression in `x`, `p`, `delta` or `eta`
//! is written once against [`Scalar`] and instantiated either with exact
//! rationals (certificates, tables, acceptance checks) or with floats
//! (plotting).

use std::fmt::Debug;
use std::ops::Neg;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{Num, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Ordered field elements the closed-form bound functions are evaluated in.
pub trait Scalar: Num + Clone + PartialOrd + Debug + Neg<Output = Self> {
    /// `true` when arithmetic is exact, so equalities can be asserted as such.
    const EXACT: bool;

    fn from_ratio(num: i64, den: i64) -> Self;

    fn from_rational(r: &BigRational) -> Self;

    fn to_f64(&self) -> f64;

    fn from_int(n: i64) -> Self {
        Self::from_ratio(n, 1)
    }

    /// Equality up to the representation's rounding.
    fn approx_eq(&self, other: &Self) -> bool {
        if Self::EXACT {
            self == other
        } else {
            let (a, b) = (self.to_f64(), other.to_f64());
            (a - b).abs() <= 1e-9 * (1.0 + a.abs().max(b.abs()))
        }
    }

    /// `self <= other` up to the representation's rounding.
    fn approx_le(&self, other: &Self) -> bool {
        self <= other || self.approx_eq(other)
    }
}

/// Larger of two partially ordered values (the first on ties or NaN).
pub fn max_of<S: Scalar>(a: S, b: S) -> S {
    if b > a {
        b
    } else {
        a
    }
}

/// Smaller of two partially ordered values (the first on ties or NaN).
pub fn min_of<S: Scalar>(a: S, b: S) -> S {
    if b < a {
        b
    } else {
        a
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn from_rational(r: &BigRational) -> Self {
        ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
    }

    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Scalar for f32 {
    const EXACT: bool = false;

    fn from_ratio(num: i64, den: i64) -> Self {
        (num as f64 / den as f64) as f32
    }

    fn from_rational(r: &BigRational) -> Self {
        ToPrimitive::to_f64(r).unwrap_or(f64::NAN) as f32
    }

    fn to_f64(&self) -> f64 {
        f64::from(*self)
    }

    fn approx_eq(&self, other: &Self) -> bool {
        let (a, b) = (f64::from(*self), f64::from(*other));
        (a - b).abs() <= 1e-5 * (1.0 + a.abs().max(b.abs()))
    }
}

macro_rules! fixed_width_ratio {
    ($int:ty) => {
        impl Scalar for Ratio<$int> {
            const EXACT: bool = true;

            fn from_ratio(num: i64, den: i64) -> Self {
                Ratio::new(<$int>::from(num), <$int>::from(den))
            }

            /// Panics if the value does not fit the fixed-width representation.
            fn from_rational(r: &BigRational) -> Self {
                let num = r.numer().to_string().parse::<$int>();
                let den = r.denom().to_string().parse::<$int>();
                match (num, den) {
                    (Ok(n), Ok(d)) => Ratio::new(n, d),
                    _ => panic!("{r} does not fit in Ratio<{}>", stringify!($int)),
                }
            }

            fn to_f64(&self) -> f64 {
                self.numer().to_f64().unwrap_or(f64::NAN)
                    / self.denom().to_f64().unwrap_or(f64::NAN)
            }
        }
    };
}

fixed_width_ratio!(i64);
fixed_width_ratio!(i128);

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn from_ratio(num: i64, den: i64) -> Self {
        Ratio::new(BigInt::from(num), BigInt::from(den))
    }

    fn from_rational(r: &BigRational) -> Self {
        r.clone()
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

/// Exact rational `num/den`.
pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::from_ratio(num, den)
}

/// Parses `a/b`, an integer, or a decimal such as `0.5406` into an exact
/// rational (`0.5406` becomes `2703/5000`).
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let t = text.trim();
    let bad = || Error::Usage(format!("not a rational number: {text:?}"));
    if t.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::Usage(format!("zero denominator in {text:?}")));
        }
        return Ok(Ratio::new(n, d));
    }
    let (negative, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if (int_part.is_empty() && frac_part.is_empty())
        || !int_part.chars().all(|c| c.is_ascii_digit())
        || !frac_part.chars().all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let numer: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().map_err(|_| bad())?
    };
    let denom = num_traits::pow(BigInt::from(10), frac_part.len());
    let value = Ratio::new(numer, denom);
    Ok(if negative { -value } else { value })
}

/// Decimal rendering with `digits` fractional digits, rounded half away
/// from zero. Exact: no floating point is involved.
pub fn to_decimal(r: &BigRational, digits: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), digits);
    let scaled = r.abs() * Ratio::from_integer(scale.clone());
    let (q, rem) = scaled.numer().div_rem(scaled.denom());
    let twice = rem * 2;
    let rounded = if twice >= *scaled.denom() { q + 1 } else { q };
    let (int_part, frac_part) = rounded.div_rem(&scale);
    let sign = if r.is_negative() && !(int_part.is_zero() && frac_part.is_zero()) {
        "-"
    } else {
        ""
    };
    if digits == 0 {
        return format!("{sign}{int_part}");
    }
    let frac = frac_part.to_string();
    format!("{sign}{int_part}.{}{frac}", "0".repeat(digits - frac.len()))
}

/// Always `num/den`, even for integers.
pub fn to_fraction(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Smallest integer `>= r`.
pub fn ceil_int(r: &BigRational) -> BigInt {
    r.ceil().to_integer()
}

/// Largest integer `<= r`.
pub fn floor_int(r: &BigRational) -> BigInt {
    r.floor().to_integer()
}

/// `floor(r * 2^53)` clamped to `[0, 2^53]`, for `r` in `[0, 1]`: the
/// acceptance threshold of a 53-bit uniform draw.
pub fn unit_threshold_53(r: &BigRational) -> u64 {
    let scaled = r * Ratio::from_integer(BigInt::one() << 53);
    let t = scaled.floor().to_integer();
    match t.sign() {
        Sign::Minus => 0,
        _ => t.to_u64().unwrap_or(u64::MAX).min(1 << 53),
    }
}
