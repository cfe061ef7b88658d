//! Scalar abstraction shared by every lattice computation.
//!
//! The lattice operators only need ring arithmetic, ordering, and a way to
//! accumulate long sums. Floating point types accumulate with Neumaier
//! compensated summation; exact rationals just add.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Signed, ToPrimitive, Zero};

/// Numeric type a [`Dataset`](crate::Dataset) and everything built on it can use.
pub trait Scalar:
    Clone + Debug + PartialOrd + Signed + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    /// `true` when arithmetic is exact, so tolerances collapse to zero.
    const EXACT: bool;

    /// Sum of all values, using compensated accumulation where it matters.
    fn sum<I: IntoIterator<Item = Self>>(values: I) -> Self;

    /// Finite check; always `true` for exact types.
    fn is_finite_value(&self) -> bool;

    /// Locale-independent decimal parse (`.` separator, optional exponent).
    /// Non-finite results are rejected.
    fn parse_decimal(text: &str) -> Option<Self>;

    /// Relative tolerance `rel` expressed in this type; zero for exact types.
    fn tolerance(rel: f64) -> Self {
        if Self::EXACT {
            Self::zero()
        } else {
            Self::from_f64(rel).unwrap_or_else(Self::zero)
        }
    }

    /// Lossy view as `f64`, used for reports and error payloads.
    fn as_f64(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

macro_rules! float_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            const EXACT: bool = false;

            fn sum<I: IntoIterator<Item = Self>>(values: I) -> Self {
                // Neumaier's variant of Kahan summation.
                let mut total: $t = 0.0;
                let mut carry: $t = 0.0;
                for v in values {
                    let t = total + v;
                    if total.abs() >= v.abs() {
                        carry += (total - t) + v;
                    } else {
                        carry += (v - t) + total;
                    }
                    total = t;
                }
                total + carry
            }

            fn is_finite_value(&self) -> bool {
                self.is_finite()
            }

            fn parse_decimal(text: &str) -> Option<Self> {
                let text = text.trim();
                if !is_decimal_literal(text) {
                    return None;
                }
                text.parse::<$t>().ok().filter(|v| v.is_finite())
            }
        }
    };
}

float_scalar!(f32);
float_scalar!(f64);

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn sum<I: IntoIterator<Item = Self>>(values: I) -> Self {
        values.into_iter().fold(Self::zero(), |acc, v| acc + v)
    }

    fn is_finite_value(&self) -> bool {
        true
    }

    fn parse_decimal(text: &str) -> Option<Self> {
        let text = text.trim();
        if !is_decimal_literal(text) {
            return None;
        }
        let (mantissa, exponent) = match text.find(['e', 'E']) {
            Some(pos) => (&text[..pos], text[pos + 1..].parse::<i32>().ok()?),
            None => (text, 0),
        };
        let (negative, digits) = match mantissa.as_bytes().first() {
            Some(b'-') => (true, &mantissa[1..]),
            Some(b'+') => (false, &mantissa[1..]),
            _ => (false, mantissa),
        };
        let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
        let all_digits = format!("{int_part}{frac_part}");
        let mut numer: BigInt = all_digits.parse().ok()?;
        if negative {
            numer = -numer;
        }
        let scale = exponent - i32::try_from(frac_part.len()).ok()?;
        let ten = BigInt::from(10);
        let power = num_traits::pow(ten, scale.unsigned_abs() as usize);
        Some(if scale >= 0 {
            BigRational::from_integer(numer * power)
        } else {
            BigRational::new(numer, power)
        })
    }
}

/// Accepts `[+-]digits[.digits][(e|E)[+-]digits]` with at least one digit in
/// the mantissa. Rejects `inf`, `nan`, hex and locale variants.
fn is_decimal_literal(text: &str) -> bool {
    let bytes = text.as_bytes();
    let mut i = 0;
    if matches!(bytes.first(), Some(b'+' | b'-')) {
        i += 1;
    }
    let mut mantissa_digits = 0;
    while i < bytes.len() && bytes[i].is_ascii_digit() {
        i += 1;
        mantissa_digits += 1;
    }
    if i < bytes.len() && bytes[i] == b'.' {
        i += 1;
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
            mantissa_digits += 1;
        }
    }
    if mantissa_digits == 0 {
        return false;
    }
    if i < bytes.len() && matches!(bytes[i], b'e' | b'E') {
        i += 1;
        if matches!(bytes.get(i), Some(b'+' | b'-')) {
            i += 1;
        }
        let start = i;
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
        if i == start {
            return false;
        }
    }
    i == bytes.len()
}

/// Product of an iterator of scalars; one for an empty iterator.
pub(crate) fn product<T: Scalar>(values: impl IntoIterator<Item = T>) -> T {
    values.into_iter().fold(T::one(), |acc, v| acc * v)
}
