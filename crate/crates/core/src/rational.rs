//! Exact rational helpers shared by the PDA and tradeoff code.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

/// `a / b` as an exact rational. Panics on `b == 0`.
pub fn frac(a: i64, b: i64) -> Rational {
    Rational::new(BigInt::from(a), BigInt::from(b))
}

pub fn int(a: i64) -> Rational {
    Rational::from_integer(BigInt::from(a))
}

/// C(n, k), zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// C(n, k) as u64; panics if it does not fit.
pub fn binomial_u64(n: u64, k: u64) -> u64 {
    binomial(n, k).to_u64().expect("binomial fits in u64")
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Decimal rendering with exactly `digits` fractional digits, rounded half
/// away from zero. Computed from the exact value, not through `f64`.
pub fn to_decimal(r: &Rational, digits: u32) -> String {
    let scale = BigInt::from(10u32).pow(digits);
    let scaled = r * Rational::from_integer(scale.clone());
    let neg = scaled.is_negative();
    let abs = scaled.abs();
    let (q, rem) = abs.numer().div_rem(abs.denom());
    let rounded = if rem * BigInt::from(2) >= *abs.denom() { q + 1 } else { q };
    let (int_part, frac_part) = rounded.div_rem(&scale);
    let frac_str = format!("{:0>width$}", frac_part.to_string(), width = digits as usize);
    let sign = if neg && !(int_part.is_zero() && frac_part.is_zero()) { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac_str}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(0, 2), BigInt::zero());
        assert_eq!(binomial(3, 4), BigInt::zero());
        assert_eq!(binomial(7, 0), BigInt::one());
        assert_eq!(binomial_u64(40, 20), 137_846_528_820);
    }

    #[test]
    fn decimals() {
        assert_eq!(to_decimal(&frac(1, 3), 12), "0.333333333333");
        assert_eq!(to_decimal(&frac(2, 3), 3), "0.667");
        assert_eq!(to_decimal(&frac(-5, 2), 0), "-3");
        assert_eq!(to_decimal(&int(30), 2), "30.00");
        assert_eq!(to_decimal(&frac(-1, 10_000), 2), "0.00");
    }
}
