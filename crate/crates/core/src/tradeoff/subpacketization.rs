//! MAN versus low-subpacketization arrays at equal memory.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};

use super::TradeoffError;
use crate::pda::lsub_parameters;
use crate::rational::{binomial, frac, int, Rational};

#[derive(Clone, Debug, PartialEq)]
pub struct SubpacketizationReport {
    pub k: usize,
    pub t: usize,
    pub b_man: BigInt,
    pub b_lsub: u64,
    pub r_man: Rational,
    pub r_lsub: Rational,
    /// `R_MAN = t/(t+1) R_Lsub`.
    pub load_identity: bool,
    /// Floating-point value of the Stirling factor, for display.
    pub stirling_factor: f64,
    /// `B_MAN >= factor * B_Lsub`, proven with rational lower bounds on the
    /// transcendental constants.
    pub stirling_certified: bool,
}

/// Lower bound on `e^(1/3)`: its Taylor series truncated after eight terms.
fn e_third_lower() -> Rational {
    let mut term = int(1);
    let mut sum = int(1);
    for i in 1..8 {
        term *= frac(1, 3 * i);
        sum += &term;
    }
    sum
}

/// `(K/t)^(3/2) (K/A)^A / (e^(1/6) sqrt(2 pi (K-t)))` with `A = max(t, K-t)`.
fn stirling_factor(k: usize, t: usize) -> f64 {
    let (kf, tf) = (k as f64, t as f64);
    let a = t.max(k - t) as f64;
    (kf / tf).powf(1.5) * (kf / a).powf(a) / ((1.0f64 / 6.0).exp() * (2.0 * std::f64::consts::PI * (kf - tf)).sqrt())
}

/// Proves `B_MAN >= factor * B_Lsub` without floating point. Squaring gives
/// `B_MAN^2 e^(1/3) 2 pi (K-t) >= (K/t)^3 (K/A)^(2A) B_Lsub^2`; the left side
/// is bounded below using `pi > 333/106` and a partial sum of `e^(1/3)`.
fn certify_stirling(k: usize, t: usize, b_man: &BigInt, b_lsub: u64) -> bool {
    let a = t.max(k - t);
    let man = Rational::from_integer(b_man.clone());
    let lsub = int(b_lsub as i64);
    let lhs = &man * &man * e_third_lower() * int(2) * frac(333, 106) * int((k - t) as i64);
    let rhs = num_traits::pow(frac(k as i64, t as i64), 3) * num_traits::pow(frac(k as i64, a as i64), 2 * a) * &lsub * &lsub;
    lhs >= rhs
}

/// Compares the two arrays for `t` in `[2, K-1]` with `t | K`.
pub fn subpacketization_compare(k: usize, t: usize) -> Result<SubpacketizationReport, TradeoffError> {
    if t < 2 || t >= k || !k.is_multiple_of(t) {
        return Err(TradeoffError::Domain(format!("need t in [2, K-1] dividing K, got K={k}, t={t}")));
    }
    let lsub = lsub_parameters(k, t).map_err(|e| TradeoffError::Domain(e.to_string()))?;
    let b_man = binomial(k as u64, t as u64);
    let r_man = frac((k - t) as i64, (t + 1) as i64);
    let load_identity = r_man == frac(t as i64, (t + 1) as i64) * &lsub.load;
    debug_assert!(b_man >= BigInt::one());
    Ok(SubpacketizationReport {
        k,
        t,
        stirling_certified: certify_stirling(k, t, &b_man, lsub.subpacketization),
        stirling_factor: stirling_factor(k, t),
        b_lsub: lsub.subpacketization,
        b_man,
        r_man,
        r_lsub: lsub.load,
        load_identity,
    })
}

impl SubpacketizationReport {
    /// `B_MAN / B_Lsub` as a float, for display.
    pub fn gain(&self) -> f64 {
        self.b_man.to_f64().unwrap_or(f64::INFINITY) / self.b_lsub as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let r = subpacketization_compare(4, 2).unwrap();
        assert_eq!((r.b_man.clone(), r.b_lsub), (BigInt::from(6), 2));
        assert_eq!((r.r_man.clone(), r.r_lsub.clone()), (frac(2, 3), int(1)));
        assert!(r.load_identity && r.stirling_certified);

        let r = subpacketization_compare(6, 3).unwrap();
        assert_eq!((r.b_man.clone(), r.b_lsub), (BigInt::from(20), 4));

        let r = subpacketization_compare(6, 2).unwrap();
        assert_eq!(r.r_man, frac(4, 3));
        assert_eq!(r.r_man, frac(2, 3) * int(2));

        assert!(subpacketization_compare(6, 4).is_err());
        assert!(subpacketization_compare(6, 1).is_err());
        assert!(subpacketization_compare(6, 6).is_err());
    }

    #[test]
    fn constants_are_lower_bounds() {
        assert!(e_third_lower() < Rational::new(BigInt::from(13956125), BigInt::from(10_000_000)));
        assert!(crate::rational::to_f64(&e_third_lower()) > 1.395612);
        assert!(333.0 / 106.0 < std::f64::consts::PI);
    }

    #[test]
    fn certified_for_small_k() {
        for k in 3..=24 {
            for t in 2..k {
                if k % t == 0 {
                    let r = subpacketization_compare(k, t).unwrap();
                    assert!(r.load_identity && r.stirling_certified, "K={k} t={t}");
                    let approx = r.b_man.to_f64().unwrap() / r.stirling_factor;
                    assert!(approx >= r.b_lsub as f64 * 0.999_999);
                }
            }
        }
    }
}
