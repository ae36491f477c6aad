//! Converse bounds on the load.

use super::TradeoffError;
use crate::rational::{frac, int, Rational};

fn check_range(n: usize, m: &Rational, lo: &Rational) -> Result<(), TradeoffError> {
    if n < 2 {
        return Err(TradeoffError::Domain(format!("need N >= 2, got {n}")));
    }
    if m < lo || m > &int(n as i64) {
        return Err(TradeoffError::Domain(format!("M = {m} outside [{lo}, {n}]")));
    }
    Ok(())
}

/// Smallest load of any PDA-based scheme at memory `m`:
/// `K(N - m) / (N - 1 + K(m - 1))`.
pub fn pda_lower_bound(n: usize, k: usize, m: &Rational) -> Result<Rational, TradeoffError> {
    check_range(n, m, &int(1))?;
    let (n, k) = (int(n as i64), int(k as i64));
    let den = &n - int(1) + &k * (m - int(1));
    Ok(&k * (&n - m) / den)
}

/// `L_u(M) = (uN - u^2 M) / (N - 1)`.
pub fn l_u(n: usize, u: usize, m: &Rational) -> Rational {
    let (n, u) = (n as i64, u as i64);
    (int(u * n) - int(u * u) * m) / int(n - 1)
}

/// Cut-set bound: `max_u L_u(M)` over `u in [min(floor(N/2), K)]`, at least 0.
pub fn cutset_bound(n: usize, k: usize, m: &Rational) -> Result<Rational, TradeoffError> {
    check_range(n, m, &int(1))?;
    Ok((1..=(n / 2).min(k)).map(|u| l_u(n, u, m)).fold(int(0), |a, b| a.max(b)))
}

/// Memory values in `[1, N]` where the cut-set bound changes slope:
/// `1`, every `N/(2u+1)` inside, and `N`.
pub fn cutset_breakpoints(n: usize, k: usize) -> Vec<Rational> {
    let mut out = vec![int(1)];
    for u in (1..(n / 2).min(k)).rev() {
        let b = frac(n as i64, 2 * u as i64 + 1);
        if b > int(1) {
            out.push(b);
        }
    }
    out.push(int(n as i64));
    out
}

/// `f(M) = (1/4) (N/(N-1)) (N/M - M/N)` on `[N/(2 floor(N/2) + 1), N]`.
pub fn f_bound(n: usize, m: &Rational) -> Result<Rational, TradeoffError> {
    check_range(n, m, &frac(n as i64, 2 * (n / 2) as i64 + 1))?;
    let nn = int(n as i64);
    Ok((&nn * &nn - m * m) / (int(4 * (n as i64 - 1)) * m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tradeoff::{man_curve, man_points};

    #[test]
    fn pda_bound_examples() {
        for k in 1..=20usize {
            for n in [2, k.max(2), 2 * k] {
                for p in man_points(n, k) {
                    assert_eq!(pda_lower_bound(n, k, &p.m).unwrap(), p.r, "N={n} K={k}");
                }
            }
        }
        assert_eq!(pda_lower_bound(5, 3, &int(5)).unwrap(), int(0));
        assert_eq!(pda_lower_bound(5, 3, &int(1)).unwrap(), int(3));
        assert!(pda_lower_bound(5, 3, &frac(1, 2)).is_err());
        assert!(pda_lower_bound(1, 3, &int(1)).is_err());
    }

    #[test]
    fn man_curve_sits_above_pda_bound() {
        for (n, k) in [(2, 2), (5, 3), (4, 9), (12, 12)] {
            let c = man_curve(n, k);
            for j in 0..=100i64 {
                let m = int(1) + frac(j * (n as i64 - 1), 100);
                let bound = pda_lower_bound(n, k, &m).unwrap();
                assert!(c.eval(&m).unwrap() >= bound && bound >= int(0));
            }
        }
    }

    #[test]
    fn cutset_examples() {
        for j in 0..=20 {
            let m = int(1) + frac(j, 20);
            assert_eq!(cutset_bound(2, 2, &m).unwrap(), int(2) - &m);
        }
        for (n, k) in [(10, 3), (7, 7), (3, 1)] {
            assert_eq!(cutset_bound(n, k, &int(n as i64)).unwrap(), int(0));
        }
        assert_eq!(cutset_bound(10, 10, &int(1)).unwrap(), frac(25, 9));
        assert_eq!(cutset_bound(10, 2, &int(1)).unwrap(), frac(16, 9));
        assert_eq!(cutset_breakpoints(10, 10), vec![int(1), frac(10, 9), frac(10, 7), frac(2, 1), frac(10, 3), int(10)]);
        assert_eq!(cutset_breakpoints(2, 2), vec![int(1), int(2)]);
    }

    #[test]
    fn f_examples() {
        for n in 2..=20usize {
            assert_eq!(f_bound(n, &int(n as i64)).unwrap(), int(0));
            let nn = n as i64;
            for u in 1..=(n / 2) {
                let m = frac(nn, 2 * u as i64 + 1);
                let expect = frac(nn, nn - 1) * frac((u * (u + 1)) as i64, 2 * u as i64 + 1);
                assert_eq!(f_bound(n, &m).unwrap(), expect);
                assert_eq!(l_u(n, u, &m), expect);
            }
            // f touches L_u at N/(2u+1) and N/(2u-1); between them L_u is above.
            for u in 1..=(n / 2) {
                let lo = frac(nn, 2 * u as i64 + 1);
                let hi = frac(nn, 2 * u as i64 - 1).min(int(nn));
                for j in 0..=50 {
                    let m = &lo + (&hi - &lo) * frac(j, 50);
                    assert!(f_bound(n, &m).unwrap() <= l_u(n, u, &m));
                }
            }
            for j in 0..=200 {
                let m = int(1) + frac(j * (nn - 1), 200);
                assert!(f_bound(n, &m).unwrap() <= cutset_bound(n, n, &m).unwrap());
            }
        }
        assert!(f_bound(4, &frac(1, 2)).is_err());
        assert!(f_bound(4, &frac(4, 5)).is_ok());
    }
}
