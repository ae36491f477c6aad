//! Combinatorial limits on PDAs and the low-subpacketization parameter family.

use num_traits::ToPrimitive;

use super::{Pda, PdaError};
use crate::rational::{binomial_u64, frac, int, Rational};

/// Lower bound on the number of symbols given the ordinary-cell count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolCountBound {
    /// `nF / (KF + F - n)` with `n = K(F - Z)`.
    pub bound: Rational,
    /// `S` equals the bound.
    pub tight: bool,
    /// The structural condition: every row holds `n/F` ordinary cells and
    /// every symbol occurs `n/S` times. Necessary for `tight` but not
    /// sufficient; equality also needs `n/S = K + 1 - n/F`.
    pub structure_equal: bool,
}

pub fn symbol_count_bound(pda: &Pda) -> SymbolCountBound {
    let (k, f, _, s) = pda.params();
    let n = pda.ordinary_count();
    let bound = frac((n * f) as i64, (k * f + f - n) as i64);
    let tight = bound == int(s as i64);

    let per_row_ok = n.is_multiple_of(f)
        && pda.rows().all(|r| r.iter().filter(|e| !e.is_star()).count() == n / f);
    let per_symbol_ok = s == 0
        || (n.is_multiple_of(s) && (1..=s as u32).all(|sym| pda.occurrences(sym).len() == n / s));
    SymbolCountBound { bound, tight, structure_equal: per_row_ok && per_symbol_ok }
}

/// Fewest rows a `g`-regular array with `g - 1` stars per row can have:
/// `C(K, g - 1)`.
pub fn min_subpacketization(k: usize, g: usize) -> Result<u64, PdaError> {
    if g < 2 || k < g {
        return Err(PdaError::Domain(format!("need K >= g >= 2, got K={k}, g={g}")));
    }
    Ok(binomial_u64(k as u64, g as u64 - 1))
}

/// Performance of the scheme built on the low-subpacketization PDA families
/// for a given `(K, t)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LsubParameters {
    /// `M = 1 + memory_coeff * (N - 1)`, with `memory_coeff = t / K`.
    pub memory_coeff: Rational,
    /// `(K - t) / t`.
    pub load: Rational,
    /// `(t/K) (K / min(t, K-t))^min(t, K-t)`.
    pub subpacketization: u64,
}

impl LsubParameters {
    pub fn memory(&self, n_files: usize) -> Rational {
        int(1) + &self.memory_coeff * int(n_files as i64 - 1)
    }
}

pub fn lsub_parameters(k: usize, t: usize) -> Result<LsubParameters, PdaError> {
    if k <= 2 || t < 2 || t >= k {
        return Err(PdaError::Domain(format!("need K > 2 and t in [2, K-1], got K={k}, t={t}")));
    }
    if !k.is_multiple_of(t) && !k.is_multiple_of(k - t) {
        return Err(PdaError::Domain(format!("neither t={t} nor K-t={} divides K={k}", k - t)));
    }
    let small = t.min(k - t);
    let base = frac(k as i64, small as i64);
    let f = frac(t as i64, k as i64) * num_traits::pow(base, small);
    assert!(f.is_integer(), "subpacketization is integral when t | K or (K-t) | K");
    Ok(LsubParameters {
        memory_coeff: frac(t as i64, k as i64),
        load: frac((k - t) as i64, t as i64),
        subpacketization: f.to_integer().to_u64().expect("fits in u64"),
    })
}
