//! Exact arithmetic over GF(q) for prime q and for binary extensions GF(2^m).
//!
//! A [`FieldContext`] describes the field; [`FieldElement`] is a bare value in
//! `[0, q)`. Arithmetic goes through the context, which keeps elements `Copy`
//! and small. Values entering from outside should be checked with
//! [`FieldContext::element`]; the per-symbol operations assume in-range inputs.
//!
//! Binary extensions use log/antilog tables built from a generator of the
//! multiplicative group, so any irreducible modulus of degree `m <= 8` works,
//! primitive or not.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest prime order accepted for prime fields.
pub const MAX_PRIME: u32 = 1 << 16;
/// Largest extension degree accepted for binary fields.
pub const MAX_BINARY_DEGREE: u32 = 8;

/// Default irreducible (in fact primitive) polynomials, indexed by degree.
/// Bit `i` is the coefficient of `x^i`.
const DEFAULT_POLYS: [u16; 9] = [
    0,
    0b11,        // x + 1
    0b111,       // x^2 + x + 1
    0b1011,      // x^3 + x + 1
    0b1_0011,    // x^4 + x + 1
    0b10_0101,   // x^5 + x^2 + 1
    0b100_0011,  // x^6 + x + 1
    0b1000_1001, // x^7 + x^3 + 1
    0x11D,       // x^8 + x^4 + x^3 + x^2 + 1
];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not a prime below 2^16")]
    NotPrime(u32),
    #[error("binary extension degree {0} outside 1..=8")]
    BadDegree(u32),
    #[error("polynomial {poly:#x} is not irreducible of degree {degree}")]
    Reducible { degree: u32, poly: u32 },
    #[error("value {value} is not an element of GF({order})")]
    OutOfRange { value: u32, order: u32 },
    #[error("inverse of zero")]
    ZeroInverse,
    #[error("vector length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("malformed field spec {0:?} (expected p:<prime> or b:<m>[:poly=<hex>])")]
    BadSpec(String),
}

/// A value of GF(q). The context it belongs to is implied by the caller.
#[derive(
    Copy, Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);

    pub fn value(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl From<FieldElement> for u32 {
    fn from(e: FieldElement) -> u32 {
        e.0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FieldKind {
    Prime { p: u32 },
    Binary { degree: u32, poly: u32 },
}

#[derive(Clone, Debug)]
struct LogTables {
    // exp has 2(q-1) entries so log a + log b never needs a reduction.
    exp: Vec<u16>,
    log: Vec<u16>,
}

/// Descriptor of GF(q). Immutable once built.
#[derive(Clone, Debug)]
pub struct FieldContext {
    order: u32,
    kind: FieldKind,
    tables: Option<LogTables>,
}

impl PartialEq for FieldContext {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

impl Eq for FieldContext {}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn poly_degree(p: u32) -> i32 {
    31 - p.leading_zeros() as i32
}

fn poly_mod(mut a: u32, m: u32) -> u32 {
    let dm = poly_degree(m);
    while a != 0 && poly_degree(a) >= dm {
        a ^= m << (poly_degree(a) - dm);
    }
    a
}

fn is_irreducible(poly: u32, degree: u32) -> bool {
    if poly_degree(poly) != degree as i32 {
        return false;
    }
    // Any factorisation has a factor of degree <= degree / 2.
    let max_div = 1u32 << (degree / 2 + 1);
    (2..max_div).all(|d| poly_mod(poly, d) != 0)
}

/// Carry-less multiply then reduce; used only to build tables.
fn slow_mul(a: u32, b: u32, poly: u32) -> u32 {
    let mut acc = 0u32;
    let mut a = a;
    let mut b = b;
    let degree = poly_degree(poly);
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a;
        }
        b >>= 1;
        a <<= 1;
        if poly_degree(a) == degree {
            a ^= poly;
        }
    }
    acc
}

impl LogTables {
    fn build(order: u32, poly: u32) -> LogTables {
        let group = order - 1;
        let generator = (1..order)
            .find(|&g| {
                let mut x = 1u32;
                for k in 1..=group {
                    x = slow_mul(x, g, poly);
                    if x == 1 {
                        return k == group;
                    }
                }
                false
            })
            .expect("multiplicative group of a field is cyclic");
        let mut exp = vec![0u16; 2 * group as usize];
        let mut log = vec![0u16; order as usize];
        let mut x = 1u32;
        for k in 0..group as usize {
            exp[k] = x as u16;
            exp[k + group as usize] = x as u16;
            log[x as usize] = k as u16;
            x = slow_mul(x, generator, poly);
        }
        LogTables { exp, log }
    }
}

impl FieldContext {
    pub fn prime(p: u32) -> Result<Self, FieldError> {
        if p >= MAX_PRIME || !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(FieldContext { order: p, kind: FieldKind::Prime { p }, tables: None })
    }

    /// GF(2^m) with the default modulus for `m`.
    pub fn binary(degree: u32) -> Result<Self, FieldError> {
        if degree == 0 || degree > MAX_BINARY_DEGREE {
            return Err(FieldError::BadDegree(degree));
        }
        Self::binary_with_poly(degree, DEFAULT_POLYS[degree as usize] as u32)
    }

    pub fn binary_with_poly(degree: u32, poly: u32) -> Result<Self, FieldError> {
        if degree == 0 || degree > MAX_BINARY_DEGREE {
            return Err(FieldError::BadDegree(degree));
        }
        if !is_irreducible(poly, degree) {
            return Err(FieldError::Reducible { degree, poly });
        }
        let order = 1u32 << degree;
        Ok(FieldContext {
            order,
            kind: FieldKind::Binary { degree, poly },
            tables: Some(LogTables::build(order, poly)),
        })
    }

    /// Field order q.
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn kind(&self) -> FieldKind {
        self.kind
    }

    pub fn is_binary(&self) -> bool {
        matches!(self.kind, FieldKind::Binary { .. })
    }

    pub fn element(&self, value: u32) -> Result<FieldElement, FieldError> {
        if value < self.order {
            Ok(FieldElement(value))
        } else {
            Err(FieldError::OutOfRange { value, order: self.order })
        }
    }

    /// Reduces an arbitrary integer into the field: modulo q for prime fields,
    /// masking to m bits for binary fields.
    pub fn reduce(&self, value: u64) -> FieldElement {
        FieldElement((value % self.order as u64) as u32)
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement(0)
    }

    pub fn one(&self) -> FieldElement {
        FieldElement(1)
    }

    /// All elements in increasing value order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.order).map(FieldElement)
    }

    pub fn check(&self, v: &[FieldElement]) -> Result<(), FieldError> {
        match v.iter().find(|e| e.0 >= self.order) {
            Some(e) => Err(FieldError::OutOfRange { value: e.0, order: self.order }),
            None => Ok(()),
        }
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        match self.kind {
            FieldKind::Prime { p } => {
                let s = a.0 + b.0;
                FieldElement(if s >= p { s - p } else { s })
            }
            FieldKind::Binary { .. } => FieldElement(a.0 ^ b.0),
        }
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        match self.kind {
            FieldKind::Prime { p } => FieldElement(if a.0 == 0 { 0 } else { p - a.0 }),
            FieldKind::Binary { .. } => a,
        }
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        match self.kind {
            FieldKind::Prime { p } => FieldElement(((a.0 as u64 * b.0 as u64) % p as u64) as u32),
            FieldKind::Binary { .. } => {
                if a.0 == 0 || b.0 == 0 {
                    return FieldElement(0);
                }
                let t = self.tables.as_ref().expect("binary field has tables");
                let i = t.log[a.0 as usize] as usize + t.log[b.0 as usize] as usize;
                FieldElement(t.exp[i] as u32)
            }
        }
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement, FieldError> {
        if a.0 == 0 {
            return Err(FieldError::ZeroInverse);
        }
        Ok(match self.kind {
            FieldKind::Prime { p } => {
                // a^(p-2) by square and multiply
                let (mut base, mut e, mut acc) = (a.0 as u64, p as u64 - 2, 1u64);
                while e > 0 {
                    if e & 1 == 1 {
                        acc = acc * base % p as u64;
                    }
                    base = base * base % p as u64;
                    e >>= 1;
                }
                FieldElement(acc as u32)
            }
            FieldKind::Binary { .. } => {
                let t = self.tables.as_ref().expect("binary field has tables");
                let group = self.order as usize - 1;
                let l = t.log[a.0 as usize] as usize;
                FieldElement(t.exp[(group - l) % group] as u32)
            }
        })
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Inner product `sum u_i * w_i`.
    pub fn dot(&self, u: &[FieldElement], w: &[FieldElement]) -> Result<FieldElement, FieldError> {
        if u.len() != w.len() {
            return Err(FieldError::LengthMismatch(u.len(), w.len()));
        }
        self.check(u)?;
        self.check(w)?;
        Ok(u.iter().zip(w).fold(self.zero(), |acc, (&a, &b)| self.add(acc, self.mul(a, b))))
    }

    /// `acc += coeff * v`, symbol-wise. Lengths must agree.
    pub fn axpy(&self, acc: &mut [FieldElement], coeff: FieldElement, v: &[FieldElement]) {
        debug_assert_eq!(acc.len(), v.len());
        if coeff.is_zero() {
            return;
        }
        for (a, &x) in acc.iter_mut().zip(v) {
            *a = self.add(*a, self.mul(coeff, x));
        }
    }

    /// `acc += v`, symbol-wise.
    pub fn add_assign(&self, acc: &mut [FieldElement], v: &[FieldElement]) {
        debug_assert_eq!(acc.len(), v.len());
        for (a, &x) in acc.iter_mut().zip(v) {
            *a = self.add(*a, x);
        }
    }

    /// `acc -= v`, symbol-wise.
    pub fn sub_assign(&self, acc: &mut [FieldElement], v: &[FieldElement]) {
        debug_assert_eq!(acc.len(), v.len());
        for (a, &x) in acc.iter_mut().zip(v) {
            *a = self.sub(*a, x);
        }
    }

    /// log2(q) as a float, for reporting only.
    pub fn log2_order(&self) -> f64 {
        (self.order as f64).log2()
    }
}

impl fmt::Display for FieldContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            FieldKind::Prime { p } => write!(f, "p:{p}"),
            FieldKind::Binary { degree, poly } => write!(f, "b:{degree}:poly={poly:x}"),
        }
    }
}

impl FromStr for FieldContext {
    type Err = FieldError;

    /// Parses `p:<prime>` or `b:<m>[:poly=<hex>]`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || FieldError::BadSpec(s.to_string());
        let mut parts = s.trim().split(':');
        match (parts.next(), parts.next(), parts.next(), parts.next()) {
            (Some("p"), Some(p), None, None) => {
                FieldContext::prime(p.parse().map_err(|_| bad())?)
            }
            (Some("b"), Some(m), poly, None) => {
                let m: u32 = m.parse().map_err(|_| bad())?;
                match poly {
                    None => FieldContext::binary(m),
                    Some(p) => {
                        let hex = p.strip_prefix("poly=").ok_or_else(bad)?;
                        let hex = hex.trim_start_matches("0x").trim_start_matches("0X");
                        let poly = u32::from_str_radix(hex, 16).map_err(|_| bad())?;
                        FieldContext::binary_with_poly(m, poly)
                    }
                }
            }
            _ => Err(bad()),
        }
    }
}
