//! Corner points of the compared schemes.

use std::fmt;
use std::str::FromStr;

use super::{lower_convex_envelope, man_points, CurvePoint, TradeoffCurve, TradeoffError};
use crate::rational::{binomial, frac, int, Rational};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scheme {
    /// The MAN-PDA SP-LFR scheme.
    SpLfr,
    SecurityKey,
    PrivacyKeyPfr,
    PrivacyKeyPlfr,
    Yma,
    Wsjtc,
    VirtualUsers,
}

impl Scheme {
    pub const ALL: [Scheme; 7] = [
        Scheme::SpLfr,
        Scheme::SecurityKey,
        Scheme::PrivacyKeyPfr,
        Scheme::PrivacyKeyPlfr,
        Scheme::Yma,
        Scheme::Wsjtc,
        Scheme::VirtualUsers,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Scheme::SpLfr => "splfr",
            Scheme::SecurityKey => "seckey",
            Scheme::PrivacyKeyPfr => "privkey-pfr",
            Scheme::PrivacyKeyPlfr => "privkey-plfr",
            Scheme::Yma => "yma",
            Scheme::Wsjtc => "wsjtc",
            Scheme::VirtualUsers => "virtual",
        }
    }

    /// Caveat shown next to the curve in reports.
    pub fn note(self) -> Option<&'static str> {
        match self {
            Scheme::VirtualUsers => Some("uses a different privacy definition; plotted from its closed form only"),
            Scheme::PrivacyKeyPfr | Scheme::PrivacyKeyPlfr => Some("includes the trivial point (0, N)"),
            _ => None,
        }
    }

    /// Corner points before taking the envelope.
    pub fn points(self, n: usize, k: usize) -> Vec<CurvePoint> {
        let (ni, ki) = (n as i64, k as i64);
        let binom = |a: usize, b: usize| Rational::from_integer(binomial(a as u64, b as u64));
        // (C(K, t+1) - C(K - c, t+1)) / C(K, t)
        let trimmed = |t: usize, c: usize| (binom(k, t + 1) - binom(k - c.min(k), t + 1)) / binom(k, t);
        let mem_secure = |t: usize| int(1) + frac(t as i64 * (ni - 1), ki);
        let mem_plain = |t: usize| frac(t as i64 * ni, ki);
        match self {
            Scheme::SpLfr | Scheme::SecurityKey => man_points(n, k),
            Scheme::Yma | Scheme::Wsjtc => (0..=k).map(|t| CurvePoint::new(mem_plain(t), trimmed(t, n))).collect(),
            Scheme::PrivacyKeyPlfr | Scheme::PrivacyKeyPfr => {
                let c = if self == Scheme::PrivacyKeyPlfr { n } else { n.saturating_sub(1) };
                let mut pts = vec![CurvePoint::new(int(0), int(ni))];
                pts.extend((0..=k).map(|t| CurvePoint::new(mem_secure(t), trimmed(t, c))));
                pts
            }
            Scheme::VirtualUsers => {
                let big = n * k;
                (0..=big)
                    .map(|t| {
                        let num = binomial(big as u64, t as u64 + 1) - binomial(((k - 1) * n) as u64, t as u64 + 1);
                        let r = Rational::new(num, binomial(big as u64, t as u64));
                        CurvePoint::new(frac(t as i64, ki), r)
                    })
                    .collect()
            }
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Scheme {
    type Err = TradeoffError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Scheme::ALL.into_iter().find(|x| x.tag() == s).ok_or_else(|| TradeoffError::UnknownScheme(s.to_string()))
    }
}

/// Parses a comma-separated list of scheme tags.
pub fn parse_schemes(list: &str) -> Result<Vec<Scheme>, TradeoffError> {
    list.split(',').map(str::trim).filter(|s| !s.is_empty()).map(str::parse).collect()
}

/// Lower convex envelope of a scheme's corner points.
pub fn table1_curve(scheme: Scheme, n: usize, k: usize) -> Result<TradeoffCurve, TradeoffError> {
    if n == 0 || k == 0 {
        return Err(TradeoffError::Domain(format!("need N, K >= 1, got N={n}, K={k}")));
    }
    lower_convex_envelope(&scheme.points(n, k))
}
