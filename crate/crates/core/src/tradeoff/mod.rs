//! Exact memory-load analysis: achievable curves, converse bounds, ratio
//! checks, subpacketization comparison and curve export.
//!
//! Everything is exact rational arithmetic; decimals appear only when curves
//! are written out.

mod bounds;
mod emit;
mod ratio;
mod schemes;
mod subpacketization;

use std::cmp::Ordering;

use thiserror::Error;

use crate::rational::{frac, int, Rational};

pub use bounds::{cutset_breakpoints, cutset_bound, f_bound, l_u, pda_lower_bound};
pub use emit::{curve_rows, emit_curves, render_svg, CurveRow, EmitReport};
pub use ratio::{ratio_checks, ratio_sweep, RatioCheck, RatioMax, RatioReport, DEFAULT_DENSITY, GAP_CONSTANTS};
pub use schemes::{parse_schemes, table1_curve, Scheme};
pub use subpacketization::{subpacketization_compare, SubpacketizationReport};

#[derive(Debug, Error)]
pub enum TradeoffError {
    #[error("no points to take an envelope of")]
    Empty,
    #[error("out of domain: {0}")]
    Domain(String),
    #[error("unknown scheme {0:?}")]
    UnknownScheme(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// A memory-load pair, both in units of files.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CurvePoint {
    pub m: Rational,
    pub r: Rational,
}

impl CurvePoint {
    pub fn new(m: Rational, r: Rational) -> Self {
        CurvePoint { m, r }
    }
}

/// Piecewise-linear convex curve through its corners, sorted by memory.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TradeoffCurve {
    corners: Vec<CurvePoint>,
}

impl TradeoffCurve {
    pub fn corners(&self) -> &[CurvePoint] {
        &self.corners
    }

    pub fn min_m(&self) -> &Rational {
        &self.corners[0].m
    }

    pub fn max_m(&self) -> &Rational {
        &self.corners[self.corners.len() - 1].m
    }

    /// Linear interpolation between corners; `None` outside the memory range.
    pub fn eval(&self, m: &Rational) -> Option<Rational> {
        if m < self.min_m() || m > self.max_m() {
            return None;
        }
        let idx = self.corners.partition_point(|p| &p.m < m);
        let hi = &self.corners[idx];
        if &hi.m == m {
            return Some(hi.r.clone());
        }
        let lo = &self.corners[idx - 1];
        Some(&lo.r + (&hi.r - &lo.r) * (m - &lo.m) / (&hi.m - &lo.m))
    }

    /// Corners with memory in `[lo, hi]`.
    pub fn corners_in(&self, lo: &Rational, hi: &Rational) -> Vec<&CurvePoint> {
        self.corners.iter().filter(|p| &p.m >= lo && &p.m <= hi).collect()
    }
}

fn cross(o: &CurvePoint, a: &CurvePoint, b: &CurvePoint) -> Rational {
    (&a.m - &o.m) * (&b.r - &o.r) - (&a.r - &o.r) * (&b.m - &o.m)
}

/// Lower convex hull, left to right. Collinear interior points are dropped,
/// and for repeated memory values only the smallest load is kept.
pub fn lower_convex_envelope(points: &[CurvePoint]) -> Result<TradeoffCurve, TradeoffError> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| match a.m.cmp(&b.m) {
        Ordering::Equal => a.r.cmp(&b.r),
        o => o,
    });
    pts.dedup_by(|b, a| a.m == b.m);
    if pts.is_empty() {
        return Err(TradeoffError::Empty);
    }
    let mut hull: Vec<CurvePoint> = Vec::with_capacity(pts.len());
    for p in pts {
        while hull.len() >= 2 && cross(&hull[hull.len() - 2], &hull[hull.len() - 1], &p) <= int(0) {
            hull.pop();
        }
        hull.push(p);
    }
    Ok(TradeoffCurve { corners: hull })
}

/// Corner points of the MAN-PDA scheme: `(1 + t(N-1)/K, (K-t)/(t+1))`.
pub fn man_points(n: usize, k: usize) -> Vec<CurvePoint> {
    let (n, k) = (n as i64, k as i64);
    (0..=k)
        .map(|t| CurvePoint::new(int(1) + frac(t * (n - 1), k), frac(k - t, t + 1)))
        .collect()
}

/// Corner points under uncoded placement without keys: `(tN/K, (K-t)/(t+1))`.
pub fn uncoded_points(n: usize, k: usize) -> Vec<CurvePoint> {
    let (n, k) = (n as i64, k as i64);
    (0..=k).map(|t| CurvePoint::new(frac(t * n, k), frac(k - t, t + 1))).collect()
}

/// `R_MAN(M)` on `[1, N]`.
pub fn man_curve(n: usize, k: usize) -> TradeoffCurve {
    lower_convex_envelope(&man_points(n, k)).expect("K+1 points")
}

/// `r_MAN(M)` on `[0, N]`.
pub fn uncoded_curve(n: usize, k: usize) -> TradeoffCurve {
    lower_convex_envelope(&uncoded_points(n, k)).expect("K+1 points")
}

/// Whether two curves agree on all of `[lo, hi]`. Both are piecewise linear,
/// so it is enough to compare them at `lo`, `hi` and every corner between.
pub fn coincide_on(a: &TradeoffCurve, b: &TradeoffCurve, lo: &Rational, hi: &Rational) -> bool {
    let mut ms: Vec<&Rational> = vec![lo, hi];
    ms.extend(a.corners_in(lo, hi).into_iter().map(|p| &p.m));
    ms.extend(b.corners_in(lo, hi).into_iter().map(|p| &p.m));
    ms.into_iter().all(|m| match (a.eval(m), b.eval(m)) {
        (Some(x), Some(y)) => x == y,
        _ => false,
    })
}
