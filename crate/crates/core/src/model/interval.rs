use serde::Serialize;

use crate::error::{Error, Result};
use crate::TOL;

/// A probability interval `[lo, hi]` with `0 <= lo <= hi <= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProbabilityInterval {
    pub lo: f64,
    pub hi: f64,
}

fn snap_unit(x: f64) -> Option<f64> {
    if !x.is_finite() || x < -TOL || x > 1.0 + TOL {
        None
    } else {
        Some(x.clamp(0.0, 1.0))
    }
}

impl ProbabilityInterval {
    /// Values within [`TOL`] of the unit interval are clamped onto it, and an
    /// inversion `lo > hi` of at most `TOL` collapses to a point.
    pub fn new(lo: f64, hi: f64) -> Result<ProbabilityInterval> {
        let bad = || Error::InvalidInterval { lo, hi };
        let l = snap_unit(lo).ok_or_else(bad)?;
        let h = snap_unit(hi).ok_or_else(bad)?;
        if l > h + TOL {
            return Err(bad());
        }
        Ok(ProbabilityInterval {
            lo: l,
            hi: h.max(l),
        })
    }

    pub fn point(p: f64) -> Result<ProbabilityInterval> {
        ProbabilityInterval::new(p, p)
    }

    pub fn vacuous() -> ProbabilityInterval {
        ProbabilityInterval { lo: 0.0, hi: 1.0 }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    /// `self ⊇ other` up to `tol`.
    pub fn contains(&self, other: &ProbabilityInterval, tol: f64) -> bool {
        self.lo <= other.lo + tol && other.hi <= self.hi + tol
    }

    /// Largest endpoint discrepancy.
    pub fn distance(&self, other: &ProbabilityInterval) -> f64 {
        (self.lo - other.lo).abs().max((self.hi - other.hi).abs())
    }

    pub fn approx_eq(&self, other: &ProbabilityInterval, tol: f64) -> bool {
        self.distance(other) <= tol
    }
}
