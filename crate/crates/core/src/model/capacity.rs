use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{Event, Frame, MassFunction, ProbabilityInterval};
use crate::transforms;
use crate::TOL;

/// Monotonicity class of a capacity, from weakest to strongest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CapacityKind {
    /// Monotone and normalized only.
    General,
    /// Choquet capacity of order 2.
    TwoMonotone,
    /// Totally monotone: nonnegative Möbius transform.
    Belief,
    /// Additive.
    Precise,
}

impl CapacityKind {
    pub fn is_two_monotone(self) -> bool {
        self >= CapacityKind::TwoMonotone
    }

    pub fn is_belief(self) -> bool {
        self >= CapacityKind::Belief
    }

    pub fn as_str(self) -> &'static str {
        match self {
            CapacityKind::General => "general",
            CapacityKind::TwoMonotone => "two_monotone",
            CapacityKind::Belief => "belief",
            CapacityKind::Precise => "precise",
        }
    }
}

/// A lower probability stored as a dense table over all `2^n` events.
///
/// Invariants: `lower(∅) = 0`, `lower(Ω) = 1`, values in `[0, 1]`, monotone
/// under inclusion. The [`CapacityKind`] tag is verified at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Capacity {
    frame: Arc<Frame>,
    lower: Vec<f64>,
    kind: CapacityKind,
}

impl Capacity {
    /// Validates the table and infers the strongest kind that holds.
    pub fn from_lower(frame: Arc<Frame>, table: Vec<f64>) -> Result<Capacity> {
        let lower = validate_table(&frame, table)?;
        let kind = infer_kind(frame.n(), &lower);
        Ok(Capacity { frame, lower, kind })
    }

    /// Validates the table and checks that it belongs to `kind`.
    pub fn with_kind(frame: Arc<Frame>, table: Vec<f64>, kind: CapacityKind) -> Result<Capacity> {
        let lower = validate_table(&frame, table)?;
        let actual = infer_kind(frame.n(), &lower);
        if actual < kind {
            return Err(Error::InvalidCapacity(format!(
                "table is {} but was declared {}",
                actual.as_str(),
                kind.as_str()
            )));
        }
        Ok(Capacity { frame, lower, kind })
    }

    /// Tabulates `f` over every event.
    pub fn from_fn<F: Fn(Event) -> f64>(frame: Arc<Frame>, f: F) -> Result<Capacity> {
        let table = frame.events().map(f).collect();
        Capacity::from_lower(frame, table)
    }

    /// Caller guarantees the table is valid and the kind holds.
    pub(crate) fn from_parts_unchecked(
        frame: Arc<Frame>,
        lower: Vec<f64>,
        kind: CapacityKind,
    ) -> Capacity {
        debug_assert_eq!(lower.len(), frame.num_events());
        Capacity { frame, lower, kind }
    }

    /// `lower(A) = 0` for `A ≠ Ω`.
    pub fn vacuous(frame: Arc<Frame>) -> Capacity {
        transforms::belief_from_mass(&MassFunction::vacuous(frame))
    }

    pub fn precise(frame: Arc<Frame>, probs: &[f64]) -> Result<Capacity> {
        Ok(transforms::belief_from_mass(&MassFunction::precise(
            frame, probs,
        )?))
    }

    pub fn frame(&self) -> &Arc<Frame> {
        &self.frame
    }

    pub fn n(&self) -> usize {
        self.frame.n()
    }

    pub fn kind(&self) -> CapacityKind {
        self.kind
    }

    pub fn table(&self) -> &[f64] {
        &self.lower
    }

    pub fn check_event(&self, e: Event) -> Result<()> {
        if e.frame_id() == self.frame.id() {
            Ok(())
        } else {
            Err(Error::FrameMismatch)
        }
    }

    /// # Panics
    /// If `e` belongs to another frame.
    pub fn lower(&self, e: Event) -> f64 {
        assert_eq!(
            e.frame_id(),
            self.frame.id(),
            "event from a different frame"
        );
        self.lower[e.mask() as usize]
    }

    /// # Panics
    /// If `e` belongs to another frame.
    pub fn upper(&self, e: Event) -> f64 {
        transforms::conjugate_upper(self, e)
    }

    pub(crate) fn lower_mask(&self, mask: u32) -> f64 {
        self.lower[mask as usize]
    }

    pub(crate) fn upper_mask(&self, mask: u32) -> f64 {
        1.0 - self.lower[(!mask & self.frame.id().full_mask()) as usize]
    }

    /// `[lower(e), upper(e)]`.
    pub fn interval(&self, e: Event) -> ProbabilityInterval {
        let lo = self.lower(e);
        let hi = self.upper(e);
        ProbabilityInterval::new(lo, hi).unwrap_or(ProbabilityInterval { lo, hi: hi.max(lo) })
    }

    /// Max-norm distance between lower tables.
    pub fn distance(&self, other: &Capacity) -> f64 {
        assert_eq!(self.lower.len(), other.lower.len());
        self.lower
            .iter()
            .zip(&other.lower)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn event(&self, mask: u32) -> Event {
        Event::from_mask_unchecked(mask, self.frame.id())
    }
}

fn validate_table(frame: &Frame, mut t: Vec<f64>) -> Result<Vec<f64>> {
    let n = frame.n();
    if t.len() != 1usize << n {
        return Err(Error::DimensionMismatch {
            expected: 1usize << n,
            got: t.len(),
        });
    }
    let full = frame.id().full_mask() as usize;
    for (i, v) in t.iter_mut().enumerate() {
        if !v.is_finite() || *v < -TOL || *v > 1.0 + TOL {
            return Err(Error::InvalidCapacity(format!(
                "lower({}) = {v} is outside [0, 1]",
                frame.describe(Event::from_mask_unchecked(i as u32, frame.id()))
            )));
        }
        *v = v.clamp(0.0, 1.0);
    }
    if t[0] > TOL {
        return Err(Error::InvalidCapacity(format!("lower(∅) = {} ≠ 0", t[0])));
    }
    if t[full] < 1.0 - TOL {
        return Err(Error::InvalidCapacity(format!(
            "lower(Ω) = {} ≠ 1",
            t[full]
        )));
    }
    t[0] = 0.0;
    t[full] = 1.0;
    for mask in 0..t.len() {
        for i in 0..n {
            let bit = 1usize << i;
            if mask & bit == 0 && t[mask | bit] < t[mask] - TOL {
                return Err(Error::InvalidCapacity(format!(
                    "not monotone: lower({}) > lower({})",
                    frame.describe(Event::from_mask_unchecked(mask as u32, frame.id())),
                    frame.describe(Event::from_mask_unchecked((mask | bit) as u32, frame.id()))
                )));
            }
        }
    }
    Ok(t)
}

pub(crate) fn infer_kind(n: usize, lower: &[f64]) -> CapacityKind {
    let mut m = lower.to_vec();
    transforms::mobius_in_place(&mut m, n);
    if m.iter().all(|&v| v >= -TOL) {
        let additive = m
            .iter()
            .enumerate()
            .all(|(mask, &v)| (mask as u32).count_ones() <= 1 || v.abs() <= TOL);
        return if additive {
            CapacityKind::Precise
        } else {
            CapacityKind::Belief
        };
    }
    if transforms::two_monotone_violation(n, lower).is_none() {
        CapacityKind::TwoMonotone
    } else {
        CapacityKind::General
    }
}
