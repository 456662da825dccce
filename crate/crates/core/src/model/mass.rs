use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::model::{Event, Frame};
use crate::TOL;

/// Masses below this magnitude are treated as floating-point residue and
/// dropped from the focal-set map.
pub(crate) const MASS_NOISE: f64 = 1e-14;

/// Nonnegative masses on nonempty events summing to one: the distribution of
/// a random set.
#[derive(Debug, Clone, PartialEq)]
pub struct MassFunction {
    frame: Arc<Frame>,
    entries: BTreeMap<u32, f64>,
}

impl MassFunction {
    /// Builds and validates a mass function. Repeated events accumulate;
    /// zero masses are dropped.
    pub fn new<I>(frame: Arc<Frame>, entries: I) -> Result<MassFunction>
    where
        I: IntoIterator<Item = (Event, f64)>,
    {
        let mut map: BTreeMap<u32, f64> = BTreeMap::new();
        for (e, v) in entries {
            if e.frame_id() != frame.id() {
                return Err(Error::FrameMismatch);
            }
            *map.entry(e.mask()).or_insert(0.0) += v;
        }
        let m = MassFunction {
            frame,
            entries: map,
        };
        validate_mass(&m)?;
        Ok(m.normalized_entries())
    }

    pub(crate) fn from_raw(frame: Arc<Frame>, entries: BTreeMap<u32, f64>) -> MassFunction {
        MassFunction { frame, entries }.normalized_entries()
    }

    fn normalized_entries(mut self) -> MassFunction {
        self.entries.retain(|_, v| v.abs() > MASS_NOISE);
        for v in self.entries.values_mut() {
            if *v < 0.0 {
                *v = 0.0;
            }
        }
        self.entries.retain(|_, v| *v > 0.0);
        self
    }

    /// `{Ω: 1}`.
    pub fn vacuous(frame: Arc<Frame>) -> MassFunction {
        let full = frame.full().mask();
        MassFunction {
            frame,
            entries: BTreeMap::from([(full, 1.0)]),
        }
    }

    /// Masses on singletons: a precise probability.
    pub fn precise(frame: Arc<Frame>, probs: &[f64]) -> Result<MassFunction> {
        if probs.len() != frame.n() {
            return Err(Error::DimensionMismatch {
                expected: frame.n(),
                got: probs.len(),
            });
        }
        let entries: Vec<(Event, f64)> = probs
            .iter()
            .enumerate()
            .map(|(i, &p)| (frame.singleton(i), p))
            .collect();
        MassFunction::new(frame, entries)
    }

    pub fn frame(&self) -> &Arc<Frame> {
        &self.frame
    }

    /// Mass of an event (0 for non-focal events).
    pub fn mass(&self, e: Event) -> f64 {
        self.entries.get(&e.mask()).copied().unwrap_or(0.0)
    }

    /// Focal sets with their masses, in mask order.
    pub fn focal_sets(&self) -> impl Iterator<Item = (Event, f64)> + '_ {
        let id = self.frame.id();
        self.entries
            .iter()
            .map(move |(&m, &v)| (Event::from_mask_unchecked(m, id), v))
    }

    pub(crate) fn raw_entries(&self) -> &BTreeMap<u32, f64> {
        &self.entries
    }

    pub fn num_focal(&self) -> usize {
        self.entries.len()
    }

    pub fn total(&self) -> f64 {
        self.entries.values().sum()
    }

    /// Belief `Σ_{B ⊆ a} m(B)` by direct summation over focal sets.
    pub fn belief(&self, a: Event) -> f64 {
        let am = a.mask();
        self.entries
            .iter()
            .filter(|(&m, _)| m & !am == 0)
            .map(|(_, v)| v)
            .sum()
    }

    /// Plausibility `Σ_{B ∩ a ≠ ∅} m(B)` by direct summation over focal sets.
    pub fn plausibility(&self, a: Event) -> f64 {
        let am = a.mask();
        self.entries
            .iter()
            .filter(|(&m, _)| m & am != 0)
            .map(|(_, v)| v)
            .sum()
    }

    /// Maximum absolute mass difference over all events.
    pub fn distance(&self, other: &MassFunction) -> f64 {
        let keys: std::collections::BTreeSet<u32> = self
            .entries
            .keys()
            .chain(other.entries.keys())
            .copied()
            .collect();
        keys.into_iter()
            .map(|k| {
                let a = self.entries.get(&k).copied().unwrap_or(0.0);
                let b = other.entries.get(&k).copied().unwrap_or(0.0);
                (a - b).abs()
            })
            .fold(0.0, f64::max)
    }
}

/// Checks every mass-function invariant and returns the first violation.
///
/// Order of checks: empty-set mass, negative masses (beyond [`TOL`]),
/// normalization (`|Σ − 1| > TOL`).
pub fn validate_mass(m: &MassFunction) -> Result<()> {
    if let Some(&v) = m.entries.get(&0) {
        if v != 0.0 {
            return Err(Error::EmptySetMass);
        }
    }
    for (&mask, &v) in &m.entries {
        if !v.is_finite() || v < -TOL {
            return Err(Error::NegativeMass { mask, value: v });
        }
    }
    let sum: f64 = m.entries.values().sum();
    if (sum - 1.0).abs() > TOL {
        return Err(Error::MassNotNormalized { sum });
    }
    Ok(())
}
