//! JSON model format.
//!
//! ```json
//! { "frame": ["w1", "w2", "w3"],
//!   "model": { "type": "mass",
//!              "entries": [ {"set": ["w1", "w2"], "value": 0.5},
//!                           {"set": ["w3"], "value": 0.5} ] },
//!   "events": { "left": ["w1", "w2"] } }
//! ```
//!
//! `type` is `mass` (focal sets, omitted sets carry no mass) or `lower`
//! (every nonempty proper subset listed; `∅ ↦ 0` and `Ω ↦ 1` are implied).
//! The optional `events` map names events for use on the command line.

use std::collections::{BTreeMap, HashSet};
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{Capacity, Event, Frame, MassFunction};
use crate::error::{Error, Result};
use crate::transforms;
use crate::TOL;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub frame: Vec<String>,
    pub model: ModelBody,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub events: BTreeMap<String, Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelBody {
    #[serde(rename = "type")]
    pub kind: ModelType,
    pub entries: Vec<Entry>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelType {
    Mass,
    Lower,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Entry {
    pub set: Vec<String>,
    pub value: f64,
}

/// A parsed model: the capacity, and the mass function when one was given.
#[derive(Debug, Clone)]
pub struct LoadedModel {
    pub frame: Arc<Frame>,
    pub capacity: Capacity,
    pub mass: Option<MassFunction>,
    pub events: BTreeMap<String, Event>,
}

impl LoadedModel {
    /// Resolves a named event, or labels joined with `+`.
    pub fn event(&self, text: &str) -> Result<Event> {
        let text = text.trim();
        if let Some(e) = self.events.get(text) {
            return Ok(*e);
        }
        if text.is_empty() {
            return Err(Error::ParseError("empty event".into()));
        }
        let labels: Vec<&str> = text.split('+').map(str::trim).collect();
        self.frame.event(&labels)
    }
}

impl ModelFile {
    pub fn from_mass(m: &MassFunction) -> ModelFile {
        let frame = m.frame();
        ModelFile {
            frame: frame.labels().to_vec(),
            model: ModelBody {
                kind: ModelType::Mass,
                entries: m
                    .focal_sets()
                    .map(|(e, v)| Entry {
                        set: e.outcomes().map(|i| frame.label(i).to_string()).collect(),
                        value: v,
                    })
                    .collect(),
            },
            events: BTreeMap::new(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model serializes")
    }

    pub fn into_model(self) -> Result<LoadedModel> {
        if let Some(bad) = self.frame.iter().find(|l| l.contains('+')) {
            return Err(Error::ParseError(format!(
                "outcome label `{bad}` contains `+`"
            )));
        }
        let frame = Frame::new(self.frame)?;
        let mut seen = HashSet::new();
        let mut parsed = Vec::with_capacity(self.model.entries.len());
        for entry in &self.model.entries {
            let e = frame.event(&entry.set)?;
            if entry.set.len() != e.len() {
                return Err(Error::ParseError(format!(
                    "repeated label in set {:?}",
                    entry.set
                )));
            }
            if !seen.insert(e.mask()) {
                return Err(Error::ParseError(format!(
                    "duplicate set {}",
                    frame.describe(e)
                )));
            }
            if !entry.value.is_finite() {
                return Err(Error::ParseError(format!(
                    "non-finite value for {}",
                    frame.describe(e)
                )));
            }
            parsed.push((e, entry.value));
        }

        let (capacity, mass) = match self.model.kind {
            ModelType::Mass => {
                if parsed.iter().any(|(e, v)| e.is_empty() && *v != 0.0) {
                    return Err(Error::EmptySetMass);
                }
                let m = MassFunction::new(
                    frame.clone(),
                    parsed.into_iter().filter(|(e, _)| !e.is_empty()),
                )?;
                (transforms::belief_from_mass(&m), Some(m))
            }
            ModelType::Lower => {
                let mut table = vec![f64::NAN; frame.num_events()];
                for (e, v) in parsed {
                    if e.is_empty() && v.abs() > TOL {
                        return Err(Error::InvalidCapacity(format!("lower(∅) = {v} ≠ 0")));
                    }
                    if e.is_full() && (v - 1.0).abs() > TOL {
                        return Err(Error::InvalidCapacity(format!("lower(Ω) = {v} ≠ 1")));
                    }
                    table[e.mask() as usize] = v;
                }
                table[0] = 0.0;
                table[frame.full().mask() as usize] = 1.0;
                if let Some(missing) = table.iter().position(|v| v.is_nan()) {
                    let e = frame.event_from_mask(missing as u32)?;
                    return Err(Error::ParseError(format!(
                        "lower model does not list {}",
                        frame.describe(e)
                    )));
                }
                (Capacity::from_lower(frame.clone(), table)?, None)
            }
        };

        let mut events = BTreeMap::new();
        for (name, labels) in self.events {
            if frame.index_of(&name).is_some() && labels != [name.clone()] {
                return Err(Error::ParseError(format!(
                    "event name `{name}` shadows an outcome label"
                )));
            }
            events.insert(name, frame.event(&labels)?);
        }
        Ok(LoadedModel {
            frame,
            capacity,
            mass,
            events,
        })
    }
}

pub fn parse_model(json: &str) -> Result<LoadedModel> {
    let file: ModelFile =
        serde_json::from_str(json).map_err(|e| Error::ParseError(e.to_string()))?;
    file.into_model()
}

pub fn load_model(path: impl AsRef<Path>) -> Result<LoadedModel> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::ParseError(format!("{}: {e}", path.display())))?;
    parse_model(&text)
}
