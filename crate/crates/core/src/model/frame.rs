use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::MAX_FRAME;

/// Identity of a frame: its cardinality plus a digest of its labels.
///
/// Two frames built from the same ordered labels share an id, so events
/// created from either are interchangeable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FrameId {
    n: u8,
    digest: u64,
}

impl FrameId {
    pub fn n(self) -> usize {
        self.n as usize
    }

    pub fn full_mask(self) -> u32 {
        full_mask(self.n as usize)
    }
}

pub(crate) fn full_mask(n: usize) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

// FNV-1a; labels are separated by a byte that cannot occur in UTF-8.
fn digest(labels: &[String]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for label in labels {
        for b in label.bytes().chain(std::iter::once(0xff)) {
            h ^= b as u64;
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
    }
    h
}

/// A finite, labeled outcome space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frame {
    labels: Vec<String>,
    id: FrameId,
}

impl Frame {
    pub fn new<I, S>(labels: I) -> Result<Arc<Frame>>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() || labels.len() > MAX_FRAME {
            return Err(Error::InvalidFrame(format!(
                "frame needs between 1 and {MAX_FRAME} outcomes, got {}",
                labels.len()
            )));
        }
        let mut seen = HashSet::new();
        for l in &labels {
            if l.is_empty() {
                return Err(Error::InvalidFrame("empty outcome label".into()));
            }
            if !seen.insert(l.as_str()) {
                return Err(Error::InvalidFrame(format!(
                    "duplicate outcome label `{l}`"
                )));
            }
        }
        let id = FrameId {
            n: labels.len() as u8,
            digest: digest(&labels),
        };
        Ok(Arc::new(Frame { labels, id }))
    }

    /// Frame `w1..wn`.
    pub fn numbered(n: usize) -> Result<Arc<Frame>> {
        Frame::new((1..=n).map(|i| format!("w{i}")))
    }

    pub fn id(&self) -> FrameId {
        self.id
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Number of events, `2^n`.
    pub fn num_events(&self) -> usize {
        1usize << self.n()
    }

    pub fn empty(&self) -> Event {
        Event::from_mask_unchecked(0, self.id)
    }

    pub fn full(&self) -> Event {
        Event::from_mask_unchecked(self.id.full_mask(), self.id)
    }

    pub fn singleton(&self, i: usize) -> Event {
        assert!(i < self.n(), "outcome index {i} out of range");
        Event::from_mask_unchecked(1 << i, self.id)
    }

    pub fn event_from_mask(&self, mask: u32) -> Result<Event> {
        if mask & !self.id.full_mask() != 0 {
            return Err(Error::InvalidFrame(format!(
                "mask {mask:#b} exceeds frame of size {}",
                self.n()
            )));
        }
        Ok(Event::from_mask_unchecked(mask, self.id))
    }

    pub fn event_from_indices(&self, indices: &[usize]) -> Result<Event> {
        let mut mask = 0u32;
        for &i in indices {
            if i >= self.n() {
                return Err(Error::InvalidFrame(format!(
                    "outcome index {i} out of range"
                )));
            }
            mask |= 1 << i;
        }
        Ok(Event::from_mask_unchecked(mask, self.id))
    }

    /// Event made of the named outcomes.
    pub fn event<S: AsRef<str>>(&self, labels: &[S]) -> Result<Event> {
        let mut mask = 0u32;
        for l in labels {
            let l = l.as_ref();
            let i = self
                .index_of(l)
                .ok_or_else(|| Error::UnknownLabel(l.to_string()))?;
            mask |= 1 << i;
        }
        Ok(Event::from_mask_unchecked(mask, self.id))
    }

    /// All `2^n` events in mask order.
    pub fn events(&self) -> impl Iterator<Item = Event> + '_ {
        (0..self.num_events() as u32).map(move |m| Event::from_mask_unchecked(m, self.id))
    }

    /// Labels of an event's outcomes joined by `+`; `{}` for the empty event.
    pub fn describe(&self, e: Event) -> String {
        if e.is_empty() {
            return "{}".to_string();
        }
        e.outcomes()
            .map(|i| self.labels[i].as_str())
            .collect::<Vec<_>>()
            .join("+")
    }
}

/// A subset of a frame, stored as a bit mask over outcome indices.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Event {
    mask: u32,
    frame: FrameId,
}

impl Event {
    pub(crate) fn from_mask_unchecked(mask: u32, frame: FrameId) -> Event {
        Event { mask, frame }
    }

    pub fn mask(self) -> u32 {
        self.mask
    }

    pub fn frame_id(self) -> FrameId {
        self.frame
    }

    pub fn len(self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.mask == 0
    }

    pub fn is_full(self) -> bool {
        self.mask == self.frame.full_mask()
    }

    pub fn contains(self, i: usize) -> bool {
        i < 32 && self.mask & (1 << i) != 0
    }

    /// Outcome indices in ascending order.
    pub fn outcomes(self) -> impl Iterator<Item = usize> {
        let mask = self.mask;
        (0..32usize).filter(move |&i| mask & (1 << i) != 0)
    }

    pub fn complement(self) -> Event {
        Event {
            mask: !self.mask & self.frame.full_mask(),
            frame: self.frame,
        }
    }

    fn same_frame(self, other: Event) -> Result<()> {
        if self.frame == other.frame {
            Ok(())
        } else {
            Err(Error::FrameMismatch)
        }
    }

    pub fn intersect(self, other: Event) -> Result<Event> {
        self.same_frame(other)?;
        Ok(Event {
            mask: self.mask & other.mask,
            frame: self.frame,
        })
    }

    pub fn union(self, other: Event) -> Result<Event> {
        self.same_frame(other)?;
        Ok(Event {
            mask: self.mask | other.mask,
            frame: self.frame,
        })
    }

    /// `self \ other`.
    pub fn minus(self, other: Event) -> Result<Event> {
        self.same_frame(other)?;
        Ok(Event {
            mask: self.mask & !other.mask,
            frame: self.frame,
        })
    }

    pub fn is_subset_of(self, other: Event) -> Result<bool> {
        self.same_frame(other)?;
        Ok(self.mask & !other.mask == 0)
    }
}

impl fmt::Debug for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Event({:0width$b})", self.mask, width = self.frame.n())
    }
}

/// A partition of the frame into nonempty, pairwise disjoint blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    blocks: Vec<Event>,
}

impl Partition {
    pub fn new(blocks: Vec<Event>) -> Result<Partition> {
        let first = blocks
            .first()
            .ok_or_else(|| Error::InvalidPartition("no blocks".into()))?;
        let frame = first.frame_id();
        let mut covered = 0u32;
        for b in &blocks {
            if b.frame_id() != frame {
                return Err(Error::FrameMismatch);
            }
            if b.is_empty() {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            if covered & b.mask() != 0 {
                return Err(Error::InvalidPartition("blocks overlap".into()));
            }
            covered |= b.mask();
        }
        if covered != frame.full_mask() {
            return Err(Error::InvalidPartition(
                "blocks do not cover the frame".into(),
            ));
        }
        Ok(Partition { blocks })
    }

    /// `{b, bᶜ}`.
    pub fn binary(b: Event) -> Result<Partition> {
        Partition::new(vec![b, b.complement()])
    }

    pub fn blocks(&self) -> &[Event] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Block containing outcome `i`.
    pub fn block_of(&self, i: usize) -> Event {
        *self
            .blocks
            .iter()
            .find(|b| b.contains(i))
            .expect("partition covers the frame")
    }
}
