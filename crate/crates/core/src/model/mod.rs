//! In-memory forms of the model: frames, events, mass functions, capacities.

mod capacity;
mod frame;
mod interval;
mod mass;
pub mod schema;

pub use capacity::{Capacity, CapacityKind};
pub use frame::{Event, Frame, FrameId, Partition};
pub use interval::ProbabilityInterval;
pub use mass::{validate_mass, MassFunction};
