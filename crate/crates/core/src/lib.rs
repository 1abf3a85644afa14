//! Multi-access coded caching built on maximal cross resolvable designs.
//!
//! The crate is organised bottom-up:
//!
//! * [`design`] builds and checks maximal cross resolvable designs (MCRDs).
//! * [`topology`] models user-to-cache association graphs and their
//!   per-group perfect matchings.
//! * [`engine`] runs placement, XOR delivery and per-user decoding.
//! * [`analysis`] evaluates closed-form rates and subpacketization levels
//!   for this scheme and its rivals, plus memory-sharing envelopes.
//!
//! All indices that name a domain object (class, block, group, user, cache,
//! file, subfile, point) are 1-based, matching how the objects are labelled
//! in the literature and in every serialized format this crate emits.

pub mod analysis;
pub mod design;
pub mod engine;
mod error;
pub mod topology;

pub use analysis::{Curve, RatePoint, SchemeId};
pub use design::{Design, VerificationReport, DEFAULT_POINT_BUDGET};
pub use engine::{
    BlockChoice, DemandGraph, PayloadMode, Placement, SchemeParams, Simulation,
    SimulationReport, Transmission,
};
pub use error::{MaccError, Result};
pub use topology::{CacheRef, MatchingAssignment, Topology, UserRef, ValidationReport};
