//! A two-sided matching market between users and content creators.
//!
//! Each user carries a nonnegative unit type vector and derives engagement
//! from a creator equal to the dot product of their types. Every time step
//! the platform recommends `k` creators per user; users then leave unless
//! all `k` recommendations clear an engagement threshold, and creators leave
//! unless enough users were assigned to them. The crate provides:
//!
//! - the domain model and participation-constraint checks ([`model`]),
//! - five recommendation algorithms, from the exact maximum-stable-set
//!   solver to practical heuristics ([`algorithms`]),
//! - departure dynamics and long-term engagement ([`dynamics`]),
//! - instance constructors, samplers, and calibration ([`instances`]),
//! - graph reductions mapping independent sets to stable sets
//!   ([`reduction`]),
//! - Monte-Carlo bound evaluation and experiment grids ([`analysis`]).

pub mod algorithms;
pub mod analysis;
pub mod dynamics;
pub mod error;
pub mod instances;
pub mod model;
pub mod reduction;

pub use error::{Error, Result};
pub use model::{
    audience_sizes, check_stable_set, engagement, is_happy, surviving_players, total_engagement,
    Instance, Matching, PlatformState, PlayerKind, StableSetReport, TypeVector, Violation,
};
