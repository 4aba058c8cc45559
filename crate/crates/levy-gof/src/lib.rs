//! Goodness-of-fit tests for the Levy distribution with unknown scale.

pub mod asym;
pub mod data;
pub mod dist;
pub mod error;
pub mod estimate;
pub mod mc;
pub mod quad;
pub mod special;
pub mod stats;

pub use dist::{AlternativeSpec, LevyScale, RngStream};
pub use error::{Error, Result};
pub use estimate::EstimatorKind;
pub use stats::{Family, JWeight, StatisticSpec, Tail};
