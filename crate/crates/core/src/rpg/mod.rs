//! The planning pipeline: possibility exploration in SE(3), radius-ρ foot
//! placement sampling around the found route, and mode-graph search.

mod explore;
mod modes;
mod plan;

pub use explore::{explore, ExplorationGraph};
pub use modes::{sample_modes, search_modes, ModeGraph, SampleRegion};
pub use plan::{plan, validate_mode_path, PlanCounters, PlanParams, PlanResult, PlanStatus};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RpgError {
    #[error("query error: {0}")]
    Query(String),
    #[error("invalid planner parameters: {0}")]
    Params(String),
}
