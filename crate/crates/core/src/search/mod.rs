//! Tree search with approximate dominance: fixed-resolution Hybrid A*,
//! restart-based multi-resolution search and the incremental planner.

mod dominance;
mod hybrid;
mod igha;
mod outcome;
mod rule;
mod schedule;
mod state;
mod vertex;

use thiserror::Error;

use crate::domain::DomainError;

pub use dominance::{Dominance, DominanceTable};
pub use hybrid::{hybrid_astar, iha_star, iha_star_unbounded};
pub use igha::ighastar;
pub use outcome::{
    Emission, Outcome, Path, SearchOptions, SearchStats, Snapshot, Status, Termination, TraceEntry,
    VertexClass,
};
pub use rule::{
    activate_dominant, Activation, ActivationOps, Hysteresis, Monotone, Restart, Rule, Shift,
    ShiftInput,
};
pub use schedule::{wrap_angle, CellKey, ResolutionSchedule, ScheduleSpec};
pub use state::SearchState;
pub use vertex::{Vertex, VertexId};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SearchError {
    #[error(transparent)]
    Domain(#[from] DomainError),
    /// The rule left every expandable vertex inactive.
    #[error("rule `{rule}` activated no vertex while {open} expandable vertices remain (iteration {iteration})")]
    RuleViolation {
        rule: String,
        open: usize,
        iteration: usize,
    },
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}
