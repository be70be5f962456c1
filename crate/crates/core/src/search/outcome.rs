use std::fmt;
use std::str::FromStr;

use crate::domain::Coords;

/// A root-to-goal sequence of states.
#[derive(Debug, Clone, PartialEq)]
pub struct Path<S> {
    pub states: Vec<S>,
    /// `primitives[i]` takes `states[i]` to `states[i + 1]`.
    pub primitives: Vec<usize>,
    pub cost: f64,
}

impl<S> Path<S> {
    pub fn edge_count(&self) -> usize {
        self.primitives.len()
    }
}

/// One improving solution reported by an anytime planner.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Emission {
    pub cost: f64,
    /// Cumulative expansions when the path was found.
    pub expansions: u64,
    pub iteration: usize,
    pub level: usize,
}

/// How a query ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Status {
    /// The planner ran to completion. A path may or may not have been found;
    /// see [`Status::Failure`].
    Terminated,
    /// The expansion budget ran out first.
    Budget,
    /// The planner completed without finding any path.
    Failure,
    /// Stopped at the first path on request.
    FirstPath,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Terminated => "optimal-terminated",
            Status::Budget => "budget",
            Status::Failure => "failure",
            Status::FirstPath => "first-path",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Status {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "optimal-terminated" => Ok(Status::Terminated),
            "budget" => Ok(Status::Budget),
            "failure" => Ok(Status::Failure),
            "first-path" => Ok(Status::FirstPath),
            other => Err(format!("unknown status `{other}`")),
        }
    }
}

/// When the incremental planner stops once its open set still holds
/// vertices below the incumbent cost.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Termination {
    /// Run until no open vertex has `f < w(π̂)`. Finds the best path in the
    /// full tree; may be exponentially expensive.
    #[default]
    Exhaustive,
    /// Stop once the finest level has no activatable vertex left, the same
    /// point at which restart-based multi-resolution search stops.
    Schedule,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    /// Maximum number of expansions.
    pub budget: u64,
    pub termination: Termination,
    /// Record every expansion in [`SearchStats::trace`].
    pub trace: bool,
    /// Check per-pop and per-edge invariants; violations abort the query.
    pub check_invariants: bool,
    /// Keep a vertex snapshot for rendering.
    pub snapshot: bool,
    /// Stop as soon as the first path is emitted.
    pub first_path_only: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            budget: 100_000,
            termination: Termination::Exhaustive,
            trace: false,
            check_invariants: cfg!(debug_assertions),
            snapshot: false,
            first_path_only: false,
        }
    }
}

impl SearchOptions {
    pub fn with_budget(budget: u64) -> Self {
        Self {
            budget,
            ..Self::default()
        }
    }
}

/// One expansion, in order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceEntry {
    pub iteration: usize,
    pub level: usize,
    pub id: u32,
    pub coords: Coords,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SearchStats {
    pub expansions: u64,
    /// Forward-search iterations run.
    pub iterations: usize,
    pub iteration_expansions: Vec<u64>,
    /// Resolution level of each iteration.
    pub iteration_levels: Vec<usize>,
    pub emissions: Vec<Emission>,
    pub status: Option<Status>,
    pub max_active: usize,
    pub max_open: usize,
    pub vertices_created: u64,
    pub vertices_bounded: u64,
    pub trace: Vec<TraceEntry>,
}

impl SearchStats {
    pub fn status(&self) -> Status {
        self.status.unwrap_or(Status::Failure)
    }

    pub fn first_path_expansions(&self) -> Option<u64> {
        self.emissions.first().map(|e| e.expansions)
    }

    pub fn best_path_expansions(&self) -> Option<u64> {
        self.emissions.last().map(|e| e.expansions)
    }

    pub fn best_cost(&self) -> Option<f64> {
        self.emissions.last().map(|e| e.cost)
    }

    /// Expanded coordinates of one iteration, in expansion order.
    pub fn trace_of_iteration(&self, iteration: usize) -> Vec<Coords> {
        self.trace
            .iter()
            .filter(|t| t.iteration == iteration)
            .map(|t| t.coords)
            .collect()
    }
}

/// Classification of a vertex in a [`Snapshot`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VertexClass {
    Active,
    Inactive,
    Expanded,
    Bounded,
}

/// Final vertex set of a search, for visualisation.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Snapshot {
    pub vertices: Vec<(VertexClass, Coords)>,
}

impl Snapshot {
    pub fn count(&self, class: VertexClass) -> usize {
        self.vertices.iter().filter(|(c, _)| *c == class).count()
    }
}

/// Result of a planner run.
#[derive(Debug, Clone)]
pub struct Outcome<S> {
    pub best: Option<Path<S>>,
    pub stats: SearchStats,
    pub snapshot: Option<Snapshot>,
}

impl<S> Outcome<S> {
    pub fn status(&self) -> Status {
        self.stats.status()
    }

    pub fn cost(&self) -> Option<f64> {
        self.best.as_ref().map(|p| p.cost)
    }
}
