//! The interface between the planners and a concrete state space.

use std::fmt;

use thiserror::Error;

/// Maximum number of discretized state dimensions a domain may expose.
pub const MAX_DIMS: usize = 4;

/// Continuous coordinates of a state, one value per discretized dimension.
/// Entries past [`Domain::dims`] are ignored.
pub type Coords = [f64; MAX_DIMS];

/// How a state dimension is discretized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DimKind {
    Linear,
    /// Periodic with period 2π; wrapped into `[0, 2π)` before binning.
    Angular,
}

/// A valid child produced by applying one motion primitive.
#[derive(Debug, Clone, PartialEq)]
pub struct Edge<S> {
    pub state: S,
    pub cost: f64,
}

/// Faults that abort a query, as opposed to an invalid child which is
/// silently dropped.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum DomainError {
    #[error("state ({x:.3}, {y:.3}) lies outside the map")]
    OutOfBounds { x: f64, y: f64 },
    #[error("primitive {index} does not exist (domain has {count})")]
    UnknownPrimitive { index: usize, count: usize },
    #[error("{0}")]
    Other(String),
}

/// A state space together with its motion primitives, cost model, heuristic
/// and goal test.
///
/// Implementations must be deterministic: the same state always yields the
/// same ordered list of children. The heuristic must be admissible and
/// consistent with respect to the edge costs, and every edge cost must be at
/// least [`Domain::min_edge_cost`].
pub trait Domain {
    type State: Clone + fmt::Debug;
    type Goal: fmt::Debug;

    /// Kinds of the discretized dimensions, in the order of [`Domain::coords`].
    fn dims(&self) -> &[DimKind];

    fn coords(&self, state: &Self::State) -> Coords;

    fn primitive_count(&self) -> usize;

    /// Applies primitive `index` to `state`. `Ok(None)` means the child is
    /// invalid (collision, zero progress, off the map) and is dropped.
    fn apply(
        &self,
        state: &Self::State,
        index: usize,
    ) -> Result<Option<Edge<Self::State>>, DomainError>;

    /// All valid children in primitive order, tagged with the primitive index.
    fn successors(
        &self,
        state: &Self::State,
        out: &mut Vec<(usize, Edge<Self::State>)>,
    ) -> Result<(), DomainError> {
        out.clear();
        for index in 0..self.primitive_count() {
            if let Some(edge) = self.apply(state, index)? {
                out.push((index, edge));
            }
        }
        Ok(())
    }

    fn heuristic(&self, state: &Self::State, goal: &Self::Goal) -> f64;

    fn in_goal(&self, state: &Self::State, goal: &Self::Goal) -> bool;

    /// Whether `state` is collision free and inside the map.
    fn is_valid(&self, state: &Self::State) -> bool;

    /// The edge-cost floor ε > 0.
    fn min_edge_cost(&self) -> f64;
}

/// A start state and goal set for one planning query.
#[derive(Debug, Clone)]
pub struct Query<S, G> {
    pub start: S,
    pub goal: G,
}

impl<S, G> Query<S, G> {
    pub fn new(start: S, goal: G) -> Self {
        Self { start, goal }
    }
}
