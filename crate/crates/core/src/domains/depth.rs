use crate::domain::{Coords, DimKind, Domain, DomainError, Edge};

/// A state of [`DepthLimited`]: the inner state and its depth in the tree.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Deep<S> {
    pub state: S,
    pub depth: usize,
}

/// Cuts a domain's search tree at a fixed depth, making it finite. Depth is
/// not part of the discretized coordinates.
#[derive(Debug, Clone)]
pub struct DepthLimited<D> {
    inner: D,
    max_depth: usize,
}

impl<D: Domain> DepthLimited<D> {
    pub fn new(inner: D, max_depth: usize) -> Self {
        Self { inner, max_depth }
    }

    pub fn inner(&self) -> &D {
        &self.inner
    }

    pub fn max_depth(&self) -> usize {
        self.max_depth
    }

    pub fn root(&self, state: D::State) -> Deep<D::State> {
        Deep { state, depth: 0 }
    }
}

impl<D: Domain> Domain for DepthLimited<D> {
    type State = Deep<D::State>;
    type Goal = D::Goal;

    fn dims(&self) -> &[DimKind] {
        self.inner.dims()
    }

    fn coords(&self, s: &Self::State) -> Coords {
        self.inner.coords(&s.state)
    }

    fn primitive_count(&self) -> usize {
        self.inner.primitive_count()
    }

    fn apply(&self, s: &Self::State, index: usize) -> Result<Option<Edge<Self::State>>, DomainError> {
        if s.depth >= self.max_depth {
            return Ok(None);
        }
        Ok(self.inner.apply(&s.state, index)?.map(|e| Edge {
            state: Deep {
                state: e.state,
                depth: s.depth + 1,
            },
            cost: e.cost,
        }))
    }

    fn heuristic(&self, s: &Self::State, goal: &D::Goal) -> f64 {
        self.inner.heuristic(&s.state, goal)
    }

    fn in_goal(&self, s: &Self::State, goal: &D::Goal) -> bool {
        self.inner.in_goal(&s.state, goal)
    }

    fn is_valid(&self, s: &Self::State) -> bool {
        self.inner.is_valid(&s.state)
    }

    fn min_edge_cost(&self) -> f64 {
        self.inner.min_edge_cost()
    }
}
