use std::cmp::Ordering;
use std::fmt;

use crate::domain::Coords;

/// Insertion sequence number of a vertex. Unique and strictly increasing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexId(pub u32);

impl VertexId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

/// A node of the search tree.
#[derive(Debug, Clone)]
pub struct Vertex<S> {
    pub id: VertexId,
    pub state: S,
    pub coords: Coords,
    pub g: f64,
    /// `g + h(state)`, fixed at insertion.
    pub f: f64,
    pub parent: Option<VertexId>,
    /// Primitive that produced this vertex from its parent.
    pub primitive: Option<usize>,
    pub active: bool,
    /// Popped and expanded; no longer part of the open set Q_v.
    pub expanded: bool,
    /// Coarsest level at which this vertex currently dominates its cell.
    pub dom_level: Option<usize>,
    /// Bit k set iff this vertex is v̂ of its cell at level k.
    pub dominates: u64,
}

pub(crate) fn lowest_level(mask: u64) -> Option<usize> {
    (mask != 0).then(|| mask.trailing_zeros() as usize)
}

/// Priority queue entry ordered so that `BinaryHeap` pops the smallest
/// `(f, id)` first.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Frontier {
    pub f: f64,
    pub id: VertexId,
}

impl PartialEq for Frontier {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Frontier {}

impl PartialOrd for Frontier {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Frontier {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .f
            .total_cmp(&self.f)
            .then_with(|| other.id.cmp(&self.id))
    }
}
