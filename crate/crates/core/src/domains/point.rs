use std::f64::consts::{SQRT_2, TAU};
use std::sync::Arc;

use crate::domain::{Coords, DimKind, Domain, DomainError, Edge};
use crate::worlds::{DistanceField, OccupancyGrid};

use super::GoalRegion;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateR2 {
    pub x: f64,
    pub y: f64,
}

impl StateR2 {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }
}

/// Holonomic point robot taking straight steps on an occupancy grid.
#[derive(Debug, Clone)]
pub struct PointRobot {
    grid: Arc<OccupancyGrid>,
    field: Arc<DistanceField>,
    /// `(dx, dy, cost)` per primitive.
    moves: Vec<(f64, f64, f64)>,
    epsilon: f64,
}

impl PointRobot {
    /// The eight king moves scaled by `step`: diagonals have length √2·step.
    /// Order: E, NE, N, NW, W, SW, S, SE.
    pub fn grid8(grid: Arc<OccupancyGrid>, step: f64) -> Self {
        let moves = [(1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1), (0, -1), (1, -1)]
            .iter()
            .map(|&(dx, dy)| {
                let cost = if dx != 0 && dy != 0 { SQRT_2 * step } else { step };
                (dx as f64 * step, dy as f64 * step, cost)
            })
            .collect();
        Self::with_moves(grid, moves, step)
    }

    /// `headings` steps of length `step` at equally spaced angles starting east.
    pub fn radial(grid: Arc<OccupancyGrid>, headings: usize, step: f64) -> Self {
        let moves = (0..headings)
            .map(|i| {
                let a = TAU * i as f64 / headings as f64;
                (step * a.cos(), step * a.sin(), step)
            })
            .collect();
        Self::with_moves(grid, moves, step)
    }

    fn with_moves(grid: Arc<OccupancyGrid>, moves: Vec<(f64, f64, f64)>, epsilon: f64) -> Self {
        Self {
            field: Arc::new(DistanceField::new(&grid)),
            grid,
            moves,
            epsilon,
        }
    }

    /// Same verdict as [`OccupancyGrid::segment_free`]: the same samples,
    /// except that those inside the obstacle-free disc around a checked
    /// sample are skipped.
    pub fn segment_free(&self, x0: f64, y0: f64, x1: f64, y1: f64) -> bool {
        let length = (x1 - x0).hypot(y1 - y0);
        let steps = ((length / (0.5 * self.grid.cell_size())).ceil() as usize).max(1);
        let spacing = length / steps as f64;
        let mut i = 0;
        while i <= steps {
            let t = i as f64 / steps as f64;
            let (x, y) = (x0 + t * (x1 - x0), y0 + t * (y1 - y0));
            if !self.grid.is_free(x, y) {
                return false;
            }
            let free = self.field.clearance(x, y) - 1e-9;
            let skip = if spacing > 0.0 && free > spacing {
                (free / spacing).floor() as usize
            } else {
                1
            };
            i += skip;
        }
        true
    }

    pub fn grid(&self) -> &OccupancyGrid {
        &self.grid
    }

    pub fn moves(&self) -> &[(f64, f64, f64)] {
        &self.moves
    }
}

const DIMS: [DimKind; 2] = [DimKind::Linear, DimKind::Linear];

impl Domain for PointRobot {
    type State = StateR2;
    type Goal = GoalRegion;

    fn dims(&self) -> &[DimKind] {
        &DIMS
    }

    fn coords(&self, s: &StateR2) -> Coords {
        [s.x, s.y, 0.0, 0.0]
    }

    fn primitive_count(&self) -> usize {
        self.moves.len()
    }

    fn apply(&self, s: &StateR2, index: usize) -> Result<Option<Edge<StateR2>>, DomainError> {
        let &(dx, dy, cost) = self.moves.get(index).ok_or(DomainError::UnknownPrimitive {
            index,
            count: self.moves.len(),
        })?;
        if !self.grid.contains(s.x, s.y) {
            return Err(DomainError::OutOfBounds { x: s.x, y: s.y });
        }
        let child = StateR2::new(s.x + dx, s.y + dy);
        if !self.segment_free(s.x, s.y, child.x, child.y) {
            return Ok(None);
        }
        Ok(Some(Edge { state: child, cost }))
    }

    fn heuristic(&self, s: &StateR2, goal: &GoalRegion) -> f64 {
        goal.distance(s.x, s.y)
    }

    fn in_goal(&self, s: &StateR2, goal: &GoalRegion) -> bool {
        goal.contains_position(s.x, s.y)
    }

    fn is_valid(&self, s: &StateR2) -> bool {
        self.grid.is_free(s.x, s.y)
    }

    fn min_edge_cost(&self) -> f64 {
        self.epsilon
    }
}
