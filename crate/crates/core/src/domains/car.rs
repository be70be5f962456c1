use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::domain::{Coords, DimKind, Domain, DomainError, Edge};
use crate::search::wrap_angle;
use crate::worlds::{DistanceField, OccupancyGrid};

use super::footprint::{DiscCover, Footprint};
use super::GoalRegion;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateSE2 {
    pub x: f64,
    pub y: f64,
    /// Heading in `[0, 2π)`.
    pub theta: f64,
}

impl StateSE2 {
    pub fn new(x: f64, y: f64, theta: f64) -> Self {
        Self {
            x,
            y,
            theta: wrap_angle(theta),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CarParams {
    pub wheelbase: f64,
    /// Largest steering angle, radians.
    pub max_steer: f64,
    /// Arc length of every primitive, meters.
    pub arc_length: f64,
    /// Extra cost per unit of normalised curvature: cost = s·(1 + p·|κ|/κ_max).
    pub curvature_penalty: f64,
    pub footprint: Footprint,
}

impl Default for CarParams {
    fn default() -> Self {
        Self {
            wheelbase: 0.6,
            max_steer: 0.5,
            arc_length: 1.0,
            curvature_penalty: 0.0,
            footprint: Footprint::default(),
        }
    }
}

/// Forward-driving kinematic bicycle with five constant-curvature arcs.
#[derive(Debug, Clone)]
pub struct KinematicCar {
    field: Arc<DistanceField>,
    cover: DiscCover,
    params: CarParams,
    curvatures: [f64; 5],
    sample_spacing: f64,
}

impl KinematicCar {
    pub fn new(grid: &OccupancyGrid, params: CarParams) -> Result<Self, DomainError> {
        Self::with_field(Arc::new(DistanceField::new(grid)), params)
    }

    /// Shares a precomputed distance field between domain instances.
    pub fn with_field(field: Arc<DistanceField>, params: CarParams) -> Result<Self, DomainError> {
        if !(params.wheelbase > 0.0 && params.arc_length > 0.0 && params.curvature_penalty >= 0.0) {
            return Err(DomainError::Other(format!("invalid car parameters {params:?}")));
        }
        if !(params.max_steer > 0.0 && params.max_steer < std::f64::consts::FRAC_PI_2) {
            return Err(DomainError::Other(format!(
                "maximum steering angle {} must lie in (0, π/2)",
                params.max_steer
            )));
        }
        let steer = params.max_steer;
        let curvatures = [-steer, -0.5 * steer, 0.0, 0.5 * steer, steer].map(|d| d.tan() / params.wheelbase);
        Ok(Self {
            sample_spacing: 0.5 * field.cell_size(),
            field,
            cover: DiscCover::new(&params.footprint),
            params,
            curvatures,
        })
    }

    pub fn params(&self) -> &CarParams {
        &self.params
    }

    /// Curvature of each primitive, right turns first.
    pub fn curvatures(&self) -> &[f64] {
        &self.curvatures
    }

    fn max_curvature(&self) -> f64 {
        self.curvatures[4]
    }
}

/// Pose reached after driving arc length `s` at curvature `kappa` from `from`.
pub fn arc_endpoint(from: &StateSE2, kappa: f64, s: f64) -> StateSE2 {
    let (bx, by) = if kappa == 0.0 {
        (s, 0.0)
    } else {
        ((kappa * s).sin() / kappa, (1.0 - (kappa * s).cos()) / kappa)
    };
    let (sin, cos) = from.theta.sin_cos();
    StateSE2::new(
        from.x + bx * cos - by * sin,
        from.y + bx * sin + by * cos,
        from.theta + kappa * s,
    )
}

const DIMS: [DimKind; 3] = [DimKind::Linear, DimKind::Linear, DimKind::Angular];

impl Domain for KinematicCar {
    type State = StateSE2;
    type Goal = GoalRegion;

    fn dims(&self) -> &[DimKind] {
        &DIMS
    }

    fn coords(&self, s: &StateSE2) -> Coords {
        [s.x, s.y, s.theta, 0.0]
    }

    fn primitive_count(&self) -> usize {
        self.curvatures.len()
    }

    fn apply(&self, s: &StateSE2, index: usize) -> Result<Option<Edge<StateSE2>>, DomainError> {
        let &kappa = self.curvatures.get(index).ok_or(DomainError::UnknownPrimitive {
            index,
            count: self.curvatures.len(),
        })?;
        if !self.field.contains(s.x, s.y) {
            return Err(DomainError::OutOfBounds { x: s.x, y: s.y });
        }
        let length = self.params.arc_length;
        let samples = (length / self.sample_spacing).ceil().max(1.0) as usize;
        for i in 1..=samples {
            let p = arc_endpoint(s, kappa, length * i as f64 / samples as f64);
            if !self.cover.is_clear(&self.field, p.x, p.y, p.theta) {
                return Ok(None);
            }
        }
        let child = arc_endpoint(s, kappa, length);
        let cost = length * (1.0 + self.params.curvature_penalty * kappa.abs() / self.max_curvature());
        Ok(Some(Edge { state: child, cost }))
    }

    fn heuristic(&self, s: &StateSE2, goal: &GoalRegion) -> f64 {
        goal.distance(s.x, s.y)
    }

    fn in_goal(&self, s: &StateSE2, goal: &GoalRegion) -> bool {
        goal.contains_position(s.x, s.y) && goal.heading_ok(s.theta)
    }

    fn is_valid(&self, s: &StateSE2) -> bool {
        self.cover.is_clear(&self.field, s.x, s.y, s.theta)
    }

    fn min_edge_cost(&self) -> f64 {
        self.params.arc_length
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn open_car() -> KinematicCar {
        let grid = OccupancyGrid::new(200, 200, 0.1).unwrap();
        KinematicCar::new(
            &grid,
            CarParams {
                arc_length: 2.0,
                ..CarParams::default()
            },
        )
        .unwrap()
    }

    #[test]
    fn straight_primitive() {
        let p = arc_endpoint(&StateSE2::new(0.0, 0.0, 0.0), 0.0, 2.0);
        assert_eq!((p.x, p.y, p.theta), (2.0, 0.0, 0.0));
    }

    #[test]
    fn arc_matches_closed_form() {
        let kappa = 0.4;
        let s = 1.5;
        let p = arc_endpoint(&StateSE2::new(0.0, 0.0, 0.0), kappa, s);
        assert!((p.x - (kappa * s).sin() / kappa).abs() < 1e-12);
        assert!((p.y - (1.0 - (kappa * s).cos()) / kappa).abs() < 1e-12);
        assert!((p.theta - kappa * s).abs() < 1e-12);
    }

    #[test]
    fn arc_matches_fine_integration() {
        let kappa = -0.7;
        let s = 2.0;
        let start = StateSE2::new(1.0, 2.0, 0.3);
        let (mut x, mut y, mut th) = (start.x, start.y, start.theta);
        let n = 200_000;
        let ds = s / n as f64;
        for _ in 0..n {
            let mid = th + 0.5 * kappa * ds;
            x += ds * mid.cos();
            y += ds * mid.sin();
            th += kappa * ds;
        }
        let p = arc_endpoint(&start, kappa, s);
        assert!((p.x - x).abs() < 1e-9 && (p.y - y).abs() < 1e-9);
    }

    #[test]
    fn left_then_right_restores_heading() {
        let car = open_car();
        let k = car.curvatures()[4];
        let a = arc_endpoint(&StateSE2::new(0.0, 0.0, 0.0), k, 2.0);
        let b = arc_endpoint(&a, -k, 2.0);
        assert!(b.theta.min(std::f64::consts::TAU - b.theta) < 1e-12);
        assert!(b.y > 0.0);
    }

    #[test]
    fn five_children_in_the_open() {
        let car = open_car();
        let mut out = Vec::new();
        car.successors(&StateSE2::new(10.0, 10.0, 0.0), &mut out).unwrap();
        assert_eq!(out.len(), 5);
        assert!(out.iter().all(|(_, e)| e.cost == 2.0));
        assert!(car.is_valid(&StateSE2::new(10.0, 10.0, 0.0)));
    }

    #[test]
    fn curvature_penalty_scales_cost() {
        let grid = OccupancyGrid::new(200, 200, 0.1).unwrap();
        let car = KinematicCar::new(
            &grid,
            CarParams {
                curvature_penalty: 0.5,
                ..CarParams::default()
            },
        )
        .unwrap();
        let e = car.apply(&StateSE2::new(10.0, 10.0, 0.0), 0).unwrap().unwrap();
        assert!((e.cost - 1.5).abs() < 1e-12);
        let e = car.apply(&StateSE2::new(10.0, 10.0, 0.0), 3).unwrap().unwrap();
        let half = (0.25f64).tan() / 0.5f64.tan();
        assert!((e.cost - (1.0 + 0.5 * half)).abs() < 1e-12);
    }

    #[test]
    fn wall_blocks_forward_arcs() {
        let mut grid = OccupancyGrid::new(100, 100, 0.1).unwrap();
        grid.fill_rect(5.5, 0.0, 6.0, 10.0, true);
        let car = KinematicCar::new(&grid, CarParams::default()).unwrap();
        assert!(car.apply(&StateSE2::new(4.5, 5.0, 0.0), 2).unwrap().is_none());
        assert!(car.apply(&StateSE2::new(4.5, 5.0, std::f64::consts::PI), 2).unwrap().is_some());
    }
}
