use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::domain::{Coords, DimKind, Domain, DomainError, Edge};
use crate::search::wrap_angle;
use crate::worlds::{DistanceField, ElevationMap, TerrainLimits};

use super::footprint::{DiscCover, Footprint};
use super::GoalRegion;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateKinodynamic {
    pub x: f64,
    pub y: f64,
    pub theta: f64,
    /// Forward speed in the body frame, m/s.
    pub v: f64,
}

impl StateKinodynamic {
    pub fn new(x: f64, y: f64, theta: f64, v: f64) -> Self {
        Self {
            x,
            y,
            theta: wrap_angle(theta),
            v,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KinodynamicParams {
    pub wheelbase: f64,
    pub max_steer: f64,
    /// Magnitude of the braking and accelerating primitives, m/s².
    pub accel: f64,
    /// Duration of every primitive, seconds.
    pub duration: f64,
    /// Minimum number of forward-Euler substeps per primitive.
    pub substeps: usize,
    pub v_min: f64,
    pub v_max: f64,
    /// Weight of the mean terrain slope in the edge cost.
    pub roughness_weight: f64,
    pub limits: TerrainLimits,
    pub footprint: Footprint,
}

impl Default for KinodynamicParams {
    fn default() -> Self {
        Self {
            wheelbase: 0.6,
            max_steer: 0.5,
            accel: 1.0,
            duration: 1.0,
            substeps: 10,
            v_min: 0.0,
            v_max: 3.0,
            roughness_weight: 1.0,
            limits: TerrainLimits::default(),
            footprint: Footprint::default(),
        }
    }
}

/// Kinematic bicycle with a speed state on an elevation map. Primitives are
/// the product of five steering angles and three accelerations; time is the
/// cost, inflated on rough terrain.
#[derive(Debug, Clone)]
pub struct KinodynamicCar {
    field: Arc<DistanceField>,
    slope: Arc<Vec<f64>>,
    map_width: usize,
    map_height: usize,
    cell: f64,
    cover: DiscCover,
    params: KinodynamicParams,
    controls: Vec<(f64, f64)>,
    substeps: usize,
}

const PROGRESS_FLOOR: f64 = 1e-9;

impl KinodynamicCar {
    pub fn new(map: &ElevationMap, params: KinodynamicParams) -> Result<Self, DomainError> {
        if !(params.wheelbase > 0.0 && params.duration > 0.0 && params.accel >= 0.0) {
            return Err(DomainError::Other(format!("invalid vehicle parameters {params:?}")));
        }
        if !(params.v_min >= 0.0 && params.v_max > params.v_min) {
            return Err(DomainError::Other(format!(
                "speed range [{}, {}] is empty",
                params.v_min, params.v_max
            )));
        }
        if !(params.max_steer > 0.0 && params.max_steer < std::f64::consts::FRAC_PI_2) {
            return Err(DomainError::Other(format!(
                "maximum steering angle {} must lie in (0, π/2)",
                params.max_steer
            )));
        }
        let steer = params.max_steer;
        let controls = [-steer, -0.5 * steer, 0.0, 0.5 * steer, steer]
            .iter()
            .flat_map(|&d| [-params.accel, 0.0, params.accel].map(|a| (d, a)))
            .collect();
        // substeps no longer than half a map cell at top speed
        let needed = (params.v_max * params.duration / (0.5 * map.cell_size())).ceil() as usize;
        Ok(Self {
            field: Arc::new(DistanceField::new(&map.obstacle_mask(&params.limits))),
            slope: Arc::new(map.slope_field()),
            map_width: map.width(),
            map_height: map.height(),
            cell: map.cell_size(),
            cover: DiscCover::new(&params.footprint),
            params,
            controls,
            substeps: params.substeps.max(needed).max(1),
        })
    }

    pub fn params(&self) -> &KinodynamicParams {
        &self.params
    }

    /// `(steering angle, acceleration)` of each primitive.
    pub fn controls(&self) -> &[(f64, f64)] {
        &self.controls
    }

    fn slope_at(&self, x: f64, y: f64) -> f64 {
        let ix = ((x / self.cell) as usize).min(self.map_width - 1);
        let iy = ((y / self.cell) as usize).min(self.map_height - 1);
        self.slope[iy * self.map_width + ix]
    }

    /// Integrates one control from `s` and returns the end state, the path
    /// length driven and the mean slope, or `None` on collision.
    pub fn rollout(&self, s: &StateKinodynamic, steer: f64, accel: f64) -> Option<(StateKinodynamic, f64, f64)> {
        let p = &self.params;
        let dt = p.duration / self.substeps as f64;
        let (mut x, mut y, mut theta, mut v) = (s.x, s.y, s.theta, s.v);
        let mut travelled = 0.0;
        let mut slope = 0.0;
        for _ in 0..self.substeps {
            let (sin, cos) = theta.sin_cos();
            x += v * cos * dt;
            y += v * sin * dt;
            theta += v * steer.tan() / p.wheelbase * dt;
            travelled += v * dt;
            v = (v + accel * dt).clamp(p.v_min, p.v_max);
            if !self.cover.is_clear(&self.field, x, y, theta) {
                return None;
            }
            slope += self.slope_at(x, y);
        }
        Some((
            StateKinodynamic::new(x, y, theta, v),
            travelled,
            slope / self.substeps as f64,
        ))
    }
}

const DIMS: [DimKind; 4] = [DimKind::Linear, DimKind::Linear, DimKind::Angular, DimKind::Linear];

impl Domain for KinodynamicCar {
    type State = StateKinodynamic;
    type Goal = GoalRegion;

    fn dims(&self) -> &[DimKind] {
        &DIMS
    }

    fn coords(&self, s: &StateKinodynamic) -> Coords {
        [s.x, s.y, s.theta, s.v]
    }

    fn primitive_count(&self) -> usize {
        self.controls.len()
    }

    fn apply(
        &self,
        s: &StateKinodynamic,
        index: usize,
    ) -> Result<Option<Edge<StateKinodynamic>>, DomainError> {
        let &(steer, accel) = self.controls.get(index).ok_or(DomainError::UnknownPrimitive {
            index,
            count: self.controls.len(),
        })?;
        if !self.field.contains(s.x, s.y) {
            return Err(DomainError::OutOfBounds { x: s.x, y: s.y });
        }
        let Some((child, travelled, roughness)) = self.rollout(s, steer, accel) else {
            return Ok(None);
        };
        if travelled < PROGRESS_FLOOR {
            return Ok(None);
        }
        let cost = self.params.duration * (1.0 + self.params.roughness_weight * roughness);
        Ok(Some(Edge { state: child, cost }))
    }

    fn heuristic(&self, s: &StateKinodynamic, goal: &GoalRegion) -> f64 {
        goal.distance(s.x, s.y) / self.params.v_max
    }

    fn in_goal(&self, s: &StateKinodynamic, goal: &GoalRegion) -> bool {
        goal.contains_position(s.x, s.y) && goal.heading_ok(s.theta) && goal.speed_ok(s.v)
    }

    fn is_valid(&self, s: &StateKinodynamic) -> bool {
        s.v >= self.params.v_min
            && s.v <= self.params.v_max
            && self.cover.is_clear(&self.field, s.x, s.y, s.theta)
    }

    fn min_edge_cost(&self) -> f64 {
        self.params.duration
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flat() -> KinodynamicCar {
        let map = ElevationMap::new(100, 100, 0.2, vec![0.0; 10_000]).unwrap();
        KinodynamicCar::new(&map, KinodynamicParams::default()).unwrap()
    }

    const STRAIGHT_COAST: usize = 7;

    #[test]
    fn control_order() {
        let car = flat();
        assert_eq!(car.controls().len(), 15);
        assert_eq!(car.controls()[STRAIGHT_COAST], (0.0, 0.0));
    }

    #[test]
    fn standing_still_is_dropped() {
        let car = flat();
        let s = StateKinodynamic::new(10.0, 10.0, 0.0, 0.0);
        assert!(car.apply(&s, STRAIGHT_COAST).unwrap().is_none());
        assert!(car.apply(&s, STRAIGHT_COAST + 1).unwrap().is_some());
    }

    #[test]
    fn coasting_covers_speed_times_duration() {
        let car = flat();
        let e = car
            .apply(&StateKinodynamic::new(5.0, 10.0, 0.0, 2.0), STRAIGHT_COAST)
            .unwrap()
            .unwrap();
        assert!((e.state.x - 7.0).abs() < 1e-12);
        assert_eq!(e.state.y, 10.0);
        assert_eq!(e.cost, 1.0);
    }

    #[test]
    fn displacement_scales_with_speed() {
        let car = flat();
        let from = |v| {
            let s = StateKinodynamic::new(5.0, 10.0, 0.0, v);
            car.apply(&s, 10).unwrap().unwrap().state
        };
        let (a, b) = (from(1.0), from(2.0));
        let da = (a.x - 5.0).hypot(a.y - 10.0);
        let db = (b.x - 5.0).hypot(b.y - 10.0);
        assert!(db > 1.9 * da);
    }

    #[test]
    fn speed_is_clamped() {
        let car = flat();
        let mut out = Vec::new();
        car.successors(&StateKinodynamic::new(10.0, 10.0, 0.0, 2.9), &mut out).unwrap();
        assert!(out.iter().all(|(_, e)| e.state.v >= 0.0 && e.state.v <= 3.0));
        assert!(out.iter().any(|(_, e)| e.state.v == 3.0));
    }

    #[test]
    fn heuristic_is_time_at_top_speed() {
        let car = flat();
        let goal = GoalRegion::disc(10.0, 0.0, 1.0);
        let s = StateKinodynamic::new(10.0, 11.0, 0.0, 0.0);
        let car5 = KinodynamicCar {
            params: KinodynamicParams {
                v_max: 5.0,
                ..*car.params()
            },
            ..car
        };
        assert!((car5.heuristic(&s, &goal) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn rough_terrain_costs_more() {
        let heights = (0..10_000).map(|i| ((i % 100) as f32) * 0.04).collect();
        let map = ElevationMap::new(100, 100, 0.2, heights).unwrap();
        let car = KinodynamicCar::new(&map, KinodynamicParams::default()).unwrap();
        let e = car
            .apply(&StateKinodynamic::new(5.0, 10.0, 0.0, 2.0), STRAIGHT_COAST)
            .unwrap()
            .unwrap();
        assert!((e.cost - 1.2).abs() < 1e-6);
    }
}
