//! Concrete state spaces: a planar point robot, a kinematic car in SE(2)
//! and a kinodynamic car with a speed state on elevation maps.

mod car;
mod depth;
mod footprint;
mod goal;
mod kinodynamic;
mod point;

pub use car::{arc_endpoint, CarParams, KinematicCar, StateSE2};
pub use depth::{Deep, DepthLimited};
pub use footprint::{DiscCover, Footprint};
pub use goal::{angle_diff, GoalRegion};
pub use kinodynamic::{KinodynamicCar, KinodynamicParams, StateKinodynamic};
pub use point::{PointRobot, StateR2};

use crate::domain::Query;
use crate::worlds::QueryRecord;

pub fn point_query(r: &QueryRecord) -> Query<StateR2, GoalRegion> {
    Query::new(StateR2::new(r.x_s, r.y_s), GoalRegion::disc(r.x_g, r.y_g, r.r_g))
}

/// A blank start heading means east.
pub fn car_query(r: &QueryRecord) -> Query<StateSE2, GoalRegion> {
    Query::new(
        StateSE2::new(r.x_s, r.y_s, r.theta_s.unwrap_or(0.0)),
        GoalRegion::disc(r.x_g, r.y_g, r.r_g),
    )
}

/// A blank start heading means east; a blank start speed means standing still.
pub fn kinodynamic_query(r: &QueryRecord) -> Query<StateKinodynamic, GoalRegion> {
    Query::new(
        StateKinodynamic::new(r.x_s, r.y_s, r.theta_s.unwrap_or(0.0), r.v_s.unwrap_or(0.0)),
        GoalRegion::disc(r.x_g, r.y_g, r.r_g),
    )
}
