use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

/// Closed disc of goal positions, optionally restricted in heading and speed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GoalRegion {
    pub x: f64,
    pub y: f64,
    pub radius: f64,
    /// Target heading and allowed absolute deviation, radians.
    #[serde(default)]
    pub heading: Option<(f64, f64)>,
    /// Target speed and allowed absolute deviation, m/s.
    #[serde(default)]
    pub speed: Option<(f64, f64)>,
}

impl GoalRegion {
    pub fn disc(x: f64, y: f64, radius: f64) -> Self {
        Self {
            x,
            y,
            radius,
            heading: None,
            speed: None,
        }
    }

    /// Euclidean distance from `(x, y)` to the disc; zero inside it.
    pub fn distance(&self, x: f64, y: f64) -> f64 {
        ((x - self.x).hypot(y - self.y) - self.radius).max(0.0)
    }

    pub fn contains_position(&self, x: f64, y: f64) -> bool {
        (x - self.x).hypot(y - self.y) <= self.radius
    }

    pub fn heading_ok(&self, theta: f64) -> bool {
        self.heading.map_or(true, |(target, tol)| angle_diff(theta, target).abs() <= tol)
    }

    pub fn speed_ok(&self, v: f64) -> bool {
        self.speed.map_or(true, |(target, tol)| (v - target).abs() <= tol)
    }
}

/// Signed difference `a - b` wrapped into `[-π, π)`.
pub fn angle_diff(a: f64, b: f64) -> f64 {
    (a - b + PI).rem_euclid(TAU) - PI
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn distance_to_disc() {
        let g = GoalRegion::disc(0.0, 0.0, 1.0);
        assert_eq!(g.distance(0.0, 0.0), 0.0);
        assert_eq!(g.distance(3.0, 4.0), 4.0);
    }

    #[test]
    fn boundary_is_inside() {
        let g = GoalRegion::disc(1.0, 1.0, 2.0);
        assert!(g.contains_position(3.0, 1.0));
        assert!(!g.contains_position(3.0 + 1e-9, 1.0));
    }

    #[test]
    fn heading_tolerance() {
        let g = GoalRegion {
            heading: Some((0.0, 0.2)),
            ..GoalRegion::disc(0.0, 0.0, 1.0)
        };
        assert!(g.heading_ok(TAU - 0.1));
        assert!(!g.heading_ok(0.5));
        assert!(GoalRegion::disc(0.0, 0.0, 1.0).heading_ok(3.0));
    }
}
