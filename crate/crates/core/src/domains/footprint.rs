use serde::{Deserialize, Serialize};

use crate::worlds::DistanceField;

/// Rectangular vehicle body, referenced to the rear axle center.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Footprint {
    pub length: f64,
    pub width: f64,
    /// Distance from the rear bumper to the rear axle.
    pub rear_overhang: f64,
}

impl Default for Footprint {
    fn default() -> Self {
        Self {
            length: 0.8,
            width: 0.4,
            rear_overhang: 0.15,
        }
    }
}

impl Footprint {
    /// Equal discs along the body axis that together cover the rectangle:
    /// `(offset along the heading, radius)`.
    pub fn discs(&self) -> (Vec<f64>, f64) {
        let n = (self.length / self.width).ceil().max(1.0) as usize;
        let segment = self.length / n as f64;
        let radius = (0.5 * segment).hypot(0.5 * self.width);
        let offsets = (0..n)
            .map(|i| -self.rear_overhang + (i as f64 + 0.5) * segment)
            .collect();
        (offsets, radius)
    }
}

/// Precomputed disc cover of a [`Footprint`].
#[derive(Debug, Clone)]
pub struct DiscCover {
    offsets: Vec<f64>,
    radius: f64,
}

impl DiscCover {
    pub fn new(footprint: &Footprint) -> Self {
        let (offsets, radius) = footprint.discs();
        Self { offsets, radius }
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// True when every disc at pose `(x, y, θ)` clears obstacles and the map border.
    pub fn is_clear(&self, field: &DistanceField, x: f64, y: f64, theta: f64) -> bool {
        let (sin, cos) = theta.sin_cos();
        self.offsets
            .iter()
            .all(|&d| field.clearance(x + d * cos, y + d * sin) >= self.radius)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::worlds::OccupancyGrid;

    #[test]
    fn discs_cover_the_corners() {
        let f = Footprint {
            length: 1.0,
            width: 0.4,
            rear_overhang: 0.2,
        };
        let (offsets, r) = f.discs();
        assert_eq!(offsets.len(), 3);
        for (cx, cy) in [(-0.2, 0.2), (0.8, -0.2), (0.3, 0.2)] {
            assert!(offsets.iter().any(|&o| (cx - o).hypot(cy) <= r + 1e-12));
        }
    }

    #[test]
    fn blocked_near_walls() {
        let mut g = OccupancyGrid::new(40, 40, 0.1).unwrap();
        g.fill_rect(2.0, 0.0, 2.1, 4.0, true);
        let field = DistanceField::new(&g);
        let cover = DiscCover::new(&Footprint::default());
        assert!(cover.is_clear(&field, 1.0, 2.0, 0.0));
        assert!(!cover.is_clear(&field, 1.6, 2.0, 0.0));
        assert!(cover.is_clear(&field, 1.5, 2.0, std::f64::consts::FRAC_PI_2));
        assert!(!cover.is_clear(&field, 0.1, 2.0, 0.0));
    }
}
