use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{parse_header, OccupancyGrid, ParseError, WorldError};

const MAGIC: &str = "ELEV v1";

/// Thresholds above which terrain is untraversable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TerrainLimits {
    /// Maximum slope magnitude, rise over run.
    pub max_slope: f64,
    /// Maximum height difference between 4-neighbouring cells, meters.
    pub max_step: f64,
}

impl Default for TerrainLimits {
    fn default() -> Self {
        Self {
            max_slope: 0.6,
            max_step: 0.3,
        }
    }
}

/// Height field over a rectangle with the origin at its lower-left corner.
#[derive(Debug, Clone, PartialEq)]
pub struct ElevationMap {
    width: usize,
    height: usize,
    cell: f64,
    heights: Vec<f32>,
}

impl ElevationMap {
    pub fn new(width: usize, height: usize, cell: f64, heights: Vec<f32>) -> Result<Self, WorldError> {
        if width == 0 || height == 0 {
            return Err(WorldError::Invalid(format!("map dimensions {width}x{height} must be positive")));
        }
        if !(cell.is_finite() && cell > 0.0) {
            return Err(WorldError::Invalid(format!("cell size {cell} must be positive")));
        }
        if heights.len() != width * height {
            return Err(WorldError::Invalid(format!(
                "{} heights for a {width}x{height} map",
                heights.len()
            )));
        }
        if let Some(i) = heights.iter().position(|h| !h.is_finite()) {
            return Err(WorldError::Invalid(format!("height {i} is not finite")));
        }
        Ok(Self {
            width,
            height,
            cell,
            heights,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn cell_size(&self) -> f64 {
        self.cell
    }

    pub fn extent_x(&self) -> f64 {
        self.width as f64 * self.cell
    }

    pub fn extent_y(&self) -> f64 {
        self.height as f64 * self.cell
    }

    pub fn at(&self, ix: usize, iy: usize) -> f64 {
        self.heights[iy * self.width + ix] as f64
    }

    pub fn heights(&self) -> &[f32] {
        &self.heights
    }

    /// Central-difference slope magnitude of a cell (one-sided at the border).
    pub fn slope(&self, ix: usize, iy: usize) -> f64 {
        let diff = |lo: f64, hi: f64, span: usize| (hi - lo) / (span as f64 * self.cell);
        let (x0, x1) = (ix.saturating_sub(1), (ix + 1).min(self.width - 1));
        let (y0, y1) = (iy.saturating_sub(1), (iy + 1).min(self.height - 1));
        let gx = if x1 > x0 { diff(self.at(x0, iy), self.at(x1, iy), x1 - x0) } else { 0.0 };
        let gy = if y1 > y0 { diff(self.at(ix, y0), self.at(ix, y1), y1 - y0) } else { 0.0 };
        gx.hypot(gy)
    }

    /// Largest height difference to a 4-neighbour.
    pub fn step(&self, ix: usize, iy: usize) -> f64 {
        let here = self.at(ix, iy);
        let mut step: f64 = 0.0;
        if ix > 0 {
            step = step.max((self.at(ix - 1, iy) - here).abs());
        }
        if ix + 1 < self.width {
            step = step.max((self.at(ix + 1, iy) - here).abs());
        }
        if iy > 0 {
            step = step.max((self.at(ix, iy - 1) - here).abs());
        }
        if iy + 1 < self.height {
            step = step.max((self.at(ix, iy + 1) - here).abs());
        }
        step
    }

    /// Cells exceeding either limit become obstacles.
    pub fn obstacle_mask(&self, limits: &TerrainLimits) -> OccupancyGrid {
        let mut grid = OccupancyGrid::new(self.width, self.height, self.cell)
            .expect("elevation map dimensions were validated");
        for iy in 0..self.height {
            for ix in 0..self.width {
                if self.slope(ix, iy) > limits.max_slope || self.step(ix, iy) > limits.max_step {
                    grid.set(ix, iy, true);
                }
            }
        }
        grid
    }

    /// Slope magnitude of every cell, row-major.
    pub fn slope_field(&self) -> Vec<f64> {
        (0..self.height)
            .flat_map(|iy| (0..self.width).map(move |ix| (ix, iy)))
            .map(|(ix, iy)| self.slope(ix, iy))
            .collect()
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = format!("{MAGIC}\n{} {} {}\n", self.width, self.height, self.cell).into_bytes();
        out.reserve(self.heights.len() * 4);
        for h in &self.heights {
            out.extend_from_slice(&h.to_le_bytes());
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, ParseError> {
        let (width, height, cell, offset) = parse_header(bytes, MAGIC)?;
        let expected = width
            .checked_mul(height)
            .and_then(|n| n.checked_mul(4))
            .ok_or_else(|| ParseError::new(offset, "map dimensions overflow"))?;
        let payload = &bytes[offset..];
        if payload.len() != expected {
            return Err(ParseError::new(
                offset + payload.len().min(expected),
                format!("expected {expected} bytes of heights, found {}", payload.len()),
            ));
        }
        let mut heights = Vec::with_capacity(width * height);
        for (i, chunk) in payload.chunks_exact(4).enumerate() {
            let h = f32::from_le_bytes(chunk.try_into().expect("chunk of four bytes"));
            if !h.is_finite() {
                return Err(ParseError::new(offset + 4 * i, format!("height {i} is not finite")));
            }
            heights.push(h);
        }
        Ok(Self {
            width,
            height,
            cell,
            heights,
        })
    }

    pub fn load(path: &Path) -> Result<Self, WorldError> {
        let bytes = std::fs::read(path).map_err(|e| WorldError::io(path, e))?;
        Self::from_bytes(&bytes).map_err(|e| WorldError::parse(path, e))
    }

    pub fn save(&self, path: &Path) -> Result<(), WorldError> {
        std::fs::write(path, self.to_bytes()).map_err(|e| WorldError::io(path, e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ramp() -> ElevationMap {
        let heights = (0..9).map(|i| (i % 3) as f32 * 0.5).collect();
        ElevationMap::new(3, 3, 1.0, heights).unwrap()
    }

    #[test]
    fn binary_round_trip() {
        let m = ramp();
        let bytes = m.to_bytes();
        assert!(bytes.starts_with(b"ELEV v1\n3 3 1\n"));
        let back = ElevationMap::from_bytes(&bytes).unwrap();
        assert_eq!(back, m);
        assert_eq!(back.to_bytes(), bytes);
    }

    #[test]
    fn nan_height_is_rejected_with_offset() {
        let mut bytes = ramp().to_bytes();
        let header = b"ELEV v1\n3 3 1\n".len();
        bytes[header + 8..header + 12].copy_from_slice(&f32::NAN.to_le_bytes());
        let err = ElevationMap::from_bytes(&bytes).unwrap_err();
        assert_eq!(err.offset, header + 8);
    }

    #[test]
    fn truncated_payload() {
        let bytes = ramp().to_bytes();
        assert!(ElevationMap::from_bytes(&bytes[..bytes.len() - 1]).is_err());
        assert!(ElevationMap::new(2, 2, 1.0, vec![0.0; 3]).is_err());
    }

    #[test]
    fn slope_and_mask() {
        let m = ramp();
        assert!((m.slope(1, 1) - 0.5).abs() < 1e-12);
        assert_eq!(m.step(1, 1), 0.5);
        let strict = m.obstacle_mask(&TerrainLimits {
            max_slope: 0.4,
            max_step: 1.0,
        });
        assert_eq!(strict.occupied_count(), 9);
        let lax = m.obstacle_mask(&TerrainLimits {
            max_slope: 1.0,
            max_step: 1.0,
        });
        assert_eq!(lax.occupied_count(), 0);
    }
}
