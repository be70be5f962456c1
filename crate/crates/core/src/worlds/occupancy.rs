use std::fmt::Write as _;
use std::path::Path;

use super::{parse_header, ParseError, WorldError};

const MAGIC: &str = "OCC v1";

/// Binary occupancy over a rectangle whose lower-left corner is the origin.
/// Cell `(ix, iy)` covers `[ix·c, (ix+1)·c) × [iy·c, (iy+1)·c)`.
#[derive(Debug, Clone, PartialEq)]
pub struct OccupancyGrid {
    width: usize,
    height: usize,
    cell: f64,
    occupied: Vec<bool>,
}

impl OccupancyGrid {
    /// An all-free grid.
    pub fn new(width: usize, height: usize, cell: f64) -> Result<Self, WorldError> {
        if width == 0 || height == 0 {
            return Err(WorldError::Invalid(format!("grid dimensions {width}x{height} must be positive")));
        }
        if !(cell.is_finite() && cell > 0.0) {
            return Err(WorldError::Invalid(format!("cell size {cell} must be positive")));
        }
        Ok(Self {
            width,
            height,
            cell,
            occupied: vec![false; width * height],
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

    /// Extent in meters along x.
    pub fn extent_x(&self) -> f64 {
        self.width as f64 * self.cell
    }

    /// Extent in meters along y.
    pub fn extent_y(&self) -> f64 {
        self.height as f64 * self.cell
    }

    pub fn is_occupied(&self, ix: usize, iy: usize) -> bool {
        self.occupied[iy * self.width + ix]
    }

    pub fn set(&mut self, ix: usize, iy: usize, occupied: bool) {
        self.occupied[iy * self.width + ix] = occupied;
    }

    /// Marks every cell whose center lies in the axis-aligned box.
    pub fn fill_rect(&mut self, x0: f64, y0: f64, x1: f64, y1: f64, occupied: bool) {
        for iy in 0..self.height {
            let cy = (iy as f64 + 0.5) * self.cell;
            if cy < y0 || cy > y1 {
                continue;
            }
            for ix in 0..self.width {
                let cx = (ix as f64 + 0.5) * self.cell;
                if cx >= x0 && cx <= x1 {
                    self.set(ix, iy, occupied);
                }
            }
        }
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        x >= 0.0 && y >= 0.0 && x < self.extent_x() && y < self.extent_y()
    }

    /// Cell containing a point inside the map.
    pub fn cell_of(&self, x: f64, y: f64) -> Option<(usize, usize)> {
        if !self.contains(x, y) {
            return None;
        }
        let ix = ((x / self.cell) as usize).min(self.width - 1);
        let iy = ((y / self.cell) as usize).min(self.height - 1);
        Some((ix, iy))
    }

    /// True when the point is inside the map and on a free cell.
    pub fn is_free(&self, x: f64, y: f64) -> bool {
        self.cell_of(x, y).is_some_and(|(ix, iy)| !self.is_occupied(ix, iy))
    }

    /// Samples the segment at spacing no larger than half a cell.
    pub fn segment_free(&self, x0: f64, y0: f64, x1: f64, y1: f64) -> bool {
        let length = (x1 - x0).hypot(y1 - y0);
        let steps = ((length / (0.5 * self.cell)).ceil() as usize).max(1);
        (0..=steps).all(|i| {
            let t = i as f64 / steps as f64;
            self.is_free(x0 + t * (x1 - x0), y0 + t * (y1 - y0))
        })
    }

    pub fn occupied_count(&self) -> usize {
        self.occupied.iter().filter(|&&o| o).count()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity((self.width + 1) * self.height + 32);
        let _ = writeln!(out, "{MAGIC}");
        let _ = writeln!(out, "{} {} {}", self.width, self.height, self.cell);
        for row in self.occupied.chunks(self.width) {
            out.extend(row.iter().map(|&o| if o { '#' } else { '.' }));
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, ParseError> {
        let (width, height, cell, mut offset) = parse_header(text.as_bytes(), MAGIC)?;
        let mut grid = Self::new(width, height, cell).map_err(|e| ParseError::new(0, e.to_string()))?;
        let bytes = text.as_bytes();
        for iy in 0..height {
            for ix in 0..width {
                match bytes.get(offset + ix) {
                    Some(b'#') => grid.set(ix, iy, true),
                    Some(b'.') => {}
                    Some(other) => {
                        return Err(ParseError::new(
                            offset + ix,
                            format!("unexpected byte {:?} in row {iy}", *other as char),
                        ))
                    }
                    None => {
                        return Err(ParseError::new(
                            bytes.len(),
                            format!("file ends in row {iy} of {height}"),
                        ))
                    }
                }
            }
            offset += width;
            match bytes.get(offset) {
                Some(b'\n') => offset += 1,
                Some(_) => {
                    return Err(ParseError::new(offset, format!("row {iy} is longer than {width} cells")))
                }
                None => return Err(ParseError::new(offset, format!("row {iy} is not newline terminated"))),
            }
        }
        if offset != bytes.len() {
            return Err(ParseError::new(offset, "trailing data after the last row"));
        }
        Ok(grid)
    }

    pub fn load(path: &Path) -> Result<Self, WorldError> {
        let text = std::fs::read_to_string(path).map_err(|e| WorldError::io(path, e))?;
        Self::from_text(&text).map_err(|e| WorldError::parse(path, e))
    }

    pub fn save(&self, path: &Path) -> Result<(), WorldError> {
        std::fs::write(path, self.to_text()).map_err(|e| WorldError::io(path, e))
    }
}
