use std::f64::consts::SQRT_2;

use super::OccupancyGrid;

/// Euclidean distance transform of an occupancy grid, used for
/// conservative footprint clearance queries.
#[derive(Debug, Clone)]
pub struct DistanceField {
    width: usize,
    height: usize,
    cell: f64,
    /// Center-to-center distance to the nearest occupied cell, in meters.
    distance: Vec<f64>,
}

impl DistanceField {
    pub fn new(grid: &OccupancyGrid) -> Self {
        let (w, h) = (grid.width(), grid.height());
        let mut sq = vec![f64::INFINITY; w * h];
        for iy in 0..h {
            for ix in 0..w {
                if grid.is_occupied(ix, iy) {
                    sq[iy * w + ix] = 0.0;
                }
            }
        }
        let mut column = vec![0.0; h];
        let mut out = vec![0.0; h.max(w)];
        let mut scratch = Scratch::new(h.max(w));
        for ix in 0..w {
            for iy in 0..h {
                column[iy] = sq[iy * w + ix];
            }
            transform_1d(&column, &mut out[..h], &mut scratch);
            for iy in 0..h {
                sq[iy * w + ix] = out[iy];
            }
        }
        for iy in 0..h {
            let row = sq[iy * w..(iy + 1) * w].to_vec();
            transform_1d(&row, &mut out[..w], &mut scratch);
            sq[iy * w..(iy + 1) * w].copy_from_slice(&out[..w]);
        }
        let cell = grid.cell_size();
        Self {
            width: w,
            height: h,
            cell,
            distance: sq.into_iter().map(|d| d.sqrt() * cell).collect(),
        }
    }

    pub fn cell_size(&self) -> f64 {
        self.cell
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        x >= 0.0 && y >= 0.0 && x < self.width as f64 * self.cell && y < self.height as f64 * self.cell
    }

    /// Distance between the center of `(ix, iy)` and the nearest occupied
    /// cell center; infinite on an obstacle-free grid.
    pub fn cell_distance(&self, ix: usize, iy: usize) -> f64 {
        self.distance[iy * self.width + ix]
    }

    /// Lower bound on the distance from `(x, y)` to any obstacle or to the
    /// map boundary. Zero outside the map.
    pub fn clearance(&self, x: f64, y: f64) -> f64 {
        if !self.contains(x, y) {
            return 0.0;
        }
        let (ex, ey) = (self.width as f64 * self.cell, self.height as f64 * self.cell);
        let border = x.min(y).min(ex - x).min(ey - y);
        let ix = ((x / self.cell) as usize).min(self.width - 1);
        let iy = ((y / self.cell) as usize).min(self.height - 1);
        let cx = (ix as f64 + 0.5) * self.cell;
        let cy = (iy as f64 + 0.5) * self.cell;
        let obstacle = self.cell_distance(ix, iy) - ((x - cx) * (x - cx) + (y - cy) * (y - cy)).sqrt() - 0.5 * SQRT_2 * self.cell;
        border.min(obstacle).max(0.0)
    }
}

struct Scratch {
    v: Vec<usize>,
    z: Vec<f64>,
}

impl Scratch {
    fn new(n: usize) -> Self {
        Self {
            v: vec![0; n],
            z: vec![0.0; n + 1],
        }
    }
}

/// Lower envelope of parabolas rooted at `f[q]` (squared distances in cell units).
fn transform_1d(f: &[f64], d: &mut [f64], s: &mut Scratch) {
    let n = f.len();
    let Some(first) = f.iter().position(|x| x.is_finite()) else {
        d.fill(f64::INFINITY);
        return;
    };
    let intersect = |q: usize, p: usize| -> f64 {
        let (q2, p2) = ((q * q) as f64, (p * p) as f64);
        ((f[q] + q2) - (f[p] + p2)) / (2.0 * q as f64 - 2.0 * p as f64)
    };
    let mut k = 0;
    s.v[0] = first;
    s.z[0] = f64::NEG_INFINITY;
    s.z[1] = f64::INFINITY;
    for q in first + 1..n {
        if !f[q].is_finite() {
            continue;
        }
        let mut x = intersect(q, s.v[k]);
        while x <= s.z[k] {
            k -= 1;
            x = intersect(q, s.v[k]);
        }
        k += 1;
        s.v[k] = q;
        s.z[k] = x;
        s.z[k + 1] = f64::INFINITY;
    }
    k = 0;
    for (q, out) in d.iter_mut().enumerate() {
        while s.z[k + 1] < q as f64 {
            k += 1;
        }
        let dq = q as f64 - s.v[k] as f64;
        *out = dq * dq + f[s.v[k]];
    }
}
