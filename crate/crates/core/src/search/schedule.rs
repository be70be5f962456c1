use std::f64::consts::TAU;

use crate::domain::{Coords, DimKind, MAX_DIMS};

use super::SearchError;

/// Upper bound on the number of levels of a schedule.
pub const MAX_LEVELS: usize = 64;

/// Integer cell coordinates of a state at one resolution level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CellKey([i64; MAX_DIMS]);

impl CellKey {
    pub fn new(coords: [i64; MAX_DIMS]) -> Self {
        Self(coords)
    }

    pub fn as_array(&self) -> &[i64; MAX_DIMS] {
        &self.0
    }
}

/// Serializable description of a geometric schedule.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleSpec {
    /// Cell size of level 0, one entry per dimension.
    pub coarsest: Vec<f64>,
    /// Every level divides all cell sizes by this factor.
    #[serde(default = "ScheduleSpec::default_factor")]
    pub factor: f64,
    pub levels: usize,
}

impl ScheduleSpec {
    fn default_factor() -> f64 {
        2.0
    }

    pub fn build(&self, kinds: &[DimKind]) -> Result<ResolutionSchedule, SearchError> {
        if self.coarsest.len() != kinds.len() {
            return Err(SearchError::InvalidInput(format!(
                "schedule gives {} cell sizes for a {}-dimensional domain",
                self.coarsest.len(),
                kinds.len()
            )));
        }
        ResolutionSchedule::geometric(kinds, &self.coarsest, self.factor, self.levels)
    }
}

/// Ordered discretization widths, coarsest first.
///
/// Every level is strictly finer than its predecessor in every dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolutionSchedule {
    kinds: Vec<DimKind>,
    levels: Vec<Coords>,
}

impl ResolutionSchedule {
    /// Builds a schedule from explicit per-level cell sizes.
    pub fn new(kinds: &[DimKind], levels: &[Vec<f64>]) -> Result<Self, SearchError> {
        if kinds.is_empty() || kinds.len() > MAX_DIMS {
            return Err(SearchError::InvalidInput(format!(
                "a schedule needs between 1 and {MAX_DIMS} dimensions, got {}",
                kinds.len()
            )));
        }
        if levels.is_empty() || levels.len() > MAX_LEVELS {
            return Err(SearchError::InvalidInput(format!(
                "a schedule needs between 1 and {MAX_LEVELS} levels, got {}",
                levels.len()
            )));
        }
        let mut out = Vec::with_capacity(levels.len());
        for (index, level) in levels.iter().enumerate() {
            if level.len() != kinds.len() {
                return Err(SearchError::InvalidInput(format!(
                    "level {index} has {} cell sizes, expected {}",
                    level.len(),
                    kinds.len()
                )));
            }
            let mut cells = [1.0; MAX_DIMS];
            for (dim, &size) in level.iter().enumerate() {
                if !(size.is_finite() && size > 0.0) {
                    return Err(SearchError::InvalidInput(format!(
                        "level {index} dimension {dim}: cell size {size} must be positive"
                    )));
                }
                cells[dim] = size;
            }
            if let Some(prev) = out.last() {
                let prev: &Coords = prev;
                if (0..kinds.len()).any(|d| cells[d] >= prev[d]) {
                    return Err(SearchError::InvalidInput(format!(
                        "level {index} is not strictly finer than level {}",
                        index - 1
                    )));
                }
            }
            out.push(cells);
        }
        Ok(Self {
            kinds: kinds.to_vec(),
            levels: out,
        })
    }

    /// `count` levels starting at `coarsest`, each dividing every cell size by `factor`.
    pub fn geometric(
        kinds: &[DimKind],
        coarsest: &[f64],
        factor: f64,
        count: usize,
    ) -> Result<Self, SearchError> {
        if !(factor > 1.0) {
            return Err(SearchError::InvalidInput(format!(
                "refinement factor {factor} must exceed 1"
            )));
        }
        let levels: Vec<Vec<f64>> = (0..count)
            .map(|k| coarsest.iter().map(|c| c / factor.powi(k as i32)).collect())
            .collect();
        Self::new(kinds, &levels)
    }

    pub fn kinds(&self) -> &[DimKind] {
        &self.kinds
    }

    pub fn dims(&self) -> usize {
        self.kinds.len()
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    /// Index of the finest level, N.
    pub fn finest(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn cell_sizes(&self, level: usize) -> &[f64] {
        &self.levels[level][..self.kinds.len()]
    }

    /// A schedule holding only `level` of this one.
    pub fn single(&self, level: usize) -> Self {
        Self {
            kinds: self.kinds.clone(),
            levels: vec![self.levels[level]],
        }
    }

    /// Cell key of `coords` at `level`: `floor(x_i / cell_i)` per dimension,
    /// with angular dimensions wrapped into `[0, 2π)` first.
    pub fn discretize(&self, coords: &Coords, level: usize) -> CellKey {
        let cells = &self.levels[level];
        let mut key = [0i64; MAX_DIMS];
        for (d, kind) in self.kinds.iter().enumerate() {
            let value = match kind {
                DimKind::Linear => coords[d],
                DimKind::Angular => wrap_angle(coords[d]),
            };
            key[d] = (value / cells[d]).floor() as i64;
        }
        CellKey(key)
    }
}

/// Wraps an angle into `[0, 2π)`.
pub fn wrap_angle(theta: f64) -> f64 {
    let wrapped = theta.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if wrapped >= TAU {
        0.0
    } else {
        wrapped
    }
}
