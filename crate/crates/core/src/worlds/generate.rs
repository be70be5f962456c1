use std::f64::consts::TAU;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::domain::{Domain, Query};
use crate::domains::{
    car_query, kinodynamic_query, point_query, CarParams, KinematicCar, KinodynamicCar,
    KinodynamicParams, PointRobot,
};
use crate::search::{hybrid_astar, ResolutionSchedule, ScheduleSpec, SearchOptions, Status};

use super::{DistanceField, ElevationMap, OccupancyGrid, QueryRecord, QuerySet, WorldError};

/// A generated map with its validated queries.
#[derive(Debug, Clone)]
pub struct Generated<M> {
    pub map: M,
    pub queries: QuerySet,
    /// Candidate queries discarded by validation.
    pub rejected: usize,
}

/// Walls spanning the map top to bottom, each pierced by one gap, crossed
/// by a point robot. One wall gives the single-bottleneck world, several the
/// multi-bottleneck world.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BottleneckParams {
    pub width: f64,
    pub height: f64,
    /// Occupancy cell size.
    pub cell: f64,
    pub walls: usize,
    pub wall_thickness: f64,
    pub gap_min: f64,
    pub gap_max: f64,
    pub queries: usize,
    /// Side of the square corners in which starts and goals are drawn.
    pub corner: f64,
    pub goal_radius: f64,
    /// Number of equally spaced step directions of the robot.
    pub headings: usize,
    pub step: f64,
    pub schedule: ScheduleSpec,
    /// Expansion cap of each validation search.
    pub validation_budget: u64,
    /// Candidate queries drawn before giving up.
    pub max_attempts: usize,
}

impl Default for BottleneckParams {
    fn default() -> Self {
        Self {
            width: 20.0,
            height: 20.0,
            cell: 0.05,
            walls: 1,
            wall_thickness: 1.0,
            gap_min: 0.6,
            gap_max: 0.9,
            queries: 10,
            corner: 5.0,
            goal_radius: 1.0,
            headings: 16,
            step: 1.5,
            schedule: ScheduleSpec {
                coarsest: vec![1.0, 1.0],
                factor: 2.0,
                levels: 5,
            },
            validation_budget: 200_000,
            max_attempts: 1_000,
        }
    }
}

impl BottleneckParams {
    pub fn robot(&self, grid: Arc<OccupancyGrid>) -> PointRobot {
        PointRobot::radial(grid, self.headings, self.step)
    }

    fn check(&self, schedule: &ResolutionSchedule) -> Result<(), WorldError> {
        let coarsest = schedule.cell_sizes(0)[0].min(schedule.cell_sizes(0)[1]);
        let finest = schedule.cell_sizes(schedule.finest())[0].max(schedule.cell_sizes(schedule.finest())[1]);
        if !(self.gap_min > 0.0 && self.gap_min <= self.gap_max) {
            return Err(WorldError::Infeasible(format!(
                "gap range [{}, {}] is empty",
                self.gap_min, self.gap_max
            )));
        }
        if self.gap_max >= coarsest {
            return Err(WorldError::Infeasible(format!(
                "gap up to {} m is not narrower than the coarsest cell {coarsest} m",
                self.gap_max
            )));
        }
        if self.gap_min <= finest {
            return Err(WorldError::Infeasible(format!(
                "gap down to {} m is not wider than the finest cell {finest} m",
                self.gap_min
            )));
        }
        if self.headings < 3 || !(self.step > 0.0) {
            return Err(WorldError::Infeasible("the robot needs at least three headings and a positive step".into()));
        }
        let needed = 2.0 * self.corner + self.walls as f64 * self.wall_thickness;
        if self.width < needed || self.height < 2.0 * self.corner || self.queries == 0 {
            return Err(WorldError::Infeasible(format!(
                "a {}x{} m map cannot hold {} walls and {} m corners",
                self.width, self.height, self.walls, self.corner
            )));
        }
        Ok(())
    }
}

/// Single-bottleneck world: one wall with one gap. Every query fails at the
/// coarsest level and succeeds at the finest.
pub fn gen_sb(seed: u64, params: &BottleneckParams) -> Result<Generated<OccupancyGrid>, WorldError> {
    if params.walls != 1 {
        return Err(WorldError::Infeasible(format!(
            "a single-bottleneck world has one wall, not {}",
            params.walls
        )));
    }
    gen_bottleneck(seed, params, "sb")
}

/// Multi-bottleneck world: `walls >= 2` parallel walls, each with one gap.
pub fn gen_mb(seed: u64, params: &BottleneckParams) -> Result<Generated<OccupancyGrid>, WorldError> {
    if params.walls < 2 {
        return Err(WorldError::Infeasible(format!(
            "a multi-bottleneck world needs at least two walls, got {}",
            params.walls
        )));
    }
    gen_bottleneck(seed, params, "mb")
}

fn grid_for(width: f64, height: f64, cell: f64) -> Result<OccupancyGrid, WorldError> {
    if !(cell > 0.0 && width > 0.0 && height > 0.0) {
        return Err(WorldError::Infeasible(format!("map {width}x{height} m with {cell} m cells")));
    }
    OccupancyGrid::new((width / cell).round() as usize, (height / cell).round() as usize, cell)
}

fn gen_bottleneck(seed: u64, params: &BottleneckParams, tag: &str) -> Result<Generated<OccupancyGrid>, WorldError> {
    let schedule = params.schedule.build(&[crate::DimKind::Linear; 2]).map_err(invalid)?;
    params.check(&schedule)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut grid = grid_for(params.width, params.height, params.cell)?;
    let spacing = params.width / (params.walls + 1) as f64;
    for k in 0..params.walls {
        let x0 = spacing * (k + 1) as f64 - 0.5 * params.wall_thickness;
        let x1 = x0 + params.wall_thickness;
        let gap = rng.gen_range(params.gap_min..=params.gap_max);
        let margin = params.wall_thickness;
        let y0 = rng.gen_range(margin..params.height - margin - gap);
        grid.fill_rect(x0, 0.0, x1, y0, true);
        grid.fill_rect(x0, y0 + gap, x1, params.height, true);
    }
    let grid = Arc::new(grid);
    let robot = params.robot(grid.clone());
    let (w, h, c) = (params.width, params.height, params.corner);
    let mut records = Vec::with_capacity(params.queries);
    let mut rejected = 0;
    while records.len() < params.queries {
        if records.len() + rejected >= params.max_attempts {
            return Err(too_many_rejections(tag, params.max_attempts, records.len()));
        }
        let record = QueryRecord {
            qid: records.len() as u32,
            x_s: rng.gen_range(0.5..c),
            y_s: rng.gen_range(h - c..h - 0.5),
            theta_s: None,
            v_s: None,
            x_g: rng.gen_range(w - c..w - 0.5),
            y_g: rng.gen_range(0.5..c),
            r_g: params.goal_radius,
        };
        let query = point_query(&record);
        let ok = robot.is_valid(&query.start)
            && grid.is_free(record.x_g, record.y_g)
            && !robot.in_goal(&query.start, &query.goal)
            && !solves(&robot, &query, &schedule, 0, params.validation_budget)?
            && solves(&robot, &query, &schedule, schedule.finest(), params.validation_budget)?;
        if ok {
            records.push(record);
        } else {
            rejected += 1;
        }
    }
    Ok(Generated {
        map: Arc::try_unwrap(grid).unwrap_or_else(|g| (*g).clone()),
        queries: QuerySet {
            records,
            seed,
            tag: tag.into(),
        },
        rejected,
    })
}

fn invalid(e: crate::search::SearchError) -> WorldError {
    WorldError::Invalid(e.to_string())
}

fn too_many_rejections(tag: &str, attempts: usize, accepted: usize) -> WorldError {
    WorldError::Infeasible(format!(
        "{tag}: only {accepted} queries passed validation in {attempts} attempts"
    ))
}

fn solves<D: Domain>(
    domain: &D,
    query: &Query<D::State, D::Goal>,
    schedule: &ResolutionSchedule,
    level: usize,
    budget: u64,
) -> Result<bool, WorldError> {
    let options = SearchOptions {
        check_invariants: false,
        ..SearchOptions::with_budget(budget)
    };
    let outcome = hybrid_astar(domain, query, schedule, level, &options).map_err(invalid)?;
    Ok(outcome.status() == Status::Terminated)
}

/// City blocks separated by streets, driven by the kinematic car.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct UrbanParams {
    pub width: f64,
    pub height: f64,
    pub cell: f64,
    pub block_min: f64,
    pub block_max: f64,
    pub street_min: f64,
    pub street_max: f64,
    /// Probability that a block is left empty.
    pub empty_lots: f64,
    pub queries: usize,
    pub goal_radius: f64,
    /// Minimum straight-line distance between start and goal.
    pub min_distance: f64,
    pub car: CarParams,
    pub schedule: ScheduleSpec,
    /// Also require a path at the coarsest level.
    pub solvable_at_coarsest: bool,
    pub validation_budget: u64,
    pub max_attempts: usize,
}

impl Default for UrbanParams {
    fn default() -> Self {
        Self {
            width: 30.0,
            height: 30.0,
            cell: 0.1,
            block_min: 3.0,
            block_max: 6.0,
            street_min: 1.5,
            street_max: 2.5,
            empty_lots: 0.15,
            queries: 10,
            goal_radius: 1.0,
            min_distance: 12.0,
            car: CarParams::default(),
            schedule: ScheduleSpec {
                coarsest: vec![1.0, 1.0, TAU / 8.0],
                factor: 2.0,
                levels: 4,
            },
            solvable_at_coarsest: true,
            validation_budget: 100_000,
            max_attempts: 2_000,
        }
    }
}

/// Alternating street and block intervals covering `[0, extent]`,
/// starting and ending with a street.
fn intervals(rng: &mut ChaCha8Rng, extent: f64, p: &UrbanParams) -> Vec<(f64, f64)> {
    let mut blocks = Vec::new();
    let mut at = rng.gen_range(p.street_min..=p.street_max);
    loop {
        let block = rng.gen_range(p.block_min..=p.block_max);
        let street = rng.gen_range(p.street_min..=p.street_max);
        if at + block + p.street_min > extent {
            break;
        }
        blocks.push((at, at + block));
        at += block + street;
    }
    blocks
}

pub fn gen_urban(seed: u64, params: &UrbanParams) -> Result<Generated<OccupancyGrid>, WorldError> {
    use crate::DimKind::{Angular, Linear};
    let schedule = params.schedule.build(&[Linear, Linear, Angular]).map_err(invalid)?;
    if !(params.block_min > 0.0
        && params.block_min <= params.block_max
        && params.street_min > 0.0
        && params.street_min <= params.street_max
        && (0.0..1.0).contains(&params.empty_lots)
        && params.queries > 0)
    {
        return Err(WorldError::Infeasible(format!("invalid urban parameters {params:?}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut grid = grid_for(params.width, params.height, params.cell)?;
    let xs = intervals(&mut rng, params.width, params);
    let ys = intervals(&mut rng, params.height, params);
    for &(x0, x1) in &xs {
        for &(y0, y1) in &ys {
            if !rng.gen_bool(params.empty_lots) {
                grid.fill_rect(x0, y0, x1, y1, true);
            }
        }
    }
    let field = Arc::new(DistanceField::new(&grid));
    let car = KinematicCar::with_field(field, params.car).map_err(|e| WorldError::Invalid(e.to_string()))?;
    let mut records = Vec::with_capacity(params.queries);
    let mut rejected = 0;
    while records.len() < params.queries {
        if records.len() + rejected >= params.max_attempts {
            return Err(too_many_rejections("urban", params.max_attempts, records.len()));
        }
        let record = QueryRecord {
            qid: records.len() as u32,
            x_s: rng.gen_range(0.0..params.width),
            y_s: rng.gen_range(0.0..params.height),
            theta_s: Some(rng.gen_range(0.0..TAU)),
            v_s: None,
            x_g: rng.gen_range(0.0..params.width),
            y_g: rng.gen_range(0.0..params.height),
            r_g: params.goal_radius,
        };
        let query = car_query(&record);
        let ok = (record.x_s - record.x_g).hypot(record.y_s - record.y_g) >= params.min_distance
            && car.is_valid(&query.start)
            && grid.is_free(record.x_g, record.y_g)
            && solves(&car, &query, &schedule, schedule.finest(), params.validation_budget)?
            && (!params.solvable_at_coarsest || solves(&car, &query, &schedule, 0, params.validation_budget)?);
        if ok {
            records.push(record);
        } else {
            rejected += 1;
        }
    }
    Ok(Generated {
        map: grid,
        queries: QuerySet {
            records,
            seed,
            tag: "urban".into(),
        },
        rejected,
    })
}

/// Rolling hills with scattered rocks, driven by the kinodynamic car.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TerrainParams {
    pub width: f64,
    pub height: f64,
    pub cell: f64,
    pub hills: usize,
    pub hill_height: f64,
    pub hill_radius_min: f64,
    pub hill_radius_max: f64,
    pub rocks: usize,
    pub rock_radius: f64,
    pub rock_height: f64,
    pub queries: usize,
    pub goal_radius: f64,
    pub min_distance: f64,
    pub vehicle: KinodynamicParams,
    pub schedule: ScheduleSpec,
    pub validation_budget: u64,
    pub max_attempts: usize,
}

impl Default for TerrainParams {
    fn default() -> Self {
        Self {
            width: 30.0,
            height: 30.0,
            cell: 0.2,
            hills: 12,
            hill_height: 1.5,
            hill_radius_min: 2.0,
            hill_radius_max: 5.0,
            rocks: 25,
            rock_radius: 0.8,
            rock_height: 1.0,
            queries: 10,
            goal_radius: 1.5,
            min_distance: 12.0,
            vehicle: KinodynamicParams::default(),
            schedule: ScheduleSpec {
                coarsest: vec![2.0, 2.0, TAU / 4.0, 2.0],
                factor: 2.0,
                levels: 4,
            },
            validation_budget: 100_000,
            max_attempts: 2_000,
        }
    }
}

pub fn gen_terrain(seed: u64, params: &TerrainParams) -> Result<Generated<ElevationMap>, WorldError> {
    use crate::DimKind::{Angular, Linear};
    let schedule = params.schedule.build(&[Linear, Linear, Angular, Linear]).map_err(invalid)?;
    if !(params.hill_radius_min > 0.0 && params.hill_radius_min <= params.hill_radius_max && params.queries > 0) {
        return Err(WorldError::Infeasible(format!("invalid terrain parameters {params:?}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nx = (params.width / params.cell).round() as usize;
    let ny = (params.height / params.cell).round() as usize;
    let hills: Vec<(f64, f64, f64, f64)> = (0..params.hills)
        .map(|_| {
            (
                rng.gen_range(0.0..params.width),
                rng.gen_range(0.0..params.height),
                rng.gen_range(params.hill_radius_min..=params.hill_radius_max),
                rng.gen_range(-1.0..=1.0) * params.hill_height,
            )
        })
        .collect();
    let rocks: Vec<(f64, f64)> = (0..params.rocks)
        .map(|_| (rng.gen_range(0.0..params.width), rng.gen_range(0.0..params.height)))
        .collect();
    let mut heights = Vec::with_capacity(nx * ny);
    for iy in 0..ny {
        let y = (iy as f64 + 0.5) * params.cell;
        for ix in 0..nx {
            let x = (ix as f64 + 0.5) * params.cell;
            let mut z: f64 = hills
                .iter()
                .map(|&(hx, hy, r, a)| a * (-((x - hx).powi(2) + (y - hy).powi(2)) / (2.0 * r * r)).exp())
                .sum();
            if rocks.iter().any(|&(rx, ry)| (x - rx).hypot(y - ry) <= params.rock_radius) {
                z += params.rock_height;
            }
            heights.push(z as f32);
        }
    }
    let map = ElevationMap::new(nx, ny, params.cell, heights)?;
    let car = KinodynamicCar::new(&map, params.vehicle).map_err(|e| WorldError::Invalid(e.to_string()))?;
    let mut records = Vec::with_capacity(params.queries);
    let mut rejected = 0;
    let v = &params.vehicle;
    while records.len() < params.queries {
        if records.len() + rejected >= params.max_attempts {
            return Err(too_many_rejections("terrain", params.max_attempts, records.len()));
        }
        let record = QueryRecord {
            qid: records.len() as u32,
            x_s: rng.gen_range(0.0..params.width),
            y_s: rng.gen_range(0.0..params.height),
            theta_s: Some(rng.gen_range(0.0..TAU)),
            v_s: Some(rng.gen_range(v.v_min..=0.5 * (v.v_min + v.v_max))),
            x_g: rng.gen_range(0.0..params.width),
            y_g: rng.gen_range(0.0..params.height),
            r_g: params.goal_radius,
        };
        let query = kinodynamic_query(&record);
        let ok = (record.x_s - record.x_g).hypot(record.y_s - record.y_g) >= params.min_distance
            && car.is_valid(&query.start)
            && solves(&car, &query, &schedule, schedule.finest(), params.validation_budget)?;
        if ok {
            records.push(record);
        } else {
            rejected += 1;
        }
    }
    Ok(Generated {
        map,
        queries: QuerySet {
            records,
            seed,
            tag: "terrain".into(),
        },
        rejected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_sb() -> BottleneckParams {
        BottleneckParams {
            queries: 3,
            ..BottleneckParams::default()
        }
    }

    #[test]
    fn equal_seeds_give_equal_worlds() {
        let a = gen_sb(7, &small_sb()).unwrap();
        let b = gen_sb(7, &small_sb()).unwrap();
        assert_eq!(a.map, b.map);
        assert_eq!(a.queries, b.queries);
        let c = gen_sb(8, &small_sb()).unwrap();
        assert_ne!(a.map, c.map);
    }

    #[test]
    fn sb_wall_has_one_opening() {
        let g = gen_sb(3, &small_sb()).unwrap().map;
        // the wall column at the map center has exactly one run of free cells
        let ix = g.width() / 2;
        let mut runs = 0;
        let mut prev = true;
        for iy in 0..g.height() {
            let occ = g.is_occupied(ix, iy);
            if !occ && prev {
                runs += 1;
            }
            prev = occ;
        }
        assert_eq!(runs, 1);
    }

    #[test]
    fn infeasible_gap_is_rejected() {
        let p = BottleneckParams {
            gap_min: 0.01,
            gap_max: 0.02,
            ..small_sb()
        };
        assert!(matches!(gen_sb(1, &p), Err(WorldError::Infeasible(_))));
        let p = BottleneckParams {
            gap_max: 1.5,
            ..small_sb()
        };
        assert!(matches!(gen_sb(1, &p), Err(WorldError::Infeasible(_))));
        assert!(gen_mb(1, &small_sb()).is_err());
    }
}
