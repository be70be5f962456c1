//! Worlds, planners and the query × rule sweep.

use std::path::Path;
use std::sync::Arc;

use ighastar::domains::{
    car_query, kinodynamic_query, point_query, KinematicCar, KinodynamicCar, PointRobot,
};
use ighastar::search::{
    iha_star, ighastar, ResolutionSchedule, SearchError, SearchOptions, SearchStats, Snapshot,
};
use ighastar::worlds::{
    gen_mb, gen_sb, gen_terrain, gen_urban, ElevationMap, OccupancyGrid, QueryRecord, QuerySet,
    WorldError,
};
use ighastar::{DimKind, Domain, Query};
use rayon::prelude::*;
use thiserror::Error;

use crate::config::{ConfigError, DomainKind, ExperimentConfig, Generator};
use crate::records::{LogEntry, RunRecord, STATUS_ERROR};
use crate::rules::RuleSpec;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    World(#[from] WorldError),
    #[error("{0}")]
    Search(#[from] SearchError),
    #[error("{path}: {source}")]
    Io {
        path: std::path::PathBuf,
        source: std::io::Error,
    },
    #[error("{0}")]
    Parse(String),
}

impl BenchError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        BenchError::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code: 3 for a violated planner invariant, 2 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            BenchError::Search(e) if is_internal(e) => 3,
            _ => 2,
        }
    }
}

/// Errors that point at a planner or rule bug rather than at the input.
pub fn is_internal(e: &SearchError) -> bool {
    matches!(e, SearchError::Invariant(_) | SearchError::RuleViolation { .. })
}

#[derive(Debug, Clone)]
pub enum WorldMap {
    Occupancy(Arc<OccupancyGrid>),
    Elevation(Arc<ElevationMap>),
}

#[derive(Debug, Clone)]
pub struct World {
    pub seed: u64,
    pub map: WorldMap,
    pub queries: QuerySet,
}

impl World {
    pub fn query(&self, qid: u32) -> Option<&QueryRecord> {
        self.queries.records.iter().find(|r| r.qid == qid)
    }
}

pub fn generate_world(config: &ExperimentConfig, generator: Generator, seed: u64) -> Result<World, WorldError> {
    let (map, queries) = match generator {
        Generator::Sb => {
            let g = gen_sb(seed, &config.bottleneck_params())?;
            (WorldMap::Occupancy(Arc::new(g.map)), g.queries)
        }
        Generator::Mb => {
            let g = gen_mb(seed, &config.bottleneck_params())?;
            (WorldMap::Occupancy(Arc::new(g.map)), g.queries)
        }
        Generator::Urban => {
            let g = gen_urban(seed, &config.urban_params())?;
            (WorldMap::Occupancy(Arc::new(g.map)), g.queries)
        }
        Generator::Terrain => {
            let g = gen_terrain(seed, &config.terrain_params())?;
            (WorldMap::Elevation(Arc::new(g.map)), g.queries)
        }
    };
    Ok(World { seed, map, queries })
}

/// Every world of the experiment, generated in parallel or read from disk.
pub fn load_worlds(config: &ExperimentConfig) -> Result<Vec<World>, BenchError> {
    config.validate()?;
    if let Some(generator) = config.generator {
        let seeds: Vec<u64> = (0..config.worlds).map(|k| config.seed + k).collect();
        let worlds: Result<Vec<World>, WorldError> =
            seeds.par_iter().map(|&s| generate_world(config, generator, s)).collect();
        return Ok(worlds?);
    }
    let (Some(map), Some(query_file)) = (&config.map, &config.query_file) else {
        unreachable!("validated config has a world source");
    };
    let map = match config.domain()? {
        DomainKind::Point | DomainKind::Car => WorldMap::Occupancy(Arc::new(OccupancyGrid::load(map)?)),
        DomainKind::Kinodynamic => WorldMap::Elevation(Arc::new(ElevationMap::load(map)?)),
    };
    let mut queries = QuerySet::load(query_file)?;
    if let Some(n) = config.queries {
        queries.records.truncate(n);
    }
    Ok(vec![World { seed: 0, map, queries }])
}

/// A domain instance bound to one world.
#[derive(Debug, Clone)]
pub enum Planner {
    Point(PointRobot),
    Car(KinematicCar),
    Kinodynamic(KinodynamicCar),
}

impl Planner {
    pub fn new(config: &ExperimentConfig, world: &World) -> Result<Self, BenchError> {
        let domain = config.domain()?;
        let mismatch = || {
            BenchError::Config(ConfigError::Invalid(format!(
                "world {} does not carry a map for the {domain:?} domain",
                world.seed
            )))
        };
        let other = |e: ighastar::DomainError| BenchError::Search(e.into());
        Ok(match (domain, &world.map) {
            (DomainKind::Point, WorldMap::Occupancy(grid)) => {
                Planner::Point(config.bottleneck_params().robot(grid.clone()))
            }
            (DomainKind::Car, WorldMap::Occupancy(grid)) => {
                Planner::Car(KinematicCar::new(grid, config.urban.car).map_err(other)?)
            }
            (DomainKind::Kinodynamic, WorldMap::Elevation(map)) => {
                Planner::Kinodynamic(KinodynamicCar::new(map, config.terrain.vehicle).map_err(other)?)
            }
            _ => return Err(mismatch()),
        })
    }

    pub fn dims(&self) -> &[DimKind] {
        match self {
            Planner::Point(d) => d.dims(),
            Planner::Car(d) => d.dims(),
            Planner::Kinodynamic(d) => d.dims(),
        }
    }

    pub fn run(
        &self,
        record: &QueryRecord,
        schedule: &ResolutionSchedule,
        rule: RuleSpec,
        options: &SearchOptions,
    ) -> Result<RunResult, SearchError> {
        match self {
            Planner::Point(d) => run_one(d, &point_query(record), schedule, rule, options),
            Planner::Car(d) => run_one(d, &car_query(record), schedule, rule, options),
            Planner::Kinodynamic(d) => run_one(d, &kinodynamic_query(record), schedule, rule, options),
        }
    }
}

/// Outcome of one run with the path reduced to planar points.
#[derive(Debug, Clone)]
pub struct RunResult {
    pub stats: SearchStats,
    pub snapshot: Option<Snapshot>,
    pub cost: Option<f64>,
    pub path: Vec<(f64, f64)>,
}

fn run_one<D: Domain>(
    domain: &D,
    query: &Query<D::State, D::Goal>,
    schedule: &ResolutionSchedule,
    rule: RuleSpec,
    options: &SearchOptions,
) -> Result<RunResult, SearchError> {
    let outcome = match rule.build() {
        Some(mut r) => ighastar(domain, query, schedule, r.as_mut(), options)?,
        None => iha_star(domain, query, schedule, options)?,
    };
    let path = outcome
        .best
        .as_ref()
        .map(|p| {
            p.states
                .iter()
                .map(|s| {
                    let c = domain.coords(s);
                    (c[0], c[1])
                })
                .collect()
        })
        .unwrap_or_default();
    Ok(RunResult {
        cost: outcome.cost(),
        stats: outcome.stats,
        snapshot: outcome.snapshot,
        path,
    })
}

pub fn search_options(config: &ExperimentConfig) -> SearchOptions {
    SearchOptions {
        budget: config.budget,
        termination: config.termination.into(),
        trace: false,
        check_invariants: config.check_invariants,
        snapshot: false,
        first_path_only: config.first_path_only,
    }
}

pub fn record_of(world: u64, qid: u32, rule: RuleSpec, result: Result<RunResult, SearchError>) -> RunRecord {
    match result {
        Ok(run) => {
            let stats = &run.stats;
            RunRecord {
                world,
                qid,
                rule: rule.to_string(),
                status: stats.status().to_string(),
                expansions: stats.expansions,
                iterations: stats.iterations,
                log: stats
                    .emissions
                    .iter()
                    .map(|e| LogEntry {
                        cost: e.cost,
                        expansions: e.expansions,
                        iteration: e.iteration,
                    })
                    .collect(),
                message: String::new(),
            }
        }
        Err(e) => RunRecord {
            world,
            qid,
            rule: rule.to_string(),
            status: STATUS_ERROR.into(),
            expansions: 0,
            iterations: 0,
            log: Vec::new(),
            message: e.to_string(),
        },
    }
}

/// Result of a sweep.
#[derive(Debug, Clone)]
pub struct Sweep {
    /// Sorted by world, query id and rule id.
    pub records: Vec<RunRecord>,
    /// Runs that aborted on a planner invariant or rule violation.
    pub internal_errors: usize,
}

/// Runs every query of every world under every rule.
pub fn run_sweep(config: &ExperimentConfig, worlds: &[World]) -> Result<Sweep, BenchError> {
    let rules = config.rule_specs()?;
    let schedule = config.schedule_spec()?;
    let options = search_options(config);
    let planners = worlds
        .iter()
        .map(|w| Planner::new(config, w))
        .collect::<Result<Vec<_>, _>>()?;
    let mut schedules = Vec::with_capacity(planners.len());
    for p in &planners {
        schedules.push(schedule.build(p.dims())?);
    }
    let mut tasks: Vec<(usize, &QueryRecord, RuleSpec)> = Vec::new();
    for (k, w) in worlds.iter().enumerate() {
        for q in &w.queries.records {
            tasks.extend(rules.iter().map(|&r| (k, q, r)));
        }
    }
    let results: Vec<(RunRecord, bool)> = tasks
        .par_iter()
        .map(|&(k, q, rule)| {
            let result = planners[k].run(q, &schedules[k], rule, &options);
            let internal = matches!(&result, Err(e) if is_internal(e));
            (record_of(worlds[k].seed, q.qid, rule, result), internal)
        })
        .collect();
    let internal_errors = results.iter().filter(|(_, bad)| *bad).count();
    let mut records: Vec<RunRecord> = results.into_iter().map(|(r, _)| r).collect();
    records.sort_by(|a, b| a.key().cmp(&b.key()));
    Ok(Sweep {
        records,
        internal_errors,
    })
}

/// Runs `f` on a pool of `jobs` threads; 0 means one per core.
pub fn with_pool<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> T {
    match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}
