//! Benchmark harness: generates worlds, sweeps queries × rules, reduces
//! the runs to head-to-head statistics and rank matrices, and renders
//! search trees.

pub mod config;
pub mod rankplot;
pub mod records;
pub mod render;
pub mod rules;
pub mod runner;
pub mod stats;

use std::fs;
use std::path::{Path, PathBuf};

use ighastar::worlds::OccupancyGrid;

pub use config::{ConfigError, DomainKind, ExperimentConfig, Generator, TerminationMode};
pub use records::{read_runs, write_runs, LogEntry, RunRecord, RUNS_VERSION};
pub use rules::RuleSpec;
pub use runner::{BenchError, Planner, RunResult, Sweep, World, WorldMap};

fn write(path: &Path, contents: impl AsRef<[u8]>) -> Result<(), BenchError> {
    fs::write(path, contents).map_err(|e| BenchError::io(path, e))
}

fn create_dir(dir: &Path) -> Result<(), BenchError> {
    fs::create_dir_all(dir).map_err(|e| BenchError::io(dir, e))
}

/// Writes each generated world and its queries into `out`; returns the
/// written paths.
pub fn cmd_gen(config: &ExperimentConfig, out: &Path) -> Result<Vec<PathBuf>, BenchError> {
    let generator = config
        .generator
        .ok_or_else(|| ConfigError::Invalid("`gen` needs a `generator`".into()))?;
    let worlds = runner::load_worlds(config)?;
    create_dir(out)?;
    let mut written = Vec::new();
    for w in &worlds {
        let stem = format!("{}-{}", generator.name(), w.seed);
        let map_path = match &w.map {
            WorldMap::Occupancy(g) => {
                let p = out.join(format!("{stem}.occ"));
                g.save(&p)?;
                p
            }
            WorldMap::Elevation(m) => {
                let p = out.join(format!("{stem}.elev"));
                m.save(&p)?;
                p
            }
        };
        let q = out.join(format!("{stem}.csv"));
        w.queries.save(&q)?;
        written.push(map_path);
        written.push(q);
    }
    Ok(written)
}

/// Files written by [`cmd_bench`].
pub const RUNS_FILE: &str = "runs.csv";
pub const PAIRS_FILE: &str = "pairs.csv";
pub const TERMINATION_FILE: &str = "termination.csv";

/// Runs the sweep and writes the run rows and summaries into `config.out`.
pub fn cmd_bench(config: &ExperimentConfig) -> Result<Sweep, BenchError> {
    runner::with_pool(config.jobs, || {
        let worlds = runner::load_worlds(config)?;
        let sweep = runner::run_sweep(config, &worlds)?;
        create_dir(&config.out)?;
        let runs = write_runs(&sweep.records);
        write(&config.out.join(RUNS_FILE), &runs)?;
        // the summary is a reduction of the rows as written
        let rows = read_runs(&runs).map_err(BenchError::Parse)?;
        let summary = stats::summarize(&rows, config.seed, stats::BOOTSTRAP_RESAMPLES);
        write(&config.out.join(PAIRS_FILE), stats::pairs_csv(&summary))?;
        write(&config.out.join(TERMINATION_FILE), stats::termination_csv(&summary))?;
        Ok(sweep)
    })
}

pub fn cmd_rankplot(runs: &Path) -> Result<rankplot::RankMatrix, BenchError> {
    let text = fs::read_to_string(runs).map_err(|e| BenchError::io(runs, e))?;
    let rows = read_runs(&text).map_err(|e| BenchError::Parse(format!("{}: {e}", runs.display())))?;
    Ok(rankplot::rank_matrix(&rows))
}

/// Re-runs one query of one world with a vertex snapshot and draws it.
pub fn cmd_render(config: &ExperimentConfig, world_seed: u64, qid: u32, rule: RuleSpec) -> Result<String, BenchError> {
    let mut single = config.clone();
    if config.generator.is_some() {
        single.seed = world_seed;
        single.worlds = 1;
    }
    let worlds = runner::load_worlds(&single)?;
    let world = worlds
        .iter()
        .find(|w| w.seed == world_seed)
        .ok_or_else(|| BenchError::Parse(format!("no world with seed {world_seed}")))?;
    let record = world
        .query(qid)
        .ok_or_else(|| BenchError::Parse(format!("world {world_seed} has no query {qid}")))?;
    let planner = Planner::new(config, world)?;
    let schedule = config.schedule_spec()?.build(planner.dims())?;
    let mut options = runner::search_options(config);
    options.snapshot = true;
    let run = planner.run(record, &schedule, rule, &options)?;
    let mask: OccupancyGrid;
    let grid = match &world.map {
        WorldMap::Occupancy(g) => g.as_ref(),
        WorldMap::Elevation(m) => {
            mask = m.obstacle_mask(&config.terrain.vehicle.limits);
            &mask
        }
    };
    render::render_svg(&render::Scene {
        grid,
        start: (record.x_s, record.y_s),
        goal: (record.x_g, record.y_g, record.r_g),
        snapshot: run.snapshot.as_ref(),
        path: &run.path,
        expansions: run.stats.expansions,
        budget: config.budget,
    })
    .map_err(BenchError::Parse)
}
