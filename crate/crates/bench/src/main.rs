use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ighastar_bench::{
    cmd_bench, cmd_gen, cmd_rankplot, cmd_render, BenchError, ConfigError, ExperimentConfig, Generator,
    RuleSpec,
};

/// Benchmarks for Hybrid A*, iHA* and IGHA*.
///
/// Exit codes: 0 success, 1 usage, 2 config or parse error, 3 planner
/// invariant violation.
#[derive(Debug, Parser)]
#[command(name = "ighastar-bench", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, clap::Args)]
struct Common {
    /// TOML experiment config.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Seed of the first world.
    #[arg(long)]
    seed: Option<u64>,
    /// Expansion budget per run.
    #[arg(long)]
    budget: Option<u64>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads; 0 uses every core.
    #[arg(long)]
    jobs: Option<usize>,
    /// Comma-separated rule ids, e.g. igha-0,igha-inf,iha.
    #[arg(long, value_delimiter = ',')]
    rules: Option<Vec<String>>,
    /// World generator: sb, mb, urban or terrain.
    #[arg(long)]
    world: Option<String>,
    /// Number of worlds.
    #[arg(long)]
    worlds: Option<u64>,
    /// Queries per world.
    #[arg(long)]
    queries: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate worlds and query files.
    Gen(Common),
    /// Run every query under every rule and write runs.csv, pairs.csv and termination.csv.
    Bench(Common),
    /// Rank rules per query by first-path expansions.
    Rankplot {
        /// runs.csv written by `bench`.
        runs: PathBuf,
        /// Output file; standard output if absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw one run's search tree as SVG.
    Render {
        #[command(flatten)]
        common: Common,
        /// Query id within the world.
        #[arg(long)]
        qid: u32,
        /// Rule to run.
        #[arg(long)]
        rule: String,
    },
}

fn config_of(c: &Common) -> Result<ExperimentConfig, BenchError> {
    let mut config = match &c.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(w) = &c.world {
        config.generator = Some(match w.as_str() {
            "sb" => Generator::Sb,
            "mb" => Generator::Mb,
            "urban" => Generator::Urban,
            "terrain" => Generator::Terrain,
            other => return Err(ConfigError::Invalid(format!("unknown world `{other}`")).into()),
        });
    }
    if let Some(v) = c.seed {
        config.seed = v;
    }
    if let Some(v) = c.budget {
        config.budget = v;
    }
    if let Some(v) = &c.out {
        config.out = v.clone();
    }
    if let Some(v) = c.jobs {
        config.jobs = v;
    }
    if let Some(v) = &c.rules {
        config.rules = v.clone();
    }
    if let Some(v) = c.worlds {
        config.worlds = v;
    }
    if let Some(v) = c.queries {
        config.queries = Some(v);
    }
    config.validate()?;
    Ok(config)
}

fn run(cli: Cli) -> Result<(), BenchError> {
    match cli.command {
        Command::Gen(c) => {
            let config = config_of(&c)?;
            for p in cmd_gen(&config, &config.out)? {
                println!("{}", p.display());
            }
        }
        Command::Bench(c) => {
            let config = config_of(&c)?;
            let sweep = cmd_bench(&config)?;
            let errors = sweep.records.iter().filter(|r| r.status == "error").count();
            eprintln!(
                "{} runs, {errors} aborted, written to {}",
                sweep.records.len(),
                config.out.display()
            );
            if sweep.internal_errors > 0 {
                return Err(BenchError::Search(ighastar::search::SearchError::Invariant(format!(
                    "{} runs violated a planner invariant; see the message column of runs.csv",
                    sweep.internal_errors
                ))));
            }
        }
        Command::Rankplot { runs, out } => {
            let m = cmd_rankplot(&runs)?;
            if m.skipped > 0 {
                eprintln!("warning: skipped {} queries without a row for every rule", m.skipped);
            }
            match out {
                Some(p) => std::fs::write(&p, m.to_csv()).map_err(|e| BenchError::io(&p, e))?,
                None => print!("{}", m.to_csv()),
            }
        }
        Command::Render { common, qid, rule } => {
            let config = config_of(&common)?;
            let rule: RuleSpec = rule.parse().map_err(ConfigError::Invalid)?;
            let svg = cmd_render(&config, config.seed, qid, rule)?;
            match &common.out {
                Some(p) => std::fs::write(p, svg).map_err(|e| BenchError::io(p, e))?,
                None => print!("{svg}"),
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
