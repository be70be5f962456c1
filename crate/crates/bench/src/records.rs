//! Per-run result rows and their CSV form.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

/// Version line written before the CSV header.
pub const RUNS_VERSION: &str = "# ighastar-runs v1";

pub const STATUS_ERROR: &str = "error";

/// One improving path in a run's log.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogEntry {
    pub cost: f64,
    pub expansions: u64,
    pub iteration: usize,
}

/// Result of one (query, rule) run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    /// World seed, or 0 for a world loaded from file.
    pub world: u64,
    pub qid: u32,
    pub rule: String,
    /// Planner status, or [`STATUS_ERROR`] when the planner aborted.
    pub status: String,
    pub expansions: u64,
    pub iterations: usize,
    pub log: Vec<LogEntry>,
    pub message: String,
}

impl RunRecord {
    pub fn first_expansions(&self) -> Option<u64> {
        self.log.first().map(|e| e.expansions)
    }

    pub fn best_expansions(&self) -> Option<u64> {
        self.log.last().map(|e| e.expansions)
    }

    pub fn first_cost(&self) -> Option<f64> {
        self.log.first().map(|e| e.cost)
    }

    pub fn best_cost(&self) -> Option<f64> {
        self.log.last().map(|e| e.cost)
    }

    /// Whether the emitted costs strictly decrease.
    pub fn log_is_monotone(&self) -> bool {
        self.log.windows(2).all(|w| w[1].cost < w[0].cost)
    }

    pub fn key(&self) -> (u64, u32, &str) {
        (self.world, self.qid, &self.rule)
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct Row {
    world: u64,
    qid: u32,
    rule: String,
    status: String,
    expansions: u64,
    iterations: usize,
    first_expansions: Option<u64>,
    best_expansions: Option<u64>,
    first_cost: Option<f64>,
    best_cost: Option<f64>,
    log: String,
    message: String,
}

fn encode_log(log: &[LogEntry]) -> String {
    let mut s = String::new();
    for (i, e) in log.iter().enumerate() {
        if i > 0 {
            s.push(' ');
        }
        write!(s, "{}:{}:{}", e.cost, e.expansions, e.iteration).unwrap();
    }
    s
}

fn decode_log(s: &str) -> Result<Vec<LogEntry>, String> {
    s.split_whitespace()
        .map(|item| {
            let mut parts = item.split(':');
            let (Some(c), Some(x), Some(i), None) = (parts.next(), parts.next(), parts.next(), parts.next()) else {
                return Err(format!("bad log entry `{item}`"));
            };
            Ok(LogEntry {
                cost: c.parse().map_err(|_| format!("bad cost in `{item}`"))?,
                expansions: x.parse().map_err(|_| format!("bad expansion count in `{item}`"))?,
                iteration: i.parse().map_err(|_| format!("bad iteration in `{item}`"))?,
            })
        })
        .collect()
}

pub fn write_runs(records: &[RunRecord]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in records {
        w.serialize(Row {
            world: r.world,
            qid: r.qid,
            rule: r.rule.clone(),
            status: r.status.clone(),
            expansions: r.expansions,
            iterations: r.iterations,
            first_expansions: r.first_expansions(),
            best_expansions: r.best_expansions(),
            first_cost: r.first_cost(),
            best_cost: r.best_cost(),
            log: encode_log(&r.log),
            message: r.message.clone(),
        })
        .expect("writing to memory");
    }
    if records.is_empty() {
        w.write_record([
            "world",
            "qid",
            "rule",
            "status",
            "expansions",
            "iterations",
            "first_expansions",
            "best_expansions",
            "first_cost",
            "best_cost",
            "log",
            "message",
        ])
        .expect("writing to memory");
    }
    let body = String::from_utf8(w.into_inner().expect("flushing to memory")).expect("csv is utf-8");
    format!("{RUNS_VERSION}\n{body}")
}

pub fn read_runs(text: &str) -> Result<Vec<RunRecord>, String> {
    let Some(body) = text.strip_prefix(RUNS_VERSION).and_then(|t| t.strip_prefix('\n')) else {
        return Err(format!("missing `{RUNS_VERSION}` header line"));
    };
    let mut reader = csv::Reader::from_reader(body.as_bytes());
    let mut out = Vec::new();
    for row in reader.deserialize::<Row>() {
        let row = row.map_err(|e| e.to_string())?;
        let log = decode_log(&row.log)?;
        let record = RunRecord {
            world: row.world,
            qid: row.qid,
            rule: row.rule,
            status: row.status,
            expansions: row.expansions,
            iterations: row.iterations,
            log,
            message: row.message,
        };
        if record.first_expansions() != row.first_expansions || record.best_cost() != row.best_cost {
            return Err(format!(
                "world {} query {} rule {}: summary columns disagree with the log",
                record.world, record.qid, record.rule
            ));
        }
        out.push(record);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(rule: &str, log: &[(f64, u64)]) -> RunRecord {
        RunRecord {
            world: 3,
            qid: 7,
            rule: rule.into(),
            status: "optimal-terminated".into(),
            expansions: 900,
            iterations: 4,
            log: log
                .iter()
                .enumerate()
                .map(|(i, &(cost, expansions))| LogEntry {
                    cost,
                    expansions,
                    iteration: i,
                })
                .collect(),
            message: String::new(),
        }
    }

    #[test]
    fn round_trip() {
        let rs = vec![
            record("igha-0", &[(12.5, 40), (0.1 + 0.2, 800)]),
            record("iha", &[]),
            RunRecord {
                message: "bad, \"quoted\" input".into(),
                status: STATUS_ERROR.into(),
                ..record("iha-rule", &[])
            },
        ];
        let text = write_runs(&rs);
        assert!(text.starts_with("# ighastar-runs v1\nworld,qid,rule,"));
        assert_eq!(read_runs(&text).unwrap(), rs);
    }

    #[test]
    fn empty_file_keeps_header() {
        let text = write_runs(&[]);
        assert!(text.contains("first_expansions"));
        assert!(read_runs(&text).unwrap().is_empty());
    }

    #[test]
    fn missing_version_is_rejected() {
        let text = write_runs(&[record("igha-0", &[(1.0, 1)])]);
        assert!(read_runs(text.strip_prefix(RUNS_VERSION).unwrap()).is_err());
    }

    #[test]
    fn monotone_log() {
        assert!(record("a", &[(3.0, 1), (2.0, 2)]).log_is_monotone());
        assert!(!record("a", &[(3.0, 1), (3.0, 2)]).log_is_monotone());
    }
}
