//! Summary statistics over run records: head-to-head first-path
//! comparisons and termination speed-ups against the restart baseline.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::records::{RunRecord, STATUS_ERROR};

pub const BOOTSTRAP_RESAMPLES: usize = 10_000;

/// Rule id of the restart baseline.
pub const BASELINE: &str = "iha";

/// Point estimate with a 95% percentile-bootstrap interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub lo: f64,
    pub hi: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairSummary {
    pub a: String,
    pub b: String,
    pub queries: usize,
    pub wins: usize,
    pub losses: usize,
    pub ties: usize,
    /// Fraction of queries where A needs fewer first-path expansions than B.
    pub win_ratio: Estimate,
    pub tie_fraction: f64,
    /// Mean of B/A first-path expansions over the queries A wins.
    pub speedup: Option<Estimate>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TerminationSummary {
    pub rule: String,
    /// Queries on which the baseline terminated within budget.
    pub queries: usize,
    /// Baseline expansions over rule expansions.
    pub median: Option<Estimate>,
    pub mean: Option<Estimate>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub pairs: Vec<PairSummary>,
    pub termination: Vec<TerminationSummary>,
}

type QueryKey = (u64, u32);

/// Rows grouped by query, errors dropped.
fn by_query(records: &[RunRecord]) -> BTreeMap<QueryKey, BTreeMap<&str, &RunRecord>> {
    let mut out: BTreeMap<QueryKey, BTreeMap<&str, &RunRecord>> = BTreeMap::new();
    for r in records.iter().filter(|r| r.status != STATUS_ERROR) {
        out.entry((r.world, r.qid)).or_default().insert(&r.rule, r);
    }
    out
}

/// Sorted, deduplicated rule ids.
pub fn rule_ids(records: &[RunRecord]) -> Vec<String> {
    let mut ids: Vec<String> = records.iter().map(|r| r.rule.clone()).collect();
    ids.sort();
    ids.dedup();
    ids
}

fn first(r: &RunRecord) -> u64 {
    r.first_expansions().unwrap_or(u64::MAX)
}

pub fn summarize(records: &[RunRecord], seed: u64, resamples: usize) -> Summary {
    let groups = by_query(records);
    let rules = rule_ids(records);
    let mut pairs = Vec::new();
    let mut stream = 0u64;
    for a in &rules {
        for b in &rules {
            if a == b {
                continue;
            }
            let outcomes: Vec<(u64, u64)> = groups
                .values()
                .filter_map(|g| Some((first(g.get(a.as_str())?), first(g.get(b.as_str())?))))
                .collect();
            stream += 1;
            if let Some(p) = compare(a, b, &outcomes, seed, stream, resamples) {
                pairs.push(p);
            }
        }
    }
    let mut termination = Vec::new();
    for rule in rules.iter().filter(|r| r.as_str() != BASELINE) {
        let ratios: Vec<f64> = groups
            .values()
            .filter_map(|g| {
                let base = g.get(BASELINE)?;
                let other = g.get(rule.as_str())?;
                (base.status == "optimal-terminated")
                    .then(|| base.expansions as f64 / other.expansions.max(1) as f64)
            })
            .collect();
        if !groups.values().any(|g| g.contains_key(BASELINE)) {
            continue;
        }
        stream += 1;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        termination.push(TerminationSummary {
            rule: rule.clone(),
            queries: ratios.len(),
            median: bootstrap(&ratios, median, &mut rng, resamples),
            mean: bootstrap(&ratios, mean, &mut rng, resamples),
        });
    }
    Summary { pairs, termination }
}

fn compare(a: &str, b: &str, outcomes: &[(u64, u64)], seed: u64, stream: u64, resamples: usize) -> Option<PairSummary> {
    let n = outcomes.len();
    if n == 0 {
        return None;
    }
    let wins = outcomes.iter().filter(|(x, y)| x < y).count();
    let losses = outcomes.iter().filter(|(x, y)| x > y).count();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let win_ratio = bootstrap(outcomes, win_fraction, &mut rng, resamples).expect("nonempty");
    let has_speedup = outcomes.iter().any(|o| speedup_of(*o).is_some());
    let speedup = if has_speedup {
        bootstrap(outcomes, conditional_speedup, &mut rng, resamples)
    } else {
        None
    };
    Some(PairSummary {
        a: a.into(),
        b: b.into(),
        queries: n,
        wins,
        losses,
        ties: n - wins - losses,
        win_ratio,
        tie_fraction: (n - wins - losses) as f64 / n as f64,
        speedup,
    })
}

fn win_fraction(o: &[(u64, u64)]) -> Option<f64> {
    (!o.is_empty()).then(|| o.iter().filter(|(x, y)| x < y).count() as f64 / o.len() as f64)
}

/// B/A for a query A wins where both found a path.
fn speedup_of((x, y): (u64, u64)) -> Option<f64> {
    (x < y && y != u64::MAX && x > 0).then(|| y as f64 / x as f64)
}

fn conditional_speedup(o: &[(u64, u64)]) -> Option<f64> {
    let s: Vec<f64> = o.iter().filter_map(|&p| speedup_of(p)).collect();
    mean(&s)
}

pub fn mean(xs: &[f64]) -> Option<f64> {
    (!xs.is_empty()).then(|| xs.iter().sum::<f64>() / xs.len() as f64)
}

pub fn median(xs: &[f64]) -> Option<f64> {
    if xs.is_empty() {
        return None;
    }
    let mut s = xs.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len();
    Some(if n % 2 == 1 {
        s[n / 2]
    } else {
        0.5 * (s[n / 2 - 1] + s[n / 2])
    })
}

/// Statistic on `data` with a 95% percentile interval over `resamples`
/// resamples drawn with replacement. Resamples on which the statistic is
/// undefined are skipped.
pub fn bootstrap<T: Copy>(
    data: &[T],
    stat: impl Fn(&[T]) -> Option<f64>,
    rng: &mut ChaCha8Rng,
    resamples: usize,
) -> Option<Estimate> {
    let value = stat(data)?;
    let mut draws = Vec::with_capacity(resamples);
    let mut sample = Vec::with_capacity(data.len());
    for _ in 0..resamples {
        sample.clear();
        sample.extend((0..data.len()).map(|_| data[rng.gen_range(0..data.len())]));
        if let Some(v) = stat(&sample) {
            draws.push(v);
        }
    }
    if draws.is_empty() {
        return Some(Estimate { value, lo: value, hi: value });
    }
    draws.sort_by(f64::total_cmp);
    let at = |q: f64| draws[((q * draws.len() as f64) as usize).min(draws.len() - 1)];
    Some(Estimate {
        value,
        lo: at(0.025),
        hi: at(0.975),
    })
}

fn opt(e: Option<Estimate>) -> [String; 3] {
    match e {
        Some(e) => [e.value.to_string(), e.lo.to_string(), e.hi.to_string()],
        None => Default::default(),
    }
}

pub fn pairs_csv(summary: &Summary) -> String {
    let mut s = String::from(
        "a,b,queries,wins,losses,ties,win_ratio,win_lo,win_hi,tie_fraction,speedup,speedup_lo,speedup_hi\n",
    );
    for p in &summary.pairs {
        let [sv, sl, sh] = opt(p.speedup);
        writeln!(
            s,
            "{},{},{},{},{},{},{},{},{},{},{sv},{sl},{sh}",
            p.a, p.b, p.queries, p.wins, p.losses, p.ties, p.win_ratio.value, p.win_ratio.lo, p.win_ratio.hi, p.tie_fraction
        )
        .unwrap();
    }
    s
}

pub fn termination_csv(summary: &Summary) -> String {
    let mut s = String::from("rule,queries,median,median_lo,median_hi,mean,mean_lo,mean_hi\n");
    for t in &summary.termination {
        let [a, b, c] = opt(t.median);
        let [d, e, f] = opt(t.mean);
        writeln!(s, "{},{},{a},{b},{c},{d},{e},{f}", t.rule, t.queries).unwrap();
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::records::LogEntry;

    fn run(qid: u32, rule: &str, first: Option<u64>, total: u64, status: &str) -> RunRecord {
        RunRecord {
            world: 0,
            qid,
            rule: rule.into(),
            status: status.into(),
            expansions: total,
            iterations: 1,
            log: first
                .map(|x| LogEntry {
                    cost: 1.0,
                    expansions: x,
                    iteration: 0,
                })
                .into_iter()
                .collect(),
            message: String::new(),
        }
    }

    #[test]
    fn median_and_mean() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), Some(2.0));
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), Some(2.5));
        assert_eq!(mean(&[1.0, 2.0]), Some(1.5));
        assert_eq!(median(&[]), None);
    }

    #[test]
    fn head_to_head() {
        let t = "optimal-terminated";
        let rs = vec![
            run(0, "x", Some(10), 10, t),
            run(0, "y", Some(40), 40, t),
            run(1, "x", Some(10), 10, t),
            run(1, "y", Some(20), 20, t),
            run(2, "x", Some(30), 30, t),
            run(2, "y", Some(30), 30, t),
            run(3, "x", Some(50), 50, t),
            run(3, "y", Some(25), 25, t),
            run(4, "x", Some(9), 9, t),
            run(4, "y", None, 100, "budget"),
        ];
        let s = summarize(&rs, 1, 200);
        let xy = s.pairs.iter().find(|p| p.a == "x").unwrap();
        let yx = s.pairs.iter().find(|p| p.a == "y").unwrap();
        assert_eq!((xy.wins, xy.losses, xy.ties), (3, 1, 1));
        assert_eq!(xy.win_ratio.value, 0.6);
        assert_eq!(yx.win_ratio.value, 0.2);
        assert_eq!(xy.win_ratio.value + yx.win_ratio.value + xy.tie_fraction, 1.0);
        // query 4 has no path for y and is left out of the speed-up
        assert_eq!(xy.speedup.unwrap().value, 3.0);
        assert_eq!(yx.speedup.unwrap().value, 2.0);
        assert!(xy.win_ratio.lo <= 0.6 && xy.win_ratio.hi >= 0.6);
        assert!(s.termination.is_empty());
    }

    #[test]
    fn termination_only_where_baseline_terminates() {
        let t = "optimal-terminated";
        let rs = vec![
            run(0, "iha", Some(5), 600, t),
            run(0, "igha-0", Some(5), 100, t),
            run(1, "iha", Some(5), 1000, "budget"),
            run(1, "igha-0", Some(5), 100, t),
            run(2, "iha", Some(5), 300, t),
            run(2, "igha-0", Some(5), 100, t),
        ];
        let s = summarize(&rs, 1, 100);
        let t = &s.termination[0];
        assert_eq!((t.rule.as_str(), t.queries), ("igha-0", 2));
        assert_eq!(t.median.unwrap().value, 4.5);
    }

    #[test]
    fn bootstrap_is_deterministic() {
        let data: Vec<f64> = (0..50).map(|i| (i * 7 % 13) as f64).collect();
        let a = bootstrap(&data, mean, &mut ChaCha8Rng::seed_from_u64(9), 1000);
        let b = bootstrap(&data, mean, &mut ChaCha8Rng::seed_from_u64(9), 1000);
        assert_eq!(a, b);
        let e = a.unwrap();
        assert!(e.lo <= e.value && e.value <= e.hi && e.lo < e.hi);
    }
}
