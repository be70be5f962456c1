//! Rank matrices: how often each rule places at each rank on first-path
//! expansions.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::records::{RunRecord, STATUS_ERROR};
use crate::stats::rule_ids;

#[derive(Debug, Clone, PartialEq)]
pub struct RankMatrix {
    pub rules: Vec<String>,
    /// `percent[i][k]`: share of ranked queries in which `rules[i]` has rank `k + 1`.
    pub percent: Vec<Vec<f64>>,
    pub ranked: usize,
    /// Queries without a usable row for every rule.
    pub skipped: usize,
}

/// Competition ranking: a rule's rank is one plus the number of rules with
/// strictly fewer first-path expansions, so ties share the better rank. A
/// run without a path ranks behind every run with one.
pub fn rank_matrix(records: &[RunRecord]) -> RankMatrix {
    let rules = rule_ids(records);
    let mut groups: BTreeMap<(u64, u32), BTreeMap<&str, Option<u64>>> = BTreeMap::new();
    let mut errored: BTreeMap<(u64, u32), bool> = BTreeMap::new();
    for r in records {
        let key = (r.world, r.qid);
        if r.status == STATUS_ERROR {
            errored.insert(key, true);
        }
        groups.entry(key).or_default().insert(&r.rule, r.first_expansions());
    }
    let k = rules.len();
    let mut counts = vec![vec![0usize; k]; k];
    let (mut ranked, mut skipped) = (0, 0);
    for (key, g) in &groups {
        if g.len() != k || errored.contains_key(key) {
            skipped += 1;
            continue;
        }
        ranked += 1;
        let value = |rule: &str| g[rule].unwrap_or(u64::MAX);
        for (i, rule) in rules.iter().enumerate() {
            let v = value(rule);
            let better = rules.iter().filter(|o| value(o) < v).count();
            counts[i][better] += 1;
        }
    }
    let percent = counts
        .iter()
        .map(|row| {
            row.iter()
                .map(|&c| if ranked == 0 { 0.0 } else { 100.0 * c as f64 / ranked as f64 })
                .collect()
        })
        .collect();
    RankMatrix {
        rules,
        percent,
        ranked,
        skipped,
    }
}

impl RankMatrix {
    pub fn to_csv(&self) -> String {
        let mut s = format!("# ranked={} skipped={}\nrule", self.ranked, self.skipped);
        for k in 1..=self.rules.len() {
            write!(s, ",rank_{k}").unwrap();
        }
        s.push('\n');
        for (rule, row) in self.rules.iter().zip(&self.percent) {
            s.push_str(rule);
            for p in row {
                write!(s, ",{p}").unwrap();
            }
            s.push('\n');
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::records::LogEntry;

    fn run(qid: u32, rule: &str, first: Option<u64>) -> RunRecord {
        RunRecord {
            world: 0,
            qid,
            rule: rule.into(),
            status: "optimal-terminated".into(),
            expansions: 0,
            iterations: 0,
            log: first
                .map(|expansions| LogEntry {
                    cost: 1.0,
                    expansions,
                    iteration: 0,
                })
                .into_iter()
                .collect(),
            message: String::new(),
        }
    }

    #[test]
    fn one_rule_always_first() {
        let rs: Vec<_> = (0..4).flat_map(|q| [run(q, "a", Some(1)), run(q, "b", Some(2))]).collect();
        let m = rank_matrix(&rs);
        assert_eq!(m.percent, vec![vec![100.0, 0.0], vec![0.0, 100.0]]);
    }

    #[test]
    fn ties_share_the_better_rank() {
        let rs: Vec<_> = (0..3).flat_map(|q| [run(q, "a", Some(5)), run(q, "b", Some(5))]).collect();
        let m = rank_matrix(&rs);
        assert_eq!(m.percent, vec![vec![100.0, 0.0], vec![100.0, 0.0]]);
    }

    #[test]
    fn three_rules_by_hand() {
        let rs = vec![
            // a < b < c
            run(0, "a", Some(1)),
            run(0, "b", Some(2)),
            run(0, "c", Some(3)),
            // a = c < b
            run(1, "a", Some(4)),
            run(1, "b", Some(9)),
            run(1, "c", Some(4)),
            // b < a, c has no path
            run(2, "a", Some(7)),
            run(2, "b", Some(6)),
            run(2, "c", None),
            // c < a = b
            run(3, "a", Some(8)),
            run(3, "b", Some(8)),
            run(3, "c", Some(2)),
            // missing c: skipped
            run(4, "a", Some(1)),
            run(4, "b", Some(1)),
        ];
        let m = rank_matrix(&rs);
        assert_eq!((m.ranked, m.skipped), (4, 1));
        // a: ranks 1,1,2,2   b: 2,3,1,2   c: 3,1,3,1
        assert_eq!(m.percent[0], vec![50.0, 50.0, 0.0]);
        assert_eq!(m.percent[1], vec![25.0, 50.0, 25.0]);
        assert_eq!(m.percent[2], vec![50.0, 0.0, 50.0]);
        assert!(m.to_csv().starts_with("# ranked=4 skipped=1\nrule,rank_1,rank_2,rank_3\na,50,50,0\n"));
    }
}
