mod common;

use std::sync::OnceLock;

use common::{schedule, small_world};
use ighastar::domains::{point_query, GoalRegion, PointRobot, StateR2};
use ighastar::search::{
    hybrid_astar, iha_star, ighastar, Hysteresis, Monotone, Outcome, Restart, Rule, SearchOptions, Termination,
};
use ighastar::worlds::{gen_mb, gen_sb, BottleneckParams};
use ighastar::{Domain, Query};
use proptest::prelude::*;

type PointQuery = Query<StateR2, GoalRegion>;

/// A handful of SB and MB worlds with their point robots and queries.
fn bottleneck_cases() -> &'static Vec<(PointRobot, PointQuery)> {
    static CASES: OnceLock<Vec<(PointRobot, PointQuery)>> = OnceLock::new();
    CASES.get_or_init(|| {
        let sb = BottleneckParams {
            queries: 4,
            ..BottleneckParams::default()
        };
        let mb = BottleneckParams { walls: 3, ..sb.clone() };
        let mut out = Vec::new();
        for seed in 0..3 {
            for (params, g) in [(&sb, gen_sb(seed, &sb).unwrap()), (&mb, gen_mb(seed, &mb).unwrap())] {
                let robot = params.robot(std::sync::Arc::new(g.map));
                for r in &g.queries.records {
                    out.push((robot.clone(), point_query(r)));
                }
            }
        }
        out
    })
}

fn bottleneck_schedule() -> ighastar::search::ResolutionSchedule {
    BottleneckParams::default()
        .schedule
        .build(&[ighastar::DimKind::Linear; 2])
        .unwrap()
}

fn rule_of(k: usize) -> Box<dyn Rule> {
    match k {
        0 => Box::new(Hysteresis::new(0)),
        1 => Box::new(Hysteresis::new(10)),
        2 => Box::new(Monotone),
        _ => Box::new(Restart),
    }
}

fn options(budget: u64) -> SearchOptions {
    SearchOptions {
        budget,
        termination: Termination::Schedule,
        check_invariants: true,
        ..SearchOptions::default()
    }
}

/// Re-applies the path's primitives from the start and returns the summed cost.
fn replay<D: Domain>(d: &D, q: &Query<D::State, D::Goal>, out: &Outcome<D::State>) -> Option<f64> {
    let p = out.best.as_ref()?;
    let mut s = q.start.clone();
    let mut cost = 0.0;
    for &k in &p.primitives {
        let e = d.apply(&s, k).unwrap().expect("path primitive is valid");
        cost += e.cost;
        s = e.state;
    }
    assert!(d.in_goal(&s, &q.goal));
    Some(cost)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn first_iteration_is_hybrid_astar_at_the_coarsest_level(seed in 0u64..10_000, k in 0usize..4) {
        let (tree, q) = small_world(seed, 7);
        let sched = schedule(4);
        let opts = SearchOptions { trace: true, ..options(u64::MAX) };
        let ha = hybrid_astar(&tree, &q, &sched, 0, &opts).unwrap();
        let out = ighastar(&tree, &q, &sched, rule_of(k).as_mut(), &opts).unwrap();
        prop_assert_eq!(out.stats.trace_of_iteration(0), ha.stats.trace_of_iteration(0));
        let first = out.stats.emissions.first().filter(|e| e.iteration == 0);
        prop_assert_eq!(first.map(|e| e.cost), ha.cost());
    }

    #[test]
    fn emissions_strictly_improve(seed in 0u64..10_000, k in 0usize..4) {
        let (tree, q) = small_world(seed, 7);
        let out = ighastar(&tree, &q, &schedule(4), rule_of(k).as_mut(), &options(u64::MAX)).unwrap();
        for pair in out.stats.emissions.windows(2) {
            prop_assert!(pair[1].cost < pair[0].cost);
            prop_assert!(pair[1].expansions >= pair[0].expansions);
        }
        prop_assert_eq!(out.stats.best_cost(), out.cost());
    }

    #[test]
    fn paths_replay_to_their_cost(seed in 0u64..10_000, k in 0usize..4) {
        let (tree, q) = small_world(seed, 7);
        let out = ighastar(&tree, &q, &schedule(4), rule_of(k).as_mut(), &options(u64::MAX)).unwrap();
        if let (Some(replayed), Some(cost)) = (replay(&tree, &q, &out), out.cost()) {
            prop_assert!((replayed - cost).abs() <= 1e-9 * (1.0 + cost));
        }
    }

    #[test]
    fn a_single_level_reduces_to_hybrid_astar(seed in 0u64..10_000, k in 0usize..4, level in 0usize..4) {
        let (tree, q) = small_world(seed, 7);
        let one = schedule(4).single(level);
        let ha = hybrid_astar(&tree, &q, &one, 0, &options(u64::MAX)).unwrap();
        let out = ighastar(&tree, &q, &one, rule_of(k).as_mut(), &options(u64::MAX)).unwrap();
        let first = out.stats.emissions.first().map(|e| (e.cost, e.expansions));
        let expected = ha.stats.emissions.first().map(|e| (e.cost, e.expansions));
        prop_assert_eq!(first, expected);
    }

    #[test]
    fn the_restart_rule_reproduces_iha_star(seed in 0u64..10_000) {
        let (tree, q) = small_world(seed, 7);
        let sched = schedule(4);
        let iha = iha_star(&tree, &q, &sched, &options(u64::MAX)).unwrap();
        let rule = ighastar(&tree, &q, &sched, &mut Restart, &options(u64::MAX)).unwrap();
        let emitted = |o: &Outcome<_>| o.stats.emissions.iter().map(|e| (e.cost, e.level)).collect::<Vec<_>>();
        prop_assert_eq!(emitted(&rule), emitted(&iha));
        prop_assert_eq!(rule.cost(), iha.cost());
    }
}

#[test]
fn bottleneck_queries_agree_with_the_baselines() {
    let sched = bottleneck_schedule();
    let opts = SearchOptions {
        trace: true,
        ..options(5_000)
    };
    for (i, (robot, q)) in bottleneck_cases().iter().enumerate() {
        let ha = hybrid_astar(robot, q, &sched, 0, &opts).unwrap();
        let iha = iha_star(robot, q, &sched, &opts).unwrap();
        let emitted = |o: &Outcome<_>| o.stats.emissions.iter().map(|e| (e.cost, e.level)).collect::<Vec<_>>();
        for k in 0..4 {
            let out = ighastar(robot, q, &sched, rule_of(k).as_mut(), &opts).unwrap();
            assert_eq!(
                out.stats.trace_of_iteration(0),
                ha.stats.trace_of_iteration(0),
                "case {i} rule {k}"
            );
            for pair in out.stats.emissions.windows(2) {
                assert!(pair[1].cost < pair[0].cost, "case {i} rule {k}");
            }
            if let (Some(replayed), Some(cost)) = (replay(robot, q, &out), out.cost()) {
                assert!((replayed - cost).abs() <= 1e-9 * (1.0 + cost), "case {i} rule {k}");
            }
            if k == 3 {
                assert_eq!(emitted(&out), emitted(&iha), "case {i}");
            }
        }
    }
}

#[test]
fn runs_are_deterministic() {
    let sched = bottleneck_schedule();
    let opts = SearchOptions {
        trace: true,
        ..options(5_000)
    };
    for (robot, q) in bottleneck_cases().iter().take(6) {
        for k in 0..4 {
            let a = ighastar(robot, q, &sched, rule_of(k).as_mut(), &opts).unwrap();
            let b = ighastar(robot, q, &sched, rule_of(k).as_mut(), &opts).unwrap();
            assert_eq!(a.stats, b.stats);
            assert_eq!(a.best, b.best);
        }
    }
}
