#![allow(dead_code)]

use std::sync::Arc;

use ighastar::domains::{DepthLimited, GoalRegion, PointRobot, StateR2};
use ighastar::search::ResolutionSchedule;
use ighastar::worlds::OccupancyGrid;
use ighastar::{DimKind, Domain, Query};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Tree = DepthLimited<PointRobot>;

/// A 10 m square with a few random boxes, a radial-5 robot with unit steps
/// cut at depth `depth`, and a query whose goal lies within reach.
pub fn small_world(seed: u64, depth: usize) -> (Tree, Query<<Tree as Domain>::State, GoalRegion>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut grid = OccupancyGrid::new(40, 40, 0.25).unwrap();
    for _ in 0..rng.gen_range(2..6) {
        let x = rng.gen_range(0.0..9.0);
        let y = rng.gen_range(0.0..9.0);
        let w = rng.gen_range(0.3..2.5);
        let h = rng.gen_range(0.3..2.5);
        grid.fill_rect(x, y, x + w, y + h, true);
    }
    let (sx, sy) = loop {
        let p = (rng.gen_range(2.0..8.0), rng.gen_range(2.0..8.0));
        if grid.is_free(p.0, p.1) {
            break p;
        }
    };
    let a = rng.gen_range(0.0..std::f64::consts::TAU);
    let r = rng.gen_range(2.0..depth as f64);
    let goal = GoalRegion::disc(
        (sx + r * a.cos()).clamp(0.5, 9.5),
        (sy + r * a.sin()).clamp(0.5, 9.5),
        rng.gen_range(0.5..1.0),
    );
    let robot = PointRobot::radial(Arc::new(grid), 5, 1.0);
    let tree = DepthLimited::new(robot, depth);
    let start = tree.root(StateR2::new(sx, sy));
    (tree, Query::new(start, goal))
}

pub fn schedule(levels: usize) -> ResolutionSchedule {
    ResolutionSchedule::geometric(&[DimKind::Linear; 2], &[2.0, 2.0], 2.0, levels).unwrap()
}

/// Least goal-vertex cost in the full tree, by exhaustive enumeration.
pub fn full_tree_optimum<D: Domain>(d: &D, q: &Query<D::State, D::Goal>) -> Option<f64> {
    let mut best: Option<f64> = None;
    let mut stack = vec![(q.start.clone(), 0.0)];
    let mut out = Vec::new();
    while let Some((s, g)) = stack.pop() {
        if best.is_some_and(|b| g >= b) {
            continue;
        }
        if d.in_goal(&s, &q.goal) {
            best = Some(g);
            continue;
        }
        d.successors(&s, &mut out).unwrap();
        stack.extend(out.drain(..).map(|(_, e)| (e.state, g + e.cost)));
    }
    best
}

/// Number of full-tree vertices with g < `w`.
pub fn count_below<D: Domain>(d: &D, q: &Query<D::State, D::Goal>, w: f64) -> usize {
    let mut count = 0;
    let mut stack = vec![(q.start.clone(), 0.0)];
    let mut out = Vec::new();
    while let Some((s, g)) = stack.pop() {
        if g >= w {
            continue;
        }
        count += 1;
        d.successors(&s, &mut out).unwrap();
        stack.extend(out.drain(..).map(|(_, e)| (e.state, g + e.cost)));
    }
    count
}
