use std::collections::BinaryHeap;

use crate::domain::{Coords, Domain, Query};

use super::dominance::DominanceTable;
use super::outcome::{Emission, Outcome, Path, SearchOptions, SearchStats, Status, TraceEntry};
use super::schedule::ResolutionSchedule;
use super::vertex::{Frontier, VertexId};
use super::SearchError;

pub(crate) fn check_query<D: Domain>(
    domain: &D,
    query: &Query<D::State, D::Goal>,
    schedule: &ResolutionSchedule,
) -> Result<(), SearchError> {
    if schedule.kinds() != domain.dims() {
        return Err(SearchError::InvalidInput(format!(
            "schedule dimensions {:?} do not match domain dimensions {:?}",
            schedule.kinds(),
            domain.dims()
        )));
    }
    if !domain.is_valid(&query.start) {
        return Err(SearchError::InvalidInput(format!(
            "start state {:?} is not valid",
            query.start
        )));
    }
    Ok(())
}

struct Node<S> {
    state: S,
    coords: Coords,
    g: f64,
    f: f64,
    parent: Option<u32>,
    primitive: Option<usize>,
    queued: bool,
}

enum LevelEnd {
    Goal(u32),
    Exhausted,
    Bounded,
    Budget,
}

struct LevelRun<S> {
    path: Option<Path<S>>,
    end: LevelEnd,
    expansions: u64,
    max_open: usize,
    created: u64,
}

/// One fixed-resolution search. Children that do not win their cell are
/// discarded; popping a vertex with `f >= bound` ends the search.
fn search_level<D: Domain>(
    domain: &D,
    query: &Query<D::State, D::Goal>,
    schedule: &ResolutionSchedule,
    level: usize,
    bound: f64,
    budget: u64,
    iteration: usize,
    options: &SearchOptions,
    trace: &mut Vec<TraceEntry>,
) -> Result<LevelRun<D::State>, SearchError> {
    let goal = &query.goal;
    let epsilon = domain.min_edge_cost();
    let mut table = DominanceTable::new(1);
    let mut nodes: Vec<Node<D::State>> = Vec::new();
    let mut heap = BinaryHeap::new();
    let mut open = 0usize;
    let mut max_open = 0usize;
    let mut expansions = 0u64;
    let mut scratch = Vec::new();

    let root_coords = domain.coords(&query.start);
    let root_f = domain.heuristic(&query.start, goal);
    table.try_dominate(0, schedule.discretize(&root_coords, level), VertexId(0), 0.0);
    nodes.push(Node {
        state: query.start.clone(),
        coords: root_coords,
        g: 0.0,
        f: root_f,
        parent: None,
        primitive: None,
        queued: true,
    });
    heap.push(Frontier {
        f: root_f,
        id: VertexId(0),
    });
    open += 1;

    let end = loop {
        let Some(top) = heap.pop() else {
            break LevelEnd::Exhausted;
        };
        let index = top.id.0;
        let u = &mut nodes[index as usize];
        if !u.queued {
            continue;
        }
        u.queued = false;
        open -= 1;
        if u.f >= bound {
            break LevelEnd::Bounded;
        }
        if domain.in_goal(&u.state, goal) {
            break LevelEnd::Goal(index);
        }
        if expansions >= budget {
            break LevelEnd::Budget;
        }
        expansions += 1;
        if options.trace {
            trace.push(TraceEntry {
                iteration,
                level,
                id: index,
                coords: u.coords,
            });
        }
        let (g_u, h_u) = (u.g, u.f - u.g);
        let state = u.state.clone();
        domain.successors(&state, &mut scratch)?;
        for (primitive, edge) in scratch.drain(..) {
            if !(edge.cost.is_finite() && edge.cost >= epsilon) {
                return Err(SearchError::Invariant(format!(
                    "edge cost {} of primitive {primitive} below floor {epsilon}",
                    edge.cost
                )));
            }
            let h = domain.heuristic(&edge.state, goal);
            if options.check_invariants && h_u > edge.cost + h + 1e-9 * (1.0 + h_u.abs()) {
                return Err(SearchError::Invariant(format!(
                    "inconsistent heuristic: h(u)={h_u} > w={} + h(v)={h}",
                    edge.cost
                )));
            }
            let g = g_u + edge.cost;
            let coords = domain.coords(&edge.state);
            let id = VertexId(nodes.len() as u32);
            let outcome = table.try_dominate(0, schedule.discretize(&coords, level), id, g);
            if !outcome.became_dominant {
                continue;
            }
            if let Some(displaced) = outcome.displaced {
                let d = &mut nodes[displaced.index()];
                if d.queued {
                    d.queued = false;
                    open -= 1;
                }
            }
            nodes.push(Node {
                state: edge.state,
                coords,
                g,
                f: g + h,
                parent: Some(index),
                primitive: Some(primitive),
                queued: true,
            });
            heap.push(Frontier { f: g + h, id });
            open += 1;
        }
        max_open = max_open.max(open);
    };

    let path = match end {
        LevelEnd::Goal(index) => Some(trace_back(&nodes, index)),
        _ => None,
    };
    Ok(LevelRun {
        path,
        end,
        expansions,
        max_open,
        created: nodes.len() as u64,
    })
}

fn trace_back<S: Clone>(nodes: &[Node<S>], goal: u32) -> Path<S> {
    let mut states = Vec::new();
    let mut primitives = Vec::new();
    let mut cursor = Some(goal);
    while let Some(index) = cursor {
        let n = &nodes[index as usize];
        states.push(n.state.clone());
        primitives.extend(n.primitive);
        cursor = n.parent;
    }
    states.reverse();
    primitives.reverse();
    Path {
        states,
        primitives,
        cost: nodes[goal as usize].g,
    }
}

/// Hybrid A* on the motion-primitive tree at the fixed resolution
/// `schedule[level]`. Returns the first goal-reaching path popped.
pub fn hybrid_astar<D: Domain>(
    domain: &D,
    query: &Query<D::State, D::Goal>,
    schedule: &ResolutionSchedule,
    level: usize,
    options: &SearchOptions,
) -> Result<Outcome<D::State>, SearchError> {
    check_query(domain, query, schedule)?;
    if level > schedule.finest() {
        return Err(SearchError::InvalidInput(format!(
            "level {level} outside a schedule of {} levels",
            schedule.len()
        )));
    }
    let mut stats = SearchStats::default();
    let run = search_level(
        domain,
        query,
        schedule,
        level,
        f64::INFINITY,
        options.budget,
        0,
        options,
        &mut stats.trace,
    )?;
    stats.expansions = run.expansions;
    stats.iterations = 1;
    stats.iteration_expansions.push(run.expansions);
    stats.iteration_levels.push(level);
    stats.max_open = run.max_open;
    stats.max_active = run.max_open;
    stats.vertices_created = run.created;
    stats.status = Some(match run.end {
        LevelEnd::Goal(_) => Status::Terminated,
        LevelEnd::Budget => Status::Budget,
        LevelEnd::Exhausted | LevelEnd::Bounded => Status::Failure,
    });
    if let Some(p) = &run.path {
        stats.emissions.push(Emission {
            cost: p.cost,
            expansions: run.expansions,
            iteration: 0,
            level,
        });
    }
    Ok(Outcome {
        best: run.path,
        stats,
        snapshot: None,
    })
}

/// Runs Hybrid A* from scratch at every level of `schedule`, coarsest first,
/// pruning each level with the best cost found so far. The budget is shared
/// across levels.
pub fn iha_star<D: Domain>(
    domain: &D,
    query: &Query<D::State, D::Goal>,
    schedule: &ResolutionSchedule,
    options: &SearchOptions,
) -> Result<Outcome<D::State>, SearchError> {
    multi_resolution(domain, query, schedule, options, true)
}

/// [`iha_star`] without the incumbent bound: every level runs until it
/// finds a goal or empties its queue.
pub fn iha_star_unbounded<D: Domain>(
    domain: &D,
    query: &Query<D::State, D::Goal>,
    schedule: &ResolutionSchedule,
    options: &SearchOptions,
) -> Result<Outcome<D::State>, SearchError> {
    multi_resolution(domain, query, schedule, options, false)
}

fn multi_resolution<D: Domain>(
    domain: &D,
    query: &Query<D::State, D::Goal>,
    schedule: &ResolutionSchedule,
    options: &SearchOptions,
    branch_and_bound: bool,
) -> Result<Outcome<D::State>, SearchError> {
    check_query(domain, query, schedule)?;
    let mut stats = SearchStats::default();
    let mut best: Option<Path<D::State>> = None;
    let mut status = None;
    for level in 0..schedule.len() {
        let incumbent = best.as_ref().map_or(f64::INFINITY, |p| p.cost);
        let bound = if branch_and_bound {
            incumbent
        } else {
            f64::INFINITY
        };
        let run = search_level(
            domain,
            query,
            schedule,
            level,
            bound,
            options.budget - stats.expansions,
            level,
            options,
            &mut stats.trace,
        )?;
        stats.expansions += run.expansions;
        stats.iterations += 1;
        stats.iteration_expansions.push(run.expansions);
        stats.iteration_levels.push(level);
        stats.max_open = stats.max_open.max(run.max_open);
        stats.vertices_created += run.created;
        if let Some(path) = run.path {
            if path.cost < incumbent {
                stats.emissions.push(Emission {
                    cost: path.cost,
                    expansions: stats.expansions,
                    iteration: level,
                    level,
                });
                best = Some(path);
                if options.first_path_only {
                    status = Some(Status::FirstPath);
                    break;
                }
            }
        }
        if matches!(run.end, LevelEnd::Budget) {
            status = Some(Status::Budget);
            break;
        }
    }
    stats.max_active = stats.max_open;
    stats.status = Some(status.unwrap_or(if best.is_some() {
        Status::Terminated
    } else {
        Status::Failure
    }));
    Ok(Outcome {
        best,
        stats,
        snapshot: None,
    })
}
