use crate::domain::{Domain, Query};

use super::hybrid::check_query;
use super::outcome::{Emission, Outcome, SearchOptions, SearchStats, Status, Termination, TraceEntry};
use super::rule::{Activation, Rule, ShiftInput};
use super::schedule::ResolutionSchedule;
use super::state::SearchState;
use super::SearchError;

/// Incremental generalized Hybrid A*.
///
/// Alternates forward searches over the active vertices with a Bound /
/// Project / ACTIVATE step that moves between resolution levels while
/// keeping every discovered vertex. Emits each improving path into
/// `stats.emissions`.
pub fn ighastar<D: Domain>(
    domain: &D,
    query: &Query<D::State, D::Goal>,
    schedule: &ResolutionSchedule,
    rule: &mut dyn Rule,
    options: &SearchOptions,
) -> Result<Outcome<D::State>, SearchError> {
    check_query(domain, query, schedule)?;
    rule.reset();
    let goal = &query.goal;
    let finest = schedule.finest();
    let mut state = SearchState::new(schedule.clone());
    if options.snapshot {
        state.record_bounded();
    }
    state.insert_root(domain, &query.start, goal);
    let h_start = domain.heuristic(&query.start, goal);

    let mut stats = SearchStats::default();
    let mut scratch = Vec::new();
    let mut iteration = 0usize;

    let status = 'search: loop {
        if iteration > 0 {
            loop {
                if rule.activate(&mut state) == Activation::Finished {
                    break 'search finished(&state);
                }
                state.rebuild_heap();
                if state.has_expandable_active() {
                    break;
                }
                if !state.has_expandable_open() {
                    break 'search finished(&state);
                }
                if state.has_expandable_dominant() {
                    return Err(SearchError::RuleViolation {
                        rule: rule.id(),
                        open: state.open_count(),
                        iteration,
                    });
                }
                // every expandable vertex is dominated at this level
                let level = state.level();
                if level < finest {
                    state.project(level + 1);
                } else if options.termination == Termination::Schedule {
                    break 'search finished(&state);
                } else {
                    state.project_open_only(level);
                }
            }
        }

        let level = state.level();
        state.set_previous_level(level);
        let mut expanded = 0u64;
        let mut consulted = false;
        let mut status = None;
        loop {
            let Some(head) = state.peek_active() else { break };
            let (f, dom_level, in_goal) = {
                let v = state.vertex(head).expect("peeked vertex is retained");
                (v.f, v.dom_level, domain.in_goal(&v.state, goal))
            };
            if f >= state.incumbent_cost() {
                break;
            }
            if in_goal {
                let path = state.emit_path(head)?;
                if options.check_invariants && h_start > path.cost + 1e-9 * (1.0 + path.cost) {
                    return Err(SearchError::Invariant(format!(
                        "heuristic {h_start} at start exceeds path cost {}",
                        path.cost
                    )));
                }
                stats.emissions.push(Emission {
                    cost: path.cost,
                    expansions: stats.expansions,
                    iteration,
                    level,
                });
                state.set_incumbent(path);
                if options.first_path_only {
                    status = Some(Status::FirstPath);
                }
                break;
            }
            if stats.expansions >= options.budget {
                status = Some(Status::Budget);
                break;
            }
            let shift = rule.shift(&ShiftInput {
                level,
                finest,
                head_dom_level: dom_level,
                may_break: expanded > 0,
            });
            consulted = true;
            state.set_next_level(shift.next_level);
            if shift.stop && expanded > 0 {
                break;
            }
            state.pop_active();
            if options.check_invariants && !state.dominates_at(head, level) {
                return Err(SearchError::Invariant(format!(
                    "popped {head} does not dominate its cell at level {level}"
                )));
            }
            if options.trace {
                let v = state.vertex(head).expect("popped vertex is retained");
                stats.trace.push(TraceEntry {
                    iteration,
                    level,
                    id: head.0,
                    coords: v.coords,
                });
            }
            state.expand(head, domain, goal, &mut scratch, options.check_invariants)?;
            stats.expansions += 1;
            expanded += 1;
            stats.max_active = stats.max_active.max(state.heap_len());
            stats.max_open = stats.max_open.max(state.open_len());
        }

        stats.iterations += 1;
        stats.iteration_expansions.push(expanded);
        stats.iteration_levels.push(level);
        iteration += 1;
        if let Some(status) = status {
            break 'search status;
        }
        if !consulted {
            state.set_next_level(level + 1);
        }
        let next = state.next_level();
        stats.vertices_bounded += state.bound()? as u64;
        state.project(next);
    };

    stats.status = Some(status);
    stats.vertices_created = state.created_count() as u64;
    let snapshot = options.snapshot.then(|| state.snapshot());
    Ok(Outcome {
        best: state.take_incumbent(),
        stats,
        snapshot,
    })
}

fn finished<S: Clone>(state: &SearchState<S>) -> Status {
    if state.incumbent().is_some() {
        Status::Terminated
    } else {
        Status::Failure
    }
}
