use std::collections::BinaryHeap;

use rustc_hash::FxHashMap;

use crate::domain::{Coords, Domain, Edge};

use super::dominance::DominanceTable;
use super::outcome::{Path, Snapshot, VertexClass};
use super::rule::ActivationOps;
use super::schedule::{CellKey, ResolutionSchedule};
use super::vertex::{lowest_level, Frontier, Vertex, VertexId};
use super::SearchError;

/// Persistent state of the incremental planner: the vertex arena, the open
/// set Q_v split into an active priority queue and an inactive remainder,
/// the per-level dominance tables and the incumbent path.
///
/// Expanded vertices stay in the arena (they are ancestors of open vertices
/// and still occupy their cells) but leave Q_v.
#[derive(Debug)]
pub struct SearchState<S> {
    schedule: ResolutionSchedule,
    arena: Vec<Option<Vertex<S>>>,
    /// Q_v in insertion order; may hold ids that were since expanded or removed.
    open: Vec<VertexId>,
    heap: BinaryHeap<Frontier>,
    tables: DominanceTable,
    level: usize,
    next_level: usize,
    previous_level: usize,
    incumbent: Option<Path<S>>,
    bounded: Option<Vec<Coords>>,
    live: usize,
    /// Per vertex and level, the member of the same cell offered just
    /// before it, or [`NO_LINK`]. Chains may pass through removed vertices.
    cell_next: Vec<u32>,
    /// Incumbent cost and arena length at the last Bound; vertices below
    /// that length already satisfy `f <= w` for that cost.
    last_bound: (f64, usize),
    /// Set by [`SearchState::project_open_only`] until the next projection:
    /// per arena index, whether the vertex wins its cell at the current
    /// level among the open vertices with `f < w(π̂)`.
    open_winners: Option<Vec<bool>>,
}

const NO_LINK: u32 = u32::MAX;

impl<S: Clone> SearchState<S> {
    pub fn new(schedule: ResolutionSchedule) -> Self {
        let levels = schedule.len();
        Self {
            schedule,
            arena: Vec::new(),
            open: Vec::new(),
            heap: BinaryHeap::new(),
            tables: DominanceTable::new(levels),
            level: 0,
            next_level: 0,
            previous_level: 0,
            incumbent: None,
            bounded: None,
            live: 0,
            cell_next: Vec::new(),
            last_bound: (f64::NAN, 0),
            open_winners: None,
        }
    }

    /// Keep the coordinates of vertices removed by [`SearchState::bound`].
    pub fn record_bounded(&mut self) {
        self.bounded.get_or_insert_with(Vec::new);
    }

    pub fn schedule(&self) -> &ResolutionSchedule {
        &self.schedule
    }

    pub fn tables(&self) -> &DominanceTable {
        &self.tables
    }

    /// Current level l.
    pub fn level(&self) -> usize {
        self.level
    }

    /// Level l' the next projection moves to.
    pub fn next_level(&self) -> usize {
        self.next_level
    }

    pub fn set_next_level(&mut self, level: usize) {
        self.next_level = level.min(self.schedule.finest());
    }

    pub(crate) fn set_previous_level(&mut self, level: usize) {
        self.previous_level = level;
    }

    pub fn vertex(&self, id: VertexId) -> Option<&Vertex<S>> {
        self.arena.get(id.index()).and_then(Option::as_ref)
    }

    fn vertex_mut(&mut self, id: VertexId) -> Option<&mut Vertex<S>> {
        self.arena.get_mut(id.index()).and_then(Option::as_mut)
    }

    /// Retained vertices in ascending id order.
    pub fn vertices(&self) -> impl Iterator<Item = &Vertex<S>> {
        self.arena.iter().flatten()
    }

    pub fn live_count(&self) -> usize {
        self.live
    }

    pub fn created_count(&self) -> usize {
        self.arena.len()
    }

    pub fn incumbent(&self) -> Option<&Path<S>> {
        self.incumbent.as_ref()
    }

    /// w(π̂), infinite without an incumbent.
    pub fn incumbent_cost(&self) -> f64 {
        self.incumbent.as_ref().map_or(f64::INFINITY, |p| p.cost)
    }

    pub fn set_incumbent(&mut self, path: Path<S>) {
        self.incumbent = Some(path);
    }

    pub fn take_incumbent(&mut self) -> Option<Path<S>> {
        self.incumbent.take()
    }

    fn is_open(&self, id: VertexId) -> bool {
        self.vertex(id).is_some_and(|v| !v.expanded)
    }

    /// Ids of Q_v in ascending order.
    pub fn open_ids(&self) -> Vec<VertexId> {
        self.open.iter().copied().filter(|&id| self.is_open(id)).collect()
    }

    /// Active queue entries, stale ones included.
    pub(crate) fn heap_len(&self) -> usize {
        self.heap.len()
    }

    /// Q_v entries, possibly including vertices expanded since the last Bound.
    pub(crate) fn open_len(&self) -> usize {
        self.open.len()
    }

    pub fn open_count(&self) -> usize {
        self.open.iter().filter(|&&id| self.is_open(id)).count()
    }

    pub fn active_count(&self) -> usize {
        self.open
            .iter()
            .filter(|&&id| self.vertex(id).is_some_and(|v| !v.expanded && v.active))
            .count()
    }

    pub fn inactive_count(&self) -> usize {
        self.open_count() - self.active_count()
    }

    pub fn key_of(&self, coords: &Coords, level: usize) -> CellKey {
        self.schedule.discretize(coords, level)
    }

    /// Whether `id` is v̂ of its own cell at `level`.
    pub fn dominates_at(&self, id: VertexId, level: usize) -> bool {
        match self.vertex(id) {
            Some(v) => match &self.open_winners {
                Some(w) if level == self.level && id.index() < w.len() => w[id.index()],
                _ => level < 64 && v.dominates & (1 << level) != 0,
            },
            None => false,
        }
    }

    /// Adds a vertex, offers it to every level's table (coarsest first) and
    /// activates it iff it wins its cell at the current level. A vertex it
    /// displaces at the current level is deactivated.
    pub fn insert(
        &mut self,
        state: S,
        coords: Coords,
        g: f64,
        h: f64,
        parent: Option<VertexId>,
        primitive: Option<usize>,
    ) -> VertexId {
        let id = VertexId(self.arena.len() as u32);
        let mut dominates = 0u64;
        for k in 0..self.schedule.len() {
            let key = self.schedule.discretize(&coords, k);
            let outcome = self.tables.try_dominate(k, key, id, g);
            self.cell_next.push(outcome.previous.map_or(NO_LINK, |p| p.0));
            if !outcome.became_dominant {
                continue;
            }
            dominates |= 1 << k;
            if let Some(displaced) = outcome.displaced {
                self.on_displaced(displaced, k);
            }
        }
        let active = dominates & (1 << self.level) != 0;
        self.arena.push(Some(Vertex {
            id,
            state,
            coords,
            g,
            f: g + h,
            parent,
            primitive,
            active,
            expanded: false,
            dom_level: lowest_level(dominates),
            dominates,
        }));
        self.live += 1;
        self.open.push(id);
        if active {
            self.heap.push(Frontier { f: g + h, id });
        }
        id
    }

    fn on_displaced(&mut self, id: VertexId, level: usize) {
        let current = self.level;
        if let Some(v) = self.vertex_mut(id) {
            v.dominates &= !(1 << level);
            v.dom_level = lowest_level(v.dominates);
            if level == current {
                v.active = false;
            }
        }
    }

    /// Inserts the root of the search tree.
    pub fn insert_root<D: Domain<State = S>>(&mut self, domain: &D, start: &S, goal: &D::Goal) -> VertexId {
        let h = domain.heuristic(start, goal);
        self.insert(start.clone(), domain.coords(start), 0.0, h, None, None)
    }

    /// Head of the active queue, discarding stale entries.
    pub fn peek_active(&mut self) -> Option<VertexId> {
        while let Some(top) = self.heap.peek() {
            let id = top.id;
            match self.vertex(id) {
                Some(v) if v.active && !v.expanded => return Some(id),
                _ => {
                    self.heap.pop();
                }
            }
        }
        None
    }

    pub fn pop_active(&mut self) -> Option<VertexId> {
        let id = self.peek_active()?;
        self.heap.pop();
        Some(id)
    }

    /// Expands `u`: generates its children, inserts every valid one into
    /// the arena and Q_v and returns their ids in primitive order.
    pub fn expand<D: Domain<State = S>>(
        &mut self,
        u: VertexId,
        domain: &D,
        goal: &D::Goal,
        scratch: &mut Vec<(usize, Edge<S>)>,
        check_invariants: bool,
    ) -> Result<Vec<VertexId>, SearchError> {
        let (state, g, h_u) = {
            let v = self
                .vertex_mut(u)
                .ok_or_else(|| SearchError::Invariant(format!("expanding missing vertex {u}")))?;
            v.expanded = true;
            v.active = false;
            (v.state.clone(), v.g, v.f - v.g)
        };
        domain.successors(&state, scratch)?;
        let epsilon = domain.min_edge_cost();
        let mut inserted = Vec::with_capacity(scratch.len());
        for (primitive, edge) in scratch.drain(..) {
            if !(edge.cost.is_finite() && edge.cost >= epsilon) {
                return Err(SearchError::Invariant(format!(
                    "edge cost {} of primitive {primitive} below floor {epsilon}",
                    edge.cost
                )));
            }
            let h = domain.heuristic(&edge.state, goal);
            if check_invariants && h_u > edge.cost + h + 1e-9 * (1.0 + h_u.abs()) {
                return Err(SearchError::Invariant(format!(
                    "inconsistent heuristic: h(u)={h_u} > w={} + h(v)={h}",
                    edge.cost
                )));
            }
            let coords = domain.coords(&edge.state);
            inserted.push(self.insert(edge.state, coords, g + edge.cost, h, Some(u), Some(primitive)));
        }
        Ok(inserted)
    }

    /// Removes every retained vertex with `f > w(π̂)` from the arena, Q_v
    /// and the dominance tables. Returns the number removed.
    ///
    /// With a consistent heuristic an ancestor never has a larger `f` than
    /// its descendants, so no retained vertex loses its parent. Descendants
    /// of a removed vertex whose `f` differs only by rounding are removed
    /// with it; a genuine inversion is reported as an invariant violation.
    pub fn bound(&mut self) -> Result<usize, SearchError> {
        let w = self.incumbent_cost();
        if !w.is_finite() {
            return Ok(0);
        }
        let tolerance = 1e-9 * (1.0 + w.abs());
        let start = if self.last_bound.0 == w { self.last_bound.1 } else { 0 };
        self.last_bound = (w, self.arena.len());
        let mut removed = vec![false; self.arena.len()];
        let mut lost = Vec::new();
        let mut count = 0;
        for index in start..self.arena.len() {
            let Some(v) = &self.arena[index] else { continue };
            let orphaned = v.parent.is_some_and(|p| removed[p.index()]);
            let drop = if v.f > w {
                true
            } else if orphaned {
                if v.f + tolerance < w {
                    return Err(SearchError::Invariant(format!(
                        "bound removed an ancestor of {} (f={} < w={w})",
                        v.id, v.f
                    )));
                }
                true
            } else {
                false
            };
            if drop {
                let mut mask = v.dominates;
                while mask != 0 {
                    let k = mask.trailing_zeros() as usize;
                    lost.push((k, self.schedule.discretize(&v.coords, k)));
                    mask &= mask - 1;
                }
                if let Some(bounded) = &mut self.bounded {
                    bounded.push(v.coords);
                }
                self.arena[index] = None;
                removed[index] = true;
                count += 1;
            }
        }
        if count > 0 {
            self.live -= count;
            for (k, key) in lost {
                self.repair_cell(k, key);
            }
            self.open.retain(|id| !removed[id.index()]);
        }
        self.open.retain(|&id| {
            self.arena[id.index()]
                .as_ref()
                .is_some_and(|v| !v.expanded)
        });
        Ok(count)
    }

    /// Hands a cell whose dominant vertex was removed to the best retained
    /// member (smaller g, then smaller id), dropping removed members from
    /// its chain.
    fn repair_cell(&mut self, level: usize, key: CellKey) {
        let levels = self.schedule.len();
        let link = |id: VertexId| id.index() * levels + level;
        let mut cursor = self.tables.last_offered(level, &key);
        let mut best: Option<(f64, VertexId)> = None;
        let mut head = None;
        let mut tail: Option<VertexId> = None;
        while let Some(id) = cursor {
            let next = self.cell_next[link(id)];
            cursor = (next != NO_LINK).then_some(VertexId(next));
            let Some(v) = &self.arena[id.index()] else { continue };
            if best.map_or(true, |b| (v.g, v.id) < b) {
                best = Some((v.g, v.id));
            }
            match tail {
                Some(t) => self.cell_next[link(t)] = id.0,
                None => head = Some(id),
            }
            tail = Some(id);
        }
        if let Some(t) = tail {
            self.cell_next[link(t)] = NO_LINK;
        }
        match (best, head) {
            (Some((g, id)), Some(head)) => {
                self.tables.reset_cell(level, key, Some((id, g)), head);
                if let Some(v) = self.vertex_mut(id) {
                    v.dominates |= 1 << level;
                    v.dom_level = lowest_level(v.dominates);
                }
            }
            _ => self.tables.reset_cell(level, key, None, VertexId(0)),
        }
    }

    /// Moves to `level`. Every level's dominance table always holds the
    /// winner of each cell among all retained vertices (ties keep the
    /// smaller g, then the smaller id), and each vertex's dom_level matches.
    pub fn project(&mut self, level: usize) {
        assert!(level <= self.schedule.finest(), "level {level} outside schedule");
        self.level = level;
        self.next_level = level;
        self.open_winners = None;
    }

    /// Moves to `level` after rebuilding every table from scratch.
    pub fn reproject(&mut self, level: usize) {
        self.project(level);
        self.tables.clear();
        let levels = self.schedule.len();
        self.cell_next.clear();
        self.cell_next.resize(self.arena.len() * levels, NO_LINK);
        for v in self.arena.iter().flatten() {
            for k in 0..levels {
                let key = self.schedule.discretize(&v.coords, k);
                let outcome = self.tables.try_dominate(k, key, v.id, v.g);
                self.cell_next[v.id.index() * levels + k] = outcome.previous.map_or(NO_LINK, |p| p.0);
            }
        }
        for index in 0..self.arena.len() {
            let Some(v) = &self.arena[index] else { continue };
            let (coords, id) = (v.coords, v.id);
            let dominates = (0..levels)
                .filter(|&k| self.tables.dominant(k, &self.schedule.discretize(&coords, k)) == Some(id))
                .fold(0u64, |m, k| m | 1 << k);
            if let Some(v) = &mut self.arena[index] {
                v.dominates = dominates;
                v.dom_level = lowest_level(dominates);
            }
        }
    }

    /// Moves to `level` where, until the next projection, a vertex counts
    /// as dominant iff it wins its cell among the open vertices with
    /// `f < w(π̂)`. The tables keep covering every retained vertex, so
    /// vertices inserted meanwhile compete as usual.
    pub fn project_open_only(&mut self, level: usize) {
        assert!(level <= self.schedule.finest(), "level {level} outside schedule");
        self.level = level;
        self.next_level = level;
        let w = self.incumbent_cost();
        let mut cells: FxHashMap<CellKey, (f64, VertexId)> = FxHashMap::default();
        for &id in &self.open {
            let Some(v) = self.vertex(id) else { continue };
            if v.expanded || v.f >= w {
                continue;
            }
            let key = self.schedule.discretize(&v.coords, level);
            match cells.get_mut(&key) {
                Some(best) if (v.g, v.id) < *best => *best = (v.g, v.id),
                Some(_) => {}
                None => {
                    cells.insert(key, (v.g, v.id));
                }
            }
        }
        let mut winners = vec![false; self.arena.len()];
        for (_, id) in cells.values() {
            winners[id.index()] = true;
        }
        self.open_winners = Some(winners);
    }

    /// Rebuilds the active queue from the active flags of Q_v.
    pub fn rebuild_heap(&mut self) {
        self.open.retain(|&id| {
            self.arena[id.index()]
                .as_ref()
                .is_some_and(|v| !v.expanded)
        });
        let heap: Vec<Frontier> = self
            .open
            .iter()
            .filter_map(|&id| self.vertex(id))
            .filter(|v| v.active)
            .map(|v| Frontier { f: v.f, id: v.id })
            .collect();
        self.heap = BinaryHeap::from(heap);
    }

    /// Whether the active queue holds a vertex with `f < w(π̂)`.
    pub fn has_expandable_active(&mut self) -> bool {
        let w = self.incumbent_cost();
        match self.peek_active() {
            Some(id) => self.vertex(id).is_some_and(|v| v.f < w),
            None => false,
        }
    }

    /// Whether Q_v holds any vertex with `f < w(π̂)`.
    pub fn has_expandable_open(&self) -> bool {
        let w = self.incumbent_cost();
        self.open
            .iter()
            .filter_map(|&id| self.vertex(id))
            .any(|v| !v.expanded && v.f < w)
    }

    /// Whether some open vertex with `f < w(π̂)` dominates its cell at the
    /// current level.
    pub fn has_expandable_dominant(&self) -> bool {
        let w = self.incumbent_cost();
        self.open
            .iter()
            .filter_map(|&id| self.vertex(id))
            .any(|v| !v.expanded && v.f < w && self.dominates_at(v.id, self.level))
    }

    /// Root-to-`goal` path through the parent chain.
    pub fn emit_path(&self, goal: VertexId) -> Result<Path<S>, SearchError> {
        let mut states = Vec::new();
        let mut primitives = Vec::new();
        let mut cursor = Some(goal);
        let cost = self
            .vertex(goal)
            .ok_or_else(|| SearchError::Invariant(format!("goal vertex {goal} missing")))?
            .g;
        while let Some(id) = cursor {
            let v = self.vertex(id).ok_or_else(|| {
                SearchError::Invariant(format!("broken parent chain at {id} while emitting {goal}"))
            })?;
            states.push(v.state.clone());
            if let Some(p) = v.primitive {
                primitives.push(p);
            }
            cursor = v.parent;
        }
        states.reverse();
        primitives.reverse();
        Ok(Path {
            states,
            primitives,
            cost,
        })
    }

    pub fn snapshot(&self) -> Snapshot {
        let mut vertices: Vec<(VertexClass, Coords)> = self
            .vertices()
            .map(|v| {
                let class = if v.expanded {
                    VertexClass::Expanded
                } else if v.active {
                    VertexClass::Active
                } else {
                    VertexClass::Inactive
                };
                (class, v.coords)
            })
            .collect();
        if let Some(bounded) = &self.bounded {
            vertices.extend(bounded.iter().map(|c| (VertexClass::Bounded, *c)));
        }
        Snapshot { vertices }
    }
}

impl<S: Clone> ActivationOps for SearchState<S> {
    fn level(&self) -> usize {
        self.level
    }

    fn previous_level(&self) -> usize {
        self.previous_level
    }

    fn finest_level(&self) -> usize {
        self.schedule.finest()
    }

    fn open_ids(&self) -> Vec<VertexId> {
        SearchState::open_ids(self)
    }

    fn is_dominant(&self, id: VertexId) -> bool {
        self.dominates_at(id, self.level)
    }

    fn set_active(&mut self, id: VertexId, active: bool) {
        if let Some(v) = self.vertex_mut(id) {
            if !v.expanded {
                v.active = active;
            }
        }
    }

    fn restart_from_root(&mut self) {
        self.last_bound = (f64::NAN, 0);
        let root = self.arena.first().cloned().flatten();
        self.arena.iter_mut().for_each(|slot| *slot = None);
        self.open.clear();
        self.heap.clear();
        self.live = 0;
        if let Some(mut root) = root {
            root.expanded = false;
            root.active = true;
            let id = root.id;
            self.arena[id.index()] = Some(root);
            self.open.push(id);
            self.live = 1;
        }
        let level = self.level;
        self.reproject(level);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::DimKind;

    fn schedule() -> ResolutionSchedule {
        ResolutionSchedule::new(
            &[DimKind::Linear, DimKind::Linear],
            &[vec![2.0, 2.0], vec![1.0, 1.0]],
        )
        .unwrap()
    }

    fn c(x: f64, y: f64) -> Coords {
        [x, y, 0.0, 0.0]
    }

    fn add(s: &mut SearchState<()>, x: f64, y: f64, g: f64, h: f64) -> VertexId {
        s.insert((), c(x, y), g, h, None, None)
    }

    fn with_incumbent(s: &mut SearchState<()>, cost: f64) {
        s.set_incumbent(Path {
            states: vec![()],
            primitives: vec![],
            cost,
        });
    }

    #[test]
    fn first_occupant_dominates_every_level() {
        let mut s = SearchState::new(schedule());
        let id = add(&mut s, 0.5, 0.5, 0.0, 1.0);
        let v = s.vertex(id).unwrap();
        assert!(v.active);
        assert_eq!(v.dom_level, Some(0));
    }

    #[test]
    fn lower_g_child_takes_the_cell() {
        let mut s = SearchState::new(schedule());
        let a = add(&mut s, 0.5, 0.5, 3.1, 0.0);
        let b = add(&mut s, 0.6, 0.6, 2.9, 0.0);
        assert!(!s.vertex(a).unwrap().active);
        assert!(s.vertex(b).unwrap().active);
        assert_eq!(s.vertex(a).unwrap().dom_level, None);
        assert_eq!(s.active_count(), 1);
        assert_eq!(s.inactive_count(), 1);
    }

    #[test]
    fn displaced_vertex_keeps_finer_dominance() {
        let mut s = SearchState::new(schedule());
        let a = add(&mut s, 0.5, 0.5, 3.0, 0.0);
        // same coarse cell, different fine cell
        let b = add(&mut s, 1.5, 0.5, 2.0, 0.0);
        assert_eq!(s.vertex(a).unwrap().dom_level, Some(1));
        assert_eq!(s.vertex(b).unwrap().dom_level, Some(0));
    }

    #[test]
    fn bound_without_incumbent_is_a_noop() {
        let mut s = SearchState::new(schedule());
        add(&mut s, 0.5, 0.5, 0.0, 9.0);
        assert_eq!(s.bound().unwrap(), 0);
    }

    #[test]
    fn bound_removes_strictly_worse_vertices() {
        let mut s = SearchState::new(schedule());
        add(&mut s, 0.5, 0.5, 0.0, 3.0);
        add(&mut s, 2.5, 0.5, 0.0, 5.0);
        let far = add(&mut s, 4.5, 0.5, 0.0, 9.0);
        with_incumbent(&mut s, 6.0);
        assert_eq!(s.bound().unwrap(), 1);
        assert!(s.vertex(far).is_none());
        assert_eq!(s.tables().occupied(0), 2);
        assert_eq!(s.open_count(), 2);
    }

    #[test]
    fn bound_keeps_ties() {
        let mut s = SearchState::new(schedule());
        add(&mut s, 0.5, 0.5, 0.0, 6.0);
        add(&mut s, 2.5, 0.5, 0.0, 6.0);
        with_incumbent(&mut s, 6.0);
        assert_eq!(s.bound().unwrap(), 0);
        assert!(!s.has_expandable_active());
        assert!(!s.has_expandable_open());
    }

    #[test]
    fn project_splits_cells_by_resolution() {
        let mut s = SearchState::new(schedule());
        let a = add(&mut s, 0.5, 0.5, 2.0, 0.0);
        let b = add(&mut s, 1.5, 0.5, 3.0, 0.0);
        s.project(0);
        assert!(s.dominates_at(a, 0));
        assert!(!s.dominates_at(b, 0));
        assert!(s.dominates_at(a, 1));
        assert!(s.dominates_at(b, 1));
        assert_eq!(s.vertex(b).unwrap().dom_level, Some(1));
    }

    #[test]
    fn project_is_idempotent() {
        let mut s = SearchState::new(schedule());
        for i in 0..20 {
            let x = (i as f64 * 0.37) % 4.0;
            add(&mut s, x, 0.3 * i as f64 % 3.0, (i % 7) as f64, 0.0);
        }
        s.project(1);
        let first: Vec<_> = (0..2).map(|k| s.tables().entries(k)).collect();
        let doms: Vec<_> = s.vertices().map(|v| v.dom_level).collect();
        s.project(1);
        let second: Vec<_> = (0..2).map(|k| s.tables().entries(k)).collect();
        assert_eq!(first, second);
        assert_eq!(doms, s.vertices().map(|v| v.dom_level).collect::<Vec<_>>());
    }

    fn tables_and_doms(s: &SearchState<()>) -> (Vec<Vec<(CellKey, VertexId)>>, Vec<(Option<usize>, u64)>) {
        let t: Vec<_> = (0..2).map(|k| s.tables().entries(k)).collect();
        (t, s.vertices().map(|v| (v.dom_level, v.dominates)).collect())
    }

    proptest::proptest! {
        #[test]
        fn cached_projection_matches_a_rebuild(
            ops in proptest::collection::vec((0.0..4.0f64, 0.0..4.0f64, 0.0..8.0f64, proptest::bool::ANY), 1..60)
        ) {
            let mut s = SearchState::new(schedule());
            for (k, &(x, y, g, cut)) in ops.iter().enumerate() {
                add(&mut s, x, y, g, 0.0);
                if cut && k % 5 == 4 {
                    with_incumbent(&mut s, 8.0 - g / 2.0);
                    s.bound().unwrap();
                }
                s.project(k % 2);
                let cached = tables_and_doms(&s);
                let mut fresh = SearchState::new(schedule());
                std::mem::swap(&mut fresh.arena, &mut s.arena);
                fresh.reproject(k % 2);
                let rebuilt = tables_and_doms(&fresh);
                std::mem::swap(&mut fresh.arena, &mut s.arena);
                proptest::prop_assert_eq!(cached, rebuilt);
            }
        }
    }

    #[test]
    fn project_breaks_g_ties_by_id() {
        let mut s = SearchState::new(schedule());
        let a = add(&mut s, 0.5, 0.5, 1.0, 0.0);
        let b = add(&mut s, 0.7, 0.5, 1.0, 0.0);
        s.project(1);
        assert!(s.dominates_at(a, 1));
        assert!(!s.dominates_at(b, 1));
    }

    #[test]
    fn emit_path_of_root_is_a_single_state() {
        let mut s = SearchState::new(schedule());
        let root = add(&mut s, 0.0, 0.0, 0.0, 0.0);
        let p = s.emit_path(root).unwrap();
        assert_eq!(p.states.len(), 1);
        assert_eq!(p.cost, 0.0);
    }

    #[test]
    fn emit_path_sums_along_the_chain() {
        let mut s = SearchState::new(schedule());
        let root = s.insert((), c(0.0, 0.0), 0.0, 0.0, None, None);
        let a = s.insert((), c(1.0, 0.0), 1.0, 0.0, Some(root), Some(0));
        let b = s.insert((), c(3.0, 0.0), 3.0, 0.0, Some(a), Some(1));
        let g = s.insert((), c(6.0, 0.0), 6.0, 0.0, Some(b), Some(2));
        let p = s.emit_path(g).unwrap();
        assert_eq!(p.cost, 6.0);
        assert_eq!(p.primitives, vec![0, 1, 2]);
        assert_eq!(p.states.len(), 4);
    }

    #[test]
    fn emit_path_reports_broken_chain() {
        let mut s = SearchState::new(schedule());
        let root = s.insert((), c(0.0, 0.0), 0.0, 0.0, None, None);
        let a = s.insert((), c(1.0, 0.0), 1.0, 0.0, Some(root), Some(0));
        s.arena[root.index()] = None;
        assert!(matches!(s.emit_path(a), Err(SearchError::Invariant(_))));
    }
}
