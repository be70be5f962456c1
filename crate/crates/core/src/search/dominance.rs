use rustc_hash::FxHashMap;

use super::schedule::CellKey;
use super::vertex::VertexId;

#[derive(Debug, Clone, Copy, PartialEq)]
struct Occupant {
    id: VertexId,
    g: f64,
    /// Most recent vertex offered to the cell.
    last: VertexId,
}

/// Result of offering a vertex to a cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Dominance {
    pub became_dominant: bool,
    pub displaced: Option<VertexId>,
    /// The vertex offered to the cell just before this one, if any. Lets
    /// callers chain the members of a cell.
    pub previous: Option<VertexId>,
}

/// Per-level map from cell key to the dominant vertex of that cell, v̂(v, R).
///
/// A challenger only takes a cell with a strictly smaller cost-to-come;
/// ties keep the incumbent.
#[derive(Debug, Clone, Default)]
pub struct DominanceTable {
    levels: Vec<FxHashMap<CellKey, Occupant>>,
}

impl DominanceTable {
    pub fn new(level_count: usize) -> Self {
        Self {
            levels: (0..level_count).map(|_| FxHashMap::default()).collect(),
        }
    }

    pub fn level_count(&self) -> usize {
        self.levels.len()
    }

    pub fn dominant(&self, level: usize, key: &CellKey) -> Option<VertexId> {
        self.levels[level].get(key).map(|o| o.id)
    }

    pub fn dominant_g(&self, level: usize, key: &CellKey) -> Option<f64> {
        self.levels[level].get(key).map(|o| o.g)
    }

    pub fn try_dominate(&mut self, level: usize, key: CellKey, id: VertexId, g: f64) -> Dominance {
        let cell = &mut self.levels[level];
        let Some(occupant) = cell.get_mut(&key) else {
            cell.insert(key, Occupant { id, g, last: id });
            return Dominance {
                became_dominant: true,
                displaced: None,
                previous: None,
            };
        };
        let previous = Some(std::mem::replace(&mut occupant.last, id));
        if g < occupant.g {
            let displaced = std::mem::replace(&mut occupant.id, id);
            occupant.g = g;
            Dominance {
                became_dominant: true,
                displaced: Some(displaced),
                previous,
            }
        } else {
            Dominance {
                became_dominant: false,
                displaced: None,
                previous,
            }
        }
    }

    /// Most recent vertex offered to the cell.
    pub fn last_offered(&self, level: usize, key: &CellKey) -> Option<VertexId> {
        self.levels[level].get(key).map(|o| o.last)
    }

    /// Overwrites a cell with `winner` (id and g) and its most recently
    /// offered member; clears it when `winner` is `None`.
    pub fn reset_cell(&mut self, level: usize, key: CellKey, winner: Option<(VertexId, f64)>, last: VertexId) {
        match winner {
            Some((id, g)) => {
                self.levels[level].insert(key, Occupant { id, g, last });
            }
            None => {
                self.levels[level].remove(&key);
            }
        }
    }

    pub fn clear(&mut self) {
        for level in &mut self.levels {
            level.clear();
        }
    }

    /// Number of occupied cells at `level`.
    pub fn occupied(&self, level: usize) -> usize {
        self.levels[level].len()
    }

    /// All `(key, vertex)` pairs of a level, sorted by key.
    pub fn entries(&self, level: usize) -> Vec<(CellKey, VertexId)> {
        let mut out: Vec<_> = self.levels[level].iter().map(|(k, o)| (*k, o.id)).collect();
        out.sort_unstable();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn key() -> CellKey {
        CellKey::new([3, 4, 0, 0])
    }

    #[test]
    fn empty_cell_accepts_anything() {
        let mut t = DominanceTable::new(1);
        let d = t.try_dominate(0, key(), VertexId(7), 100.0);
        assert_eq!(
            d,
            Dominance {
                became_dominant: true,
                displaced: None,
                previous: None,
            }
        );
        assert_eq!(t.dominant(0, &key()), Some(VertexId(7)));
    }

    #[test]
    fn strict_improvement_displaces() {
        let mut t = DominanceTable::new(1);
        t.try_dominate(0, key(), VertexId(1), 5.0);
        let d = t.try_dominate(0, key(), VertexId(2), 4.0);
        assert!(d.became_dominant);
        assert_eq!(d.displaced, Some(VertexId(1)));
        assert_eq!(t.dominant_g(0, &key()), Some(4.0));
    }

    #[test]
    fn ties_do_not_displace() {
        let mut t = DominanceTable::new(1);
        t.try_dominate(0, key(), VertexId(1), 4.0);
        let d = t.try_dominate(0, key(), VertexId(2), 4.0);
        assert!(!d.became_dominant);
        assert_eq!(d.displaced, None);
        assert_eq!(d.previous, Some(VertexId(1)));
        assert_eq!(t.dominant(0, &key()), Some(VertexId(1)));
        assert_eq!(t.last_offered(0, &key()), Some(VertexId(2)));
    }

    #[test]
    fn levels_are_independent() {
        let mut t = DominanceTable::new(2);
        t.try_dominate(0, key(), VertexId(1), 4.0);
        assert!(t.try_dominate(1, key(), VertexId(2), 9.0).became_dominant);
        t.reset_cell(0, key(), None, VertexId(1));
        assert_eq!(t.dominant(0, &key()), None);
        assert_eq!(t.occupied(1), 1);
    }
}
