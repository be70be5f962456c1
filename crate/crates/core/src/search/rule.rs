//! SHIFT and ACTIVATE rules for the incremental planner.

use super::vertex::VertexId;

/// What a rule sees when the planner consults SHIFT before an expansion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShiftInput {
    /// Current level l.
    pub level: usize,
    /// Finest level N.
    pub finest: usize,
    /// Coarsest level at which the queue head dominates its cell.
    pub head_dom_level: Option<usize>,
    /// False before the first expansion of an iteration; a break requested
    /// then is ignored by the planner.
    pub may_break: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Shift {
    /// Level l' the next iteration projects onto.
    pub next_level: usize,
    /// End the current iteration now.
    pub stop: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Activation {
    Continue,
    /// End the search.
    Finished,
}

/// Operations ACTIVATE may perform on the planner state.
pub trait ActivationOps {
    fn level(&self) -> usize;
    /// Level of the forward search that just ended.
    fn previous_level(&self) -> usize;
    fn finest_level(&self) -> usize;
    /// Ids of the open set Q_v in ascending order.
    fn open_ids(&self) -> Vec<VertexId>;
    /// Whether `id` dominates its cell at the current level.
    fn is_dominant(&self, id: VertexId) -> bool;
    fn set_active(&mut self, id: VertexId, active: bool);
    /// Discards every vertex except the root and reopens it.
    fn restart_from_root(&mut self);
}

pub trait Rule: Send {
    /// Short identifier used in reports.
    fn id(&self) -> String;

    /// Clears per-query state.
    fn reset(&mut self) {}

    fn shift(&mut self, input: &ShiftInput) -> Shift;

    fn activate(&mut self, ops: &mut dyn ActivationOps) -> Activation;
}

/// Activates exactly the dominant open vertices.
pub fn activate_dominant(ops: &mut dyn ActivationOps) {
    for id in ops.open_ids() {
        let dominant = ops.is_dominant(id);
        ops.set_active(id, dominant);
    }
}

fn refine(input: &ShiftInput) -> Shift {
    Shift {
        next_level: (input.level + 1).min(input.finest),
        stop: false,
    }
}

/// Never interrupts a forward search; each iteration refines one level.
#[derive(Debug, Clone, Default)]
pub struct Monotone;

impl Rule for Monotone {
    fn id(&self) -> String {
        "igha-inf".into()
    }

    fn shift(&mut self, input: &ShiftInput) -> Shift {
        refine(input)
    }

    fn activate(&mut self, ops: &mut dyn ActivationOps) -> Activation {
        activate_dominant(ops);
        Activation::Continue
    }
}

/// Drops back to a coarser level once the queue head has been dominant at
/// a coarser level more than `threshold` times. The counter survives
/// iterations and is cleared when it fires.
#[derive(Debug, Clone)]
pub struct Hysteresis {
    threshold: u64,
    counter: u64,
}

impl Hysteresis {
    pub fn new(threshold: u64) -> Self {
        Self {
            threshold,
            counter: 0,
        }
    }

    pub fn threshold(&self) -> u64 {
        self.threshold
    }

    pub fn counter(&self) -> u64 {
        self.counter
    }
}

impl Rule for Hysteresis {
    fn id(&self) -> String {
        format!("igha-{}", self.threshold)
    }

    fn reset(&mut self) {
        self.counter = 0;
    }

    fn shift(&mut self, input: &ShiftInput) -> Shift {
        if let Some(dom) = input.head_dom_level {
            if dom < input.level {
                self.counter += 1;
                if self.counter > self.threshold && input.may_break {
                    self.counter = 0;
                    return Shift {
                        next_level: dom,
                        stop: true,
                    };
                }
            }
        }
        refine(input)
    }

    fn activate(&mut self, ops: &mut dyn ActivationOps) -> Activation {
        activate_dominant(ops);
        Activation::Continue
    }
}

/// Restart-based multi-resolution search expressed as a rule: every
/// iteration starts over from the root one level finer, and the search
/// finishes after the finest level has run.
#[derive(Debug, Clone, Default)]
pub struct Restart;

impl Rule for Restart {
    fn id(&self) -> String {
        "iha-rule".into()
    }

    fn shift(&mut self, input: &ShiftInput) -> Shift {
        refine(input)
    }

    fn activate(&mut self, ops: &mut dyn ActivationOps) -> Activation {
        if ops.previous_level() >= ops.finest_level() {
            return Activation::Finished;
        }
        ops.restart_from_root();
        activate_dominant(ops);
        Activation::Continue
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn input(level: usize, dom: usize) -> ShiftInput {
        ShiftInput {
            level,
            finest: 4,
            head_dom_level: Some(dom),
            may_break: true,
        }
    }

    #[test]
    fn monotone_refines_and_saturates() {
        let mut r = Monotone;
        assert_eq!(r.shift(&input(1, 0)), Shift { next_level: 2, stop: false });
        assert_eq!(r.shift(&input(4, 0)).next_level, 4);
    }

    #[test]
    fn zero_threshold_fires_on_first_coarse_head() {
        let mut r = Hysteresis::new(0);
        assert_eq!(r.shift(&input(2, 2)), Shift { next_level: 3, stop: false });
        assert_eq!(r.shift(&input(2, 1)), Shift { next_level: 1, stop: true });
        assert_eq!(r.counter(), 0);
    }

    #[test]
    fn threshold_two_fires_on_third_coarse_head() {
        let mut r = Hysteresis::new(2);
        let results: Vec<Shift> = (0..3).map(|_| r.shift(&input(3, 1))).collect();
        assert!(!results[0].stop);
        assert!(!results[1].stop);
        assert_eq!(results[2], Shift { next_level: 1, stop: true });
        assert_eq!(r.counter(), 0);
    }

    #[test]
    fn counter_persists_and_suppressed_breaks_keep_counting() {
        let mut r = Hysteresis::new(1);
        r.shift(&input(3, 1));
        let suppressed = r.shift(&ShiftInput {
            may_break: false,
            ..input(3, 1)
        });
        assert!(!suppressed.stop);
        assert_eq!(r.counter(), 2);
        assert!(r.shift(&input(3, 1)).stop);
        r.shift(&input(3, 0));
        r.reset();
        assert_eq!(r.counter(), 0);
    }

    #[test]
    fn ids() {
        assert_eq!(Monotone.id(), "igha-inf");
        assert_eq!(Hysteresis::new(50).id(), "igha-50");
    }
}
