use std::fmt;
use std::str::FromStr;

use ighastar::search::{Hysteresis, Monotone, Restart, Rule};

/// A planner under test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RuleSpec {
    /// IGHA* with hysteresis threshold H̄; `None` never coarsens.
    Igha(Option<u64>),
    /// Restart-based multi-resolution Hybrid A* with branch and bound.
    Iha,
    /// The same restart scheme run through the incremental planner.
    IhaRule,
}

impl RuleSpec {
    /// Rule object for the incremental planner; `None` for [`RuleSpec::Iha`].
    pub fn build(self) -> Option<Box<dyn Rule>> {
        match self {
            RuleSpec::Igha(Some(h)) => Some(Box::new(Hysteresis::new(h))),
            RuleSpec::Igha(None) => Some(Box::new(Monotone)),
            RuleSpec::IhaRule => Some(Box::new(Restart)),
            RuleSpec::Iha => None,
        }
    }
}

impl fmt::Display for RuleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RuleSpec::Igha(Some(h)) => write!(f, "igha-{h}"),
            RuleSpec::Igha(None) => f.write_str("igha-inf"),
            RuleSpec::Iha => f.write_str("iha"),
            RuleSpec::IhaRule => f.write_str("iha-rule"),
        }
    }
}

impl FromStr for RuleSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "iha" => return Ok(RuleSpec::Iha),
            "iha-rule" => return Ok(RuleSpec::IhaRule),
            "dsr" => return Ok(RuleSpec::Igha(Some(0))),
            "dr" | "igha-inf" | "monotone" => return Ok(RuleSpec::Igha(None)),
            _ => {}
        }
        s.trim()
            .strip_prefix("igha-")
            .and_then(|h| h.parse().ok())
            .map(|h| RuleSpec::Igha(Some(h)))
            .ok_or_else(|| {
                format!("unknown rule `{s}` (expected igha-<n>, igha-inf, dsr, dr, iha or iha-rule)")
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        for s in ["igha-0", "igha-1250", "igha-inf", "iha", "iha-rule"] {
            assert_eq!(s.parse::<RuleSpec>().unwrap().to_string(), s);
        }
    }

    #[test]
    fn aliases() {
        assert_eq!("dsr".parse::<RuleSpec>().unwrap(), RuleSpec::Igha(Some(0)));
        assert_eq!("dr".parse::<RuleSpec>().unwrap(), RuleSpec::Igha(None));
        assert!("igha-x".parse::<RuleSpec>().is_err());
        assert!("igha--1".parse::<RuleSpec>().is_err());
    }

    #[test]
    fn built_rules_report_their_id() {
        for s in ["igha-0", "igha-50", "igha-inf", "iha-rule"] {
            let spec: RuleSpec = s.parse().unwrap();
            assert_eq!(spec.build().unwrap().id(), s);
        }
        assert!(RuleSpec::Iha.build().is_none());
    }
}
