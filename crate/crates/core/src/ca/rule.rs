use serde::{Deserialize, Serialize};
use std::fmt;

use super::{CaError, FuzzyState};

/// Which of the three neighbourhood cells a rule reads.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Neighborhood(u8);

impl Neighborhood {
    pub const NONE: Neighborhood = Neighborhood(0);
    pub const RIGHT: Neighborhood = Neighborhood(0b001);
    pub const CENTER: Neighborhood = Neighborhood(0b010);
    pub const LEFT: Neighborhood = Neighborhood(0b100);
    pub const ALL: Neighborhood = Neighborhood(0b111);

    pub fn from_flags(left: bool, center: bool, right: bool) -> Self {
        Neighborhood((left as u8) << 2 | (center as u8) << 1 | right as u8)
    }

    pub fn left(self) -> bool {
        self.0 & 0b100 != 0
    }

    pub fn center(self) -> bool {
        self.0 & 0b010 != 0
    }

    pub fn right(self) -> bool {
        self.0 & 0b001 != 0
    }

    pub fn bits(self) -> u8 {
        self.0
    }

    pub fn union(self, other: Neighborhood) -> Neighborhood {
        Neighborhood(self.0 | other.0)
    }

    /// Wolfram number of the Boolean OR over the selected inputs.
    fn or_code(self) -> u8 {
        let mut code = 0u8;
        if self.left() {
            code |= 0b1111_0000;
        }
        if self.center() {
            code |= 0b1100_1100;
        }
        if self.right() {
            code |= 0b1010_1010;
        }
        code
    }
}

/// One of the 16 OR/NOR rules of the 3-neighbourhood fuzzy CA.
///
/// Non-complemented codes `0, 170, 204, 238, 240, 250, 252, 254` compute the
/// bounded sum of the selected neighbours. Their complements
/// `255, 85, 51, 17, 15, 5, 3, 1` return `1 - sum`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct RuleId {
    deps: Neighborhood,
    complemented: bool,
}

pub type RuleVector = Vec<RuleId>;

impl RuleId {
    pub const ZERO: RuleId = RuleId::new(Neighborhood::NONE, false);
    pub const IDENTITY: RuleId = RuleId::new(Neighborhood::CENTER, false);

    /// All supported rules, non-complemented first, in ascending dependency order.
    pub const ALL: [RuleId; 16] = {
        let mut out = [RuleId::ZERO; 16];
        let mut i = 0;
        while i < 8 {
            out[i] = RuleId::new(Neighborhood(i as u8), false);
            out[i + 8] = RuleId::new(Neighborhood(i as u8), true);
            i += 1;
        }
        out
    };

    pub const fn new(deps: Neighborhood, complemented: bool) -> Self {
        RuleId { deps, complemented }
    }

    pub fn from_code(code: u32) -> Result<Self, CaError> {
        RuleId::ALL
            .iter()
            .copied()
            .find(|r| r.code() as u32 == code)
            .ok_or(CaError::UnsupportedRule(code))
    }

    pub fn code(self) -> u8 {
        let base = self.deps.or_code();
        if self.complemented {
            !base
        } else {
            base
        }
    }

    pub fn dependencies(self) -> Neighborhood {
        self.deps
    }

    pub fn is_complemented(self) -> bool {
        self.complemented
    }

    /// The paired rule from the other column of the rule table (e.g. 238 <-> 17).
    pub fn complement(self) -> Self {
        RuleId::new(self.deps, !self.complemented)
    }

    pub fn apply(self, left: FuzzyState, center: FuzzyState, right: FuzzyState) -> FuzzyState {
        let mut sum = 0.0;
        if self.deps.left() {
            sum += left.value();
        }
        if self.deps.center() {
            sum += center.value();
        }
        if self.deps.right() {
            sum += right.value();
        }
        let g = FuzzyState::saturating(sum);
        if self.complemented {
            g.complement()
        } else {
            g
        }
    }
}

/// Evaluate one cell update under `rule`.
pub fn apply_rule(rule: RuleId, left: FuzzyState, center: FuzzyState, right: FuzzyState) -> FuzzyState {
    rule.apply(left, center, right)
}

impl TryFrom<u32> for RuleId {
    type Error = CaError;
    fn try_from(code: u32) -> Result<Self, CaError> {
        RuleId::from_code(code)
    }
}

impl From<RuleId> for u32 {
    fn from(r: RuleId) -> u32 {
        r.code() as u32
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.code())
    }
}
