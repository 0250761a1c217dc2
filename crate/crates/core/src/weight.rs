//! Fixed-point percentage weights.
//!
//! A [`Weight`] counts centipercent: one unit is 0.01%, so 100% is `10_000`.
//! Every weight the model uses (33.3%, 16.65%, 49.95%, 99.9%) is an exact
//! integer in this unit and all threshold comparisons are integer comparisons.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Centipercent per whole percent.
pub const CENTI: u32 = 100;

/// Integer percentage in units of 0.01%.
///
/// Range `0..=10_000` is not enforced on construction; taxonomy validation
/// reports out-of-range weights so that invalid documents can be inspected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Weight(u32);

impl Weight {
    pub const ZERO: Weight = Weight(0);
    pub const MAX: Weight = Weight(10_000);

    pub const fn from_centipercent(value: u32) -> Self {
        Weight(value)
    }

    pub const fn centipercent(self) -> u32 {
        self.0
    }

    pub const fn is_in_range(self) -> bool {
        self.0 <= Self::MAX.0
    }

    /// Half of this weight, exact when the value is even.
    pub const fn half(self) -> Weight {
        Weight(self.0 / 2)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeightParseError {
    #[error("invalid percentage {0:?}: expected a non-negative decimal such as \"49.95\"")]
    Malformed(String),
    #[error("percentage {0:?} has more than two decimal places")]
    Precision(String),
    #[error("percentage {0:?} is too large")]
    Overflow(String),
}

impl FromStr for Weight {
    type Err = WeightParseError;

    /// Parses a decimal percent string (`"70"`, `"33.3"`, `"49.95"`).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let malformed = || WeightParseError::Malformed(s.to_owned());
        let (whole, frac) = match s.split_once('.') {
            Some((w, f)) => (w, f),
            None => (s, ""),
        };
        if whole.is_empty() || !whole.bytes().all(|b| b.is_ascii_digit()) {
            return Err(malformed());
        }
        if s.contains('.') && frac.is_empty() {
            return Err(malformed());
        }
        if !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(malformed());
        }
        if frac.len() > 2 {
            return Err(WeightParseError::Precision(s.to_owned()));
        }
        let overflow = || WeightParseError::Overflow(s.to_owned());
        let whole: u32 = whole.parse().map_err(|_| overflow())?;
        let mut cents: u32 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| malformed())? };
        if frac.len() == 1 {
            cents *= 10;
        }
        whole
            .checked_mul(CENTI)
            .and_then(|w| w.checked_add(cents))
            .map(Weight)
            .ok_or_else(overflow)
    }
}

impl fmt::Display for Weight {
    /// Always two fraction digits with `.` as separator: `70.00`, `49.95`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{:02}", self.0 / CENTI, self.0 % CENTI)
    }
}

/// Formats an integer centipercent amount as a two-decimal percent string.
pub fn format_centipercent(value: u64) -> String {
    format!("{}.{:02}", value / CENTI as u64, value % CENTI as u64)
}
