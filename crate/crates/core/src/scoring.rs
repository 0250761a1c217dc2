//! Probability score, verdict and explanation.
//!
//! The score is the unweighted mean of the selected option weights. It is
//! kept as the exact pair `(sum, count)`; verdict thresholds are compared by
//! cross-multiplication so no rounding happens before classification.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::taxonomy::{ParameterKind, Selection, Taxonomy};
use crate::weight::{format_centipercent, Weight};

/// Mean at or below this is likely fake.
pub const FAKE_THRESHOLD: Weight = Weight::from_centipercent(4400);
/// Mean at or above this is likely true.
pub const TRUE_THRESHOLD: Weight = Weight::from_centipercent(6200);

/// Option ids the phase tables price, in table column order.
pub const PHASED_OPTION_IDS: [&str; 4] = ["autonomo", "desempregado", "privado", "publico"];

/// Employment weight permutation number, 1 through 4.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "i64", into = "u8")]
pub struct Phase(u8);

impl Phase {
    pub const ONE: Phase = Phase(1);
    pub const ALL: [Phase; 4] = [Phase(1), Phase(2), Phase(3), Phase(4)];

    pub fn new(n: i64) -> Option<Phase> {
        (1..=4).contains(&n).then_some(Phase(n as u8))
    }

    pub fn get(self) -> u8 {
        self.0
    }
}

impl Default for Phase {
    fn default() -> Self {
        Phase::ONE
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl TryFrom<i64> for Phase {
    type Error = String;

    fn try_from(n: i64) -> Result<Self, Self::Error> {
        Phase::new(n).ok_or_else(|| format!("phase out of range: {n}"))
    }
}

impl From<Phase> for u8 {
    fn from(p: Phase) -> u8 {
        p.0
    }
}

// Rows are phases, columns follow PHASED_OPTION_IDS.
const PHASE_TABLE: [[u32; 4]; 4] = [
    [0, 3330, 6660, 9990],
    [9990, 0, 3330, 6660],
    [6660, 9990, 0, 3330],
    [3330, 6660, 9990, 0],
];

/// Weights assigned to the employment options in one phase.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhaseTable {
    pub phase: Phase,
    pub weights: [(&'static str, Weight); 4],
}

impl PhaseTable {
    pub fn for_phase(phase: Phase) -> PhaseTable {
        let row = PHASE_TABLE[(phase.0 - 1) as usize];
        let mut weights = [("", Weight::ZERO); 4];
        for (slot, (id, w)) in weights.iter_mut().zip(PHASED_OPTION_IDS.iter().zip(row)) {
            *slot = (id, Weight::from_centipercent(w));
        }
        PhaseTable { phase, weights }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScoringError {
    #[error("phase out of range: {0} (expected 1..=4)")]
    InvalidPhase(i64),
    #[error("option {0:?} has no phase weight")]
    NotPhased(String),
    #[error("selection has no choice for parameter {0}")]
    MissingChoice(String),
    #[error("selection names unknown parameter {0}")]
    UnknownParameter(String),
    #[error("parameter {parameter} has no option {option:?}")]
    UnknownOption { parameter: String, option: String },
    #[error("static option {parameter}/{option} has no weight")]
    MissingWeight { parameter: String, option: String },
    #[error("taxonomy has no parameters")]
    EmptyTaxonomy,
}

pub fn employment_weight(phase: i64, option_id: &str) -> Result<Weight, ScoringError> {
    let phase = Phase::new(phase).ok_or(ScoringError::InvalidPhase(phase))?;
    phase_weight(phase, option_id)
}

pub(crate) fn phase_weight(phase: Phase, option_id: &str) -> Result<Weight, ScoringError> {
    let col = PHASED_OPTION_IDS
        .iter()
        .position(|id| *id == option_id)
        .ok_or_else(|| ScoringError::NotPhased(option_id.to_owned()))?;
    Ok(Weight::from_centipercent(
        PHASE_TABLE[(phase.0 - 1) as usize][col],
    ))
}

/// Exact mean as `sum / count`, in centipercent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Score {
    pub sum: u64,
    pub count: u32,
}

impl Score {
    /// Mean in centipercent, rounded half up. `87.9166...%` gives `8792`.
    pub fn rounded_centipercent(&self) -> u64 {
        let count = self.count as u64;
        (2 * self.sum + count) / (2 * count)
    }

    /// Two-decimal percent string with `.` as separator.
    pub fn display_percent(&self) -> String {
        format_centipercent(self.rounded_centipercent())
    }

    /// Exact comparison of the two means.
    pub fn cmp_mean(&self, other: &Score) -> std::cmp::Ordering {
        (self.sum as u128 * other.count as u128).cmp(&(other.sum as u128 * self.count as u128))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    LikelyFake,
    Alert,
    LikelyTrue,
}

impl Verdict {
    pub fn token(self) -> &'static str {
        match self {
            Verdict::LikelyFake => "likely_fake",
            Verdict::Alert => "alert",
            Verdict::LikelyTrue => "likely_true",
        }
    }

    /// Portuguese result line shown to end users.
    pub fn message(self) -> &'static str {
        match self {
            Verdict::LikelyFake => "Trata-se provavelmente de uma notícia falsa",
            Verdict::Alert => "Não é possível determinar; deve estar atento",
            Verdict::LikelyTrue => "Trata-se provavelmente de uma notícia verdadeira",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

fn option_weight(t: &Taxonomy, parameter: &str, option: &str, phase: Phase) -> Result<Weight, ScoringError> {
    let p = t
        .parameter(parameter)
        .ok_or_else(|| ScoringError::UnknownParameter(parameter.to_owned()))?;
    let o = p.option(option).ok_or_else(|| ScoringError::UnknownOption {
        parameter: parameter.to_owned(),
        option: option.to_owned(),
    })?;
    match p.kind {
        ParameterKind::Phased => phase_weight(phase, &o.id),
        ParameterKind::Static => o.weight.ok_or_else(|| ScoringError::MissingWeight {
            parameter: parameter.to_owned(),
            option: option.to_owned(),
        }),
    }
}

fn contributions(t: &Taxonomy, s: &Selection) -> Result<Vec<Contribution>, ScoringError> {
    if t.parameters.is_empty() {
        return Err(ScoringError::EmptyTaxonomy);
    }
    if let Some((p, _)) = s.choices().iter().find(|(p, _)| t.parameter(p).is_none()) {
        return Err(ScoringError::UnknownParameter(p.clone()));
    }
    t.parameters
        .iter()
        .map(|p| {
            let option = s
                .get(&p.id)
                .ok_or_else(|| ScoringError::MissingChoice(p.id.clone()))?;
            Ok(Contribution {
                parameter: p.id.clone(),
                option: option.to_owned(),
                weight: option_weight(t, &p.id, option, s.phase())?,
            })
        })
        .collect()
}

pub fn score(t: &Taxonomy, s: &Selection) -> Result<Score, ScoringError> {
    let parts = contributions(t, s)?;
    Ok(Score {
        sum: parts.iter().map(|c| c.weight.centipercent() as u64).sum(),
        count: parts.len() as u32,
    })
}

pub fn verdict(sc: &Score) -> Verdict {
    let count = sc.count as u64;
    if sc.sum <= FAKE_THRESHOLD.centipercent() as u64 * count {
        Verdict::LikelyFake
    } else if sc.sum >= TRUE_THRESHOLD.centipercent() as u64 * count {
        Verdict::LikelyTrue
    } else {
        Verdict::Alert
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Contribution {
    pub parameter: String,
    pub option: String,
    pub weight: Weight,
}

/// A single-option substitution that changes the verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WhatIf {
    pub parameter: String,
    pub option: String,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Explanation {
    pub contributions: Vec<Contribution>,
    pub score: Score,
    pub verdict: Verdict,
    pub display_percent: String,
    pub what_if: Vec<WhatIf>,
}

/// Scores `s` and lists every single-option change that would flip the
/// verdict, in taxonomy order.
pub fn explain(t: &Taxonomy, s: &Selection) -> Result<Explanation, ScoringError> {
    let contributions = contributions(t, s)?;
    let sum: u64 = contributions.iter().map(|c| c.weight.centipercent() as u64).sum();
    let sc = Score {
        sum,
        count: contributions.len() as u32,
    };
    let base = verdict(&sc);

    let mut what_if = Vec::new();
    for (p, current) in t.parameters.iter().zip(&contributions) {
        for o in p.options.iter().filter(|o| o.id != current.option) {
            let w = option_weight(t, &p.id, &o.id, s.phase())?;
            let alt = Score {
                sum: sum - current.weight.centipercent() as u64 + w.centipercent() as u64,
                count: sc.count,
            };
            let v = verdict(&alt);
            if v != base {
                what_if.push(WhatIf {
                    parameter: p.id.clone(),
                    option: o.id.clone(),
                    verdict: v,
                });
            }
        }
    }

    Ok(Explanation {
        contributions,
        score: sc,
        verdict: base,
        display_percent: sc.display_percent(),
        what_if,
    })
}
