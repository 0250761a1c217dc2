//! Rebuilds parameter-level classifications from per-characteristic ratings.
//!
//! Each characteristic carries an equal share ("budget") of 100%. A rating of
//! muito provável scores nothing, provável half the budget, pouco provável the
//! full budget. The sum is the option's final weight, and the sum is cut into
//! three probability levels at 33.3% and 66.6%, both boundaries inclusive
//! toward the extremes.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::weight::Weight;

/// Lower cut: totals at or below this are muito provável.
pub const LOW_CUT: Weight = Weight::from_centipercent(3330);
/// Upper cut: totals at or above this are pouco provável.
pub const HIGH_CUT: Weight = Weight::from_centipercent(6660);

/// Tri-valued likelihood of fake-news propagation.
///
/// The country tables use the probability vocabulary, the age table the
/// colour vocabulary (vermelho / laranja / verde) for the same three values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RatingLevel {
    MuitoProvavel,
    Provavel,
    PoucoProvavel,
}

impl RatingLevel {
    pub const ALL: [RatingLevel; 3] = [
        RatingLevel::MuitoProvavel,
        RatingLevel::Provavel,
        RatingLevel::PoucoProvavel,
    ];

    /// Stable machine token: `muito_provavel`, `provavel`, `pouco_provavel`.
    pub fn token(self) -> &'static str {
        match self {
            RatingLevel::MuitoProvavel => "muito_provavel",
            RatingLevel::Provavel => "provavel",
            RatingLevel::PoucoProvavel => "pouco_provavel",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            RatingLevel::MuitoProvavel => "Muito Provável",
            RatingLevel::Provavel => "Provável",
            RatingLevel::PoucoProvavel => "Pouco Provável",
        }
    }

    pub fn colour(self) -> &'static str {
        match self {
            RatingLevel::MuitoProvavel => "Vermelho",
            RatingLevel::Provavel => "Laranja",
            RatingLevel::PoucoProvavel => "Verde",
        }
    }

    /// One step toward pouco provável, if any.
    pub fn upgrade(self) -> Option<RatingLevel> {
        match self {
            RatingLevel::MuitoProvavel => Some(RatingLevel::Provavel),
            RatingLevel::Provavel => Some(RatingLevel::PoucoProvavel),
            RatingLevel::PoucoProvavel => None,
        }
    }
}

impl fmt::Display for RatingLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DerivationError {
    #[error("unknown rating token {0:?} (expected mp|p|pp or vermelho|laranja|verde)")]
    UnknownRating(String),
    #[error("unknown scheme {0:?} (expected country or age)")]
    UnknownScheme(String),
    #[error("expected {expected} ratings, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("total {0} is outside 0..=10000 centipercent")]
    TotalOutOfRange(u32),
    #[error("expected {expected} ratings, got {got} ratings")]
    SchemeMismatch { expected: SchemeKind, got: SchemeKind },
}

impl FromStr for RatingLevel {
    type Err = DerivationError;

    /// Accepts either vocabulary: `mp|p|pp`, `vermelho|laranja|verde`, or the
    /// long tokens (`muito_provavel`, ...). Case-insensitive.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "mp" | "muito_provavel" | "vermelho" => Ok(RatingLevel::MuitoProvavel),
            "p" | "provavel" | "laranja" => Ok(RatingLevel::Provavel),
            "pp" | "pouco_provavel" | "verde" => Ok(RatingLevel::PoucoProvavel),
            _ => Err(DerivationError::UnknownRating(s.to_owned())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SchemeKind {
    Country,
    Age,
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SchemeKind::Country => "country",
            SchemeKind::Age => "age",
        })
    }
}

impl FromStr for SchemeKind {
    type Err = DerivationError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "country" => Ok(SchemeKind::Country),
            "age" => Ok(SchemeKind::Age),
            _ => Err(DerivationError::UnknownScheme(s.to_owned())),
        }
    }
}

/// Characteristic layout for one parameter's rating table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatingScheme {
    pub kind: SchemeKind,
    pub characteristic_budget: Weight,
    pub labels: Vec<&'static str>,
}

impl RatingScheme {
    /// Five characteristics at 20% each.
    pub fn country() -> Self {
        RatingScheme {
            kind: SchemeKind::Country,
            characteristic_budget: Weight::from_centipercent(2000),
            labels: vec![
                "1ª Comparação",
                "2ª Comparação",
                "Leis",
                "Transparência",
                "Confiança",
            ],
        }
    }

    /// Three characteristics at 33.3% each; the maximum total is 99.9%.
    pub fn age() -> Self {
        RatingScheme {
            kind: SchemeKind::Age,
            characteristic_budget: Weight::from_centipercent(3330),
            labels: vec![
                "Consumo de Fake News",
                "Partilha de Fake News",
                "Nº de utilizadores nas redes sociais",
            ],
        }
    }

    pub fn for_kind(kind: SchemeKind) -> Self {
        match kind {
            SchemeKind::Country => Self::country(),
            SchemeKind::Age => Self::age(),
        }
    }

    pub fn characteristic_count(&self) -> usize {
        self.labels.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharacteristicRatings {
    scheme: RatingScheme,
    ratings: Vec<RatingLevel>,
}

impl CharacteristicRatings {
    pub fn new(scheme: RatingScheme, ratings: Vec<RatingLevel>) -> Result<Self, DerivationError> {
        if ratings.len() != scheme.characteristic_count() {
            return Err(DerivationError::Arity {
                expected: scheme.characteristic_count(),
                got: ratings.len(),
            });
        }
        Ok(CharacteristicRatings { scheme, ratings })
    }

    /// Parses comma-separated rating tokens, e.g. `p,pp,pp,mp,mp`.
    pub fn parse(kind: SchemeKind, tokens: &str) -> Result<Self, DerivationError> {
        let ratings = tokens
            .split(',')
            .filter(|t| !t.trim().is_empty())
            .map(str::parse)
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(RatingScheme::for_kind(kind), ratings)
    }

    pub fn scheme(&self) -> &RatingScheme {
        &self.scheme
    }

    pub fn ratings(&self) -> &[RatingLevel] {
        &self.ratings
    }
}

/// Classified total of a rating row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProbabilityLevel {
    pub level: RatingLevel,
    pub total: Weight,
}

pub fn rating_value(scheme: &RatingScheme, level: RatingLevel) -> Weight {
    match level {
        RatingLevel::MuitoProvavel => Weight::ZERO,
        RatingLevel::Provavel => scheme.characteristic_budget.half(),
        RatingLevel::PoucoProvavel => scheme.characteristic_budget,
    }
}

pub fn aggregate(ratings: &CharacteristicRatings) -> Weight {
    let sum = ratings
        .ratings
        .iter()
        .map(|&l| rating_value(&ratings.scheme, l).centipercent())
        .sum();
    Weight::from_centipercent(sum)
}

pub fn classify_level(total: Weight) -> Result<ProbabilityLevel, DerivationError> {
    if !total.is_in_range() {
        return Err(DerivationError::TotalOutOfRange(total.centipercent()));
    }
    let level = if total <= LOW_CUT {
        RatingLevel::MuitoProvavel
    } else if total >= HIGH_CUT {
        RatingLevel::PoucoProvavel
    } else {
        RatingLevel::Provavel
    };
    Ok(ProbabilityLevel { level, total })
}

/// Aggregates and classifies any rating row.
pub fn derive(ratings: &CharacteristicRatings) -> Result<ProbabilityLevel, DerivationError> {
    classify_level(aggregate(ratings))
}

/// A named row of a rating table with its classification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Profile {
    pub name: String,
    pub level: RatingLevel,
    /// Usable directly as the option weight in a taxonomy.
    pub total: Weight,
}

fn derive_profile(
    name: &str,
    kind: SchemeKind,
    ratings: &CharacteristicRatings,
) -> Result<Profile, DerivationError> {
    if ratings.scheme.kind != kind {
        return Err(DerivationError::SchemeMismatch {
            expected: kind,
            got: ratings.scheme.kind,
        });
    }
    let ProbabilityLevel { level, total } = derive(ratings)?;
    Ok(Profile {
        name: name.to_owned(),
        level,
        total,
    })
}

pub fn derive_country_profile(
    name: &str,
    ratings: &CharacteristicRatings,
) -> Result<Profile, DerivationError> {
    derive_profile(name, SchemeKind::Country, ratings)
}

pub fn derive_age_profile(
    group: &str,
    ratings: &CharacteristicRatings,
) -> Result<Profile, DerivationError> {
    derive_profile(group, SchemeKind::Age, ratings)
}

/// Rating rows behind the builtin country weights, keyed by option id.
pub fn country_rating_table() -> Vec<(&'static str, CharacteristicRatings)> {
    use RatingLevel::{MuitoProvavel as M, PoucoProvavel as PP, Provavel as P};
    let rows: [(&str, [RatingLevel; 5]); 9] = [
        ("angola", [P, PP, PP, M, M]),
        ("brasil", [M, M, PP, P, PP]),
        ("cabo-verde", [M, P, PP, PP, M]),
        ("guine-bissau", [PP, M, M, M, P]),
        ("guine-equatorial", [PP, PP, PP, M, P]),
        ("mocambique", [PP, P, PP, M, M]),
        ("portugal", [M, P, PP, PP, PP]),
        ("sao-tome-e-principe", [P, M, PP, P, M]),
        ("timor-leste", [P, P, PP, P, PP]),
    ];
    rows.into_iter()
        .map(|(id, r)| {
            (
                id,
                CharacteristicRatings::new(RatingScheme::country(), r.to_vec()).expect("five ratings"),
            )
        })
        .collect()
}

/// Rating rows behind the builtin age weights, keyed by option id.
pub fn age_rating_table() -> Vec<(&'static str, CharacteristicRatings)> {
    use RatingLevel::{MuitoProvavel as Vermelho, PoucoProvavel as Verde, Provavel as Laranja};
    let rows: [(&str, [RatingLevel; 3]); 3] = [
        ("jovem", [Verde, Verde, Vermelho]),
        ("adulto", [Laranja, Laranja, Laranja]),
        ("idoso", [Vermelho, Vermelho, Verde]),
    ];
    rows.into_iter()
        .map(|(id, r)| {
            (
                id,
                CharacteristicRatings::new(RatingScheme::age(), r.to_vec()).expect("three ratings"),
            )
        })
        .collect()
}
