//! Independent exact-arithmetic model of the scoring and derivation rules.
//!
//! Weights are written as the percent strings of the source tables and parsed
//! straight into big rationals, so nothing here goes through `Weight`.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub const COUNTRY: &[(&str, &str)] = &[
    ("angola", "50"),
    ("brasil", "50"),
    ("cabo-verde", "50"),
    ("guine-bissau", "30"),
    ("guine-equatorial", "70"),
    ("mocambique", "50"),
    ("portugal", "70"),
    ("sao-tome-e-principe", "40"),
    ("timor-leste", "70"),
];
pub const AGE: &[(&str, &str)] = &[("jovem", "66.6"), ("adulto", "49.95"), ("idoso", "33.3")];
pub const EDUCATION: &[(&str, &str)] = &[("basico", "0"), ("secundario", "50"), ("superior", "100")];
pub const EMPLOYMENT: &[&str] = &["autonomo", "desempregado", "privado", "publico"];
pub const SOURCE: &[(&str, &str)] = &[("publica", "0"), ("privada", "50"), ("respeitada", "100")];
pub const RELATION: &[(&str, &str)] = &[
    ("familiar", "49"),
    ("amizade", "68"),
    ("profissional", "91"),
    ("outro", "91"),
];

/// Employment percentages per phase, in `EMPLOYMENT` order.
pub const PHASES: [[&str; 4]; 4] = [
    ["0", "33.3", "66.6", "99.9"],
    ["99.9", "0", "33.3", "66.6"],
    ["66.6", "99.9", "0", "33.3"],
    ["33.3", "66.6", "99.9", "0"],
];

pub const PARAMS: [&str; 6] = ["pais", "idade", "educacao", "emprego", "fonte", "relacao"];

/// Exact value of a decimal string such as "49.95".
pub fn pct(s: &str) -> BigRational {
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    let digits: BigInt = format!("{int}{frac}").parse().unwrap();
    BigRational::new(digits, BigInt::from(10u32).pow(frac.len() as u32))
}

fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleVerdict {
    Fake,
    Alert,
    True,
}

impl OracleVerdict {
    pub fn token(self) -> &'static str {
        match self {
            OracleVerdict::Fake => "likely_fake",
            OracleVerdict::Alert => "alert",
            OracleVerdict::True => "likely_true",
        }
    }
}

pub fn classify(mean: &BigRational) -> OracleVerdict {
    if *mean <= int(44) {
        OracleVerdict::Fake
    } else if *mean >= int(62) {
        OracleVerdict::True
    } else {
        OracleVerdict::Alert
    }
}

/// Two-decimal rendering, halves rounded away from zero.
pub fn two_decimals(x: &BigRational) -> String {
    assert!(!x.is_negative());
    let scaled = x * int(100) + BigRational::new(BigInt::one(), BigInt::from(2));
    let n = scaled.floor().to_integer();
    let hundred = BigInt::from(100);
    format!("{}.{:02}", &n / &hundred, &n % &hundred)
}

/// One full selection with its expected mean.
#[derive(Debug, Clone)]
pub struct Case {
    pub choices: [&'static str; 6],
    pub phase: i64,
    pub mean: BigRational,
}

impl Case {
    pub fn verdict(&self) -> OracleVerdict {
        classify(&self.mean)
    }

    pub fn display(&self) -> String {
        two_decimals(&self.mean)
    }

    pub fn pairs(&self) -> Vec<(&'static str, &'static str)> {
        PARAMS.iter().copied().zip(self.choices).collect()
    }
}

pub fn mean_of(weights: &[BigRational]) -> BigRational {
    let total = weights.iter().fold(BigRational::zero(), |acc, w| acc + w);
    total / int(weights.len() as i64)
}

/// Every combination of every option and phase, by nested loops.
pub fn all_cases() -> Vec<Case> {
    let mut out = Vec::new();
    for (c, cw) in COUNTRY {
        for (a, aw) in AGE {
            for (e, ew) in EDUCATION {
                for (ei, emp) in EMPLOYMENT.iter().enumerate() {
                    for (s, sw) in SOURCE {
                        for (r, rw) in RELATION {
                            for phase in 1..=4i64 {
                                let empw = PHASES[(phase - 1) as usize][ei];
                                let mean = mean_of(&[pct(cw), pct(aw), pct(ew), pct(empw), pct(sw), pct(rw)]);
                                out.push(Case { choices: [c, a, e, emp, s, r], phase, mean });
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

/// Characteristic budget of a derivation scheme, as a percent.
pub fn budget(characteristics: usize) -> BigRational {
    match characteristics {
        5 => pct("20"),
        3 => pct("33.3"),
        n => panic!("no scheme with {n} characteristics"),
    }
}

/// Rating 0 = most likely, 1 = likely, 2 = unlikely.
pub fn derive_total(ratings: &[u8]) -> BigRational {
    let b = budget(ratings.len());
    ratings
        .iter()
        .map(|&r| &b * BigRational::new(BigInt::from(r), BigInt::from(2)))
        .fold(BigRational::zero(), |a, x| a + x)
}

pub fn derive_level(total: &BigRational) -> &'static str {
    if *total <= pct("33.3") {
        "muito_provavel"
    } else if *total >= pct("66.6") {
        "pouco_provavel"
    } else {
        "provavel"
    }
}

/// All rating vectors of the given length, rating 0..=2 per position.
pub fn rating_vectors(len: usize) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..3u8).map(move |r| {
                    let mut w = v.clone();
                    w.push(r);
                    w
                })
            })
            .collect();
    }
    out
}
