//! Exhaustive sweeps over selection combinations and employment phases, the
//! three regularity checks run over them, and report emission.
//!
//! Rows are produced in lexicographic order of taxonomy option order with the
//! phase varying fastest. Checks consume the fully materialized row list.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::ser::{Serialize, Serializer};
use serde_json::{json, Value};
use thiserror::Error;

use crate::scoring::{self, Phase, Score, ScoringError, Verdict};
use crate::taxonomy::{ParameterKind, Selection, Taxonomy, PARAM_COUNTRY, PARAM_EDUCATION};

pub const CHECK_EDUCATION: &str = "education_monotonicity";
pub const CHECK_COUNTRY: &str = "country_ordering";
pub const CHECK_PHASE: &str = "phase_sensitivity";

/// One country from each probability level.
pub const DEFAULT_COUNTRIES: [&str; 3] = ["portugal", "angola", "guine-bissau"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepConfig {
    pub countries: Vec<String>,
    pub phases: Vec<Phase>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            countries: DEFAULT_COUNTRIES.iter().map(|c| c.to_string()).collect(),
            phases: Phase::ALL.to_vec(),
        }
    }
}

impl SweepConfig {
    /// Every country option of `t`, all phases.
    pub fn all_countries(t: &Taxonomy) -> Self {
        SweepConfig {
            countries: t
                .parameter(PARAM_COUNTRY)
                .map(|p| p.options.iter().map(|o| o.id.clone()).collect())
                .unwrap_or_default(),
            phases: Phase::ALL.to_vec(),
        }
    }
}

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("invalid sweep config: {0}")]
    InvalidConfig(String),
    #[error("taxonomy has no parameter {0:?}")]
    MissingParameter(&'static str),
    #[error(transparent)]
    Scoring(#[from] ScoringError),
    #[error("row has option {option:?} not in parameter {parameter}")]
    UnknownRowOption { parameter: String, option: String },
    #[error("duplicate row for {0}")]
    DuplicateRow(String),
    #[error("incomplete product for {check}: {context} lacks {missing}")]
    IncompleteProduct {
        check: &'static str,
        context: String,
        missing: String,
    },
    #[error("unsupported report format {0:?} (expected csv or jsonl)")]
    UnsupportedFormat(String),
    #[error("unknown check {0:?} (expected all, education, country or phase)")]
    UnknownCheck(String),
    #[error("report encoding failed: {0}")]
    Encode(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepRow {
    pub selection: Selection,
    pub score: Score,
    pub display_percent: String,
    pub verdict: Verdict,
}

impl SweepRow {
    fn from_selection(t: &Taxonomy, selection: Selection) -> Result<SweepRow, ScoringError> {
        let score = scoring::score(t, &selection)?;
        Ok(SweepRow {
            selection,
            display_percent: score.display_percent(),
            verdict: scoring::verdict(&score),
            score,
        })
    }

    pub fn phase(&self) -> Phase {
        self.selection.phase()
    }
}

struct Plan<'a> {
    dims: Vec<(&'a str, Vec<&'a str>)>,
    phases: Vec<Phase>,
}

impl Plan<'_> {
    fn len(&self) -> usize {
        self.dims.iter().map(|(_, o)| o.len()).product::<usize>() * self.phases.len()
    }

    fn selection_at(&self, mut i: usize) -> Selection {
        let phase = self.phases[i % self.phases.len()];
        i /= self.phases.len();
        let mut choices = vec![(String::new(), String::new()); self.dims.len()];
        for (slot, (param, options)) in choices.iter_mut().zip(&self.dims).rev() {
            *slot = (param.to_string(), options[i % options.len()].to_string());
            i /= options.len();
        }
        Selection::new(choices, phase)
    }
}

fn plan<'a>(t: &'a Taxonomy, cfg: &SweepConfig) -> Result<Plan<'a>, AnalysisError> {
    let invalid = |m: String| Err(AnalysisError::InvalidConfig(m));
    if cfg.countries.is_empty() {
        return invalid("no countries".into());
    }
    if cfg.phases.is_empty() {
        return invalid("no phases".into());
    }
    let country = t
        .parameter(PARAM_COUNTRY)
        .ok_or(AnalysisError::MissingParameter(PARAM_COUNTRY))?;
    for (i, c) in cfg.countries.iter().enumerate() {
        if country.option(c).is_none() {
            return invalid(format!("unknown country {c:?}"));
        }
        if cfg.countries[..i].contains(c) {
            return invalid(format!("country {c:?} listed twice"));
        }
    }
    let mut phases = cfg.phases.clone();
    phases.sort();
    if phases.windows(2).any(|w| w[0] == w[1]) {
        return invalid("phase listed twice".into());
    }
    let dims = t
        .parameters
        .iter()
        .map(|p| {
            let options = p
                .options
                .iter()
                .filter(|o| p.id != PARAM_COUNTRY || cfg.countries.contains(&o.id))
                .map(|o| o.id.as_str())
                .collect();
            (p.id.as_str(), options)
        })
        .collect();
    Ok(Plan { dims, phases })
}

/// Scores every combination in the configured product, in parallel.
pub fn sweep(t: &Taxonomy, cfg: &SweepConfig) -> Result<Vec<SweepRow>, AnalysisError> {
    let plan = plan(t, cfg)?;
    (0..plan.len())
        .into_par_iter()
        .map(|i| SweepRow::from_selection(t, plan.selection_at(i)))
        .collect::<Result<Vec<_>, _>>()
        .map_err(Into::into)
}

/// Single-threaded [`sweep`]; produces identical rows.
pub fn sweep_sequential(t: &Taxonomy, cfg: &SweepConfig) -> Result<Vec<SweepRow>, AnalysisError> {
    let plan = plan(t, cfg)?;
    (0..plan.len())
        .map(|i| SweepRow::from_selection(t, plan.selection_at(i)))
        .collect::<Result<Vec<_>, _>>()
        .map_err(Into::into)
}

// ---------------------------------------------------------------------------
// Checks

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub context: String,
    pub expected: String,
    pub observed: String,
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] expected {}, observed {}", self.context, self.expected, self.observed)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckResult {
    pub check_id: String,
    pub passed: bool,
    pub counterexamples: Vec<Counterexample>,
}

impl CheckResult {
    pub fn new(check_id: &str, counterexamples: Vec<Counterexample>) -> Self {
        CheckResult {
            check_id: check_id.to_owned(),
            passed: counterexamples.is_empty(),
            counterexamples,
        }
    }
}

fn context_of(selection: &Selection, skip: Option<&str>, with_phase: bool) -> String {
    let mut parts: Vec<String> = selection
        .choices()
        .iter()
        .filter(|(p, _)| Some(p.as_str()) != skip)
        .map(|(p, o)| format!("{p}={o}"))
        .collect();
    if with_phase {
        parts.push(format!("phase={}", selection.phase()));
    }
    parts.join(",")
}

struct Group<'a> {
    context: String,
    slots: Vec<Option<&'a SweepRow>>,
}

/// Groups rows by everything except one dimension, slotting each row by its
/// position along that dimension. Group order is first appearance.
fn group_rows<'a>(
    rows: &'a [SweepRow],
    slot_count: usize,
    key: impl Fn(&SweepRow) -> Result<(String, usize), AnalysisError>,
) -> Result<Vec<Group<'a>>, AnalysisError> {
    let mut groups: Vec<Group<'a>> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    for row in rows {
        let (context, slot) = key(row)?;
        let gi = *index.entry(context.clone()).or_insert_with(|| {
            groups.push(Group {
                context: context.clone(),
                slots: vec![None; slot_count],
            });
            groups.len() - 1
        });
        let cell = &mut groups[gi].slots[slot];
        if cell.is_some() {
            return Err(AnalysisError::DuplicateRow(context_of(&row.selection, None, true)));
        }
        *cell = Some(row);
    }
    Ok(groups)
}

fn slot_of(row: &SweepRow, parameter: &str, options: &[&str]) -> Result<usize, AnalysisError> {
    let option = row.selection.get(parameter).unwrap_or("");
    options
        .iter()
        .position(|o| *o == option)
        .ok_or_else(|| AnalysisError::UnknownRowOption {
            parameter: parameter.to_owned(),
            option: option.to_owned(),
        })
}

/// Mean must strictly increase along the education options' taxonomy order
/// for every fixed context of the other parameters and phase.
pub fn check_education_monotonicity(t: &Taxonomy, rows: &[SweepRow]) -> Result<CheckResult, AnalysisError> {
    let education = t
        .parameter(PARAM_EDUCATION)
        .ok_or(AnalysisError::MissingParameter(PARAM_EDUCATION))?;
    let levels: Vec<&str> = education.options.iter().map(|o| o.id.as_str()).collect();
    let groups = group_rows(rows, levels.len(), |row| {
        Ok((
            context_of(&row.selection, Some(PARAM_EDUCATION), true),
            slot_of(row, PARAM_EDUCATION, &levels)?,
        ))
    })?;
    let mut counterexamples = Vec::new();
    for g in &groups {
        let slots = complete(g, CHECK_EDUCATION, &levels)?;
        for (i, pair) in slots.windows(2).enumerate() {
            if pair[1].score.cmp_mean(&pair[0].score).is_le() {
                counterexamples.push(Counterexample {
                    context: g.context.clone(),
                    expected: format!("mean({}) < mean({})", levels[i], levels[i + 1]),
                    observed: format!("{} vs {}", pair[0].display_percent, pair[1].display_percent),
                });
            }
        }
    }
    Ok(CheckResult::new(CHECK_EDUCATION, counterexamples))
}

fn complete<'a>(g: &Group<'a>, check: &'static str, labels: &[&str]) -> Result<Vec<&'a SweepRow>, AnalysisError> {
    g.slots
        .iter()
        .zip(labels)
        .map(|(s, label)| {
            s.ok_or_else(|| AnalysisError::IncompleteProduct {
                check,
                context: g.context.clone(),
                missing: label.to_string(),
            })
        })
        .collect()
}

/// For every fixed non-country context, means must order exactly as the
/// countries' weights order: strictly where weights differ, equal where they
/// tie. Countries are those present in `rows`.
pub fn check_country_ordering(t: &Taxonomy, rows: &[SweepRow]) -> Result<CheckResult, AnalysisError> {
    let country = t
        .parameter(PARAM_COUNTRY)
        .ok_or(AnalysisError::MissingParameter(PARAM_COUNTRY))?;
    if country.kind != ParameterKind::Static {
        return Err(AnalysisError::InvalidConfig("country parameter must be static".into()));
    }
    let present: Vec<&str> = country
        .options
        .iter()
        .map(|o| o.id.as_str())
        .filter(|id| rows.iter().any(|r| r.selection.get(PARAM_COUNTRY) == Some(id)))
        .collect();
    let weights: Vec<_> = present
        .iter()
        .map(|id| country.option(id).and_then(|o| o.weight).unwrap_or_default())
        .collect();
    let groups = group_rows(rows, present.len(), |row| {
        Ok((
            context_of(&row.selection, Some(PARAM_COUNTRY), true),
            slot_of(row, PARAM_COUNTRY, &present)?,
        ))
    })?;
    let mut counterexamples = Vec::new();
    for g in &groups {
        let slots = complete(g, CHECK_COUNTRY, &present)?;
        for i in 0..slots.len() {
            for j in i + 1..slots.len() {
                let expected = weights[i].cmp(&weights[j]);
                let observed = slots[i].score.cmp_mean(&slots[j].score);
                if expected != observed {
                    counterexamples.push(Counterexample {
                        context: g.context.clone(),
                        expected: format!("mean({}) {} mean({})", present[i], ord_symbol(expected), present[j]),
                        observed: format!("{} vs {}", slots[i].display_percent, slots[j].display_percent),
                    });
                }
            }
        }
    }
    Ok(CheckResult::new(CHECK_COUNTRY, counterexamples))
}

fn ord_symbol(o: std::cmp::Ordering) -> &'static str {
    match o {
        std::cmp::Ordering::Less => "<",
        std::cmp::Ordering::Equal => "=",
        std::cmp::Ordering::Greater => ">",
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sensitivity {
    Stable,
    Variable,
}

impl Sensitivity {
    pub fn token(self) -> &'static str {
        match self {
            Sensitivity::Stable => "stable",
            Sensitivity::Variable => "variable",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhaseSensitivity {
    /// Parameter choices, phase excluded.
    pub base: Vec<(String, String)>,
    /// Indexed by phase - 1.
    pub verdicts_by_phase: [Verdict; 4],
    pub category: Sensitivity,
}

/// One entry per base selection, in sweep order. Every base must appear in
/// all four phases.
pub fn categorize_phase_sensitivity(rows: &[SweepRow]) -> Result<Vec<PhaseSensitivity>, AnalysisError> {
    let groups = group_rows(rows, 4, |row| {
        Ok((context_of(&row.selection, None, false), (row.phase().get() - 1) as usize))
    })?;
    groups
        .iter()
        .map(|g| {
            let slots = complete(g, CHECK_PHASE, &["phase 1", "phase 2", "phase 3", "phase 4"])?;
            let verdicts = [slots[0].verdict, slots[1].verdict, slots[2].verdict, slots[3].verdict];
            let category = if verdicts.iter().all(|v| *v == verdicts[0]) {
                Sensitivity::Stable
            } else {
                Sensitivity::Variable
            };
            Ok(PhaseSensitivity {
                base: slots[0].selection.choices().to_vec(),
                verdicts_by_phase: verdicts,
                category,
            })
        })
        .collect()
}

/// Passes when both stable and variable bases were observed.
pub fn check_phase_sensitivity(sensitivities: &[PhaseSensitivity]) -> CheckResult {
    let counterexamples = [Sensitivity::Stable, Sensitivity::Variable]
        .into_iter()
        .filter(|c| !sensitivities.iter().any(|s| s.category == *c))
        .map(|c| Counterexample {
            context: format!("{} bases", sensitivities.len()),
            expected: format!("at least one {} base", c.token()),
            observed: "none".into(),
        })
        .collect();
    CheckResult::new(CHECK_PHASE, counterexamples)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CheckKind {
    Education,
    Country,
    Phase,
}

impl CheckKind {
    pub const ALL: [CheckKind; 3] = [CheckKind::Education, CheckKind::Country, CheckKind::Phase];

    /// Parses `all`, `none`, `education`, `country` or `phase`.
    pub fn parse_set(s: &str) -> Result<Vec<CheckKind>, AnalysisError> {
        match s {
            "all" => Ok(Self::ALL.to_vec()),
            "none" => Ok(vec![]),
            "education" => Ok(vec![CheckKind::Education]),
            "country" => Ok(vec![CheckKind::Country]),
            "phase" => Ok(vec![CheckKind::Phase]),
            other => Err(AnalysisError::UnknownCheck(other.to_owned())),
        }
    }
}

/// Runs the requested checks; sensitivities are returned when the phase
/// check ran.
pub fn run_checks(
    t: &Taxonomy,
    rows: &[SweepRow],
    kinds: &[CheckKind],
) -> Result<(Vec<PhaseSensitivity>, Vec<CheckResult>), AnalysisError> {
    let mut sensitivities = Vec::new();
    let mut results = Vec::new();
    for kind in kinds {
        match kind {
            CheckKind::Education => results.push(check_education_monotonicity(t, rows)?),
            CheckKind::Country => results.push(check_country_ordering(t, rows)?),
            CheckKind::Phase => {
                sensitivities = categorize_phase_sensitivity(rows)?;
                results.push(check_phase_sensitivity(&sensitivities));
            }
        }
    }
    Ok((sensitivities, results))
}

// ---------------------------------------------------------------------------
// Reports

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    JsonLines,
}

impl FromStr for ReportFormat {
    type Err = AnalysisError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(ReportFormat::Csv),
            "jsonl" | "json-lines" => Ok(ReportFormat::JsonLines),
            other => Err(AnalysisError::UnsupportedFormat(other.to_owned())),
        }
    }
}

/// Column name for a parameter; the country parameter is `country`.
fn column_name(parameter: &str) -> &str {
    if parameter == PARAM_COUNTRY {
        "country"
    } else {
        parameter
    }
}

struct Ordered<'a>(&'a [(String, Value)]);

impl Serialize for Ordered<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_map(self.0.iter().map(|(k, v)| (k, v)))
    }
}

fn json_line(out: &mut Vec<u8>, fields: &[(String, Value)]) -> Result<(), AnalysisError> {
    serde_json::to_writer(&mut *out, &Ordered(fields)).map_err(|e| AnalysisError::Encode(e.to_string()))?;
    out.push(b'\n');
    Ok(())
}

/// Renders a sweep report.
///
/// CSV holds one line per row: the parameter columns (`country` first for
/// the builtin taxonomy), `phase`, `mean_percent`, `verdict`, with a header,
/// LF endings. JSON-lines emits the same fields per row, followed by one
/// `"record":"phase_sensitivity"` object per sensitivity and one
/// `"record":"check"` object per check result. CSV carries rows only.
pub fn emit_report(
    t: &Taxonomy,
    rows: &[SweepRow],
    sensitivities: &[PhaseSensitivity],
    checks: &[CheckResult],
    format: ReportFormat,
) -> Result<Vec<u8>, AnalysisError> {
    let params: Vec<&str> = t.parameters.iter().map(|p| p.id.as_str()).collect();
    match format {
        ReportFormat::Csv => {
            let mut w = csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(Vec::new());
            let encode = |e: csv::Error| AnalysisError::Encode(e.to_string());
            let mut header: Vec<&str> = params.iter().map(|p| column_name(p)).collect();
            header.extend(["phase", "mean_percent", "verdict"]);
            w.write_record(&header).map_err(encode)?;
            for row in rows {
                let mut record: Vec<String> = params
                    .iter()
                    .map(|p| row.selection.get(p).unwrap_or("").to_owned())
                    .collect();
                record.push(row.phase().to_string());
                record.push(row.display_percent.clone());
                record.push(row.verdict.token().to_owned());
                w.write_record(&record).map_err(encode)?;
            }
            w.into_inner().map_err(|e| AnalysisError::Encode(e.to_string()))
        }
        ReportFormat::JsonLines => {
            let mut out = Vec::new();
            for row in rows {
                let mut fields: Vec<(String, Value)> = params
                    .iter()
                    .map(|p| (column_name(p).to_owned(), json!(row.selection.get(p).unwrap_or(""))))
                    .collect();
                fields.push(("phase".into(), json!(row.phase().get())));
                fields.push(("mean_percent".into(), json!(row.display_percent)));
                fields.push(("verdict".into(), json!(row.verdict.token())));
                json_line(&mut out, &fields)?;
            }
            for s in sensitivities {
                let mut fields = vec![("record".to_owned(), json!("phase_sensitivity"))];
                fields.extend(s.base.iter().map(|(p, o)| (column_name(p).to_owned(), json!(o))));
                fields.push((
                    "verdicts_by_phase".into(),
                    json!(s.verdicts_by_phase.iter().map(|v| v.token()).collect::<Vec<_>>()),
                ));
                fields.push(("category".into(), json!(s.category.token())));
                json_line(&mut out, &fields)?;
            }
            for c in checks {
                let fields = vec![
                    ("record".to_owned(), json!("check")),
                    ("check".to_owned(), json!(c.check_id)),
                    ("passed".to_owned(), json!(c.passed)),
                    (
                        "counterexamples".to_owned(),
                        Value::Array(
                            c.counterexamples
                                .iter()
                                .map(|x| json!({"context": x.context, "expected": x.expected, "observed": x.observed}))
                                .collect(),
                        ),
                    ),
                ];
                json_line(&mut out, &fields)?;
            }
            Ok(out)
        }
    }
}
