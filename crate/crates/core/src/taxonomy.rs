//! Taxonomy data model, the builtin CPLP taxonomy, the taxonomy file format
//! and resolution of user selections against a taxonomy.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;
use unicode_normalization::char::is_combining_mark;
use unicode_normalization::UnicodeNormalization;

use crate::scoring::{Phase, PHASED_OPTION_IDS};
use crate::weight::{Weight, WeightParseError};

pub const PARAM_COUNTRY: &str = "pais";
pub const PARAM_AGE: &str = "idade";
pub const PARAM_EDUCATION: &str = "educacao";
pub const PARAM_EMPLOYMENT: &str = "emprego";
pub const PARAM_SOURCE: &str = "fonte";
pub const PARAM_RELATION: &str = "relacao";

/// Position of an option on the minimum / medium / maximum scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Band {
    Min,
    Mid,
    Max,
    Unbanded,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ParameterKind {
    /// Option weights are fixed in the taxonomy.
    Static,
    /// Option weights come from the employment phase tables.
    Phased,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamOption {
    pub id: String,
    pub label: String,
    /// `None` for options of a phased parameter.
    pub weight: Option<Weight>,
    pub band: Band,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Parameter {
    pub id: String,
    pub label: String,
    pub kind: ParameterKind,
    pub options: Vec<ParamOption>,
}

impl Parameter {
    pub fn option(&self, id: &str) -> Option<&ParamOption> {
        self.options.iter().find(|o| o.id == id)
    }

    pub fn option_index(&self, id: &str) -> Option<usize> {
        self.options.iter().position(|o| o.id == id)
    }
}

/// Ordered parameter set. Treated as immutable once built; consumers share it
/// by reference or behind an `Arc`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Taxonomy {
    pub version: String,
    pub parameters: Vec<Parameter>,
}

impl Taxonomy {
    pub fn parameter(&self, id: &str) -> Option<&Parameter> {
        self.parameters.iter().find(|p| p.id == id)
    }

    pub fn parameter_index(&self, id: &str) -> Option<usize> {
        self.parameters.iter().position(|p| p.id == id)
    }
}

/// One chosen option per parameter, in taxonomy order, plus the employment
/// phase.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Selection {
    choices: Vec<(String, String)>,
    phase: Phase,
}

impl Selection {
    /// Builds a selection without checking it against a taxonomy. Scoring
    /// rejects selections that do not match.
    pub fn new(choices: Vec<(String, String)>, phase: Phase) -> Self {
        Selection { choices, phase }
    }

    pub fn choices(&self) -> &[(String, String)] {
        &self.choices
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn get(&self, parameter: &str) -> Option<&str> {
        self.choices
            .iter()
            .find(|(p, _)| p == parameter)
            .map(|(_, o)| o.as_str())
    }

    pub fn with_choice(&self, parameter: &str, option: &str) -> Selection {
        let mut next = self.clone();
        if let Some(slot) = next.choices.iter_mut().find(|(p, _)| p == parameter) {
            slot.1 = option.to_owned();
        }
        next
    }

    pub fn with_phase(&self, phase: Phase) -> Selection {
        Selection {
            choices: self.choices.clone(),
            phase,
        }
    }
}

// ---------------------------------------------------------------------------
// Builtin taxonomy

fn opt(id: &str, label: &str, centipercent: u32, band: Band) -> ParamOption {
    ParamOption {
        id: id.to_owned(),
        label: label.to_owned(),
        weight: Some(Weight::from_centipercent(centipercent)),
        band,
    }
}

fn phased_opt(id: &str, label: &str) -> ParamOption {
    ParamOption {
        id: id.to_owned(),
        label: label.to_owned(),
        weight: None,
        band: Band::Unbanded,
    }
}

fn param(id: &str, label: &str, options: Vec<ParamOption>) -> Parameter {
    Parameter {
        id: id.to_owned(),
        label: label.to_owned(),
        kind: ParameterKind::Static,
        options,
    }
}

pub const BUILTIN_VERSION: &str = "cplp-1.0";

/// The six-parameter CPLP taxonomy.
///
/// Country and age weights are the final column of the characteristic rating
/// tables (see [`crate::derivation`]); education, source and relation weights
/// are fixed assignments. Employment is phased.
pub fn builtin_taxonomy() -> Taxonomy {
    use Band::*;
    Taxonomy {
        version: BUILTIN_VERSION.to_owned(),
        parameters: vec![
            param(
                PARAM_COUNTRY,
                "País",
                vec![
                    opt("angola", "Angola", 5000, Mid),
                    opt("brasil", "Brasil", 5000, Mid),
                    opt("cabo-verde", "Cabo Verde", 5000, Mid),
                    opt("guine-bissau", "Guiné-Bissau", 3000, Min),
                    opt("guine-equatorial", "Guiné Equatorial", 7000, Max),
                    opt("mocambique", "Moçambique", 5000, Mid),
                    opt("portugal", "Portugal", 7000, Max),
                    opt("sao-tome-e-principe", "São Tomé e Príncipe", 4000, Mid),
                    opt("timor-leste", "Timor-Leste", 7000, Max),
                ],
            ),
            param(
                PARAM_AGE,
                "Idade",
                vec![
                    opt("jovem", "Jovem", 6660, Max),
                    opt("adulto", "Adulto", 4995, Mid),
                    opt("idoso", "Idoso", 3330, Min),
                ],
            ),
            param(
                PARAM_EDUCATION,
                "Educação",
                vec![
                    opt("basico", "Ensino Básico", 0, Min),
                    opt("secundario", "Ensino Secundário", 5000, Mid),
                    opt("superior", "Ensino Superior", 10000, Max),
                ],
            ),
            Parameter {
                id: PARAM_EMPLOYMENT.to_owned(),
                label: "Emprego".to_owned(),
                kind: ParameterKind::Phased,
                options: vec![
                    phased_opt("autonomo", "Autónomo"),
                    phased_opt("desempregado", "Desempregado"),
                    phased_opt("privado", "Privado"),
                    phased_opt("publico", "Público"),
                ],
            },
            param(
                PARAM_SOURCE,
                "Fonte",
                vec![
                    opt("publica", "Pública", 0, Min),
                    opt("privada", "Privada", 5000, Mid),
                    opt("respeitada", "Respeitada", 10000, Max),
                ],
            ),
            param(
                PARAM_RELATION,
                "Relação Interpessoal",
                vec![
                    opt("familiar", "Familiar", 4900, Min),
                    opt("amizade", "Amizade", 6800, Mid),
                    opt("profissional", "Contacto Profissional", 9100, Max),
                    opt("outro", "Outro Tipo de Contacto", 9100, Max),
                ],
            ),
        ],
    }
}

// ---------------------------------------------------------------------------
// Validation

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rule {
    NoParameters,
    InvalidId,
    EmptyLabel,
    DuplicateParameterId,
    DuplicateOptionId,
    TooFewOptions,
    WeightOutOfRange,
    MissingWeight,
    PhasedOptionHasWeight,
    UnknownPhasedOption,
    MultiplePhasedParameters,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Rule::NoParameters => "taxonomy has no parameters",
            Rule::InvalidId => "id must be a non-empty lowercase ASCII token",
            Rule::EmptyLabel => "label is empty",
            Rule::DuplicateParameterId => "duplicate parameter id",
            Rule::DuplicateOptionId => "duplicate option id",
            Rule::TooFewOptions => "parameter needs at least two options",
            Rule::WeightOutOfRange => "weight out of range",
            Rule::MissingWeight => "static option has no weight",
            Rule::PhasedOptionHasWeight => "phased option must not carry a weight",
            Rule::UnknownPhasedOption => "phased option has no phase weights",
            Rule::MultiplePhasedParameters => "more than one phased parameter",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    /// `parameter` or `parameter/option`; empty for the taxonomy itself.
    pub path: String,
    pub rule: Rule,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.path.is_empty() {
            write!(f, "{}", self.rule)
        } else {
            write!(f, "{}: {}", self.path, self.rule)
        }
    }
}

fn is_id_token(s: &str) -> bool {
    !s.is_empty()
        && s
            .bytes()
            .all(|b| b.is_ascii_lowercase() || b.is_ascii_digit() || b == b'-' || b == b'_')
}

/// Checks every structural rule; returns violations in document order.
pub fn validate_taxonomy(t: &Taxonomy) -> Vec<Violation> {
    let mut out = Vec::new();
    if t.parameters.is_empty() {
        out.push(Violation {
            path: String::new(),
            rule: Rule::NoParameters,
        });
        return out;
    }
    let mut seen_params = HashSet::new();
    let mut phased_seen = false;
    for p in &t.parameters {
        let mut push = |path: String, rule| out.push(Violation { path, rule });
        if !is_id_token(&p.id) {
            push(p.id.clone(), Rule::InvalidId);
        }
        if !seen_params.insert(p.id.as_str()) {
            push(p.id.clone(), Rule::DuplicateParameterId);
        }
        if p.label.trim().is_empty() {
            push(p.id.clone(), Rule::EmptyLabel);
        }
        if p.kind == ParameterKind::Phased {
            if phased_seen {
                push(p.id.clone(), Rule::MultiplePhasedParameters);
            }
            phased_seen = true;
        }
        if p.options.len() < 2 {
            push(p.id.clone(), Rule::TooFewOptions);
        }
        let mut seen_opts = HashSet::new();
        for o in &p.options {
            let path = format!("{}/{}", p.id, o.id);
            if !is_id_token(&o.id) {
                push(path.clone(), Rule::InvalidId);
            }
            if !seen_opts.insert(o.id.as_str()) {
                push(path.clone(), Rule::DuplicateOptionId);
            }
            if o.label.trim().is_empty() {
                push(path.clone(), Rule::EmptyLabel);
            }
            match (p.kind, o.weight) {
                (ParameterKind::Static, None) => push(path.clone(), Rule::MissingWeight),
                (ParameterKind::Static, Some(w)) if !w.is_in_range() => {
                    push(path.clone(), Rule::WeightOutOfRange)
                }
                (ParameterKind::Static, Some(_)) => {}
                (ParameterKind::Phased, Some(_)) => {
                    push(path.clone(), Rule::PhasedOptionHasWeight)
                }
                (ParameterKind::Phased, None) => {
                    if !PHASED_OPTION_IDS.contains(&o.id.as_str()) {
                        push(path.clone(), Rule::UnknownPhasedOption)
                    }
                }
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// File format

#[derive(Debug, Error)]
pub enum TaxonomyError {
    #[error("malformed taxonomy document: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("{path}: {source}")]
    Weight {
        path: String,
        #[source]
        source: WeightParseError,
    },
    #[error("invalid taxonomy: {}", join_violations(.0))]
    Validation(Vec<Violation>),
}

impl TaxonomyError {
    pub fn is_precision(&self) -> bool {
        matches!(
            self,
            TaxonomyError::Weight {
                source: WeightParseError::Precision(_),
                ..
            }
        )
    }
}

fn join_violations(v: &[Violation]) -> String {
    v.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; ")
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TaxonomyDoc {
    version: String,
    parameters: Vec<ParameterDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ParameterDoc {
    id: String,
    label: String,
    kind: ParameterKind,
    options: Vec<OptionDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum BandDoc {
    Min,
    Mid,
    Max,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct OptionDoc {
    id: String,
    label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    weight: Option<String>,
    #[serde(default)]
    band: Option<BandDoc>,
}

impl From<&Taxonomy> for TaxonomyDoc {
    fn from(t: &Taxonomy) -> Self {
        TaxonomyDoc {
            version: t.version.clone(),
            parameters: t
                .parameters
                .iter()
                .map(|p| ParameterDoc {
                    id: p.id.clone(),
                    label: p.label.clone(),
                    kind: p.kind,
                    options: p
                        .options
                        .iter()
                        .map(|o| OptionDoc {
                            id: o.id.clone(),
                            label: o.label.clone(),
                            weight: o.weight.map(|w| w.to_string()),
                            band: match o.band {
                                Band::Min => Some(BandDoc::Min),
                                Band::Mid => Some(BandDoc::Mid),
                                Band::Max => Some(BandDoc::Max),
                                Band::Unbanded => None,
                            },
                        })
                        .collect(),
                })
                .collect(),
        }
    }
}

impl TryFrom<TaxonomyDoc> for Taxonomy {
    type Error = TaxonomyError;

    fn try_from(doc: TaxonomyDoc) -> Result<Self, Self::Error> {
        let mut parameters = Vec::with_capacity(doc.parameters.len());
        for p in doc.parameters {
            let mut options = Vec::with_capacity(p.options.len());
            for o in p.options {
                let weight = match o.weight {
                    Some(raw) => Some(raw.parse::<Weight>().map_err(|source| {
                        TaxonomyError::Weight {
                            path: format!("{}/{}", p.id, o.id),
                            source,
                        }
                    })?),
                    None => None,
                };
                options.push(ParamOption {
                    id: o.id,
                    label: o.label,
                    weight,
                    band: match o.band {
                        Some(BandDoc::Min) => Band::Min,
                        Some(BandDoc::Mid) => Band::Mid,
                        Some(BandDoc::Max) => Band::Max,
                        None => Band::Unbanded,
                    },
                });
            }
            parameters.push(Parameter {
                id: p.id,
                label: p.label,
                kind: p.kind,
                options,
            });
        }
        Ok(Taxonomy {
            version: doc.version,
            parameters,
        })
    }
}

/// Parses and validates a taxonomy document (UTF-8 JSON).
pub fn load_taxonomy(document: &[u8]) -> Result<Taxonomy, TaxonomyError> {
    let doc: TaxonomyDoc = serde_json::from_slice(document)?;
    let taxonomy = Taxonomy::try_from(doc)?;
    let violations = validate_taxonomy(&taxonomy);
    if violations.is_empty() {
        Ok(taxonomy)
    } else {
        Err(TaxonomyError::Validation(violations))
    }
}

/// Serializes a taxonomy in the taxonomy file format (pretty-printed JSON).
pub fn serialize_taxonomy(t: &Taxonomy) -> String {
    serde_json::to_string_pretty(&TaxonomyDoc::from(t)).expect("taxonomy document serializes")
}

// ---------------------------------------------------------------------------
// Selection resolution

/// Lowercases, strips diacritics and collapses whitespace / `_` / `-` runs
/// into a single `-`, so that "Relação Interpessoal" folds to
/// "relacao-interpessoal" and "Guiné- Bissau" to "guine-bissau".
pub fn fold_token(raw: &str) -> String {
    let mut out = String::with_capacity(raw.len());
    let mut pending_sep = false;
    for c in raw.nfd().filter(|c| !is_combining_mark(*c)) {
        if c.is_whitespace() || c == '_' || c == '-' {
            pending_sep = !out.is_empty();
            continue;
        }
        if pending_sep {
            out.push('-');
            pending_sep = false;
        }
        out.extend(c.to_lowercase());
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SelectionError {
    #[error("unknown parameter: {given} (valid: {})", .nearest.join(", "))]
    UnknownParameter { given: String, nearest: Vec<String> },
    #[error("unknown option {given:?} for parameter {parameter} (did you mean: {})", .nearest.join(", "))]
    UnknownOption {
        parameter: String,
        given: String,
        nearest: Vec<String>,
    },
    #[error("duplicate parameter: {0}")]
    DuplicateParameter(String),
    #[error("missing parameter: {0}")]
    MissingParameter(String),
    #[error("phase out of range: {0} (expected 1..=4)")]
    PhaseOutOfRange(i64),
}

impl SelectionError {
    /// Parameter the error refers to, when there is one.
    pub fn parameter(&self) -> Option<&str> {
        match self {
            SelectionError::UnknownParameter { given, .. } => Some(given),
            SelectionError::UnknownOption { parameter, .. } => Some(parameter),
            SelectionError::DuplicateParameter(p) | SelectionError::MissingParameter(p) => Some(p),
            SelectionError::PhaseOutOfRange(_) => None,
        }
    }
}

const MAX_SUGGESTIONS: usize = 3;

fn nearest<'a>(given: &str, candidates: impl Iterator<Item = &'a str>) -> Vec<String> {
    let mut scored: Vec<(usize, usize, &str)> = candidates
        .enumerate()
        .map(|(i, c)| (strsim::levenshtein(given, c), i, c))
        .collect();
    scored.sort();
    scored
        .into_iter()
        .take(MAX_SUGGESTIONS)
        .map(|(_, _, c)| c.to_owned())
        .collect()
}

fn matches_token(folded: &str, id: &str, label: &str) -> bool {
    folded == fold_token(id) || folded == fold_token(label)
}

/// Resolves free-form `parameter -> option` pairs against `t`.
///
/// Keys and values match ids or labels after [`fold_token`], so
/// `"Educação" = "Ensino Superior"` resolves the same as
/// `"educacao" = "superior"`.
pub fn resolve_selection<I, K, V>(t: &Taxonomy, raw: I, phase: i64) -> Result<Selection, SelectionError>
where
    I: IntoIterator<Item = (K, V)>,
    K: AsRef<str>,
    V: AsRef<str>,
{
    let phase = Phase::new(phase).ok_or(SelectionError::PhaseOutOfRange(phase))?;
    let mut chosen: Vec<Option<String>> = vec![None; t.parameters.len()];
    for (key, value) in raw {
        let (key, value) = (key.as_ref(), value.as_ref());
        let folded_key = fold_token(key);
        let idx = t
            .parameters
            .iter()
            .position(|p| matches_token(&folded_key, &p.id, &p.label))
            .ok_or_else(|| SelectionError::UnknownParameter {
                given: key.to_owned(),
                nearest: nearest(&folded_key, t.parameters.iter().map(|p| p.id.as_str())),
            })?;
        let parameter = &t.parameters[idx];
        if chosen[idx].is_some() {
            return Err(SelectionError::DuplicateParameter(parameter.id.clone()));
        }
        let folded_value = fold_token(value);
        let option = parameter
            .options
            .iter()
            .find(|o| matches_token(&folded_value, &o.id, &o.label))
            .ok_or_else(|| SelectionError::UnknownOption {
                parameter: parameter.id.clone(),
                given: value.to_owned(),
                nearest: nearest(&folded_value, parameter.options.iter().map(|o| o.id.as_str())),
            })?;
        chosen[idx] = Some(option.id.clone());
    }
    let choices = t
        .parameters
        .iter()
        .zip(chosen)
        .map(|(p, c)| {
            c.map(|o| (p.id.clone(), o))
                .ok_or_else(|| SelectionError::MissingParameter(p.id.clone()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Selection::new(choices, phase))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn weight_of(t: &Taxonomy, p: &str, o: &str) -> u32 {
        t.parameter(p)
            .and_then(|p| p.option(o))
            .and_then(|o| o.weight)
            .map(Weight::centipercent)
            .unwrap()
    }

    #[test]
    fn builtin_golden_weights() {
        let t = builtin_taxonomy();
        let expected: &[(&str, &[(&str, u32)])] = &[
            (
                "pais",
                &[
                    ("angola", 5000),
                    ("brasil", 5000),
                    ("cabo-verde", 5000),
                    ("guine-bissau", 3000),
                    ("guine-equatorial", 7000),
                    ("mocambique", 5000),
                    ("portugal", 7000),
                    ("sao-tome-e-principe", 4000),
                    ("timor-leste", 7000),
                ],
            ),
            ("idade", &[("jovem", 6660), ("adulto", 4995), ("idoso", 3330)]),
            ("educacao", &[("basico", 0), ("secundario", 5000), ("superior", 10000)]),
            ("fonte", &[("publica", 0), ("privada", 5000), ("respeitada", 10000)]),
            (
                "relacao",
                &[("familiar", 4900), ("amizade", 6800), ("profissional", 9100), ("outro", 9100)],
            ),
        ];
        let mut n = 0;
        for (p, opts) in expected {
            assert_eq!(t.parameter(p).unwrap().options.len(), opts.len(), "{p}");
            for (o, w) in *opts {
                assert_eq!(weight_of(&t, p, o), *w, "{p}/{o}");
                n += 1;
            }
        }
        assert_eq!(n, 22);
    }

    #[test]
    fn builtin_shape() {
        let t = builtin_taxonomy();
        let ids: Vec<_> = t.parameters.iter().map(|p| p.id.as_str()).collect();
        assert_eq!(ids, ["pais", "idade", "educacao", "emprego", "fonte", "relacao"]);
        let phased: Vec<_> = t
            .parameters
            .iter()
            .filter(|p| p.kind == ParameterKind::Phased)
            .map(|p| p.id.as_str())
            .collect();
        assert_eq!(phased, ["emprego"]);
        assert!(t
            .parameter("emprego")
            .unwrap()
            .options
            .iter()
            .all(|o| o.band == Band::Unbanded && o.weight.is_none()));
        assert!(validate_taxonomy(&t).is_empty());
    }

    #[test]
    fn builtin_bands_follow_min_mid_max_table() {
        let t = builtin_taxonomy();
        let band = |p: &str, o: &str| t.parameter(p).unwrap().option(o).unwrap().band;
        assert_eq!(band("pais", "guine-bissau"), Band::Min);
        assert_eq!(band("pais", "angola"), Band::Mid);
        assert_eq!(band("pais", "portugal"), Band::Max);
        assert_eq!(band("idade", "idoso"), Band::Min);
        assert_eq!(band("idade", "jovem"), Band::Max);
        assert_eq!(band("relacao", "outro"), Band::Max);
        assert_eq!(band("fonte", "privada"), Band::Mid);
    }

    #[test]
    fn validate_out_of_range_weight() {
        let mut t = builtin_taxonomy();
        t.parameters[2].options[2].weight = Some(Weight::from_centipercent(10001));
        assert_eq!(
            validate_taxonomy(&t),
            vec![Violation {
                path: "educacao/superior".into(),
                rule: Rule::WeightOutOfRange
            }]
        );
    }

    #[test]
    fn validate_empty_taxonomy() {
        let t = Taxonomy {
            version: "x".into(),
            parameters: vec![],
        };
        let v = validate_taxonomy(&t);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].to_string(), "taxonomy has no parameters");
    }

    #[test]
    fn validate_phased_rules_in_document_order() {
        let mut t = builtin_taxonomy();
        t.parameters[3].options[0].weight = Some(Weight::ZERO);
        t.parameters[3].options[1].id = "reformado".into();
        t.parameters[4].kind = ParameterKind::Phased;
        t.parameters[4].options[0].weight = None;
        let rules: Vec<_> = validate_taxonomy(&t)
            .into_iter()
            .map(|v| (v.path, v.rule))
            .collect();
        assert_eq!(
            rules,
            vec![
                ("emprego/autonomo".into(), Rule::PhasedOptionHasWeight),
                ("emprego/reformado".into(), Rule::UnknownPhasedOption),
                ("fonte".into(), Rule::MultiplePhasedParameters),
                ("fonte/publica".into(), Rule::UnknownPhasedOption),
                ("fonte/privada".into(), Rule::PhasedOptionHasWeight),
                ("fonte/respeitada".into(), Rule::PhasedOptionHasWeight),
            ]
        );
    }

    #[test]
    fn validate_ids_and_duplicates() {
        let mut t = builtin_taxonomy();
        t.parameters[1].options[1].id = "jovem".into();
        t.parameters[0].options[0].id = "Angola".into();
        t.parameters[5].options.truncate(1);
        let v = validate_taxonomy(&t);
        assert_eq!(v.len(), 3);
        assert_eq!(v[0].path, "pais/Angola");
        assert_eq!(v[0].rule, Rule::InvalidId);
        assert_eq!(v[1].path, "idade/jovem");
        assert_eq!(v[1].rule, Rule::DuplicateOptionId);
        assert_eq!(v[2].rule, Rule::TooFewOptions);
    }

    #[test]
    fn load_round_trips_builtin() {
        let t = builtin_taxonomy();
        let doc = serialize_taxonomy(&t);
        assert_eq!(load_taxonomy(doc.as_bytes()).unwrap(), t);
    }

    #[test]
    fn load_reports_duplicate_option() {
        let doc = serialize_taxonomy(&builtin_taxonomy()).replace("\"brasil\"", "\"angola\"");
        match load_taxonomy(doc.as_bytes()) {
            Err(TaxonomyError::Validation(v)) => {
                assert_eq!(v.len(), 1);
                assert_eq!(v[0].path, "pais/angola");
                assert_eq!(v[0].rule, Rule::DuplicateOptionId);
            }
            other => panic!("expected validation error, got {other:?}"),
        }
    }

    #[test]
    fn load_rejects_three_decimal_weight() {
        let doc = serialize_taxonomy(&builtin_taxonomy()).replace("\"33.30\"", "\"33.333\"");
        let err = load_taxonomy(doc.as_bytes()).unwrap_err();
        assert!(err.is_precision(), "{err}");
        assert!(err.to_string().starts_with("idade/idoso"));
    }

    #[test]
    fn load_rejects_malformed_and_unknown_fields() {
        assert!(matches!(load_taxonomy(b"{"), Err(TaxonomyError::Parse(_))));
        let doc = serialize_taxonomy(&builtin_taxonomy()).replacen("\"version\"", "\"extra\": 1, \"version\"", 1);
        assert!(matches!(load_taxonomy(doc.as_bytes()), Err(TaxonomyError::Parse(_))));
    }

    #[test]
    fn fold_examples() {
        assert_eq!(fold_token("Educação"), "educacao");
        assert_eq!(fold_token("Relação Interpessoal"), "relacao-interpessoal");
        assert_eq!(fold_token("Guiné- Bissau"), "guine-bissau");
        assert_eq!(fold_token("  São Tomé e Príncipe "), "sao-tome-e-principe");
        assert_eq!(fold_token("PÚBLICO"), "publico");
    }

    fn worked_example() -> Vec<(&'static str, &'static str)> {
        vec![
            ("pais", "portugal"),
            ("idade", "jovem"),
            ("educacao", "superior"),
            ("emprego", "publico"),
            ("fonte", "respeitada"),
            ("relacao", "profissional"),
        ]
    }

    #[test]
    fn resolve_worked_example() {
        let t = builtin_taxonomy();
        let s = resolve_selection(&t, worked_example(), 1).unwrap();
        assert_eq!(s.phase(), Phase::ONE);
        assert_eq!(s.get("relacao"), Some("profissional"));
        assert_eq!(s.choices().len(), 6);
    }

    #[test]
    fn resolve_accepts_labels_and_diacritics() {
        let t = builtin_taxonomy();
        let raw = [
            ("País", "Portugal"),
            ("IDADE", "Jovem"),
            ("Educação", "Ensino Superior"),
            ("emprego", "Público"),
            ("Fonte", "RESPEITADA"),
            ("Relação Interpessoal", "Contacto Profissional"),
        ];
        assert_eq!(
            resolve_selection(&t, raw, 1).unwrap(),
            resolve_selection(&t, worked_example(), 1).unwrap()
        );
    }

    #[test]
    fn resolve_errors() {
        let t = builtin_taxonomy();
        let missing: Vec<_> = worked_example().into_iter().filter(|(k, _)| *k != "fonte").collect();
        let err = resolve_selection(&t, missing, 1).unwrap_err();
        assert_eq!(err.to_string(), "missing parameter: fonte");
        assert_eq!(err.parameter(), Some("fonte"));

        let err = resolve_selection(&t, worked_example(), 5).unwrap_err();
        assert_eq!(err, SelectionError::PhaseOutOfRange(5));
        assert!(err.to_string().starts_with("phase out of range"));

        let mut bad = worked_example();
        bad[0].1 = "portgal";
        match resolve_selection(&t, bad, 1).unwrap_err() {
            SelectionError::UnknownOption { parameter, nearest, .. } => {
                assert_eq!(parameter, "pais");
                assert_eq!(nearest[0], "portugal");
            }
            e => panic!("{e:?}"),
        }

        let mut extra = worked_example();
        extra.push(("clima", "quente"));
        assert!(matches!(
            resolve_selection(&t, extra, 1),
            Err(SelectionError::UnknownParameter { .. })
        ));

        let mut dup = worked_example();
        dup.push(("Educação", "basico"));
        assert_eq!(
            resolve_selection(&t, dup, 1),
            Err(SelectionError::DuplicateParameter("educacao".into()))
        );
    }
}
