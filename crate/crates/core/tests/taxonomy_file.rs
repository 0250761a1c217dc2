//! Taxonomy file format: shipped schema, round-trips, extended taxonomies.

use proptest::prelude::*;
use serde_json::Value;
use veridict_core::taxonomy::{
    builtin_taxonomy, fold_token, load_taxonomy, resolve_selection, serialize_taxonomy, Rule,
    TaxonomyError,
};
use veridict_core::{explain, score, Verdict};

const SCHEMA: &str = include_str!("../schema/taxonomy.schema.json");

fn validator() -> jsonschema::Validator {
    let schema: Value = serde_json::from_str(SCHEMA).unwrap();
    jsonschema::validator_for(&schema).unwrap()
}

#[test]
fn builtin_document_conforms_to_schema() {
    let doc: Value = serde_json::from_str(&serialize_taxonomy(&builtin_taxonomy())).unwrap();
    let v = validator();
    let errors: Vec<_> = v.iter_errors(&doc).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{errors:?}");
}

#[test]
fn schema_rejects_what_the_loader_rejects() {
    let v = validator();
    let base = serialize_taxonomy(&builtin_taxonomy());
    for bad in [
        base.replace("\"33.30\"", "\"33.333\""),
        base.replacen("\"version\"", "\"extra\": 1, \"version\"", 1),
        base.replace("\"kind\": \"static\"", "\"kind\": \"dynamic\""),
    ] {
        let doc: Value = serde_json::from_str(&bad).unwrap();
        assert!(!v.is_valid(&doc));
        assert!(load_taxonomy(bad.as_bytes()).is_err());
    }
}

#[test]
fn document_layout() {
    let doc: Value = serde_json::from_str(&serialize_taxonomy(&builtin_taxonomy())).unwrap();
    let pais = &doc["parameters"][0];
    assert_eq!(pais["id"], "pais");
    assert_eq!(pais["kind"], "static");
    assert_eq!(pais["options"][6]["id"], "portugal");
    assert_eq!(pais["options"][6]["weight"], "70.00");
    assert_eq!(pais["options"][6]["band"], "max");
    let emprego = &doc["parameters"][3];
    assert_eq!(emprego["kind"], "phased");
    assert!(emprego["options"][0].get("weight").is_none());
    assert_eq!(emprego["options"][0]["band"], Value::Null);
}

/// A seventh parameter scores with a divisor of seven, no code changes.
#[test]
fn extended_taxonomy_divides_by_parameter_count() {
    let mut doc: Value = serde_json::from_str(&serialize_taxonomy(&builtin_taxonomy())).unwrap();
    doc["version"] = "cplp-1.1".into();
    doc["parameters"].as_array_mut().unwrap().push(serde_json::json!({
        "id": "plataforma",
        "label": "Plataforma",
        "kind": "static",
        "options": [
            {"id": "whatsapp", "label": "WhatsApp", "weight": "20", "band": "min"},
            {"id": "jornal", "label": "Jornal", "weight": "80.5", "band": "max"}
        ]
    }));
    let bytes = serde_json::to_vec(&doc).unwrap();
    assert!(validator().is_valid(&doc));
    let t = load_taxonomy(&bytes).unwrap();
    let s = resolve_selection(
        &t,
        [
            ("pais", "portugal"),
            ("idade", "jovem"),
            ("educacao", "superior"),
            ("emprego", "publico"),
            ("fonte", "respeitada"),
            ("relacao", "profissional"),
            ("plataforma", "jornal"),
        ],
        1,
    )
    .unwrap();
    let sc = score(&t, &s).unwrap();
    assert_eq!((sc.sum, sc.count), (52750 + 8050, 7));
    // 608/7 = 86.857...
    assert_eq!(sc.display_percent(), "86.86");
    assert_eq!(explain(&t, &s).unwrap().verdict, Verdict::LikelyTrue);

    let missing = resolve_selection(&t, [("pais", "portugal")], 1).unwrap_err();
    assert_eq!(missing.to_string(), "missing parameter: idade");
}

#[test]
fn out_of_range_weight_is_a_validation_error() {
    let doc = serialize_taxonomy(&builtin_taxonomy()).replace("\"70.00\"", "\"100.01\"");
    match load_taxonomy(doc.as_bytes()) {
        Err(TaxonomyError::Validation(v)) => {
            assert!(v.iter().all(|v| v.rule == Rule::WeightOutOfRange));
            assert_eq!(v.len(), 3);
        }
        other => panic!("{other:?}"),
    }
}

fn recase(s: &str, mask: u64) -> String {
    s.chars()
        .enumerate()
        .map(|(i, c)| {
            if mask >> (i % 64) & 1 == 1 {
                c.to_uppercase().collect::<String>()
            } else {
                c.to_string()
            }
        })
        .collect()
}

proptest! {
    /// Any casing of the worked-example inputs, with or without accents and
    /// via id or label, resolves to the same selection.
    #[test]
    fn resolution_ignores_case_and_diacritics(mask in any::<u64>(), use_labels in any::<[bool; 6]>()) {
        let t = builtin_taxonomy();
        let ids = ["portugal", "jovem", "superior", "publico", "respeitada", "profissional"];
        let expected = resolve_selection(&t, t.parameters.iter().map(|p| p.id.as_str()).zip(ids), 1).unwrap();
        let raw: Vec<(String, String)> = t
            .parameters
            .iter()
            .zip(ids)
            .zip(use_labels)
            .map(|((p, id), label)| {
                let o = p.option(id).unwrap();
                let (k, v) = if label { (p.label.clone(), o.label.clone()) } else { (p.id.clone(), o.id.clone()) };
                (recase(&k, mask), recase(&v, mask.rotate_left(17)))
            })
            .collect();
        prop_assert_eq!(resolve_selection(&t, raw, 1).unwrap(), expected);
    }

    #[test]
    fn fold_is_idempotent(s in "\\PC{0,24}") {
        let once = fold_token(&s);
        prop_assert_eq!(fold_token(&once), once);
    }
}
