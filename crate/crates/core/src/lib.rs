//! Taxonomy-driven risk scoring for the context in which a news item is
//! shared.
//!
//! A [`taxonomy::Taxonomy`] lists parameters (country of origin, age,
//! education, employment, source, interpersonal relation) whose options carry
//! fixed-point percentage weights. A selection of one option per parameter is
//! scored as the exact mean of the selected weights and classified as likely
//! fake, alert, or likely true.

pub mod analysis;
pub mod derivation;
pub mod scoring;
pub mod taxonomy;
pub mod weight;

pub use scoring::{explain, score, verdict, Explanation, Phase, Score, Verdict};
pub use taxonomy::{builtin_taxonomy, load_taxonomy, resolve_selection, Selection, Taxonomy};
pub use weight::Weight;
