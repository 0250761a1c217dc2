use std::collections::BTreeMap;

use axum::body::Bytes;
use axum::extract::{Path, State};
use axum::http::{header, HeaderMap, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::Json;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use veridict_core::derivation::{self, CharacteristicRatings, RatingLevel, RatingScheme, SchemeKind};
use veridict_core::{explain, resolve_selection};

use crate::error::ApiError;
use crate::AppState;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScoreRequest {
    pub selections: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phase: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Contribution {
    pub parameter: String,
    pub option: String,
    pub weight_percent: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WhatIf {
    pub parameter: String,
    pub option: String,
    pub verdict: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScoreResponse {
    pub score_percent: String,
    pub verdict: String,
    pub contributions: Vec<Contribution>,
    pub what_if: Vec<WhatIf>,
}

/// Either a bare array of rating tokens or `{"ratings": [...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DeriveRequest {
    Bare(Vec<String>),
    Wrapped {
        ratings: Vec<String>,
    },
}

impl DeriveRequest {
    fn ratings(&self) -> &[String] {
        match self {
            DeriveRequest::Bare(r) | DeriveRequest::Wrapped { ratings: r } => r,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeriveResponse {
    pub total_percent: String,
    pub level: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HealthResponse {
    pub status: String,
    pub taxonomy_version: String,
}

fn parse_json<T: DeserializeOwned>(headers: &HeaderMap, body: &[u8]) -> Result<T, ApiError> {
    if let Some(ct) = headers.get(header::CONTENT_TYPE) {
        let ct = ct.to_str().unwrap_or("");
        if !ct.starts_with("application/json") {
            return Err(ApiError::new(
                StatusCode::UNSUPPORTED_MEDIA_TYPE,
                "unsupported_media_type",
                "expected application/json",
            ));
        }
    }
    serde_json::from_slice(body).map_err(|e| ApiError::bad_request(format!("invalid request body: {e}")))
}

pub(crate) async fn taxonomy(State(state): State<AppState>) -> Response {
    (
        [(header::CONTENT_TYPE, "application/json; charset=utf-8")],
        state.document.to_string(),
    )
        .into_response()
}

pub(crate) async fn score(
    State(state): State<AppState>,
    headers: HeaderMap,
    body: Bytes,
) -> Result<Json<ScoreResponse>, ApiError> {
    let req: ScoreRequest = parse_json(&headers, &body)?;
    let phase = req.phase.unwrap_or(state.default_phase.get() as i64);
    let selection = resolve_selection(&state.taxonomy, &req.selections, phase)?;
    let e = explain(&state.taxonomy, &selection).map_err(|err| {
        tracing::error!("scoring a resolved selection failed: {err}");
        ApiError::internal()
    })?;
    Ok(Json(ScoreResponse {
        score_percent: e.display_percent,
        verdict: e.verdict.token().to_owned(),
        contributions: e
            .contributions
            .into_iter()
            .map(|c| Contribution {
                parameter: c.parameter,
                option: c.option,
                weight_percent: c.weight.to_string(),
            })
            .collect(),
        what_if: e
            .what_if
            .into_iter()
            .map(|w| WhatIf {
                parameter: w.parameter,
                option: w.option,
                verdict: w.verdict.token().to_owned(),
            })
            .collect(),
    }))
}

pub(crate) async fn derive(
    Path(scheme): Path<String>,
    headers: HeaderMap,
    body: Bytes,
) -> Result<Json<DeriveResponse>, ApiError> {
    let kind: SchemeKind = scheme.parse()?;
    let req: DeriveRequest = parse_json(&headers, &body)?;
    let levels = req
        .ratings()
        .iter()
        .map(|r| r.parse::<RatingLevel>())
        .collect::<Result<Vec<_>, _>>()?;
    let ratings = CharacteristicRatings::new(RatingScheme::for_kind(kind), levels)?;
    let level = derivation::derive(&ratings)?;
    Ok(Json(DeriveResponse {
        total_percent: level.total.to_string(),
        level: level.level.token().to_owned(),
    }))
}

pub(crate) async fn health(State(state): State<AppState>) -> Json<HealthResponse> {
    Json(HealthResponse {
        status: "ok".into(),
        taxonomy_version: state.taxonomy.version.clone(),
    })
}

pub(crate) async fn not_found() -> ApiError {
    ApiError::new(StatusCode::NOT_FOUND, "not_found", "no such route")
}

pub(crate) async fn method_not_allowed() -> ApiError {
    ApiError::new(StatusCode::METHOD_NOT_ALLOWED, "method_not_allowed", "method not allowed")
}
