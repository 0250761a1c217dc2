//! JSON-over-HTTP API over a single immutable taxonomy.
//!
//! | route | |
//! |---|---|
//! | `GET /api/v1/taxonomy` | taxonomy document, weights as percent strings |
//! | `POST /api/v1/score` | score, verdict, contributions and what-if list |
//! | `POST /api/v1/derive/{country,age}` | total and level for a rating row |
//! | `GET /healthz` | liveness plus taxonomy version |
//!
//! Every error body is `{"code": ..., "message": ..., "parameter"?: ...}`.

mod api;
mod config;
mod error;

use std::net::SocketAddr;
use std::sync::Arc;

use axum::http::{header, Method};
use axum::routing::{get, post};
use axum::Router;
use tower_http::cors::{Any, CorsLayer};
use veridict_core::taxonomy::serialize_taxonomy;
use veridict_core::{Phase, Taxonomy};

pub use api::{
    Contribution, DeriveRequest, DeriveResponse, HealthResponse, ScoreRequest, ScoreResponse, WhatIf,
};
pub use config::{resolve_port, ConfigError, DEFAULT_PORT, PORT_ENV};
pub use error::{ApiError, ErrorBody};

#[derive(Clone)]
pub struct AppState {
    taxonomy: Arc<Taxonomy>,
    document: Arc<str>,
    default_phase: Phase,
}

impl AppState {
    pub fn new(taxonomy: Taxonomy, default_phase: Phase) -> Self {
        let document = serialize_taxonomy(&taxonomy).into();
        AppState {
            taxonomy: Arc::new(taxonomy),
            document,
            default_phase,
        }
    }

    pub fn taxonomy(&self) -> &Taxonomy {
        &self.taxonomy
    }
}

pub fn router(state: AppState) -> Router {
    let cors = CorsLayer::new()
        .allow_origin(Any)
        .allow_methods([Method::GET, Method::POST])
        .allow_headers([header::CONTENT_TYPE]);
    Router::new()
        .route("/api/v1/taxonomy", get(api::taxonomy))
        .route("/api/v1/score", post(api::score))
        .route("/api/v1/derive/{scheme}", post(api::derive))
        .route("/healthz", get(api::health))
        .fallback(api::not_found)
        .method_not_allowed_fallback(api::method_not_allowed)
        .layer(cors)
        .with_state(state)
}

/// Binds `addr` and serves until ctrl-c. The taxonomy must already be loaded
/// and validated, so the socket only opens once the service can answer.
pub async fn serve(state: AppState, addr: SocketAddr) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    tracing::info!(
        "listening on {} (taxonomy {})",
        listener.local_addr()?,
        state.taxonomy.version
    );
    axum::serve(listener, router(state))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
