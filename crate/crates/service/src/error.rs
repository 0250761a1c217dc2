use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use serde::{Deserialize, Serialize};
use veridict_core::derivation::DerivationError;
use veridict_core::taxonomy::SelectionError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub code: String,
    pub message: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parameter: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApiError {
    pub status: StatusCode,
    pub body: ErrorBody,
}

impl ApiError {
    pub fn new(status: StatusCode, code: &str, message: impl Into<String>) -> Self {
        ApiError {
            status,
            body: ErrorBody {
                code: code.to_owned(),
                message: message.into(),
                parameter: None,
            },
        }
    }

    fn with_parameter(mut self, parameter: Option<&str>) -> Self {
        self.body.parameter = parameter.map(str::to_owned);
        self
    }

    pub fn bad_request(message: impl Into<String>) -> Self {
        Self::new(StatusCode::BAD_REQUEST, "invalid_request", message)
    }

    pub fn internal() -> Self {
        Self::new(StatusCode::INTERNAL_SERVER_ERROR, "internal_error", "internal error")
    }
}

impl From<SelectionError> for ApiError {
    fn from(e: SelectionError) -> Self {
        let (status, code) = match &e {
            SelectionError::MissingParameter(_) => (StatusCode::UNPROCESSABLE_ENTITY, "missing_parameter"),
            SelectionError::UnknownParameter { .. } => (StatusCode::BAD_REQUEST, "unknown_parameter"),
            SelectionError::UnknownOption { .. } => (StatusCode::BAD_REQUEST, "unknown_option"),
            SelectionError::DuplicateParameter(_) => (StatusCode::BAD_REQUEST, "duplicate_parameter"),
            SelectionError::PhaseOutOfRange(_) => (StatusCode::BAD_REQUEST, "phase_out_of_range"),
        };
        ApiError::new(status, code, e.to_string()).with_parameter(e.parameter())
    }
}

impl From<DerivationError> for ApiError {
    fn from(e: DerivationError) -> Self {
        let (status, code) = match &e {
            DerivationError::Arity { .. } => (StatusCode::BAD_REQUEST, "wrong_arity"),
            DerivationError::UnknownRating(_) => (StatusCode::BAD_REQUEST, "unknown_rating"),
            DerivationError::UnknownScheme(_) => (StatusCode::NOT_FOUND, "unknown_scheme"),
            DerivationError::TotalOutOfRange(_) | DerivationError::SchemeMismatch { .. } => {
                return ApiError::internal();
            }
        };
        ApiError::new(status, code, e.to_string())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(self.body)).into_response()
    }
}
