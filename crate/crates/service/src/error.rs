use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use mgcolor_core::Error;
use serde_json::json;

#[derive(Debug, thiserror::Error)]
pub enum ApiError {
    #[error("no session `{0}`")]
    UnknownSession(String),
    #[error("session `{0}` has expired")]
    Expired(String),
    #[error("invalid request body: {0}")]
    BadRequest(String),
    #[error(transparent)]
    Core(#[from] Error),
    #[error("storage error: {0}")]
    Io(#[from] std::io::Error),
}

impl ApiError {
    pub fn status(&self) -> StatusCode {
        match self {
            ApiError::UnknownSession(_) => StatusCode::NOT_FOUND,
            ApiError::Expired(_) => StatusCode::GONE,
            ApiError::BadRequest(_) => StatusCode::BAD_REQUEST,
            ApiError::Io(_) => StatusCode::INTERNAL_SERVER_ERROR,
            ApiError::Core(e) => match e {
                Error::AddressNotFound(_) | Error::UnknownColor(_) => StatusCode::NOT_FOUND,
                Error::EmptyGroup | Error::RgbGroupEdit(_) | Error::EmptyLog | Error::NothingToRedo => {
                    StatusCode::CONFLICT
                }
                _ => StatusCode::BAD_REQUEST,
            },
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            ApiError::UnknownSession(_) => "UnknownSession",
            ApiError::Expired(_) => "SessionExpired",
            ApiError::BadRequest(_) => "BadRequest",
            ApiError::Io(_) => "StorageError",
            ApiError::Core(e) => e.kind(),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = json!({ "error": self.kind(), "message": self.to_string() });
        (self.status(), Json(body)).into_response()
    }
}
