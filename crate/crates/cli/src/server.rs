//! JSON-over-HTTP endpoint. Every handler is a thin wrapper over
//! [`crate::api::execute`]; request bodies are [`Query`] documents.

use std::net::SocketAddr;
use std::path::PathBuf;

use axum::extract::rejection::JsonRejection;
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use risk_odds::RuleSet;
use tower_http::services::ServeDir;

use crate::api::{execute, ApiError, Command, ErrorKind, Query};

/// Environment variable holding the default port for `serve`.
pub const PORT_ENV: &str = "RISK_ODDS_PORT";
pub const DEFAULT_PORT: u16 = 8080;

/// Per-request ceilings so one request cannot pin a worker for minutes.
pub const MAX_TROOPS: u32 = 200;
pub const MAX_TRIALS: u64 = 10_000_000;
pub const MAX_LIMIT: u32 = 200;

pub fn router(ui_dir: Option<PathBuf>) -> Router {
    let api = Router::new()
        .route("/api/odds", post(|body| handle(Command::Odds, body)))
        .route("/api/dist", post(|body| handle(Command::Dist, body)))
        .route("/api/expect", post(|body| handle(Command::Expect, body)))
        .route(
            "/api/survivors",
            post(|body| handle(Command::Survivors, body)),
        )
        .route(
            "/api/threshold",
            post(|body| handle(Command::Threshold, body)),
        )
        .route(
            "/api/simulate",
            post(|body| handle(Command::Simulate, body)),
        )
        .route("/api/rules", get(|| async { Json(RuleSet::standard()) }));
    match ui_dir {
        Some(dir) if dir.is_dir() => api.fallback_service(ServeDir::new(dir)),
        _ => api,
    }
}

pub async fn serve(addr: SocketAddr, ui_dir: Option<PathBuf>) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, router(ui_dir)).await
}

fn check_limits(query: &Query) -> Result<(), ApiError> {
    let troops: u64 = query.waves.iter().map(|&w| u64::from(w)).sum();
    if troops > u64::from(MAX_TROOPS) {
        return Err(ApiError::bad_request(
            "waves",
            format!("at most {MAX_TROOPS} attacking troops per request"),
        ));
    }
    if query.defenders.is_some_and(|d| d > MAX_TROOPS) {
        return Err(ApiError::bad_request(
            "defenders",
            format!("at most {MAX_TROOPS} defenders per request"),
        ));
    }
    if query.trials.is_some_and(|t| t > MAX_TRIALS) {
        return Err(ApiError::bad_request(
            "trials",
            format!("at most {MAX_TRIALS} trials per request"),
        ));
    }
    if query.limit.is_some_and(|l| l > MAX_LIMIT) {
        return Err(ApiError::bad_request(
            "limit",
            format!("search limit at most {MAX_LIMIT}"),
        ));
    }
    Ok(())
}

async fn handle(command: Command, body: Result<Json<Query>, JsonRejection>) -> Response {
    let query = match body {
        Ok(Json(query)) => query,
        Err(rejection) => {
            return error_response(ApiError::bad_request("body", rejection.body_text()))
        }
    };
    if let Err(err) = check_limits(&query) {
        return error_response(err);
    }
    match tokio::task::spawn_blocking(move || execute(command, &query)).await {
        Ok(Ok(response)) => Json(response).into_response(),
        Ok(Err(err)) => error_response(err),
        Err(join) => error_response(ApiError::internal(format!(
            "{} request failed: {join}",
            command.name()
        ))),
    }
}

fn error_response(err: ApiError) -> Response {
    let status = match err.kind {
        ErrorKind::BadRequest => StatusCode::BAD_REQUEST,
        ErrorKind::Internal => StatusCode::INTERNAL_SERVER_ERROR,
    };
    (status, Json(err)).into_response()
}
