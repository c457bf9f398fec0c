//! Local HTTP service over an analysis session.
//!
//! Every read endpoint takes an optional `session` query parameter; without
//! it the base session (the vocabulary given at startup) is used.
//! `POST /recompute` re-analyses the corpus under a vocabulary subset and
//! returns the id of the resulting session. Sessions live in memory only and
//! are immutable once created.

use std::collections::{BTreeSet, HashMap};
use std::net::SocketAddr;
use std::sync::{Arc, RwLock};

use axum::body::Bytes;
use axum::extract::{Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::Router;
use serde::Deserialize;
use serde_json::json;

use rotnet_core::netbuild::NetworkKind;
use rotnet_core::report::canon::to_canonical_string;
use rotnet_core::report::export::SnapshotFormat;
use rotnet_core::report::{ReportError, Session};
use rotnet_core::WordId;

pub const BASE_SESSION: &str = "base";

pub struct AppState {
    base: Arc<Session>,
    sessions: RwLock<HashMap<String, Arc<Session>>>,
}

impl AppState {
    pub fn new(base: Session) -> Self {
        AppState {
            base: Arc::new(base),
            sessions: RwLock::new(HashMap::new()),
        }
    }

    fn lookup(&self, id: Option<&str>) -> Result<Arc<Session>, ApiError> {
        match id {
            None | Some(BASE_SESSION) => Ok(Arc::clone(&self.base)),
            Some(id) => self
                .sessions
                .read()
                .expect("session lock poisoned")
                .get(id)
                .cloned()
                .ok_or_else(|| {
                    ApiError::new(StatusCode::NOT_FOUND, format!("unknown session `{id}`"))
                }),
        }
    }
}

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    message: String,
}

impl ApiError {
    fn new(status: StatusCode, message: impl Into<String>) -> Self {
        ApiError {
            status,
            message: message.into(),
        }
    }

    fn bad_request(message: impl Into<String>) -> Self {
        Self::new(StatusCode::BAD_REQUEST, message)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = to_canonical_string(&json!({ "error": self.message }));
        (
            self.status,
            [(header::CONTENT_TYPE, "application/json")],
            body,
        )
            .into_response()
    }
}

fn json_body(body: String) -> Response {
    ([(header::CONTENT_TYPE, "application/json")], body).into_response()
}

type Params = Query<HashMap<String, String>>;

fn session_param(params: &HashMap<String, String>) -> Option<&str> {
    params.get("session").map(String::as_str)
}

async fn manifest(
    State(state): State<Arc<AppState>>,
    Query(p): Params,
) -> Result<Response, ApiError> {
    let s = state.lookup(session_param(&p))?;
    Ok(json_body(to_canonical_string(&s.bundle().manifest)))
}

async fn series(
    State(state): State<Arc<AppState>>,
    Query(p): Params,
) -> Result<Response, ApiError> {
    let s = state.lookup(session_param(&p))?;
    Ok(json_body(to_canonical_string(&s.bundle().series)))
}

async fn leadership(
    State(state): State<Arc<AppState>>,
    Query(p): Params,
) -> Result<Response, ApiError> {
    let s = state.lookup(session_param(&p))?;
    Ok(json_body(s.bundle().leadership_json()))
}

async fn snapshot(
    State(state): State<Arc<AppState>>,
    Query(p): Params,
) -> Result<Response, ApiError> {
    let s = state.lookup(session_param(&p))?;
    let turn: usize = p
        .get("turn")
        .ok_or_else(|| ApiError::bad_request("missing query parameter `turn`"))?
        .parse()
        .map_err(|_| ApiError::bad_request("`turn` must be a non-negative integer"))?;
    let kind: NetworkKind = match p.get("kind") {
        Some(k) => k.parse().map_err(|e: rotnet_core::netbuild::UnknownKind| {
            ApiError::bad_request(e.to_string())
        })?,
        None => NetworkKind::Agent,
    };
    let format: SnapshotFormat = match p.get("format") {
        Some(f) => f.parse().map_err(ApiError::bad_request)?,
        None => SnapshotFormat::Json,
    };
    let doc = s
        .bundle()
        .snapshot_doc(turn, kind, format)
        .map_err(|e| ApiError::bad_request(e.to_string()))?;
    let content_type = match format {
        SnapshotFormat::Json => "application/json",
        SnapshotFormat::Graphml => "application/xml",
    };
    Ok(([(header::CONTENT_TYPE, content_type)], doc).into_response())
}

#[derive(Deserialize)]
struct RecomputeRequest {
    word_ids: Vec<String>,
}

async fn recompute(State(state): State<Arc<AppState>>, body: Bytes) -> Result<Response, ApiError> {
    let req: RecomputeRequest = serde_json::from_slice(&body)
        .map_err(|e| ApiError::bad_request(format!("malformed request body: {e}")))?;
    let words: BTreeSet<WordId> = req
        .word_ids
        .iter()
        .map(|w| WordId::from(w.as_str()))
        .collect();
    let base = Arc::clone(&state.base);
    // re-analysis is CPU-bound; keep it off the reactor threads
    let result = tokio::task::spawn_blocking(move || base.filtered(&words))
        .await
        .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))?;
    let session = result.map_err(|e| match e {
        ReportError::UnknownWords(_) => {
            ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, e.to_string())
        }
        other => ApiError::bad_request(other.to_string()),
    })?;
    let id = session.id();
    let body = to_canonical_string(&json!({
        "session": id,
        "manifest": session.bundle().manifest,
    }));
    state
        .sessions
        .write()
        .expect("session lock poisoned")
        .entry(id)
        .or_insert_with(|| Arc::new(session));
    Ok(json_body(body))
}

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/manifest", get(manifest))
        .route("/series", get(series))
        .route("/leadership", get(leadership))
        .route("/snapshot", get(snapshot))
        .route("/recompute", post(recompute))
        .with_state(state)
}

pub async fn serve(base: Session, addr: SocketAddr) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(Arc::new(AppState::new(base)))).await
}
