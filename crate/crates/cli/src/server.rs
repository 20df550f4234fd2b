//! Read-only JSON navigation API over a loaded session.

use std::sync::Arc;

use axum::extract::rejection::JsonRejection;
use axum::extract::{Path, Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use facet_lattice::{parse_term, AttributeTerm, ConceptId, Error};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::session::{ConceptView, Session};

type Shared = Arc<Session>;

pub fn router(session: Shared) -> Router {
    Router::new()
        .route("/api/lattice", get(lattice))
        .route("/api/concepts/{id}", get(concept))
        .route("/api/concepts/{id}/covers", get(covers))
        .route("/api/refine", post(refine))
        .route("/api/objects/{name}/concept", get(object_concept))
        .route("/api/attributes", get(attributes))
        .with_state(session)
}

pub async fn serve(session: Session, host: &str, port: u16) -> anyhow::Result<()> {
    let listener = tokio::net::TcpListener::bind((host, port)).await?;
    eprintln!("serving {} on http://{}", session.source, listener.local_addr()?);
    axum::serve(listener, router(Arc::new(session))).await?;
    Ok(())
}

#[derive(Debug)]
pub struct ApiError(StatusCode, String);

impl ApiError {
    fn bad_request(msg: impl Into<String>) -> Self {
        ApiError(StatusCode::BAD_REQUEST, msg.into())
    }

    fn not_found(msg: impl Into<String>) -> Self {
        ApiError(StatusCode::NOT_FOUND, msg.into())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.0, Json(json!({ "error": self.1 }))).into_response()
    }
}

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        match e {
            Error::Index { .. } | Error::UnknownObject(_) => ApiError::not_found(e.to_string()),
            _ => ApiError::bad_request(e.to_string()),
        }
    }
}

type ApiResult<T> = Result<Json<T>, ApiError>;

fn concept_id(session: &Session, raw: &str) -> Result<ConceptId, ApiError> {
    let id: ConceptId = raw.parse().map_err(|_| ApiError::bad_request(format!("`{raw}` is not a concept id")))?;
    session.lattice.concept(id)?;
    Ok(id)
}

async fn lattice(State(s): State<Shared>) -> Json<facet_lattice::DiagramDoc> {
    Json(s.diagram())
}

async fn concept(State(s): State<Shared>, Path(id): Path<String>) -> ApiResult<ConceptView> {
    let id = concept_id(&s, &id)?;
    Ok(Json(s.view(id)?))
}

#[derive(Deserialize)]
struct CoversQuery {
    dir: Option<String>,
}

#[derive(Serialize)]
struct CoversResponse {
    id: ConceptId,
    dir: &'static str,
    covers: Vec<ConceptView>,
}

async fn covers(
    State(s): State<Shared>,
    Path(id): Path<String>,
    Query(q): Query<CoversQuery>,
) -> ApiResult<CoversResponse> {
    let id = concept_id(&s, &id)?;
    let (dir, ids) = match q.dir.as_deref().unwrap_or("down") {
        "down" => ("down", &s.lattice.lower_covers()[id]),
        "up" => ("up", &s.lattice.upper_covers()[id]),
        other => return Err(ApiError::bad_request(format!("dir must be `up` or `down`, not `{other}`"))),
    };
    let covers = ids.iter().map(|&c| s.view(c)).collect::<Result<_, _>>()?;
    Ok(Json(CoversResponse { id, dir, covers }))
}

/// A term given as `{"tag", "op", "value"}` or in surface syntax.
#[derive(Deserialize)]
#[serde(untagged)]
enum TermInput {
    Text(String),
    Parts(AttributeTerm),
}

#[derive(Deserialize)]
struct RefineRequest {
    concept: ConceptId,
    attribute: TermInput,
}

async fn refine(State(s): State<Shared>, body: Result<Json<RefineRequest>, JsonRejection>) -> ApiResult<ConceptView> {
    let Json(req) = body.map_err(|e| ApiError::bad_request(e.body_text()))?;
    s.lattice.concept(req.concept)?;
    let term = match req.attribute {
        TermInput::Text(text) => parse_term(&text)?,
        TermInput::Parts(term) => {
            term.validate()?;
            term
        }
    };
    let id = s.refine(req.concept, &term)?;
    Ok(Json(s.view(id)?))
}

async fn object_concept(State(s): State<Shared>, Path(name): Path<String>) -> ApiResult<ConceptView> {
    let id = s.object_concept(&name)?;
    Ok(Json(s.view(id)?))
}

#[derive(Deserialize)]
struct AttributesQuery {
    tag: Option<String>,
}

#[derive(Serialize)]
struct AttributeEntry {
    index: usize,
    #[serde(flatten)]
    term: AttributeTerm,
    concept: ConceptId,
}

async fn attributes(State(s): State<Shared>, Query(q): Query<AttributesQuery>) -> Json<Vec<AttributeEntry>> {
    let ctx = s.lattice.context();
    let entries = ctx
        .attributes()
        .iter()
        .enumerate()
        .filter(|(_, t)| q.tag.as_deref().is_none_or(|tag| t.tag == tag))
        .map(|(index, term)| AttributeEntry { index, term: term.clone(), concept: s.lattice.mu()[index] })
        .collect();
    Json(entries)
}
