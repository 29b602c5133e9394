//! JSON API over the shared engine.

use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{json, Value};
use tower_http::services::ServeDir;

use crux_core::format::ParseErrorCode;
use crux_core::format::json::{check_route, check_wall, decode, from_json_object, to_json_object, RouteJson, WallJson};
use crux_core::generator::GenerationConfig;
use crux_core::grading::TNormKind;
use crux_core::{ClimberProfile, Route, Wall};

use crate::corpus::{CorpusStore, Snapshot};
use crate::engine::{Engine, GradeOptions};
use crate::error::{EngineError, Kind};
use crate::jobs::JobManager;

#[derive(Clone)]
pub struct AppState {
    pub engine: Arc<Engine>,
    pub store: Arc<CorpusStore>,
    pub jobs: Arc<JobManager>,
}

impl AppState {
    pub fn new(engine: Engine, store: CorpusStore) -> Self {
        let jobs = JobManager::new(engine.settings().max_jobs);
        AppState { engine: Arc::new(engine), store: Arc::new(store), jobs: Arc::new(jobs) }
    }
}

impl IntoResponse for EngineError {
    fn into_response(self) -> Response {
        let status = StatusCode::from_u16(self.kind.status()).unwrap_or(StatusCode::INTERNAL_SERVER_ERROR);
        (status, Json(self.body())).into_response()
    }
}

type Reply = Result<Response, EngineError>;

fn ok<T: serde::Serialize>(value: T) -> Reply {
    Ok(Json(value).into_response())
}

fn parse_body(body: &Bytes) -> Result<Value, EngineError> {
    serde_json::from_slice(body).map_err(|e| EngineError::malformed(e.to_string()))
}

fn decode_body<T: DeserializeOwned>(body: &Bytes) -> Result<T, EngineError> {
    decode(&parse_body(body)?).map_err(|e| EngineError::invalid(vec![e]))
}

/// A route given inline or by the name of a stored route.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum RouteInput {
    Name(String),
    Object(RouteJson),
}

/// Resolves a route and its wall. Inline routes live on the given wall,
/// or on the working wall when none is given.
fn resolve(snap: &Snapshot, route: RouteInput, wall: Option<WallJson>) -> Result<(Route, Wall), EngineError> {
    match route {
        RouteInput::Name(name) => snap.find(&name).ok_or_else(|| EngineError::not_found(format!("route `{name}`"))),
        RouteInput::Object(r) => {
            let route = Route::from(r);
            let (wall, prefix) = match wall {
                Some(w) => (Wall::from(w), "wall"),
                None => (snap.working.wall.clone(), "working wall"),
            };
            let mut issues = check_wall(&wall, prefix);
            issues.extend(check_route(&route, &wall, "route"));
            if issues.is_empty() {
                Ok((route, wall))
            } else {
                Err(EngineError::invalid(issues))
            }
        }
    }
}

/// Runs engine work off the async executor.
async fn blocking<T: Send + 'static>(f: impl FnOnce() -> Result<T, EngineError> + Send + 'static) -> Result<T, EngineError> {
    tokio::task::spawn_blocking(f).await.map_err(EngineError::internal)?
}

async fn get_wall(State(app): State<AppState>) -> Reply {
    let snap = app.store.snapshot();
    ok(to_json_object(&snap.working.wall, &snap.working.routes))
}

/// Accepts a whole document `{wall, routes}` or a bare wall object.
async fn put_wall(State(app): State<AppState>, body: Bytes) -> Reply {
    let value = parse_body(&body)?;
    let doc_value = if value.get("wall").is_some() { value } else { json!({ "wall": value }) };
    let doc = from_json_object(&doc_value).map_err(EngineError::invalid)?;
    let store = app.store.clone();
    let snap = blocking(move || store.put_working(doc)).await?;
    ok(to_json_object(&snap.working.wall, &snap.working.routes))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BetaRequest {
    route: RouteInput,
    #[serde(default)]
    wall: Option<WallJson>,
    #[serde(default)]
    climber: Option<ClimberProfile>,
}

async fn post_beta(State(app): State<AppState>, body: Bytes) -> Reply {
    let req: BetaRequest = decode_body(&body)?;
    let (route, wall) = resolve(&app.store.snapshot(), req.route, req.wall)?;
    let engine = app.engine.clone();
    ok(blocking(move || engine.beta(&route, &wall, req.climber.as_ref())).await?)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GradeRequest {
    route: RouteInput,
    #[serde(default)]
    wall: Option<WallJson>,
    #[serde(default)]
    tnorm: Option<TNormKind>,
    #[serde(default)]
    threshold: Option<f64>,
    #[serde(default)]
    seed: Option<u64>,
}

async fn post_grade(State(app): State<AppState>, body: Bytes) -> Reply {
    let req: GradeRequest = decode_body(&body)?;
    let snap = app.store.snapshot();
    let (route, wall) = resolve(&snap, req.route, req.wall)?;
    let engine = app.engine.clone();
    let options = GradeOptions { tnorm: req.tnorm, threshold: req.threshold, seed: req.seed };
    ok(blocking(move || engine.grade(&route, &wall, &snap.grade_sets(), options)).await?)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct VaryRequest {
    route: RouteInput,
    #[serde(default)]
    wall: Option<WallJson>,
    intensity: f64,
    #[serde(default)]
    seed: u64,
}

async fn post_vary(State(app): State<AppState>, body: Bytes) -> Reply {
    let req: VaryRequest = decode_body(&body)?;
    let (route, wall) = resolve(&app.store.snapshot(), req.route, req.wall)?;
    let engine = app.engine.clone();
    ok(blocking(move || engine.vary(&route, &wall, req.intensity, req.seed)).await?)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AscentRequest {
    route_name: String,
    #[serde(default = "one")]
    increment: u32,
}

fn one() -> u32 {
    1
}

async fn post_ascents(State(app): State<AppState>, body: Bytes) -> Reply {
    let req: AscentRequest = decode_body(&body)?;
    if req.increment == 0 {
        return Err(EngineError::new(Kind::Invalid, "RANGE", "increment must be at least 1"));
    }
    let store = app.store.clone();
    let threshold = app.engine.settings().lock_threshold;
    let route = blocking(move || store.record_ascent(&req.route_name, req.increment, threshold)).await?;
    ok(json!({
        "route_name": route.name,
        "exposure_count": route.exposure_count,
        "grade_locked": route.grade_locked,
    }))
}

/// Overlays the request's fields on the configured generation defaults.
fn generation_config(defaults: &GenerationConfig, mut body: serde_json::Map<String, Value>) -> Result<GenerationConfig, EngineError> {
    let mut merged = match serde_json::to_value(defaults).expect("config serializes") {
        Value::Object(m) => m,
        _ => unreachable!("config is an object"),
    };
    for key in ["wall", "seed_route"] {
        body.remove(key);
    }
    for (k, v) in body {
        if !merged.contains_key(&k) {
            return Err(EngineError::field(ParseErrorCode::UnknownKeyword, format!("$.{k}: unknown field")));
        }
        merged.insert(k, v);
    }
    decode(&Value::Object(merged)).map_err(|e| EngineError::invalid(vec![e]))
}

#[derive(Deserialize)]
struct GenerateTargets {
    #[serde(default)]
    wall: Option<WallJson>,
    #[serde(default)]
    seed_route: Option<RouteInput>,
}

async fn post_generate(State(app): State<AppState>, body: Bytes) -> Reply {
    let value = parse_body(&body)?;
    let Value::Object(fields) = value else {
        return Err(EngineError::field(ParseErrorCode::Arity, "$: expected an object"));
    };
    let targets: GenerateTargets = decode(&Value::Object(fields.clone())).map_err(|e| EngineError::invalid(vec![e]))?;
    let config = generation_config(&app.engine.settings().generation, fields)?;
    let snap = app.store.snapshot();
    let (seed_route, wall) = match targets.seed_route {
        Some(r) => {
            let (route, wall) = resolve(&snap, r, targets.wall)?;
            (Some(route), wall)
        }
        None => {
            let wall = targets.wall.map(Wall::from).unwrap_or_else(|| snap.working.wall.clone());
            let issues = check_wall(&wall, "wall");
            if !issues.is_empty() {
                return Err(EngineError::invalid(issues));
            }
            (None, wall)
        }
    };
    let engine = app.engine.clone();
    let total = config.max_iterations;
    let job = app.jobs.submit(total, move |job| {
        let mut progress = |i: usize, best: f64| job.report(i, best);
        let out = engine.generate(&wall, seed_route.as_ref(), &config, &snap.grade_sets(), Some(&mut progress), Some(job.cancel_flag()))?;
        Ok(serde_json::to_value(out).expect("result serializes"))
    });
    Ok((StatusCode::ACCEPTED, Json(json!({ "job_id": job.id, "status": job.status() }))).into_response())
}

async fn get_job(State(app): State<AppState>, Path(id): Path<u64>) -> Reply {
    let job = app.jobs.get(id).ok_or_else(|| EngineError::not_found(format!("job {id}")))?;
    ok(job.view())
}

async fn cancel_job(State(app): State<AppState>, Path(id): Path<u64>) -> Reply {
    let job = app.jobs.get(id).ok_or_else(|| EngineError::not_found(format!("job {id}")))?;
    job.cancel();
    Ok((StatusCode::ACCEPTED, Json(job.view())).into_response())
}

async fn not_found() -> EngineError {
    EngineError::not_found("no such endpoint")
}

pub fn router(state: AppState, ui: Option<PathBuf>) -> Router {
    let api = Router::new()
        .route("/api/wall", get(get_wall).put(put_wall))
        .route("/api/beta", post(post_beta))
        .route("/api/grade", post(post_grade))
        .route("/api/vary", post(post_vary))
        .route("/api/ascents", post(post_ascents))
        .route("/api/generate", post(post_generate))
        .route("/api/jobs/{id}", get(get_job).delete(cancel_job))
        .route("/api/{*rest}", axum::routing::any(not_found));
    let app = match ui {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api.fallback(not_found),
    };
    app.with_state(state)
}

/// Binds `addr`, reports the bound address through `on_bind`, and serves
/// until the process is stopped.
pub async fn serve(state: AppState, addr: SocketAddr, ui: Option<PathBuf>, on_bind: impl FnOnce(SocketAddr)) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    on_bind(listener.local_addr()?);
    axum::serve(listener, router(state, ui)).await
}
