//! HTTP API over in-memory scene sessions.
//!
//! | method | path | body / query |
//! |---|---|---|
//! | POST | `/sessions` | scene JSON, optional `"sampling"` |
//! | POST | `/sessions/{id}/shapes` | `{"add": shape}` or `{"remove": index}` |
//! | POST | `/sessions/{id}/noise` | `{"fraction": f, "seed": n}` |
//! | POST | `/sessions/{id}/smooth` | `{"radius": r}`, or `null` to disable |
//! | GET | `/sessions/{id}/estimate` | |
//! | GET | `/sessions/{id}/levelset` | `?s=k` |
//! | GET | `/sessions/{id}/transform` | `?kind=bessel&nx&ny&r_step` or `?kind=fourier&directions&r_step` |
//!
//! Every mutation recomputes the session's derived data under the session's
//! write lock, so reads always see a consistent snapshot.

use std::collections::HashMap;
use std::net::SocketAddr;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use axum::extract::{Path, Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;
use tokio::sync::RwLock;
use tower_http::cors::CorsLayer;

use euler_calculus::integrate::integrate_cf;
use euler_calculus::network::{
    dual_levels, estimate_network_dual, level_components, naive_network_estimate, smooth_and_integrate_network,
    LevelBetti,
};
use euler_calculus::scene::{add_noise, sample_network, NetworkSample, Scene, Shape};
use euler_calculus::transforms::{bessel_exact_field, bessel_transform, fourier_exact_field, fourier_field, EvalGrid};

#[derive(Debug, Error)]
pub enum ApiError {
    #[error("unknown session {0}")]
    NotFound(u64),
    #[error("{0}")]
    Unprocessable(String),
    #[error("{0}")]
    BadRequest(String),
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let status = match self {
            ApiError::NotFound(_) => StatusCode::NOT_FOUND,
            ApiError::Unprocessable(_) => StatusCode::UNPROCESSABLE_ENTITY,
            ApiError::BadRequest(_) => StatusCode::BAD_REQUEST,
        };
        (status, Json(json!({ "error": self.to_string() }))).into_response()
    }
}

fn unprocessable(e: impl std::fmt::Display) -> ApiError {
    ApiError::Unprocessable(e.to_string())
}

/// How a session samples its network and rasterizes its ground truth.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Sampling {
    pub nodes: usize,
    /// Communication radius as a fraction of the longer domain side.
    pub comm_radius: f64,
    pub seed: u64,
    pub resolution: usize,
}

impl Default for Sampling {
    fn default() -> Self {
        Sampling { nodes: 3000, comm_radius: 0.04, seed: 0, resolution: 256 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Noise {
    pub fraction: f64,
    #[serde(default)]
    pub seed: u64,
}

/// Values recomputed after every mutation.
#[derive(Debug, Clone)]
struct Derived {
    network: NetworkSample,
    true_integral: i64,
    levels: Vec<LevelBetti>,
    dual_estimate: i64,
    naive_estimate: i64,
    smoothed_estimate: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct Session {
    pub scene: Scene,
    pub sampling: Sampling,
    pub noise: Option<Noise>,
    pub smoothing_radius: Option<f64>,
    derived: Derived,
}

impl Session {
    pub fn new(scene: Scene, sampling: Sampling) -> Result<Self, ApiError> {
        scene.validate().map_err(unprocessable)?;
        let derived = derive(&scene, &sampling, None, None)?;
        Ok(Session { scene, sampling, noise: None, smoothing_radius: None, derived })
    }

    fn refresh(&mut self) -> Result<(), ApiError> {
        self.derived = derive(&self.scene, &self.sampling, self.noise, self.smoothing_radius)?;
        Ok(())
    }

    /// The network readings the estimates are computed from.
    pub fn network(&self) -> &NetworkSample {
        &self.derived.network
    }

    pub fn estimate(&self) -> EstimateReport {
        let d = &self.derived;
        EstimateReport {
            dual_estimate: d.dual_estimate,
            true_integral: d.true_integral,
            per_level_beta0: d.levels.clone(),
            naive_estimate: d.naive_estimate,
            smoothed_estimate: d.smoothed_estimate,
            negative_readings: d.network.readings.iter().filter(|&&r| r < 0).count(),
            noise: self.noise,
            smoothing_radius: self.smoothing_radius,
        }
    }
}

fn derive(scene: &Scene, sampling: &Sampling, noise: Option<Noise>, radius: Option<f64>) -> Result<Derived, ApiError> {
    let [x0, y0, x1, y1] = scene.domain;
    let side = (x1 - x0).max(y1 - y0);
    let clean =
        sample_network(scene, sampling.nodes, sampling.comm_radius * side, sampling.seed).map_err(unprocessable)?;
    let network = match noise {
        Some(n) => add_noise(&clean, n.fraction, n.seed).map_err(unprocessable)?,
        None => clean,
    };
    let raster = scene.try_rasterize(sampling.resolution).map_err(unprocessable)?;
    let counted = network.nonnegative_part();
    Ok(Derived {
        true_integral: integrate_cf(&raster).get(),
        levels: dual_levels(&counted).map_err(unprocessable)?,
        dual_estimate: estimate_network_dual(&counted).map_err(unprocessable)?.get(),
        naive_estimate: naive_network_estimate(&network).map_err(unprocessable)?,
        smoothed_estimate: radius
            .map(|r| smooth_and_integrate_network(&network, r))
            .transpose()
            .map_err(unprocessable)?,
        network,
    })
}

/// Body of `GET /sessions/{id}/estimate`. The dual estimate and level
/// counts use the nonnegative part of the readings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    pub dual_estimate: i64,
    pub true_integral: i64,
    pub per_level_beta0: Vec<LevelBetti>,
    pub naive_estimate: i64,
    pub smoothed_estimate: Option<f64>,
    pub negative_readings: usize,
    pub noise: Option<Noise>,
    pub smoothing_radius: Option<f64>,
}

#[derive(Debug, Default)]
pub struct AppState {
    sessions: RwLock<HashMap<u64, Arc<RwLock<Session>>>>,
    next_id: AtomicU64,
}

type Shared = Arc<AppState>;

impl AppState {
    async fn session(&self, id: u64) -> Result<Arc<RwLock<Session>>, ApiError> {
        self.sessions.read().await.get(&id).cloned().ok_or(ApiError::NotFound(id))
    }
}

pub fn router() -> Router {
    router_with_state(Arc::new(AppState::default()))
}

pub fn router_with_state(state: Shared) -> Router {
    Router::new()
        .route("/sessions", post(create_session))
        .route("/sessions/{id}", get(session_summary))
        .route("/sessions/{id}/shapes", post(edit_shapes))
        .route("/sessions/{id}/noise", post(set_noise))
        .route("/sessions/{id}/smooth", post(set_smoothing))
        .route("/sessions/{id}/estimate", get(estimate))
        .route("/sessions/{id}/levelset", get(levelset))
        .route("/sessions/{id}/transform", get(transform))
        .layer(CorsLayer::permissive())
        .with_state(state)
}

pub async fn serve(addr: SocketAddr) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router()).await
}

fn parse_body<T: for<'de> Deserialize<'de>>(body: &str) -> Result<T, ApiError> {
    serde_json::from_str(body).map_err(|e| ApiError::BadRequest(format!("malformed JSON: {e}")))
}

fn summary(id: u64, s: &Session) -> Value {
    json!({
        "id": id,
        "scene": s.scene,
        "sampling": s.sampling,
        "noise": s.noise,
        "smoothing_radius": s.smoothing_radius,
    })
}

#[derive(Debug, Deserialize)]
struct CreateSession {
    #[serde(flatten)]
    scene: Scene,
    #[serde(default)]
    sampling: Sampling,
}

async fn create_session(State(state): State<Shared>, body: String) -> Result<(StatusCode, Json<Value>), ApiError> {
    let req: CreateSession = parse_body(&body)?;
    if req.sampling.nodes == 0 || req.sampling.resolution == 0 || !(req.sampling.comm_radius > 0.0) {
        return Err(unprocessable("sampling needs positive nodes, resolution and comm_radius"));
    }
    let session = Session::new(req.scene, req.sampling)?;
    let id = state.next_id.fetch_add(1, Ordering::Relaxed) + 1;
    let body = summary(id, &session);
    state.sessions.write().await.insert(id, Arc::new(RwLock::new(session)));
    Ok((StatusCode::CREATED, Json(body)))
}

async fn session_summary(State(state): State<Shared>, Path(id): Path<u64>) -> Result<Json<Value>, ApiError> {
    let session = state.session(id).await?;
    let s = session.read().await;
    Ok(Json(summary(id, &s)))
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "lowercase")]
enum ShapeEdit {
    Add(Shape),
    Remove(usize),
}

/// Applies `edit` to a copy of the session, committing only on success.
async fn mutate(
    state: &AppState,
    id: u64,
    edit: impl FnOnce(&mut Session) -> Result<(), ApiError>,
) -> Result<Json<Value>, ApiError> {
    let session = state.session(id).await?;
    let mut guard = session.write().await;
    let mut next = guard.clone();
    edit(&mut next)?;
    next.refresh()?;
    *guard = next;
    Ok(Json(summary(id, &guard)))
}

async fn edit_shapes(State(state): State<Shared>, Path(id): Path<u64>, body: String) -> Result<Json<Value>, ApiError> {
    state.session(id).await?;
    let edit: ShapeEdit = parse_body(&body)?;
    mutate(&state, id, |s| match edit {
        ShapeEdit::Add(shape) => s.scene.add_shape(shape).map_err(unprocessable),
        ShapeEdit::Remove(i) if i < s.scene.shapes.len() => {
            s.scene.shapes.remove(i);
            Ok(())
        }
        ShapeEdit::Remove(i) => Err(unprocessable(format!("no shape {i}"))),
    })
    .await
}

async fn set_noise(State(state): State<Shared>, Path(id): Path<u64>, body: String) -> Result<Json<Value>, ApiError> {
    state.session(id).await?;
    let noise: Noise = parse_body(&body)?;
    if !(0.0..=1.0).contains(&noise.fraction) {
        return Err(unprocessable(format!("noise fraction {} is outside [0, 1]", noise.fraction)));
    }
    mutate(&state, id, |s| {
        s.noise = (noise.fraction > 0.0).then_some(noise);
        Ok(())
    })
    .await
}

#[derive(Debug, Deserialize)]
struct Smoothing {
    radius: Option<f64>,
}

async fn set_smoothing(
    State(state): State<Shared>,
    Path(id): Path<u64>,
    body: String,
) -> Result<Json<Value>, ApiError> {
    state.session(id).await?;
    let req: Smoothing = parse_body(&body)?;
    if let Some(r) = req.radius {
        if !(r > 0.0 && r.is_finite()) {
            return Err(unprocessable("smoothing radius must be positive and finite"));
        }
    }
    mutate(&state, id, |s| {
        s.smoothing_radius = req.radius;
        Ok(())
    })
    .await
}

async fn estimate(State(state): State<Shared>, Path(id): Path<u64>) -> Result<Json<EstimateReport>, ApiError> {
    let session = state.session(id).await?;
    let s = session.read().await;
    Ok(Json(s.estimate()))
}

#[derive(Debug, Deserialize)]
struct LevelQuery {
    s: i64,
}

/// Components of `{h > s}` and `{h ≤ s}` as point features.
async fn levelset(
    State(state): State<Shared>,
    Path(id): Path<u64>,
    Query(q): Query<LevelQuery>,
) -> Result<Json<Value>, ApiError> {
    let session = state.session(id).await?;
    let s = session.read().await;
    let network = s.network().nonnegative_part();
    let comps = level_components(&network, q.s).map_err(unprocessable)?;
    let point = |v: usize| network.nodes[v].expect("sampled nodes have coordinates");
    let mut features = Vec::new();
    for (side, groups) in [("upper", &comps.upper), ("lower", &comps.lower)] {
        for (label, nodes) in groups.iter().enumerate() {
            let exterior = side == "lower" && comps.exterior == Some(label);
            features.push(json!({
                "type": "Feature",
                "geometry": { "type": "MultiPoint", "coordinates": nodes.iter().map(|&v| point(v)).collect::<Vec<_>>() },
                "properties": { "side": side, "label": label, "nodes": nodes, "exterior": exterior },
            }));
        }
    }
    Ok(Json(json!({
        "type": "FeatureCollection",
        "level": q.s,
        "beta0_upper": comps.upper.len(),
        "beta0_lower": comps.lower.len() + usize::from(comps.exterior.is_none()),
        "features": features,
    })))
}

#[derive(Debug, Deserialize)]
struct TransformQuery {
    kind: String,
    nx: Option<usize>,
    ny: Option<usize>,
    directions: Option<usize>,
    r_step: Option<f64>,
}

async fn transform(
    State(state): State<Shared>,
    Path(id): Path<u64>,
    Query(q): Query<TransformQuery>,
) -> Result<Json<Value>, ApiError> {
    let session = state.session(id).await?;
    let s = session.read().await;
    match q.kind.as_str() {
        "bessel" => {
            let grid = EvalGrid::new(s.scene.domain, q.nx.unwrap_or(32), q.ny.unwrap_or(32)).map_err(unprocessable)?;
            let field = match q.r_step {
                Some(step) => bessel_transform(&s.scene, &grid, step).map_err(unprocessable)?,
                None => bessel_exact_field(&s.scene, &grid),
            };
            Ok(Json(json!({ "kind": "bessel", "field": field })))
        }
        "fourier" => {
            let n = q.directions.unwrap_or(90);
            let values: Vec<(f64, f64)> = match q.r_step {
                Some(step) => fourier_field(&s.scene, n, step).map_err(unprocessable)?,
                None => fourier_exact_field(&s.scene, n).map_err(unprocessable)?,
            };
            let rows: Vec<Value> = values.iter().map(|(a, v)| json!({ "angle": a, "value": v })).collect();
            Ok(Json(json!({ "kind": "fourier", "directions": rows })))
        }
        other => Err(ApiError::BadRequest(format!("unknown transform kind {other:?}; expected bessel or fourier"))),
    }
}
