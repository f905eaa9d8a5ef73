//! HTTP service exposing code construction, validation, distance search,
//! and simulation jobs over JSON.
//!
//! Construction, validation, and distance answer synchronously (off the
//! async runtime via blocking tasks). Simulations are jobs: submit
//! returns an id, status is polled, the CSV is fetched once done, and
//! cancellation is cooperative between trial batches.

use std::collections::HashMap;
use std::net::SocketAddr;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use axum::extract::{Path, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use tokio::task::JoinHandle;

use qldpc::css::{ConstructionParams, CssCode};
use qldpc::descriptor;
use qldpc::error::Error as CoreError;
use qldpc::fg::GeometryKind;
use qldpc::presets;
use qldpc::sim::{
    self, DecoderKind, PointResult, SimulationSpec, SuccessMode, SweepObserver,
};
use qldpc::validation::validate_code;

use qldpc_api::*;

pub struct AppState {
    next_job: AtomicU64,
    jobs: Mutex<HashMap<u64, JobEntry>>,
}

struct JobEntry {
    state: JobState,
    progress: JobProgress,
    points: Vec<PointRow>,
    error: Option<String>,
    csv: Option<String>,
    cancel: Arc<AtomicBool>,
}

impl AppState {
    pub fn shared() -> Arc<AppState> {
        Arc::new(AppState {
            next_job: AtomicU64::new(1),
            jobs: Mutex::new(HashMap::new()),
        })
    }

    fn snapshot(&self, job_id: u64) -> Option<JobStatus> {
        let jobs = self.jobs.lock().unwrap();
        jobs.get(&job_id).map(|entry| JobStatus {
            job_id,
            state: entry.state,
            progress: entry.progress,
            points: entry.points.clone(),
            error: entry.error.clone(),
        })
    }
}

enum ApiError {
    BadRequest(String),
    NotFound(String),
    Internal(String),
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let (status, message) = match self {
            ApiError::BadRequest(m) => (StatusCode::BAD_REQUEST, m),
            ApiError::NotFound(m) => (StatusCode::NOT_FOUND, m),
            ApiError::Internal(m) => (StatusCode::INTERNAL_SERVER_ERROR, m),
        };
        (status, Json(ErrorBody { error: message })).into_response()
    }
}

fn bad_request(err: CoreError) -> ApiError {
    ApiError::BadRequest(err.to_string())
}

/// Build the code named by a source, together with its default CSV label.
fn resolve_source(source: &CodeSource) -> Result<(CssCode, String), CoreError> {
    match source {
        CodeSource::Preset { name } => {
            let preset = presets::resolve(name)?;
            let code = presets::build(name)?;
            Ok((code, preset.name.to_string()))
        }
        CodeSource::Descriptor {
            descriptor_toml,
            hx_alist,
            hz_alist,
        } => {
            let code = descriptor::load_code_from_parts(descriptor_toml, hx_alist, hz_alist)?;
            Ok((code, "custom".to_string()))
        }
    }
}

async fn health() -> Json<HealthResponse> {
    Json(HealthResponse {
        status: "ok".into(),
        version: env!("CARGO_PKG_VERSION").into(),
    })
}

/// Translate a construct request into construction parameters, the claimed
/// distance (when the parameters match a published row), and a file stem.
fn construction_plan(
    req: &ConstructRequest,
) -> Result<(ConstructionParams, Option<usize>, String), ApiError> {
    if let Some(name) = &req.preset {
        if req.family.is_some() || req.p.is_some() || req.sigma.is_some() || req.s.is_some() {
            return Err(ApiError::BadRequest(
                "give either a preset or explicit family parameters, not both".into(),
            ));
        }
        let preset = presets::resolve(name).map_err(bad_request)?;
        let basename = req.basename.clone().unwrap_or_else(|| preset.name.to_string());
        return Ok((preset.params, preset.claimed_d, basename));
    }
    let family = req
        .family
        .as_deref()
        .ok_or_else(|| ApiError::BadRequest("either preset or family is required".into()))?;
    let params = match family {
        "qc" => {
            let (Some(p), Some(sigma)) = (req.p, req.sigma) else {
                return Err(ApiError::BadRequest(
                    "family 'qc' requires p and sigma".into(),
                ));
            };
            if req.s.is_some() {
                return Err(ApiError::BadRequest("family 'qc' does not take s".into()));
            }
            ConstructionParams::QuasiCyclic { p, sigma }
        }
        "eg" | "pg" => {
            let Some(s) = req.s else {
                return Err(ApiError::BadRequest(format!(
                    "family '{family}' requires s"
                )));
            };
            if req.p.is_some() || req.sigma.is_some() {
                return Err(ApiError::BadRequest(format!(
                    "family '{family}' does not take p or sigma"
                )));
            }
            let kind = if family == "eg" {
                GeometryKind::Euclidean
            } else {
                GeometryKind::Projective
            };
            ConstructionParams::Geometry { kind, s }
        }
        other => {
            return Err(ApiError::BadRequest(format!(
                "unknown family '{other}' (expected qc, eg, or pg)"
            )))
        }
    };
    // Adopt the published distance and name when the parameters match a
    // preset row.
    let matching = presets::PRESETS.iter().find(|preset| preset.params == params);
    let claimed_d = matching.and_then(|preset| preset.claimed_d);
    let basename = req.basename.clone().unwrap_or_else(|| {
        matching.map(|preset| preset.name.to_string()).unwrap_or_else(|| match params {
            ConstructionParams::QuasiCyclic { p, sigma } => format!("qc-p{p}-sigma{sigma}"),
            ConstructionParams::Geometry { kind, s } => {
                format!("{}-s{s}", if kind == GeometryKind::Euclidean { "eg" } else { "pg" })
            }
            ConstructionParams::Explicit => "explicit".to_string(),
        })
    });
    Ok((params, claimed_d, basename))
}

async fn construct(
    Json(req): Json<ConstructRequest>,
) -> Result<Json<ConstructResponse>, ApiError> {
    let (params, claimed_d, basename) = construction_plan(&req)?;
    let result = tokio::task::spawn_blocking(move || {
        let code = presets::build_from_params(params, claimed_d)?;
        let parts = descriptor::render_code(&code, &basename)?;
        Ok::<_, CoreError>((code, parts))
    })
    .await
    .map_err(|e| ApiError::Internal(e.to_string()))?;
    let (code, parts) = result.map_err(bad_request)?;
    Ok(Json(ConstructResponse {
        family: code.family().to_string(),
        n: code.n(),
        k: code.k(),
        claimed_d: code.claimed_d(),
        basename: parts.basename.clone(),
        descriptor_toml: parts.descriptor_toml,
        hx_alist: parts.hx_alist,
        hz_alist: parts.hz_alist,
    }))
}

async fn validate(
    Json(req): Json<ValidateRequest>,
) -> Result<Json<ValidateResponse>, ApiError> {
    if let CodeSource::Preset { name } = &req.source {
        presets::resolve(name).map_err(bad_request)?;
    }
    // Corrupt descriptors or unknown presets are request errors; matrices
    // that parse but fail re-validation are a (negative) verdict.
    let loaded = tokio::task::spawn_blocking(move || match &req.source {
        CodeSource::Preset { name } => presets::build(name).map_err(|e| (true, e)),
        CodeSource::Descriptor {
            descriptor_toml,
            hx_alist,
            hz_alist,
        } => descriptor::parse_parts(descriptor_toml, hx_alist, hz_alist)
            .map_err(|e| (true, e))
            .and_then(|parsed| parsed.assemble().map_err(|e| (false, e))),
    })
    .await
    .map_err(|e| ApiError::Internal(e.to_string()))?;
    let response = match loaded {
        Ok(code) => {
            let report = validate_code(&code);
            let four_cycles = code.four_cycle_localization();
            ValidateResponse {
                ok: report.all_passed(),
                checks: report
                    .checks
                    .into_iter()
                    .map(|c| CheckReport {
                        name: c.name.to_string(),
                        passed: c.passed,
                        detail: c.detail,
                    })
                    .collect(),
                residual_pairs: four_cycles
                    .residual
                    .iter()
                    .map(|pair| ResidualPairReport {
                        row_a: pair.row_a,
                        row_b: pair.row_b,
                        columns: pair.columns.clone(),
                    })
                    .collect(),
                family: Some(code.family().to_string()),
                n: Some(code.n()),
                k: Some(code.k()),
            }
        }
        Err((true, err)) => return Err(bad_request(err)),
        Err((false, err)) => ValidateResponse {
            ok: false,
            checks: vec![CheckReport {
                name: "load".into(),
                passed: false,
                detail: err.to_string(),
            }],
            residual_pairs: Vec::new(),
            family: None,
            n: None,
            k: None,
        },
    };
    Ok(Json(response))
}

async fn distance(
    Json(req): Json<DistanceRequest>,
) -> Result<Json<DistanceResponse>, ApiError> {
    let w_max = req.w_max;
    if w_max == 0 {
        return Err(ApiError::BadRequest("w_max must be at least 1".into()));
    }
    let result = tokio::task::spawn_blocking(move || {
        let (code, _) = resolve_source(&req.source)?;
        let found = qldpc::distance::bounded_distance_search(&code, w_max)?;
        Ok::<_, CoreError>((found, code.claimed_d()))
    })
    .await
    .map_err(|e| ApiError::Internal(e.to_string()))?;
    let (found, claimed_d) = result.map_err(bad_request)?;
    Ok(Json(DistanceResponse {
        found,
        w_max,
        claimed_d,
    }))
}

/// Bridges sweep callbacks into the shared job table.
struct JobObserver {
    state: Arc<AppState>,
    job_id: u64,
    cancel: Arc<AtomicBool>,
}

impl JobObserver {
    fn update(&self, f: impl FnOnce(&mut JobEntry)) {
        let mut jobs = self.state.jobs.lock().unwrap();
        if let Some(entry) = jobs.get_mut(&self.job_id) {
            f(entry);
        }
    }
}

impl SweepObserver for JobObserver {
    fn progress(&self, eps_index: usize, trials: u64, frame_errors: u64) {
        self.update(|entry| {
            entry.progress.eps_index = eps_index;
            entry.progress.trials = trials;
            entry.progress.frame_errors = frame_errors;
        });
    }

    fn point_done(&self, eps_index: usize, result: &PointResult) {
        let row = point_row(result);
        self.update(|entry| {
            entry.points.push(row);
            entry.progress.points_done = eps_index + 1;
        });
    }

    fn cancelled(&self) -> bool {
        self.cancel.load(Ordering::Relaxed)
    }
}

fn point_row(p: &PointResult) -> PointRow {
    PointRow {
        epsilon: p.epsilon,
        trials: p.trials,
        frame_errors: p.frame_errors,
        fer: p.fer,
        ci95_low: p.ci95_low,
        ci95_high: p.ci95_high,
        zero_frame_errors: p.zero_frame_errors(),
    }
}

fn spec_from_request(req: &SimulationRequest) -> Result<SimulationSpec, CoreError> {
    let spec = SimulationSpec {
        epsilons: req.epsilons.clone(),
        decoder: DecoderKind::parse(&req.decoder)?,
        success_mode: SuccessMode::parse(&req.success_mode)?,
        min_frame_errors: req.min_frame_errors,
        max_trials: req.max_trials,
        iterations: req.iterations,
        master_seed: req.master_seed,
    };
    spec.validate()?;
    Ok(spec)
}

async fn submit_simulation(
    State(state): State<Arc<AppState>>,
    Json(req): Json<SimulationRequest>,
) -> Result<Json<JobCreated>, ApiError> {
    let spec = spec_from_request(&req).map_err(bad_request)?;
    if let CodeSource::Preset { name } = &req.source {
        presets::resolve(name).map_err(bad_request)?;
    }
    let job_id = state.next_job.fetch_add(1, Ordering::Relaxed);
    let cancel = Arc::new(AtomicBool::new(false));
    {
        let mut jobs = state.jobs.lock().unwrap();
        jobs.insert(
            job_id,
            JobEntry {
                state: JobState::Queued,
                progress: JobProgress {
                    total_points: spec.epsilons.len(),
                    ..JobProgress::default()
                },
                points: Vec::new(),
                error: None,
                csv: None,
                cancel: cancel.clone(),
            },
        );
    }
    let worker_state = state.clone();
    tokio::task::spawn_blocking(move || {
        run_job(worker_state, job_id, req, spec, cancel);
    });
    Ok(Json(JobCreated { job_id }))
}

fn run_job(
    state: Arc<AppState>,
    job_id: u64,
    req: SimulationRequest,
    spec: SimulationSpec,
    cancel: Arc<AtomicBool>,
) {
    let observer = JobObserver {
        state: state.clone(),
        job_id,
        cancel,
    };
    let set_state = |s: JobState, error: Option<String>, csv: Option<String>| {
        observer.update(|entry| {
            entry.state = s;
            entry.error = error;
            entry.csv = csv;
        });
    };

    let (code, default_label) = match resolve_source(&req.source) {
        Ok(pair) => pair,
        Err(err) => {
            tracing::info!(job_id, error = %err, "simulation job failed to resolve its code");
            set_state(JobState::Failed, Some(err.to_string()), None);
            return;
        }
    };
    let label = req.label.clone().unwrap_or(default_label);
    set_state(JobState::Running, None, None);
    tracing::info!(job_id, code = %label, decoder = spec.decoder.as_str(), "simulation job started");

    match sim::run_sweep(&code, &spec, &observer) {
        Ok(points) => {
            let csv = sim::csv_string(&label, &spec, &points);
            observer.update(|entry| {
                entry.state = JobState::Done;
                entry.points = points.iter().map(point_row).collect();
                entry.progress.points_done = points.len();
                entry.csv = Some(csv);
            });
            tracing::info!(job_id, "simulation job done");
        }
        Err(CoreError::Cancelled) => {
            tracing::info!(job_id, "simulation job cancelled");
            set_state(JobState::Cancelled, None, None);
        }
        Err(err) => {
            tracing::info!(job_id, error = %err, "simulation job failed");
            set_state(JobState::Failed, Some(err.to_string()), None);
        }
    }
}

async fn job_status(
    State(state): State<Arc<AppState>>,
    Path(job_id): Path<u64>,
) -> Result<Json<JobStatus>, ApiError> {
    state
        .snapshot(job_id)
        .map(Json)
        .ok_or_else(|| ApiError::NotFound(format!("no job {job_id}")))
}

async fn job_csv(
    State(state): State<Arc<AppState>>,
    Path(job_id): Path<u64>,
) -> Result<Response, ApiError> {
    let jobs = state.jobs.lock().unwrap();
    let entry = jobs
        .get(&job_id)
        .ok_or_else(|| ApiError::NotFound(format!("no job {job_id}")))?;
    let csv = entry
        .csv
        .clone()
        .ok_or_else(|| ApiError::NotFound(format!("job {job_id} has no csv yet")))?;
    Ok(([(header::CONTENT_TYPE, "text/csv")], csv).into_response())
}

async fn cancel_job(
    State(state): State<Arc<AppState>>,
    Path(job_id): Path<u64>,
) -> Result<Json<JobStatus>, ApiError> {
    {
        let mut jobs = state.jobs.lock().unwrap();
        let entry = jobs
            .get_mut(&job_id)
            .ok_or_else(|| ApiError::NotFound(format!("no job {job_id}")))?;
        entry.cancel.store(true, Ordering::Relaxed);
        // A job that never started can settle immediately.
        if entry.state == JobState::Queued {
            entry.state = JobState::Cancelled;
        }
    }
    Ok(Json(state.snapshot(job_id).expect("entry exists")))
}

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/api/v1/health", get(health))
        .route("/api/v1/codes/construct", post(construct))
        .route("/api/v1/codes/validate", post(validate))
        .route("/api/v1/codes/distance", post(distance))
        .route("/api/v1/simulations", post(submit_simulation))
        .route("/api/v1/simulations/{id}", get(job_status))
        .route("/api/v1/simulations/{id}/csv", get(job_csv))
        .route("/api/v1/simulations/{id}/cancel", post(cancel_job))
        .with_state(state)
}

/// Bind and serve in a background task; returns the bound address (useful
/// with port 0) and the server handle.
pub async fn spawn_server(addr: SocketAddr) -> std::io::Result<(SocketAddr, JoinHandle<()>)> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    let local = listener.local_addr()?;
    let app = router(AppState::shared());
    let handle = tokio::spawn(async move {
        if let Err(err) = axum::serve(listener, app).await {
            tracing::error!(%err, "server terminated");
        }
    });
    Ok((local, handle))
}

/// Serve until the future is dropped or the process ends.
pub async fn run(addr: SocketAddr) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    tracing::info!(addr = %listener.local_addr()?, "listening");
    let app = router(AppState::shared());
    axum::serve(listener, app).await
}
