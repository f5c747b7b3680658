//! HTTP/JSON front end for point clouds and concentration runs.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use axum::body::Bytes;
use axum::extract::State;
use axum::http::{header, HeaderValue, Method, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::Router;
use serde::{Deserialize, Serialize};
use tower_http::cors::{Any, CorsLayer};
use trotter_core::experiments::{concentration_experiment, generate_point_cloud};
use trotter_core::linalg::MatrixJson;
use trotter_core::words::word_count_u128;
use trotter_core::{Error, MatrixTuple, Mode};

use crate::output::report_json;

pub const MAX_DIM: usize = 4;
pub const MAX_N: usize = 10;
pub const MAX_POINTS: u128 = 200_000;
pub const COMPUTE_TIME_HEADER: &str = "x-compute-time-ms";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RequestMode {
    Exhaustive,
    Sample,
}

#[derive(Debug, Clone, Deserialize)]
pub struct CloudRequest {
    pub matrices: Vec<MatrixJson>,
    pub n: usize,
    #[serde(default = "default_mode")]
    pub mode: RequestMode,
    pub count: Option<usize>,
    pub seed: Option<u64>,
}

fn default_mode() -> RequestMode {
    RequestMode::Exhaustive
}

#[derive(Debug, Clone, Deserialize)]
pub struct ConcentrationRequest {
    #[serde(flatten)]
    pub cloud: CloudRequest,
    pub threshold: Option<f64>,
}

/// Machine-readable rejection: `reason` is one of `cap`, `shape`,
/// `finiteness` or `invalid`.
#[derive(Debug, Clone, Serialize)]
pub struct Rejection {
    pub reason: &'static str,
    pub message: String,
    /// Number of points the request would have produced, when known.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub estimate: Option<String>,
}

#[derive(Debug)]
pub enum ApiError {
    Rejected(Rejection),
    Internal(String),
}

fn reject(reason: &'static str, message: impl Into<String>) -> ApiError {
    ApiError::Rejected(Rejection {
        reason,
        message: message.into(),
        estimate: None,
    })
}

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        let reason = match e {
            Error::Shape(_) | Error::UnsupportedAlphabet { .. } => "shape",
            Error::NonFinite { .. } | Error::Numerical(_) => "finiteness",
            Error::SizeLimit { .. } | Error::Guard(_) => "cap",
            Error::Range(_) | Error::Domain(_) => "invalid",
            _ => return ApiError::Internal(e.to_string()),
        };
        reject(reason, e.to_string())
    }
}

static ERROR_COUNTER: AtomicU64 = AtomicU64::new(0);

fn opaque_id() -> String {
    let nanos = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map_or(0, |d| d.as_nanos() as u64);
    let k = ERROR_COUNTER.fetch_add(1, Ordering::Relaxed);
    format!(
        "{:016x}",
        nanos.rotate_left(17) ^ k.wrapping_mul(0x9e37_79b9_7f4a_7c15)
    )
}

fn json_response(status: StatusCode, body: String) -> Response {
    (
        status,
        [(
            header::CONTENT_TYPE,
            HeaderValue::from_static("application/json"),
        )],
        body,
    )
        .into_response()
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        match self {
            ApiError::Rejected(r) => json_response(StatusCode::BAD_REQUEST, report_json(&r)),
            ApiError::Internal(detail) => {
                let id = opaque_id();
                eprintln!("internal error {id}: {detail}");
                json_response(
                    StatusCode::INTERNAL_SERVER_ERROR,
                    report_json(&serde_json::json!({ "reason": "internal", "id": id })),
                )
            }
        }
    }
}

fn parse_body<T: for<'de> Deserialize<'de>>(body: &[u8]) -> Result<T, ApiError> {
    serde_json::from_slice(body).map_err(|e| {
        let msg = e.to_string();
        if msg.contains("out of range") {
            reject("finiteness", msg)
        } else {
            reject("invalid", msg)
        }
    })
}

/// Checks a request against the service caps and builds the inputs of the
/// computation.
pub fn validate(req: &CloudRequest) -> Result<(MatrixTuple, Mode), ApiError> {
    if req.matrices.len() < 2 {
        return Err(reject(
            "shape",
            format!("need at least two matrices, got {}", req.matrices.len()),
        ));
    }
    if let Some(m) = req.matrices.iter().find(|m| m.d > MAX_DIM) {
        return Err(reject(
            "cap",
            format!("matrix dimension {} exceeds {MAX_DIM}", m.d),
        ));
    }
    let ms = req
        .matrices
        .iter()
        .map(MatrixJson::to_matrix)
        .collect::<Result<Vec<_>, _>>()?;
    let t = MatrixTuple::new(ms)?;
    if !(1..=MAX_N).contains(&req.n) {
        return Err(reject(
            "cap",
            format!("n = {} must lie in 1..={MAX_N}", req.n),
        ));
    }
    let mode = match req.mode {
        RequestMode::Exhaustive => {
            let count = word_count_u128(req.n, t.len());
            if count.is_none_or(|c| c > MAX_POINTS) {
                let estimate =
                    trotter_core::combinatorics::multinomial(&vec![req.n as u64; t.len()]);
                return Err(ApiError::Rejected(Rejection {
                    reason: "cap",
                    message: format!(
                        "exhaustive mode would produce {estimate} points, more than {MAX_POINTS}"
                    ),
                    estimate: Some(estimate.to_string()),
                }));
            }
            Mode::Exhaustive
        }
        RequestMode::Sample => {
            let count = req
                .count
                .ok_or_else(|| reject("invalid", "sample mode needs a count"))?;
            if count == 0 || count as u128 > MAX_POINTS {
                return Err(ApiError::Rejected(Rejection {
                    reason: "cap",
                    message: format!("sample count must lie in 1..={MAX_POINTS}"),
                    estimate: Some(count.to_string()),
                }));
            }
            Mode::Sample {
                count,
                seed: req.seed.unwrap_or(0),
            }
        }
    };
    Ok((t, mode))
}

#[derive(Clone)]
pub struct AppState {
    pool: Arc<rayon::ThreadPool>,
}

impl AppState {
    pub fn new(threads: Option<usize>) -> std::io::Result<Self> {
        let mut b = rayon::ThreadPoolBuilder::new();
        if let Some(t) = threads {
            b = b.num_threads(t);
        }
        let pool = b.build().map_err(std::io::Error::other)?;
        Ok(AppState {
            pool: Arc::new(pool),
        })
    }
}

/// Runs `job` on the compute pool off the async workers and times it.
async fn compute<F>(state: &AppState, job: F) -> Result<Response, ApiError>
where
    F: FnOnce() -> Result<String, ApiError> + Send + 'static,
{
    let pool = state.pool.clone();
    let started = Instant::now();
    let body = tokio::task::spawn_blocking(move || pool.install(job))
        .await
        .map_err(|e| ApiError::Internal(format!("compute task failed: {e}")))??;
    let mut resp = json_response(StatusCode::OK, body);
    let ms = format!("{:.3}", started.elapsed().as_secs_f64() * 1e3);
    resp.headers_mut().insert(
        COMPUTE_TIME_HEADER,
        HeaderValue::from_str(&ms).expect("ASCII digits"),
    );
    Ok(resp)
}

async fn cloud(State(state): State<AppState>, body: Bytes) -> Result<Response, ApiError> {
    let req: CloudRequest = parse_body(&body)?;
    let (t, mode) = validate(&req)?;
    let n = req.n;
    compute(&state, move || {
        Ok(report_json(&generate_point_cloud(&t, n, mode)?))
    })
    .await
}

async fn concentration(State(state): State<AppState>, body: Bytes) -> Result<Response, ApiError> {
    let req: ConcentrationRequest = parse_body(&body)?;
    let (t, mode) = validate(&req.cloud)?;
    if let Some(th) = req.threshold {
        if !(th.is_finite() && th >= 0.0) {
            return Err(reject(
                "finiteness",
                format!("threshold {th} must be finite and non-negative"),
            ));
        }
    }
    let n = req.cloud.n;
    compute(&state, move || {
        Ok(report_json(&concentration_experiment(
            &t,
            n,
            mode,
            req.threshold,
        )?))
    })
    .await
}

#[derive(Serialize)]
struct Health {
    status: &'static str,
    version: &'static str,
}

async fn health() -> Response {
    json_response(
        StatusCode::OK,
        report_json(&Health {
            status: "ok",
            version: env!("CARGO_PKG_VERSION"),
        }),
    )
}

pub fn router(state: AppState) -> Router {
    let cors = CorsLayer::new()
        .allow_origin(Any)
        .allow_methods([Method::GET, Method::POST])
        .allow_headers([header::CONTENT_TYPE])
        .expose_headers([header::HeaderName::from_static(COMPUTE_TIME_HEADER)]);
    Router::new()
        .route("/api/health", get(health))
        .route("/api/cloud", post(cloud))
        .route("/api/concentration", post(concentration))
        .layer(cors)
        .with_state(state)
}

pub async fn serve(host: &str, port: u16, threads: Option<usize>) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind((host, port)).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(AppState::new(threads)?)).await
}
