use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::rejection::QueryRejection;
use axum::extract::{Path, Query, State};
use axum::http::{header, HeaderMap, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::de::DeserializeOwned;
use serde::Deserialize;

use subdisc::analysis::{BinSpec, FactorOptions};

use crate::error::ApiError;
use crate::model::*;
use crate::state::{HullRules, Service};

type Shared = Arc<Service>;

pub fn router(service: Shared) -> Router {
    Router::new()
        .route("/datasets", post(upload_dataset))
        .route("/datasets/{id}", get(get_dataset))
        .route("/sessions", post(create_session))
        .route("/sessions/{id}", get(get_session))
        .route("/sessions/{id}/discover", post(discover))
        .route("/sessions/{id}/select", post(select))
        .route(
            "/sessions/{id}/rules/{rule_id}/supporting-factors",
            get(supporting_factors),
        )
        .route("/sessions/{id}/hull", get(hull))
        .route("/sessions/{id}/distribution", get(distribution))
        .fallback(|| async {
            ApiError::new(StatusCode::NOT_FOUND, "not_found", "no such endpoint")
        })
        .with_state(service)
}

fn media_type(headers: &HeaderMap) -> String {
    headers
        .get(header::CONTENT_TYPE)
        .and_then(|v| v.to_str().ok())
        .and_then(|v| v.split(';').next())
        .map(|v| v.trim().to_ascii_lowercase())
        .unwrap_or_default()
}

fn require_media(headers: &HeaderMap, expected: &str) -> Result<(), ApiError> {
    let got = media_type(headers);
    if got == expected {
        Ok(())
    } else {
        Err(ApiError::new(
            StatusCode::UNSUPPORTED_MEDIA_TYPE,
            "unsupported_media_type",
            format!("expected content type {expected}"),
        )
        .with_detail(serde_json::json!({ "contentType": got })))
    }
}

/// Parses a JSON body: malformed JSON is 400, a well-formed body of the
/// wrong shape is 422.
fn json_body<T: DeserializeOwned>(headers: &HeaderMap, body: &Bytes) -> Result<T, ApiError> {
    require_media(headers, "application/json")?;
    serde_json::from_slice(body).map_err(|e| {
        let status = if e.is_data() {
            StatusCode::UNPROCESSABLE_ENTITY
        } else {
            StatusCode::BAD_REQUEST
        };
        ApiError::new(status, "invalid_body", e.to_string())
    })
}

fn query<T>(q: Result<Query<T>, QueryRejection>) -> Result<T, ApiError> {
    q.map(|Query(v)| v)
        .map_err(|e| ApiError::bad_request(e.body_text()))
}

async fn blocking<T: Send + 'static>(
    f: impl FnOnce() -> Result<T, ApiError> + Send + 'static,
) -> Result<T, ApiError> {
    tokio::task::spawn_blocking(f)
        .await
        .unwrap_or_else(|e| Err(ApiError::internal(format!("worker failed: {e}"))))
}

async fn upload_dataset(
    State(svc): State<Shared>,
    q: Result<Query<DatasetQuery>, QueryRejection>,
    headers: HeaderMap,
    body: Bytes,
) -> Result<Response, ApiError> {
    let q = query(q)?;
    require_media(&headers, "text/csv")?;
    let summary = blocking(move || svc.upload_dataset(&q, &body)).await?;
    Ok((StatusCode::CREATED, Json(summary)).into_response())
}

async fn get_dataset(
    State(svc): State<Shared>,
    Path(id): Path<String>,
) -> Result<Json<DatasetSummary>, ApiError> {
    svc.dataset(&id).map(Json)
}

async fn create_session(
    State(svc): State<Shared>,
    headers: HeaderMap,
    body: Bytes,
) -> Result<Response, ApiError> {
    let req: CreateSession = json_body(&headers, &body)?;
    let created = blocking(move || svc.create_session(&req)).await?;
    Ok((StatusCode::CREATED, Json(created)).into_response())
}

async fn get_session(
    State(svc): State<Shared>,
    Path(id): Path<String>,
) -> Result<Json<SessionView>, ApiError> {
    svc.session(&id).map(Json)
}

async fn discover(
    State(svc): State<Shared>,
    Path(id): Path<String>,
    headers: HeaderMap,
    body: Bytes,
) -> Result<Json<DiscoverResponse>, ApiError> {
    let req: DiscoverRequest = if body.is_empty() {
        DiscoverRequest::default()
    } else {
        json_body(&headers, &body)?
    };
    blocking(move || svc.discover(&id, &req)).await.map(Json)
}

async fn select(
    State(svc): State<Shared>,
    Path(id): Path<String>,
    headers: HeaderMap,
    body: Bytes,
) -> Result<Json<SelectResponse>, ApiError> {
    let req: SelectRequest = json_body(&headers, &body)?;
    blocking(move || svc.select(&id, &req)).await.map(Json)
}

#[derive(Deserialize, Default)]
#[serde(rename_all = "camelCase")]
struct FactorQuery {
    alpha: Option<String>,
    yates: Option<String>,
    exclude_covered_negatives: Option<String>,
    max_intervals: Option<String>,
    min_per_interval: Option<String>,
}

fn parse_field<T: std::str::FromStr>(
    name: &str,
    v: &Option<String>,
    default: T,
) -> Result<T, ApiError> {
    match v {
        None => Ok(default),
        Some(s) => s
            .parse()
            .map_err(|_| ApiError::bad_request(format!("invalid value `{s}` for `{name}`"))),
    }
}

async fn supporting_factors(
    State(svc): State<Shared>,
    Path((id, rule_id)): Path<(String, String)>,
    q: Result<Query<FactorQuery>, QueryRejection>,
) -> Result<Json<FactorsResponse>, ApiError> {
    let rule_id: usize = rule_id
        .parse()
        .map_err(|_| ApiError::not_found("rule", &rule_id))?;
    let q = query(q)?;
    let d = FactorOptions::default();
    let opts = FactorOptions {
        alpha: parse_field("alpha", &q.alpha, d.alpha)?,
        yates: parse_field("yates", &q.yates, d.yates)?,
        exclude_covered_negatives: parse_field(
            "excludeCoveredNegatives",
            &q.exclude_covered_negatives,
            d.exclude_covered_negatives,
        )?,
        max_intervals: parse_field("maxIntervals", &q.max_intervals, d.max_intervals)?,
        min_per_interval: parse_field("minPerInterval", &q.min_per_interval, d.min_per_interval)?,
    };
    if !(opts.alpha > 0.0 && opts.alpha < 1.0) {
        return Err(ApiError::unprocessable(
            "invalid_params",
            "alpha must lie in (0, 1)",
        ));
    }
    blocking(move || svc.supporting_factors(&id, rule_id, &opts))
        .await
        .map(Json)
}

#[derive(Deserialize, Default)]
struct HullQuery {
    space: Option<String>,
    rules: Option<String>,
}

async fn hull(
    State(svc): State<Shared>,
    Path(id): Path<String>,
    q: Result<Query<HullQuery>, QueryRejection>,
) -> Result<Json<HullResponse>, ApiError> {
    let q = query(q)?;
    let space = match q.space.as_deref() {
        None | Some("tpfp") => Space::Tpfp,
        Some("roc") => Space::Roc,
        Some(other) => {
            return Err(ApiError::bad_request(format!(
                "unknown space `{other}` (expected tpfp or roc)"
            )))
        }
    };
    let which = match q.rules.as_deref() {
        None | Some("history") => HullRules::History,
        Some("selected") => HullRules::Selected,
        Some(other) => {
            return Err(ApiError::bad_request(format!(
                "unknown rule set `{other}` (expected history or selected)"
            )))
        }
    };
    svc.hull(&id, space, which).map(Json)
}

#[derive(Deserialize, Default)]
struct DistributionQuery {
    attr: Option<String>,
    rules: Option<String>,
    bins: Option<String>,
    fp: Option<String>,
}

async fn distribution(
    State(svc): State<Shared>,
    Path(id): Path<String>,
    q: Result<Query<DistributionQuery>, QueryRejection>,
) -> Result<Json<DistributionResponse>, ApiError> {
    let q = query(q)?;
    let attr = q
        .attr
        .ok_or_else(|| ApiError::bad_request("query parameter `attr` is required"))?;
    let mut rule_ids = Vec::new();
    for part in q
        .rules
        .as_deref()
        .unwrap_or("")
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
    {
        rule_ids.push(
            part.parse::<usize>()
                .map_err(|_| ApiError::not_found("rule", part))?,
        );
    }
    let spec = match q.bins.as_deref() {
        None | Some("default") => BinSpec::Default,
        Some("perValue") => BinSpec::PerValue,
        Some(n) => match n.parse::<usize>() {
            Ok(n) if n > 0 => BinSpec::EqualWidth(n),
            _ => {
                return Err(ApiError::bad_request(format!(
                    "invalid bins `{n}` (expected default, perValue or a positive count)"
                )))
            }
        },
    };
    let include_fp = parse_field("fp", &q.fp, true)?;
    blocking(move || svc.distribution(&id, &attr, &rule_ids, spec, include_fp))
        .await
        .map(Json)
}
