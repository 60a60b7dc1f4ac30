//! Datasets, sessions and the operations on them. Everything here is
//! synchronous; the HTTP layer moves long searches off the async runtime.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::{Arc, Mutex, RwLock};
use std::time::{SystemTime, UNIX_EPOCH};

use axum::http::StatusCode;

use subdisc::analysis::{distribution_series, supporting_factors, BinSpec, FactorOptions};
use subdisc::dataset::parse_schema_hints;
use subdisc::discovery::{rss_select, DmsOptions, SearchParams};
use subdisc::features::Condition;
use subdisc::pipeline::run_mode;
use subdisc::report::{hull_auc, hull_of, RuleReport};
use subdisc::{
    build_feature_set, ingest_csv, Dataset, Feature, FeatureOptions, IngestOptions, Rule,
};

use crate::error::ApiError;
use crate::log::{Event, EventLog};
use crate::model::*;

pub const DEFAULT_MAX_EXAMPLES: usize = 10_000;

#[derive(Clone, Debug)]
pub struct ServiceConfig {
    /// Upload guardrail.
    pub max_examples: usize,
    /// Where the session log lives; `None` keeps everything in memory.
    pub data_dir: Option<PathBuf>,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        ServiceConfig {
            max_examples: DEFAULT_MAX_EXAMPLES,
            data_dir: None,
        }
    }
}

struct StoredDataset {
    summary: DatasetSummary,
    dataset: Arc<Dataset>,
}

struct StoredRule {
    rule: Rule,
    params: SearchParams,
}

struct SessionState {
    created: SessionCreated,
    data: Arc<Dataset>,
    features: Arc<Vec<Feature>>,
    history: Vec<Iteration>,
    rules: Vec<StoredRule>,
    selected: Vec<usize>,
    selection_mode: Option<SelectionMode>,
}

impl SessionState {
    fn report(&self, id: usize) -> RuleReport {
        let r = &self.rules[id];
        RuleReport::new(Some(id), &r.rule, &self.data, &r.params, false)
    }

    fn rule(&self, id: usize) -> Result<&Rule, ApiError> {
        self.rules
            .get(id)
            .map(|r| &r.rule)
            .ok_or_else(|| ApiError::not_found("rule", id))
    }

    /// Distinct rules of the whole history, first occurrence wins.
    fn pooled(&self) -> Vec<usize> {
        let mut out: Vec<usize> = Vec::new();
        for (id, r) in self.rules.iter().enumerate() {
            if !out
                .iter()
                .any(|&o| self.rules[o].rule.feature_ids == r.rule.feature_ids)
            {
                out.push(id);
            }
        }
        out
    }
}

struct SessionSlot {
    busy: AtomicBool,
    state: RwLock<SessionState>,
}

/// Exclusive right to mutate one session, released on drop. While it is
/// held, mutating requests on the session fail with 409.
pub struct SessionLock {
    slot: Arc<SessionSlot>,
}

impl Drop for SessionLock {
    fn drop(&mut self) {
        self.slot.busy.store(false, Ordering::Release);
    }
}

fn acquire(slot: &Arc<SessionSlot>, id: &str) -> Result<SessionLock, ApiError> {
    slot.busy
        .compare_exchange(false, true, Ordering::Acquire, Ordering::Relaxed)
        .map(|_| SessionLock { slot: slot.clone() })
        .map_err(|_| ApiError::busy(id))
}

/// Which rules a hull is built from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HullRules {
    History,
    Selected,
}

pub struct Service {
    config: ServiceConfig,
    datasets: RwLock<BTreeMap<String, Arc<StoredDataset>>>,
    sessions: RwLock<BTreeMap<String, Arc<SessionSlot>>>,
    next_id: AtomicU64,
    log: Option<Mutex<EventLog>>,
}

fn now_millis() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_millis() as u64)
        .unwrap_or(0)
}

fn id_number(id: &str) -> Option<u64> {
    id.rsplit('-').next()?.parse().ok()
}

fn io_error(e: std::io::Error) -> ApiError {
    ApiError::internal(format!("session log: {e}"))
}

impl Service {
    /// Opens the service, replaying the session log when a data directory is
    /// configured.
    pub fn open(config: ServiceConfig) -> std::io::Result<Service> {
        let (log, events) = match &config.data_dir {
            Some(dir) => {
                let (log, events) = EventLog::open(dir)?;
                (Some(log), events)
            }
            None => (None, Vec::new()),
        };
        let mut service = Service {
            config,
            datasets: RwLock::new(BTreeMap::new()),
            sessions: RwLock::new(BTreeMap::new()),
            next_id: AtomicU64::new(1),
            log: None,
        };
        if let Some(log) = &log {
            service.replay(log, events);
        }
        service.log = log.map(Mutex::new);
        Ok(service)
    }

    pub fn in_memory() -> Service {
        Service::open(ServiceConfig::default()).expect("no io without a data directory")
    }

    fn replay(&self, log: &EventLog, events: Vec<Event>) {
        let total = events.len();
        for event in events {
            let result = match event {
                Event::Dataset { dataset_id, query } => {
                    std::fs::read(log.dataset_path(&dataset_id))
                        .map_err(io_error)
                        .and_then(|body| self.insert_dataset(dataset_id, &query, &body).map(|_| ()))
                }
                Event::Session {
                    session_id,
                    request,
                } => self.insert_session(session_id, &request).map(|_| ()),
                Event::Discover {
                    session_id,
                    request,
                    timestamp,
                } => self
                    .run_discover(&session_id, &request, timestamp, false)
                    .map(|_| ()),
                Event::Select {
                    session_id,
                    request,
                } => self.run_select(&session_id, &request, false).map(|_| ()),
            };
            if let Err(e) = result {
                log::warn!("replay: {e}");
            }
        }
        log::info!("replayed {total} events");
    }

    fn fresh_id(&self, prefix: &str) -> String {
        format!("{prefix}-{}", self.next_id.fetch_add(1, Ordering::Relaxed))
    }

    fn note_id(&self, id: &str) {
        if let Some(n) = id_number(id) {
            self.next_id.fetch_max(n + 1, Ordering::Relaxed);
        }
    }

    fn append(&self, event: &Event) -> Result<(), ApiError> {
        match &self.log {
            Some(log) => log
                .lock()
                .expect("log lock")
                .append(event)
                .map_err(io_error),
            None => Ok(()),
        }
    }

    fn slot(&self, id: &str) -> Result<Arc<SessionSlot>, ApiError> {
        self.sessions
            .read()
            .expect("sessions lock")
            .get(id)
            .cloned()
            .ok_or_else(|| ApiError::not_found("session", id))
    }

    /// Takes the session's mutation lock, or 409 if a mutation is running.
    pub fn lock_session(&self, id: &str) -> Result<SessionLock, ApiError> {
        acquire(&self.slot(id)?, id)
    }

    fn with_session<T>(
        &self,
        id: &str,
        f: impl FnOnce(&SessionState) -> Result<T, ApiError>,
    ) -> Result<T, ApiError> {
        let slot = self.slot(id)?;
        let state = slot.state.read().expect("session lock");
        f(&state)
    }

    pub fn upload_dataset(
        &self,
        query: &DatasetQuery,
        body: &[u8],
    ) -> Result<DatasetSummary, ApiError> {
        if body.iter().all(u8::is_ascii_whitespace) {
            return Err(ApiError::new(
                StatusCode::BAD_REQUEST,
                "invalid_dataset",
                "request body is empty",
            ));
        }
        let id = self.fresh_id("ds");
        let summary = self.insert_dataset(id.clone(), query, body)?;
        if let Some(log) = &self.log {
            log.lock()
                .expect("log lock")
                .store_dataset(&id, body)
                .map_err(io_error)?;
        }
        self.append(&Event::Dataset {
            dataset_id: id,
            query: query.clone(),
        })?;
        Ok(summary)
    }

    fn insert_dataset(
        &self,
        id: String,
        query: &DatasetQuery,
        body: &[u8],
    ) -> Result<DatasetSummary, ApiError> {
        let target = query
            .target_class
            .clone()
            .ok_or_else(|| ApiError::bad_request("query parameter `targetClass` is required"))?;
        let mut opts = IngestOptions::new(target);
        opts.class_column = query.class_column.clone();
        opts.missing_token = query.missing.clone().unwrap_or_default();
        opts.max_examples = Some(self.config.max_examples);
        if let Some(schema) = &query.schema {
            opts.hints = parse_schema_hints(schema)?;
        }
        let d = ingest_csv(body, &opts)?;
        self.note_id(&id);
        let summary = DatasetSummary {
            dataset_id: id.clone(),
            examples: d.len(),
            pos: d.pos(),
            neg: d.neg(),
            target_class: d.target_class().to_string(),
            other_class: d.other_class().to_string(),
            class_column: d.class_column().to_string(),
            attributes: d.attributes().to_vec(),
        };
        self.datasets.write().expect("datasets lock").insert(
            id,
            Arc::new(StoredDataset {
                summary: summary.clone(),
                dataset: Arc::new(d),
            }),
        );
        Ok(summary)
    }

    pub fn dataset(&self, id: &str) -> Result<DatasetSummary, ApiError> {
        self.datasets
            .read()
            .expect("datasets lock")
            .get(id)
            .map(|s| s.summary.clone())
            .ok_or_else(|| ApiError::not_found("dataset", id))
    }

    pub fn create_session(&self, req: &CreateSession) -> Result<SessionCreated, ApiError> {
        let id = self.fresh_id("s");
        let created = self.insert_session(id.clone(), req)?;
        self.append(&Event::Session {
            session_id: id,
            request: req.clone(),
        })?;
        Ok(created)
    }

    fn insert_session(&self, id: String, req: &CreateSession) -> Result<SessionCreated, ApiError> {
        let stored = self
            .datasets
            .read()
            .expect("datasets lock")
            .get(&req.dataset_id)
            .cloned()
            .ok_or_else(|| ApiError::not_found("dataset", &req.dataset_id))?;
        let data = match &req.partition_feature {
            None => stored.dataset.clone(),
            Some(text) => {
                let condition = Condition::parse(text, stored.dataset.attributes())?;
                let split = stored.dataset.partition(&condition)?;
                let part = match req.partition_side {
                    PartitionSide::Covered => split.covered,
                    PartitionSide::Uncovered => split.uncovered,
                };
                if !part.is_usable() {
                    return Err(ApiError::unprocessable(
                        "unusable_partition",
                        format!(
                            "partition `{text}` leaves {} target and {} non-target examples",
                            part.pos(),
                            part.neg()
                        ),
                    )
                    .with_detail(serde_json::json!({ "pos": part.pos(), "neg": part.neg() })));
                }
                Arc::new(part)
            }
        };
        let features = build_feature_set(&data, &FeatureOptions::default())?;
        self.note_id(&id);
        let created = SessionCreated {
            session_id: id.clone(),
            dataset_id: req.dataset_id.clone(),
            partition_feature: req.partition_feature.clone(),
            partition_side: req.partition_side,
            examples: data.len(),
            pos: data.pos(),
            neg: data.neg(),
            features: features.len(),
        };
        let state = SessionState {
            created: created.clone(),
            data,
            features: Arc::new(features),
            history: Vec::new(),
            rules: Vec::new(),
            selected: Vec::new(),
            selection_mode: None,
        };
        self.sessions.write().expect("sessions lock").insert(
            id,
            Arc::new(SessionSlot {
                busy: AtomicBool::new(false),
                state: RwLock::new(state),
            }),
        );
        Ok(created)
    }

    pub fn discover(
        &self,
        session: &str,
        req: &DiscoverRequest,
    ) -> Result<DiscoverResponse, ApiError> {
        self.run_discover(session, req, now_millis(), true)
    }

    fn run_discover(
        &self,
        session: &str,
        req: &DiscoverRequest,
        timestamp: u64,
        record: bool,
    ) -> Result<DiscoverResponse, ApiError> {
        let slot = self.slot(session)?;
        let _lock = acquire(&slot, session)?;
        let (data, features) = {
            let s = slot.state.read().expect("session lock");
            (s.data.clone(), s.features.clone())
        };
        req.params.validate()?;
        let dms = DmsOptions {
            dedupe: req.dedupe,
            rules_per_iteration: req.rules_per_iteration,
        };
        let out = run_mode(&data, &features, &req.params, req.mode, req.number, &dms)?;
        if record {
            self.append(&Event::Discover {
                session_id: session.to_string(),
                request: req.clone(),
                timestamp,
            })?;
        }
        let mut s = slot.state.write().expect("session lock");
        let first = s.rules.len();
        let rule_ids: Vec<usize> = (first..first + out.rules.len()).collect();
        s.rules.extend(out.rules.into_iter().map(|rule| StoredRule {
            rule,
            params: req.params.clone(),
        }));
        let iteration = Iteration {
            iteration: s.history.len() + 1,
            mode: req.mode,
            number: req.number,
            params: req.params.clone(),
            min_support: req.params.support(&data).fraction(),
            empty: rule_ids.is_empty(),
            rule_ids,
            diagnostics: out.diagnostics,
            timestamp,
        };
        s.history.push(iteration.clone());
        let rules = iteration.rule_ids.iter().map(|&id| s.report(id)).collect();
        Ok(DiscoverResponse { iteration, rules })
    }

    pub fn select(&self, session: &str, req: &SelectRequest) -> Result<SelectResponse, ApiError> {
        self.run_select(session, req, true)
    }

    fn run_select(
        &self,
        session: &str,
        req: &SelectRequest,
        record: bool,
    ) -> Result<SelectResponse, ApiError> {
        let slot = self.slot(session)?;
        let _lock = acquire(&slot, session)?;
        let (mode, ids) = {
            let s = slot.state.read().expect("session lock");
            match (&req.rule_ids, &req.auto) {
                (Some(ids), None) => {
                    for &id in ids {
                        s.rule(id)?;
                    }
                    (SelectionMode::Manual, ids.clone())
                }
                (None, Some(auto)) => {
                    let pooled = s.pooled();
                    let rules: Vec<Rule> =
                        pooled.iter().map(|&id| s.rules[id].rule.clone()).collect();
                    let steps = rss_select(&rules, s.data.positives(), auto.number)?;
                    (
                        SelectionMode::Auto,
                        steps.iter().map(|st| pooled[st.index]).collect(),
                    )
                }
                _ => {
                    return Err(ApiError::unprocessable(
                        "invalid_selection",
                        "give exactly one of `ruleIds` and `auto`",
                    ))
                }
            }
        };
        if record {
            self.append(&Event::Select {
                session_id: session.to_string(),
                request: req.clone(),
            })?;
        }
        let mut s = slot.state.write().expect("session lock");
        s.selected = ids;
        s.selection_mode = Some(mode);
        Ok(SelectResponse {
            mode,
            rules: s.selected.iter().map(|&id| s.report(id)).collect(),
        })
    }

    pub fn session(&self, id: &str) -> Result<SessionView, ApiError> {
        self.with_session(id, |s| {
            let c = &s.created;
            Ok(SessionView {
                session_id: c.session_id.clone(),
                dataset_id: c.dataset_id.clone(),
                partition_feature: c.partition_feature.clone(),
                partition_side: c.partition_side,
                examples: c.examples,
                pos: c.pos,
                neg: c.neg,
                attributes: s.data.attributes().to_vec(),
                history: s.history.clone(),
                rules: (0..s.rules.len()).map(|i| s.report(i)).collect(),
                selected: s.selected.clone(),
                selection_mode: s.selection_mode,
            })
        })
    }

    pub fn supporting_factors(
        &self,
        session: &str,
        rule_id: usize,
        opts: &FactorOptions,
    ) -> Result<FactorsResponse, ApiError> {
        self.with_session(session, |s| {
            let rule = s.rule(rule_id)?;
            Ok(FactorsResponse {
                rule_id,
                report: supporting_factors(rule, &s.data, opts),
            })
        })
    }

    pub fn hull(
        &self,
        session: &str,
        space: Space,
        which: HullRules,
    ) -> Result<HullResponse, ApiError> {
        self.with_session(session, |s| {
            let ids = match which {
                HullRules::History => s.pooled(),
                HullRules::Selected => s.selected.clone(),
            };
            let refs: Vec<(usize, &Rule)> = ids.iter().map(|&id| (id, &s.rules[id].rule)).collect();
            let vertices = hull_of(&refs, &s.data);
            let points = vertices
                .iter()
                .map(|v| {
                    let (x, y) = match space {
                        Space::Tpfp => (v.fp as f64, v.tp as f64),
                        Space::Roc => (v.fpr, v.tpr),
                    };
                    HullPointView {
                        x,
                        y,
                        rule_id: v.rule_id,
                    }
                })
                .collect();
            Ok(HullResponse {
                space,
                pos: s.data.pos(),
                neg: s.data.neg(),
                auc: hull_auc(&vertices),
                points,
                vertices,
            })
        })
    }

    pub fn distribution(
        &self,
        session: &str,
        attribute: &str,
        rule_ids: &[usize],
        spec: BinSpec,
        include_fp: bool,
    ) -> Result<DistributionResponse, ApiError> {
        self.with_session(session, |s| {
            let a = s
                .data
                .attribute_index(attribute)
                .ok_or_else(|| ApiError::not_found("attribute", attribute))?;
            let mut refs = Vec::with_capacity(rule_ids.len());
            for &id in rule_ids {
                refs.push((id, s.rule(id)?));
            }
            Ok(DistributionResponse {
                attribute: attribute.to_string(),
                series: distribution_series(&s.data, a, &refs, spec, include_fp)?,
            })
        })
    }
}
