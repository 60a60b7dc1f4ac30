//! Session-oriented HTTP API over the discovery engine.
//!
//! An expert uploads a table, opens a session over it (optionally restricted
//! to one side of a partition), runs discovery repeatedly with different
//! parameters, selects rules and inspects their hulls, distributions and
//! supporting factors. Mutating calls on one session are exclusive; a second
//! concurrent call gets 409. With a data directory every mutation is appended
//! to a JSON lines log and replayed on start.

pub mod api;
pub mod error;
pub mod log;
pub mod model;
pub mod state;

use std::sync::Arc;

pub use api::router;
pub use error::{ApiError, ErrorBody};
pub use state::{Service, ServiceConfig, SessionLock, DEFAULT_MAX_EXAMPLES};

/// Router over a fresh in-memory service.
pub fn app() -> axum::Router {
    router(Arc::new(Service::in_memory()))
}
