//! Interactive refinement sessions over HTTP.
//!
//! Each session is the fold of an append-only event log ([`Event`]); the
//! search itself is delegated to `fuzzy-refine-core`. [`router`] exposes the
//! JSON API and [`SessionStore`] holds the live sessions.

mod error;
mod http;
mod session;
mod store;

pub use error::{Result, ServiceError};
pub use http::{router, serve, ErrorBody, DEFAULT_POLL_MS, MAX_POLL_MS};
pub use session::{
    Engine, Event, EventRecord, HistoryEntry, SearchAlgorithm, Session, SessionConfig,
    SessionSummary, Status, SCHEMA_VERSION, UNDO_DEPTH,
};
pub use store::{read_log, EventLog, SessionStore};
