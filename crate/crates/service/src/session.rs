//! A refinement session as a fold over its events.

use std::collections::VecDeque;
use std::fmt;

use chrono::{DateTime, Utc};
use fuzzy_refine_core::{
    build_variant_space, defuzzify_weights, simple_step, tolerant_step, IntervalAction,
    MembershipSpec, Modifier, SearchState, StepWeights, TolerantState, VariantSpace,
};
use serde::{Deserialize, Serialize};
use uuid::Uuid;

use crate::error::{Result, ServiceError};

pub const UNDO_DEPTH: usize = 64;
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchAlgorithm {
    Simple,
    Tolerant,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Active,
    Converged,
    Confirmed,
    Abandoned,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Active => "active",
            Status::Converged => "converged",
            Status::Confirmed => "confirmed",
            Status::Abandoned => "abandoned",
        }
    }

    pub fn is_final(self) -> bool {
        matches!(self, Status::Confirmed | Status::Abandoned)
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Parameters of `POST /sessions`. Exactly one of `weights` and `membership`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SessionConfig {
    pub base: f64,
    pub range: f64,
    pub step: f64,
    pub algorithm: SearchAlgorithm,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<StepWeights>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub membership: Option<MembershipSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
}

impl SessionConfig {
    pub fn resolve(&self) -> Result<(VariantSpace, StepWeights, SearchState)> {
        let space = build_variant_space(self.base, self.range, self.step)?;
        let weights = match (self.weights, &self.membership) {
            (Some(w), None) => w,
            (None, Some(spec)) => defuzzify_weights(spec)?,
            _ => {
                return Err(ServiceError::Malformed(
                    "give exactly one of `weights` and `membership`".into(),
                ))
            }
        };
        let mut state = SearchState::initial(&space);
        if let Some(eps) = self.epsilon {
            state = state.with_epsilon(eps)?;
        }
        Ok((space, weights, state))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Event {
    Created { config: SessionConfig },
    ModifierApplied { modifier: Modifier },
    Undone,
    Confirmed,
    Abandoned,
}

/// One line of the event log.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EventRecord {
    pub schema_version: u32,
    pub session_id: Uuid,
    /// 1-based position in the session's log.
    pub seq: u64,
    pub at: DateTime<Utc>,
    pub event: Event,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Engine {
    Simple(SearchState),
    Tolerant(TolerantState),
}

impl Engine {
    pub fn search(&self) -> &SearchState {
        match self {
            Engine::Simple(s) => s,
            Engine::Tolerant(t) => t.search(),
        }
    }

    fn step(&self, m: Modifier, w: &StepWeights, space: &VariantSpace) -> Result<Engine> {
        Ok(match self {
            Engine::Simple(s) => Engine::Simple(simple_step(s.clone(), m, w, space)?),
            Engine::Tolerant(t) => Engine::Tolerant(tolerant_step(t.clone(), m, w, space)?),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Session {
    pub id: Uuid,
    pub config: SessionConfig,
    pub space: VariantSpace,
    pub weights: StepWeights,
    pub engine: Engine,
    pub status: Status,
    pub created_at: DateTime<Utc>,
    pub updated_at: DateTime<Utc>,
    undo: VecDeque<Engine>,
    version: u64,
}

impl Session {
    pub fn create(id: Uuid, config: SessionConfig, at: DateTime<Utc>) -> Result<(Session, EventRecord)> {
        let record = EventRecord {
            schema_version: SCHEMA_VERSION,
            session_id: id,
            seq: 1,
            at,
            event: Event::Created { config },
        };
        let session = Session::replay(std::slice::from_ref(&record))?;
        Ok((session, record))
    }

    /// Rebuilds a session from its full event log.
    pub fn replay(records: &[EventRecord]) -> Result<Session> {
        let (first, rest) = records
            .split_first()
            .ok_or_else(|| ServiceError::Malformed("empty event log".into()))?;
        check_schema(first)?;
        let Event::Created { config } = &first.event else {
            return Err(ServiceError::Malformed("log must start with a created event".into()));
        };
        let (space, weights, state) = config.resolve()?;
        let engine = match config.algorithm {
            SearchAlgorithm::Simple => Engine::Simple(state),
            SearchAlgorithm::Tolerant => Engine::Tolerant(TolerantState::new(state)),
        };
        let mut session = Session {
            id: first.session_id,
            config: config.clone(),
            space,
            weights,
            status: Status::Active,
            engine,
            created_at: first.at,
            updated_at: first.at,
            undo: VecDeque::new(),
            version: 1,
        };
        session.refresh_status();
        for r in rest {
            session.apply(r)?;
        }
        Ok(session)
    }

    /// Builds the record that `event` would append, after checking it applies.
    pub fn prepare(&self, event: Event, at: DateTime<Utc>) -> Result<(Session, EventRecord)> {
        let record = EventRecord {
            schema_version: SCHEMA_VERSION,
            session_id: self.id,
            seq: self.version + 1,
            at,
            event,
        };
        let mut next = self.clone();
        next.apply(&record)?;
        Ok((next, record))
    }

    pub fn apply(&mut self, record: &EventRecord) -> Result<()> {
        check_schema(record)?;
        if record.session_id != self.id || record.seq != self.version + 1 {
            return Err(ServiceError::Malformed(format!(
                "event {} of {} does not follow {} of {}",
                record.seq, record.session_id, self.version, self.id
            )));
        }
        match &record.event {
            Event::Created { .. } => {
                return Err(ServiceError::Malformed("duplicate created event".into()))
            }
            Event::ModifierApplied { modifier } => {
                if self.status != Status::Active {
                    return Err(self.not_active_or_terminated());
                }
                let next = self.engine.step(*modifier, &self.weights, &self.space)?;
                if self.undo.len() == UNDO_DEPTH {
                    self.undo.pop_front();
                }
                self.undo.push_back(std::mem::replace(&mut self.engine, next));
            }
            Event::Undone => {
                if self.status.is_final() {
                    return Err(ServiceError::NotActive(self.status));
                }
                self.engine = self.undo.pop_back().ok_or(ServiceError::EmptyUndo)?;
            }
            Event::Confirmed | Event::Abandoned => {
                if self.status.is_final() {
                    return Err(ServiceError::NotActive(self.status));
                }
            }
        }
        self.status = match record.event {
            Event::Confirmed => Status::Confirmed,
            Event::Abandoned => Status::Abandoned,
            _ => self.status,
        };
        self.refresh_status();
        self.version = record.seq;
        self.updated_at = record.at;
        Ok(())
    }

    fn not_active_or_terminated(&self) -> ServiceError {
        match self.status {
            Status::Converged => fuzzy_refine_core::FuzzyError::StateTerminated.into(),
            s => ServiceError::NotActive(s),
        }
    }

    fn refresh_status(&mut self) {
        if !self.status.is_final() {
            self.status = if self.engine.search().is_terminated() {
                Status::Converged
            } else {
                Status::Active
            };
        }
    }

    pub fn version(&self) -> u64 {
        self.version
    }

    pub fn undo_depth(&self) -> usize {
        self.undo.len()
    }

    pub fn summary(&self) -> SessionSummary {
        let s = self.engine.search();
        let variant_index = s.variant_index(&self.space);
        let variant = self.space.point(variant_index);
        SessionSummary {
            id: self.id,
            status: self.status,
            algorithm: self.config.algorithm,
            lower: s.lower(),
            upper: s.upper(),
            position: s.position(),
            variant,
            variant_index,
            step_index: s.step_index(),
            converged: s.is_terminated(),
            epsilon: s.epsilon(),
            space: self.space,
            weights: self.weights,
            undo_depth: self.undo.len(),
            version: self.version,
            confirmed_value: (self.status == Status::Confirmed).then_some(variant),
            created_at: self.created_at,
            updated_at: self.updated_at,
        }
    }

    pub fn history(&self) -> Vec<HistoryEntry> {
        self.engine
            .search()
            .history()
            .iter()
            .map(|r| HistoryEntry {
                step: r.step,
                power: r.modifier.power,
                direction: r.modifier.direction,
                position: r.from_position,
                lower: r.lower_before,
                upper: r.upper_before,
                action: r.action,
                lower_after: r.lower_after,
                upper_after: r.upper_after,
                delta_x: r.delta_x,
                next_position: r.to_position,
                next_variant: self.space.point(self.space.snap_within(
                    r.to_position,
                    r.lower_after,
                    r.upper_after,
                    Some(r.modifier.direction),
                )),
            })
            .collect()
    }
}

fn check_schema(r: &EventRecord) -> Result<()> {
    if r.schema_version != SCHEMA_VERSION {
        return Err(ServiceError::UnsupportedSchema(r.schema_version));
    }
    Ok(())
}

/// State document returned by every endpoint and pushed to waiting clients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionSummary {
    pub id: Uuid,
    pub status: Status,
    pub algorithm: SearchAlgorithm,
    pub lower: f64,
    pub upper: f64,
    /// Exact working position.
    pub position: f64,
    /// Grid variant shown to the user.
    pub variant: f64,
    pub variant_index: usize,
    pub step_index: u64,
    pub converged: bool,
    pub epsilon: f64,
    pub space: VariantSpace,
    pub weights: StepWeights,
    pub undo_depth: usize,
    /// Number of events in the session log.
    pub version: u64,
    pub confirmed_value: Option<f64>,
    pub created_at: DateTime<Utc>,
    pub updated_at: DateTime<Utc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistoryEntry {
    pub step: u64,
    pub power: fuzzy_refine_core::Power,
    pub direction: fuzzy_refine_core::Direction,
    /// Position the modifier was issued from and the interval at that time.
    pub position: f64,
    pub lower: f64,
    pub upper: f64,
    pub action: Option<IntervalAction>,
    pub lower_after: f64,
    pub upper_after: f64,
    pub delta_x: f64,
    pub next_position: f64,
    pub next_variant: f64,
}
