use std::collections::HashMap;
use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use chrono::Utc;
use fuzzy_refine_core::Modifier;
use parking_lot::{Mutex, RwLock};
use tokio::sync::watch;
use uuid::Uuid;

use crate::error::{Result, ServiceError};
use crate::session::{Event, EventRecord, HistoryEntry, Session, SessionConfig, SessionSummary};

/// Where session events are appended.
#[derive(Debug, Clone)]
pub enum EventLog {
    Memory,
    /// One `<session id>.jsonl` file per session.
    Directory(PathBuf),
}

impl EventLog {
    fn path(dir: &Path, id: Uuid) -> PathBuf {
        dir.join(format!("{id}.jsonl"))
    }

    fn append(&self, record: &EventRecord) -> Result<()> {
        let EventLog::Directory(dir) = self else {
            return Ok(());
        };
        let mut line = serde_json::to_string(record)
            .map_err(|e| ServiceError::Malformed(e.to_string()))?;
        line.push('\n');
        let mut f = OpenOptions::new()
            .create(true)
            .append(true)
            .open(Self::path(dir, record.session_id))?;
        f.write_all(line.as_bytes())?;
        f.sync_data()?;
        Ok(())
    }

    /// Reads every session log in the directory.
    pub fn load(dir: &Path) -> Result<Vec<Vec<EventRecord>>> {
        let mut out = Vec::new();
        let mut paths: Vec<PathBuf> = fs::read_dir(dir)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "jsonl"))
            .collect();
        paths.sort();
        for path in paths {
            out.push(read_log(&path)?);
        }
        Ok(out)
    }
}

pub fn read_log(path: &Path) -> Result<Vec<EventRecord>> {
    let corrupt = |reason: String| ServiceError::CorruptLog {
        path: path.display().to_string(),
        reason,
    };
    let mut records = Vec::new();
    for (i, line) in BufReader::new(File::open(path)?).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let r: EventRecord = serde_json::from_str(&line)
            .map_err(|e| corrupt(format!("line {}: {e}", i + 1)))?;
        records.push(r);
    }
    Ok(records)
}

struct Slot {
    inner: Mutex<SlotState>,
    updates: watch::Sender<SessionSummary>,
}

struct SlotState {
    session: Session,
    events: Vec<EventRecord>,
}

/// All live sessions. Mutations of one session are serialized by its own
/// lock; different sessions proceed independently.
pub struct SessionStore {
    sessions: RwLock<HashMap<Uuid, Arc<Slot>>>,
    log: EventLog,
}

impl SessionStore {
    pub fn in_memory() -> SessionStore {
        SessionStore {
            sessions: RwLock::new(HashMap::new()),
            log: EventLog::Memory,
        }
    }

    /// Opens (creating if needed) a log directory and restores its sessions.
    pub fn open(dir: impl Into<PathBuf>) -> Result<SessionStore> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        let mut sessions = HashMap::new();
        for events in EventLog::load(&dir)? {
            let session = Session::replay(&events)?;
            sessions.insert(session.id, Arc::new(slot(session, events)));
        }
        tracing::info!(count = sessions.len(), dir = %dir.display(), "restored sessions");
        Ok(SessionStore {
            sessions: RwLock::new(sessions),
            log: EventLog::Directory(dir),
        })
    }

    pub fn len(&self) -> usize {
        self.sessions.read().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn create(&self, config: SessionConfig) -> Result<SessionSummary> {
        let (session, record) = Session::create(Uuid::new_v4(), config, Utc::now())?;
        self.log.append(&record)?;
        let summary = session.summary();
        tracing::info!(id = %session.id, "session created");
        self.sessions
            .write()
            .insert(session.id, Arc::new(slot(session, vec![record])));
        Ok(summary)
    }

    fn slot(&self, id: Uuid) -> Result<Arc<Slot>> {
        self.sessions
            .read()
            .get(&id)
            .cloned()
            .ok_or(ServiceError::NotFound(id))
    }

    /// Validates, persists and applies one event under the session lock.
    pub fn record(&self, id: Uuid, event: Event) -> Result<SessionSummary> {
        let slot = self.slot(id)?;
        let mut st = slot.inner.lock();
        let (next, record) = st.session.prepare(event, Utc::now())?;
        self.log.append(&record)?;
        st.session = next;
        st.events.push(record);
        let summary = st.session.summary();
        slot.updates.send_replace(summary.clone());
        Ok(summary)
    }

    pub fn apply_modifier(&self, id: Uuid, modifier: Modifier) -> Result<SessionSummary> {
        self.record(id, Event::ModifierApplied { modifier })
    }

    pub fn undo(&self, id: Uuid) -> Result<SessionSummary> {
        self.record(id, Event::Undone)
    }

    pub fn confirm(&self, id: Uuid) -> Result<SessionSummary> {
        self.record(id, Event::Confirmed)
    }

    pub fn abandon(&self, id: Uuid) -> Result<SessionSummary> {
        self.record(id, Event::Abandoned)
    }

    pub fn summary(&self, id: Uuid) -> Result<SessionSummary> {
        Ok(self.slot(id)?.inner.lock().session.summary())
    }

    pub fn session(&self, id: Uuid) -> Result<Session> {
        Ok(self.slot(id)?.inner.lock().session.clone())
    }

    pub fn history(&self, id: Uuid) -> Result<Vec<HistoryEntry>> {
        Ok(self.slot(id)?.inner.lock().session.history())
    }

    pub fn events(&self, id: Uuid) -> Result<Vec<EventRecord>> {
        Ok(self.slot(id)?.inner.lock().events.clone())
    }

    pub fn subscribe(&self, id: Uuid) -> Result<watch::Receiver<SessionSummary>> {
        Ok(self.slot(id)?.updates.subscribe())
    }
}

fn slot(session: Session, events: Vec<EventRecord>) -> Slot {
    let (updates, _) = watch::channel(session.summary());
    Slot {
        inner: Mutex::new(SlotState { session, events }),
        updates,
    }
}
