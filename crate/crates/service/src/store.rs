//! In-memory session store with optional directory persistence.
//!
//! Each session directory holds `upload.json` (the original bytes) and
//! `log.jsonl` (applied edits, undos and redos). Restarting replays the log.

use std::collections::{HashMap, HashSet};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, RwLock};
use std::time::{Duration, Instant};

use crate::error::ApiError;
use crate::session::{Session, SessionSettings};
use crate::wire::LogEntry;

struct Slot {
    /// Serializes commands; readers never take it.
    writer: tokio::sync::Mutex<()>,
    current: RwLock<Arc<Session>>,
    last_access: Mutex<Instant>,
}

pub struct Store {
    settings: SessionSettings,
    ttl: Duration,
    dir: Option<PathBuf>,
    sessions: RwLock<HashMap<String, Arc<Slot>>>,
    expired: RwLock<HashSet<String>>,
}

impl Store {
    pub fn new(settings: SessionSettings, ttl: Duration, dir: Option<PathBuf>) -> std::io::Result<Store> {
        let store = Store {
            settings,
            ttl,
            dir,
            sessions: RwLock::new(HashMap::new()),
            expired: RwLock::new(HashSet::new()),
        };
        store.restore()?;
        Ok(store)
    }

    fn session_dir(&self, id: &str) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(id))
    }

    fn insert(&self, session: Session) -> Arc<Session> {
        let session = Arc::new(session);
        let slot = Slot {
            writer: tokio::sync::Mutex::new(()),
            current: RwLock::new(session.clone()),
            last_access: Mutex::new(Instant::now()),
        };
        self.sessions.write().unwrap().insert(session.id.clone(), Arc::new(slot));
        session
    }

    fn restore(&self) -> std::io::Result<()> {
        let Some(dir) = &self.dir else {
            return Ok(());
        };
        std::fs::create_dir_all(dir)?;
        for entry in std::fs::read_dir(dir)? {
            let path = entry?.path();
            let Some(id) = path.file_name().and_then(|n| n.to_str()).map(str::to_string) else {
                continue;
            };
            match replay(&id, &path, self.settings.clone()) {
                Ok(session) => {
                    self.insert(session);
                }
                Err(e) => tracing::warn!(session = %id, error = %e, "skipping unreadable session"),
            }
        }
        Ok(())
    }

    pub fn create(&self, upload: &str) -> Result<Arc<Session>, ApiError> {
        let id = uuid::Uuid::new_v4().simple().to_string();
        let session = Session::create(id.clone(), upload, self.settings.clone())?;
        if let Some(dir) = self.session_dir(&id) {
            std::fs::create_dir_all(&dir)?;
            std::fs::write(dir.join("upload.json"), upload)?;
            std::fs::write(dir.join("log.jsonl"), "")?;
        }
        Ok(self.insert(session))
    }

    fn slot(&self, id: &str) -> Result<Arc<Slot>, ApiError> {
        let slot = self.sessions.read().unwrap().get(id).cloned();
        let Some(slot) = slot else {
            if self.expired.read().unwrap().contains(id) {
                return Err(ApiError::Expired(id.to_string()));
            }
            return Err(ApiError::UnknownSession(id.to_string()));
        };
        let mut last = slot.last_access.lock().unwrap();
        if last.elapsed() > self.ttl {
            drop(last);
            self.expire(id);
            return Err(ApiError::Expired(id.to_string()));
        }
        *last = Instant::now();
        Ok(slot.clone())
    }

    fn expire(&self, id: &str) {
        self.sessions.write().unwrap().remove(id);
        self.expired.write().unwrap().insert(id.to_string());
        if let Some(dir) = self.session_dir(id) {
            let _ = std::fs::remove_dir_all(dir);
        }
    }

    /// Consistent snapshot for reads.
    pub fn get(&self, id: &str) -> Result<Arc<Session>, ApiError> {
        let slot = self.slot(id)?;
        let current = slot.current.read().unwrap().clone();
        Ok(current)
    }

    /// Runs a command against a copy of the session and publishes it if the
    /// command succeeds. `f` may return a log entry to persist.
    pub async fn update<T>(
        &self,
        id: &str,
        f: impl FnOnce(&mut Session) -> Result<(T, Option<LogEntry>), ApiError>,
    ) -> Result<T, ApiError> {
        let slot = self.slot(id)?;
        let _guard = slot.writer.lock().await;
        let mut session = (**slot.current.read().unwrap()).clone();
        let (value, entry) = f(&mut session)?;
        if let (Some(entry), Some(dir)) = (entry, self.session_dir(id)) {
            append_log(&dir, &entry)?;
        }
        *slot.current.write().unwrap() = Arc::new(session);
        Ok(value)
    }

    pub fn len(&self) -> usize {
        self.sessions.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn append_log(dir: &Path, entry: &LogEntry) -> std::io::Result<()> {
    let mut file = std::fs::OpenOptions::new().create(true).append(true).open(dir.join("log.jsonl"))?;
    let line = serde_json::to_string(entry).expect("log entries serialize");
    writeln!(file, "{line}")
}

fn replay(id: &str, dir: &Path, settings: SessionSettings) -> Result<Session, ApiError> {
    let upload = std::fs::read_to_string(dir.join("upload.json"))?;
    let mut session = Session::create(id.to_string(), &upload, settings)?;
    let log = std::fs::read_to_string(dir.join("log.jsonl")).unwrap_or_default();
    for line in log.lines().filter(|l| !l.trim().is_empty()) {
        let entry: LogEntry = serde_json::from_str(line).map_err(|e| ApiError::BadRequest(e.to_string()))?;
        match entry {
            LogEntry::Edit { command } => {
                let kind = command.to_kind(&session.occurrences)?;
                session.apply(kind)?;
            }
            LogEntry::Undo => {
                session.undo()?;
            }
            LogEntry::Redo => {
                session.redo()?;
            }
        }
    }
    Ok(session)
}
