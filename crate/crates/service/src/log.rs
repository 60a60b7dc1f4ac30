//! Append-only session log in JSON lines.

use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::model::{CreateSession, DatasetQuery, DiscoverRequest, SelectRequest};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "camelCase")]
pub enum Event {
    #[serde(rename_all = "camelCase")]
    Dataset {
        dataset_id: String,
        query: DatasetQuery,
    },
    #[serde(rename_all = "camelCase")]
    Session {
        session_id: String,
        request: CreateSession,
    },
    #[serde(rename_all = "camelCase")]
    Discover {
        session_id: String,
        request: DiscoverRequest,
        timestamp: u64,
    },
    #[serde(rename_all = "camelCase")]
    Select {
        session_id: String,
        request: SelectRequest,
    },
}

/// The log file plus the uploaded tables it refers to.
pub struct EventLog {
    dir: PathBuf,
    file: File,
}

impl EventLog {
    const FILE: &'static str = "events.jsonl";

    /// Opens or creates the log under `dir` and returns it with the events
    /// recorded so far.
    pub fn open(dir: &Path) -> std::io::Result<(EventLog, Vec<Event>)> {
        fs::create_dir_all(dir.join("datasets"))?;
        let path = dir.join(Self::FILE);
        let mut events = Vec::new();
        if path.exists() {
            for (n, line) in BufReader::new(File::open(&path)?).lines().enumerate() {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                match serde_json::from_str(&line) {
                    Ok(e) => events.push(e),
                    // a torn final line from a crash mid-append
                    Err(e) => log::warn!(
                        "{}:{}: skipping unreadable event: {e}",
                        path.display(),
                        n + 1
                    ),
                }
            }
        }
        let file = OpenOptions::new().create(true).append(true).open(&path)?;
        Ok((
            EventLog {
                dir: dir.to_path_buf(),
                file,
            },
            events,
        ))
    }

    pub fn append(&mut self, event: &Event) -> std::io::Result<()> {
        let mut line = serde_json::to_string(event).expect("events serialize");
        line.push('\n');
        self.file.write_all(line.as_bytes())?;
        self.file.sync_data()
    }

    pub fn dataset_path(&self, id: &str) -> PathBuf {
        self.dir.join("datasets").join(format!("{id}.csv"))
    }

    pub fn store_dataset(&self, id: &str, body: &[u8]) -> std::io::Result<()> {
        fs::write(self.dataset_path(id), body)
    }
}
