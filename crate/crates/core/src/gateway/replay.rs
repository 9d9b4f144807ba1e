//! Recorded transcripts and the deterministic replay backend.
//!
//! A transcript is a newline-delimited sequence of structured records. The
//! replay backend serves responses keyed by tag then sequence (FIFO within a
//! tag), never by wall-clock order, so concurrent expert fan-out replays
//! deterministically as long as same-tag requests stay on one worker.

use std::collections::HashMap;
use std::collections::VecDeque;
use std::fs;
use std::path::Path;
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use super::{Backend, ChatRequest, GatewayError};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranscriptEntry {
    pub tag: String,
    pub request_digest: String,
    pub response_text: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Transcript {
    pub entries: Vec<TranscriptEntry>,
}

impl Transcript {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Serializes to newline-delimited JSON records.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for entry in &self.entries {
            out.push_str(&serde_json::to_string(entry).expect("transcript entries serialize"));
            out.push('\n');
        }
        out
    }

    pub fn from_jsonl(text: &str) -> Result<Self, GatewayError> {
        let mut entries = Vec::new();
        for (index, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let entry: TranscriptEntry =
                serde_json::from_str(line).map_err(|e| GatewayError::TranscriptFormat {
                    index,
                    message: e.to_string(),
                })?;
            entries.push(entry);
        }
        Ok(Transcript { entries })
    }

    pub fn save(&self, path: &Path) -> Result<(), GatewayError> {
        fs::write(path, self.to_jsonl())
            .map_err(|e| GatewayError::Transport(format!("writing transcript: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, GatewayError> {
        let text = fs::read_to_string(path)
            .map_err(|e| GatewayError::Transport(format!("reading transcript {path:?}: {e}")))?;
        Self::from_jsonl(&text)
    }
}

/// Serves scripted responses from a transcript.
pub struct ReplayBackend {
    queues: Mutex<HashMap<String, VecDeque<String>>>,
}

impl ReplayBackend {
    pub fn new(transcript: Transcript) -> Self {
        let mut queues: HashMap<String, VecDeque<String>> = HashMap::new();
        for entry in transcript.entries {
            queues.entry(entry.tag).or_default().push_back(entry.response_text);
        }
        ReplayBackend { queues: Mutex::new(queues) }
    }

    pub fn from_path(path: &Path) -> Result<Self, GatewayError> {
        Ok(Self::new(Transcript::load(path)?))
    }
}

impl Backend for ReplayBackend {
    fn complete(&self, request: &ChatRequest) -> Result<String, GatewayError> {
        let key = request.tag.key();
        let mut queues = self.queues.lock().unwrap();
        queues
            .get_mut(&key)
            .and_then(VecDeque::pop_front)
            .ok_or(GatewayError::ReplayMiss { tag: key })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gateway::{CallTag, Stage};

    fn entry(tag: &str, text: &str) -> TranscriptEntry {
        TranscriptEntry {
            tag: tag.to_string(),
            request_digest: "d".to_string(),
            response_text: text.to_string(),
        }
    }

    #[test]
    fn jsonl_round_trip_is_identity() {
        let t = Transcript {
            entries: vec![entry("synthesize:1:-:-:-", "one"), entry("react:1:layout:a:0", "two")],
        };
        let parsed = Transcript::from_jsonl(&t.to_jsonl()).unwrap();
        assert_eq!(parsed, t);
    }

    #[test]
    fn replay_is_fifo_within_a_tag() {
        let t = Transcript {
            entries: vec![entry("recheck:2:layout:-:-", "first"), entry("recheck:2:layout:-:-", "second")],
        };
        let backend = ReplayBackend::new(t);
        let tag = CallTag::new(Stage::Recheck, 2).with_dimension(crate::stylometry::Dimension::Layout);
        let req = ChatRequest::new("s", "u", tag);
        assert_eq!(backend.complete(&req).unwrap(), "first");
        assert_eq!(backend.complete(&req).unwrap(), "second");
        let miss = backend.complete(&req).unwrap_err();
        assert!(matches!(miss, GatewayError::ReplayMiss { tag } if tag == "recheck:2:layout:-:-"));
    }

    #[test]
    fn truncated_record_reports_its_index() {
        let text = "{\"tag\":\"a\",\"request_digest\":\"d\",\"response_text\":\"x\"}\n{\"tag\": \"b\", \"request";
        let err = Transcript::from_jsonl(text).unwrap_err();
        assert!(matches!(err, GatewayError::TranscriptFormat { index: 1, .. }));
    }
}
