//! Chat-completion backend abstraction with per-case call accounting.
//!
//! Three backends implement [`Backend`]: a live HTTP transport, a
//! deterministic tag-keyed replay over recorded transcripts, and a rule-based
//! scripted responder used by tests and golden runs. All case traffic flows
//! through [`CaseGateway`], which enforces the hard per-case call cap and
//! optionally records a transcript. Only successful completions count
//! against the cap and appear in transcripts; transport retries do not.

pub mod live;
mod repair;
pub mod replay;
pub mod scripted;
pub mod structured;

use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicU32, Ordering};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::stylometry::Dimension;

pub use repair::repair_payload;
pub use replay::{ReplayBackend, Transcript, TranscriptEntry};
pub use scripted::{ChaosProfile, ScriptedBackend};
pub use structured::{parse_structured, ParseError, SchemaId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    System,
    User,
    Assistant,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChatMessage {
    pub role: Role,
    pub content: String,
}

impl ChatMessage {
    pub fn system(content: impl Into<String>) -> Self {
        ChatMessage { role: Role::System, content: content.into() }
    }
    pub fn user(content: impl Into<String>) -> Self {
        ChatMessage { role: Role::User, content: content.into() }
    }
}

/// Stage labels used in call tags and trace events.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Init,
    Preliminary,
    React,
    Compare,
    Synthesize,
    Reflect,
    Decide,
    DebateTurn,
    DebateJudge,
    AdjustWeights,
    Recheck,
    Finalize,
}

impl Stage {
    pub fn as_str(self) -> &'static str {
        match self {
            Stage::Init => "init",
            Stage::Preliminary => "preliminary",
            Stage::React => "react",
            Stage::Compare => "compare",
            Stage::Synthesize => "synthesize",
            Stage::Reflect => "reflect",
            Stage::Decide => "decide",
            Stage::DebateTurn => "debate_turn",
            Stage::DebateJudge => "debate_judge",
            Stage::AdjustWeights => "adjust_weights",
            Stage::Recheck => "recheck",
            Stage::Finalize => "finalize",
        }
    }
}

impl FromStr for Stage {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "init" => Stage::Init,
            "preliminary" => Stage::Preliminary,
            "react" => Stage::React,
            "compare" => Stage::Compare,
            "synthesize" => Stage::Synthesize,
            "reflect" => Stage::Reflect,
            "decide" => Stage::Decide,
            "debate_turn" => Stage::DebateTurn,
            "debate_judge" => Stage::DebateJudge,
            "adjust_weights" => Stage::AdjustWeights,
            "recheck" => Stage::Recheck,
            "finalize" => Stage::Finalize,
            other => return Err(format!("unknown stage `{other}`")),
        })
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SampleSide {
    A,
    B,
}

impl SampleSide {
    pub fn as_str(self) -> &'static str {
        match self {
            SampleSide::A => "a",
            SampleSide::B => "b",
        }
    }
}

/// Routing key of one LLM exchange: replay lookup is by tag then sequence,
/// never by wall-clock order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CallTag {
    pub stage: Stage,
    pub round: u32,
    pub dimension: Option<Dimension>,
    pub sample: Option<SampleSide>,
    pub turn: Option<u32>,
}

impl CallTag {
    pub fn new(stage: Stage, round: u32) -> Self {
        CallTag { stage, round, dimension: None, sample: None, turn: None }
    }

    pub fn with_dimension(mut self, dimension: Dimension) -> Self {
        self.dimension = Some(dimension);
        self
    }

    pub fn with_sample(mut self, sample: SampleSide) -> Self {
        self.sample = Some(sample);
        self
    }

    pub fn with_turn(mut self, turn: u32) -> Self {
        self.turn = Some(turn);
        self
    }

    /// Canonical string form: `stage:round:dimension:sample:turn` with `-`
    /// for absent parts.
    pub fn key(&self) -> String {
        format!(
            "{}:{}:{}:{}:{}",
            self.stage,
            self.round,
            self.dimension.map(|d| d.as_str()).unwrap_or("-"),
            self.sample.map(|s| s.as_str()).unwrap_or("-"),
            self.turn.map(|t| t.to_string()).unwrap_or_else(|| "-".to_string()),
        )
    }
}

impl fmt::Display for CallTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.key())
    }
}

pub const DEFAULT_TEMPERATURE: f64 = 0.1;
pub const DEFAULT_MAX_OUTPUT_TOKENS: u32 = 4096;

#[derive(Debug, Clone, PartialEq)]
pub struct ChatRequest {
    /// Non-empty; the first message is the system message.
    pub messages: Vec<ChatMessage>,
    pub temperature: f64,
    pub max_output_tokens: u32,
    pub tag: CallTag,
}

impl ChatRequest {
    pub fn new(system: impl Into<String>, user: impl Into<String>, tag: CallTag) -> Self {
        ChatRequest {
            messages: vec![ChatMessage::system(system), ChatMessage::user(user)],
            temperature: DEFAULT_TEMPERATURE,
            max_output_tokens: DEFAULT_MAX_OUTPUT_TOKENS,
            tag,
        }
    }

    /// SHA-256 digest over roles, contents, and sampling parameters.
    pub fn digest(&self) -> String {
        let mut hasher = Sha256::new();
        for msg in &self.messages {
            hasher.update(match msg.role {
                Role::System => b"system\x1f" as &[u8],
                Role::User => b"user\x1f",
                Role::Assistant => b"assistant\x1f",
            });
            hasher.update(msg.content.as_bytes());
            hasher.update(b"\x1e");
        }
        hasher.update(format!("{}:{}", self.temperature, self.max_output_tokens).as_bytes());
        hex_string(&hasher.finalize())
    }

    pub fn prompt_text(&self) -> String {
        self.messages
            .iter()
            .map(|m| m.content.as_str())
            .collect::<Vec<_>>()
            .join("\n\n")
    }
}

fn hex_string(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum GatewayError {
    #[error("per-case LLM call cap of {cap} exhausted")]
    BudgetExhausted { cap: u32 },
    #[error("transport failure: {0}")]
    Transport(String),
    #[error("replay transcript has no entry for tag `{tag}`")]
    ReplayMiss { tag: String },
    #[error("transcript format error at record {index}: {message}")]
    TranscriptFormat { index: usize, message: String },
    #[error("backend not configured: {0}")]
    NotConfigured(String),
}

/// A chat-completion transport. Implementations must be safe for concurrent
/// use; expert dispatch may fan out.
pub trait Backend: Send + Sync {
    fn complete(&self, request: &ChatRequest) -> Result<String, GatewayError>;
}

/// Atomic per-case call counter with a hard cap. Reservation happens before
/// the transport call and is released on failure, so the committed count
/// always equals the number of successful completions.
#[derive(Debug)]
pub struct CallMeter {
    count: AtomicU32,
    cap: u32,
}

impl CallMeter {
    pub fn new(cap: u32) -> Self {
        CallMeter { count: AtomicU32::new(0), cap }
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    pub fn count(&self) -> u32 {
        self.count.load(Ordering::SeqCst)
    }

    pub fn remaining(&self) -> u32 {
        self.cap.saturating_sub(self.count())
    }

    fn reserve(&self) -> Result<(), GatewayError> {
        self.count
            .fetch_update(Ordering::SeqCst, Ordering::SeqCst, |c| {
                if c < self.cap {
                    Some(c + 1)
                } else {
                    None
                }
            })
            .map(|_| ())
            .map_err(|_| GatewayError::BudgetExhausted { cap: self.cap })
    }

    fn release(&self) {
        self.count.fetch_sub(1, Ordering::SeqCst);
    }
}

/// Records successful exchanges in completion order.
#[derive(Debug, Default)]
pub struct TranscriptRecorder {
    entries: Mutex<Vec<TranscriptEntry>>,
}

impl TranscriptRecorder {
    pub fn new() -> Self {
        Self::default()
    }

    fn push(&self, entry: TranscriptEntry) {
        self.entries.lock().unwrap().push(entry);
    }

    pub fn into_transcript(self) -> Transcript {
        Transcript { entries: self.entries.into_inner().unwrap() }
    }
}

/// Per-case view over a backend: cap enforcement plus optional recording.
pub struct CaseGateway<'a> {
    backend: &'a dyn Backend,
    meter: CallMeter,
    recorder: Option<&'a TranscriptRecorder>,
}

impl<'a> CaseGateway<'a> {
    pub fn new(backend: &'a dyn Backend, call_cap: u32) -> Self {
        CaseGateway { backend, meter: CallMeter::new(call_cap), recorder: None }
    }

    pub fn with_recorder(mut self, recorder: &'a TranscriptRecorder) -> Self {
        self.recorder = Some(recorder);
        self
    }

    pub fn calls(&self) -> u32 {
        self.meter.count()
    }

    pub fn remaining(&self) -> u32 {
        self.meter.remaining()
    }

    pub fn cap(&self) -> u32 {
        self.meter.cap()
    }

    pub fn complete(&self, request: &ChatRequest) -> Result<String, GatewayError> {
        self.meter.reserve()?;
        match self.backend.complete(request) {
            Ok(text) => {
                if let Some(recorder) = self.recorder {
                    recorder.push(TranscriptEntry {
                        tag: request.tag.key(),
                        request_digest: request.digest(),
                        response_text: text.clone(),
                    });
                }
                Ok(text)
            }
            Err(err) => {
                self.meter.release();
                Err(err)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Canned(&'static str);
    impl Backend for Canned {
        fn complete(&self, _request: &ChatRequest) -> Result<String, GatewayError> {
            Ok(self.0.to_string())
        }
    }

    struct Failing;
    impl Backend for Failing {
        fn complete(&self, _request: &ChatRequest) -> Result<String, GatewayError> {
            Err(GatewayError::Transport("down".into()))
        }
    }

    fn request(tag: CallTag) -> ChatRequest {
        ChatRequest::new("sys", "user", tag)
    }

    #[test]
    fn meter_blocks_at_cap() {
        let backend = Canned("ok");
        let gw = CaseGateway::new(&backend, 2);
        let tag = CallTag::new(Stage::Synthesize, 1);
        assert!(gw.complete(&request(tag)).is_ok());
        assert!(gw.complete(&request(tag)).is_ok());
        assert!(matches!(
            gw.complete(&request(tag)),
            Err(GatewayError::BudgetExhausted { cap: 2 })
        ));
        assert_eq!(gw.calls(), 2);
    }

    #[test]
    fn failed_calls_do_not_consume_budget() {
        let backend = Failing;
        let gw = CaseGateway::new(&backend, 2);
        let tag = CallTag::new(Stage::Preliminary, 1);
        assert!(gw.complete(&request(tag)).is_err());
        assert_eq!(gw.calls(), 0);
        assert_eq!(gw.remaining(), 2);
    }

    #[test]
    fn recorder_sees_only_successes() {
        let backend = Canned("hello");
        let recorder = TranscriptRecorder::new();
        let gw = CaseGateway::new(&backend, 1).with_recorder(&recorder);
        let tag = CallTag::new(Stage::Finalize, 3).with_dimension(Dimension::Layout);
        gw.complete(&request(tag)).unwrap();
        assert!(gw.complete(&request(tag)).is_err());
        let transcript = recorder.into_transcript();
        assert_eq!(transcript.entries.len(), 1);
        assert_eq!(transcript.entries[0].tag, "finalize:3:layout:-:-");
        assert_eq!(transcript.entries[0].response_text, "hello");
    }

    #[test]
    fn tag_keys_are_stable() {
        let tag = CallTag::new(Stage::React, 1)
            .with_dimension(Dimension::Lexical)
            .with_sample(SampleSide::B)
            .with_turn(4);
        assert_eq!(tag.key(), "react:1:lexical:b:4");
        assert_eq!(CallTag::new(Stage::Synthesize, 2).key(), "synthesize:2:-:-:-");
    }
}
