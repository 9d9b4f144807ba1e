//! Training-free code authorship verification.
//!
//! Decides whether two code samples share an author by running four
//! stylometric expert agents (layout, lexical, syntactic, pattern) under a
//! belief-revision coordinator: expert dispatch expands the working belief
//! state, targeted rechecks and structured debates contract unreliable
//! evidence, and a synthesize-reflect-finalize pass revises the preliminary
//! hypothesis into an auditable final decision.
//!
//! The crate is organized around five subsystems:
//!
//! - [`stylometry`]: deterministic extraction of the 17 dimension-specific
//!   feature profiles plus a masked k-gram winnowing fingerprint. Pure
//!   functions, no LLM involvement.
//! - [`gateway`]: the chat-completion backend abstraction (live HTTP,
//!   deterministic record/replay, and a rule-based scripted backend),
//!   structured-output parsing with a single bounded repair pass, and
//!   per-case call accounting.
//! - [`experts`]: the budgeted ReAct tool-selection loop each expert runs per
//!   sample, and the per-dimension pairwise comparator.
//! - [`coordinator`]: the case state machine with hard budgets (rounds,
//!   debates, debate turns, LLM calls) and the trace writer.
//! - [`evaluation`]: pair construction, F1/confusion-matrix metrics, expert
//!   consensus, and the ablation harness.

pub mod config;
pub mod coordinator;
pub mod evaluation;
pub mod experts;
pub mod gateway;
pub mod prompts;
pub mod stylometry;
