//! Prompt pack: built-in stage prompts with optional directory overrides.
//!
//! Prompts are keyed by `(dimension, phase, cross_language)` through plain
//! file names (`react_layout`, `compare_lexical`, `preliminary_cross`, ...).
//! A prompt-pack directory may override any built-in by providing
//! `<name>.txt`. User messages embed machine-readable context as delimited
//! blocks; [`context_block`] is the inverse of [`block`] and is what the
//! scripted backend uses to answer consistently.

use std::collections::BTreeMap;
use std::path::PathBuf;

use crate::stylometry::Dimension;

macro_rules! builtin {
    ($($name:literal),* $(,)?) => {
        &[$(($name, include_str!(concat!("text/", $name, ".txt")))),*]
    };
}

const BUILTIN: &[(&str, &str)] = builtin![
    "react_layout",
    "react_lexical",
    "react_syntactic",
    "react_pattern",
    "compare_layout",
    "compare_lexical",
    "compare_syntactic",
    "compare_pattern",
    "compare_cross",
    "preliminary",
    "preliminary_cross",
    "synthesize",
    "reflect",
    "decide",
    "debate_participant",
    "debate_judge",
    "finalize",
    "finalize_cross",
    "recheck",
];

#[derive(Debug, Clone, Default)]
pub struct PromptPack {
    overrides: Option<PathBuf>,
}

impl PromptPack {
    pub fn builtin() -> Self {
        PromptPack { overrides: None }
    }

    /// Uses `<dir>/<name>.txt` when present, falling back to the built-in.
    pub fn with_overrides(dir: impl Into<PathBuf>) -> Self {
        PromptPack { overrides: Some(dir.into()) }
    }

    pub fn get(&self, name: &str) -> String {
        if let Some(dir) = &self.overrides {
            let path = dir.join(format!("{name}.txt"));
            if let Ok(text) = std::fs::read_to_string(&path) {
                return text;
            }
        }
        BUILTIN
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, text)| text.to_string())
            .unwrap_or_else(|| panic!("unknown prompt `{name}`"))
    }

    pub fn react(&self, dimension: Dimension) -> String {
        self.get(&format!("react_{dimension}"))
    }

    pub fn compare(&self, dimension: Dimension, cross_language: bool) -> String {
        if cross_language {
            render_cross_compare(&self.get("compare_cross"), dimension)
        } else {
            self.get(&format!("compare_{dimension}"))
        }
    }

    pub fn preliminary(&self, cross_language: bool) -> String {
        if cross_language {
            format!("{}\n{}", self.get("preliminary"), self.get("preliminary_cross"))
        } else {
            self.get("preliminary")
        }
    }

    pub fn finalize(&self, cross_language: bool) -> String {
        if cross_language {
            format!("{}\n{}", self.get("finalize"), self.get("finalize_cross"))
        } else {
            self.get("finalize")
        }
    }
}

/// Per-dimension focus rows rendered into the cross-language comparator
/// prompt: (author-stable signals, different-author cues, confounders).
pub fn dimension_focus(dimension: Dimension) -> (&'static str, &'static str, &'static str) {
    match dimension {
        Dimension::Layout => (
            "indentation habits; brace and delimiter combinations; micro-spacing; blank-line rhythm; comment placement",
            "conflicting indent units; systematic brace disagreement; different comment density; divergent spacing micro-habits",
            "auto-formatters; code-size wrapping effects; shared boilerplate",
        ),
        Dimension::Lexical => (
            "identifier morphology and casing; temp-variable habits; abstract token templates; operator-keyword phrasing",
            "conflicting naming discipline; different identifier lengths; different keyword phrasing",
            "problem vocabulary; language keywords; char-ngram and token overlap inherited from templates",
        ),
        Dimension::Syntactic => (
            "decomposition habits; control-structure composition; structural sequencing; cross-language structural preferences",
            "different decomposition; different guard/nesting style; recursion versus iteration preference",
            "algorithm templates (DFS/BFS/DP); parser degradation; problem complexity",
        ),
        Dimension::Pattern => (
            "problem-solving decomposition; complexity concentration; API and idiom selection; semantic naming habits",
            "different decomposition depth; different data-structure choices; different defensive habits",
            "problem requirements; ecosystem idioms; small programs with sparse evidence",
        ),
    }
}

fn render_cross_compare(template: &str, dimension: Dimension) -> String {
    let (stable, different, confounders) = dimension_focus(dimension);
    template
        .replace("{dimension}", dimension.as_str())
        .replace("{stable_focus}", stable)
        .replace("{different_focus}", different)
        .replace("{confounders}", confounders)
}

/// Wraps machine-readable context for embedding in a user message.
pub fn block(key: &str, content: &str) -> String {
    format!("### BEGIN {key}\n{content}\n### END {key}\n")
}

/// Extracts a context block embedded with [`block`].
pub fn context_block(text: &str, key: &str) -> Option<String> {
    let open = format!("### BEGIN {key}\n");
    let close = format!("\n### END {key}");
    let start = text.find(&open)? + open.len();
    let end = text[start..].find(&close)? + start;
    Some(text[start..end].to_string())
}

/// Convenience: serialize and wrap a JSON context value.
pub fn json_block(key: &str, value: &serde_json::Value) -> String {
    block(key, &serde_json::to_string(value).expect("context serializes"))
}

/// Parse a JSON context block back out of a prompt.
pub fn json_context(text: &str, key: &str) -> Option<serde_json::Value> {
    serde_json::from_str(&context_block(text, key)?).ok()
}

/// Standard block keys shared by prompt builders and the scripted backend.
pub mod keys {
    pub const CODE_A: &str = "CODE_A";
    pub const CODE_B: &str = "CODE_B";
    pub const PAIR_META: &str = "PAIR_META";
    pub const TOOLS: &str = "TOOLS";
    pub const OBSERVATIONS: &str = "OBSERVATIONS";
    pub const EVIDENCE_A: &str = "EVIDENCE_A";
    pub const EVIDENCE_B: &str = "EVIDENCE_B";
    pub const PROFILES_A: &str = "PROFILES_A";
    pub const PROFILES_B: &str = "PROFILES_B";
    pub const FINGERPRINT: &str = "FINGERPRINT";
    pub const PRELIMINARY: &str = "PRELIMINARY";
    pub const REPORTS: &str = "REPORTS";
    pub const SYNTHESIS: &str = "SYNTHESIS";
    pub const REFLECTION: &str = "REFLECTION";
    pub const DEBATE: &str = "DEBATE";
    pub const DEBATE_TURNS: &str = "DEBATE_TURNS";
    pub const PRIOR_REPORT: &str = "PRIOR_REPORT";
    pub const WEIGHTS: &str = "WEIGHTS";
    pub const ROUND: &str = "ROUND";
}

/// Ordered map of all built-in prompt names to their text; used by tests and
/// the prompt-pack export path.
pub fn builtin_names() -> BTreeMap<&'static str, &'static str> {
    BUILTIN.iter().copied().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_builtins_load() {
        let pack = PromptPack::builtin();
        for (name, _) in BUILTIN {
            assert!(!pack.get(name).is_empty(), "{name} is empty");
        }
    }

    #[test]
    fn block_round_trip() {
        let wrapped = block("REPORTS", "{\"a\": 1}");
        assert_eq!(context_block(&wrapped, "REPORTS").unwrap(), "{\"a\": 1}");
        assert_eq!(context_block(&wrapped, "OTHER"), None);
    }

    #[test]
    fn cross_compare_renders_dimension_rows() {
        let pack = PromptPack::builtin();
        let text = pack.compare(Dimension::Pattern, true);
        assert!(text.contains("pattern"));
        assert!(text.contains("complexity concentration"));
        assert!(!text.contains("{stable_focus}"));
    }

    #[test]
    fn overrides_win_over_builtins() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("synthesize.txt"), "OVERRIDDEN").unwrap();
        let pack = PromptPack::with_overrides(dir.path());
        assert_eq!(pack.get("synthesize"), "OVERRIDDEN");
        assert!(pack.get("reflect").contains("sufficien"));
    }
}
