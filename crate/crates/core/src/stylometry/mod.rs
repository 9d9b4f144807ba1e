//! Deterministic stylometric feature extraction.
//!
//! The tool layer every expert agent calls: 17 dimension-specific profile
//! extractors plus a masked k-gram winnowing fingerprint comparator. All
//! operations are pure functions over immutable inputs; two invocations on
//! the same input produce identical profiles.

pub mod fingerprint;
pub mod language;
mod layout;
mod lexical;
mod pattern;
pub mod profile;
pub mod stats;
mod structure;
mod syntactic;
pub mod tokens;

pub use fingerprint::{fingerprint_similarity, FingerprintParams};
pub use language::{detect_language, Language};
pub use profile::{
    cross_language_disabled, Dimension, DisableTarget, FingerprintReport, MetricValue,
    RegistryError, ToolName, ToolProfile,
};
pub use tokens::{tokenize, Token, TokenClass};

/// Tab width used whenever indentation is converted to a spaces-equivalent
/// depth. Four is the dominant convention in the evaluated corpora.
pub const TAB_WIDTH: u64 = 4;

/// One code sample under analysis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeSample {
    pub text: String,
    pub language: Language,
    /// Opaque identifier (path, dataset key, or synthetic label).
    pub origin: String,
}

impl CodeSample {
    pub fn new(text: impl Into<String>, language: Language, origin: impl Into<String>) -> Self {
        CodeSample { text: text.into(), language, origin: origin.into() }
    }

    /// Builds a sample, detecting the language from content and an optional
    /// filename hint.
    pub fn detect(text: impl Into<String>, hint: Option<&str>, origin: impl Into<String>) -> Self {
        let text = text.into();
        let language = detect_language(&text, hint);
        CodeSample { text, language, origin: origin.into() }
    }

    pub fn tokens(&self) -> Vec<Token> {
        tokenize(&self.text, self.language)
    }

    pub fn is_blank(&self) -> bool {
        self.text.trim().is_empty()
    }
}

/// Runs one registered tool on one sample. Deterministic; empty input yields
/// a zeroed, non-degraded profile.
pub fn extract_tool_profile(tool: ToolName, sample: &CodeSample) -> ToolProfile {
    match tool {
        ToolName::WhitespaceProfile => layout::whitespace_profile(sample),
        ToolName::DelimiterLayoutProfile => layout::delimiter_layout_profile(sample),
        ToolName::CommentLayoutProfile => layout::comment_layout_profile(sample),
        ToolName::FormatStabilityProfile => layout::format_stability_profile(sample),
        ToolName::TokenFrequencyProfile => lexical::token_frequency_profile(sample),
        ToolName::TokenNgramProfile => lexical::token_ngram_profile(sample),
        ToolName::CharNgramProfile => lexical::char_ngram_profile(sample),
        ToolName::IdentifierStyleProfile => lexical::identifier_style_profile(sample),
        ToolName::AbstractLexicalProfile => lexical::abstract_lexical_profile(sample),
        ToolName::AstNodeProfile => syntactic::ast_node_profile(sample),
        ToolName::AstPathProfile => syntactic::ast_path_profile(sample),
        ToolName::TreeShapeProfile => syntactic::tree_shape_profile(sample),
        ToolName::ConstructUsageProfile => syntactic::construct_usage_profile(sample),
        ToolName::LizardFunctionProfile => pattern::lizard_function_profile(sample),
        ToolName::ControlStrategyProfile => pattern::control_strategy_profile(sample),
        ToolName::ApiIdiomProfile => pattern::api_idiom_profile(sample),
        ToolName::SemanticHabitProfile => pattern::semantic_habit_profile(sample),
    }
}

/// Runs every tool of one dimension in canonical order.
pub fn extract_dimension_profiles(dimension: Dimension, sample: &CodeSample) -> Vec<ToolProfile> {
    ToolName::for_dimension(dimension)
        .into_iter()
        .map(|tool| extract_tool_profile(tool, sample))
        .collect()
}
