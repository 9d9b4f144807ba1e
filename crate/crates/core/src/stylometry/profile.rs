//! Tool registry, evidence dimensions, and the profile/metric model.
//!
//! Every stylometric tool emits a [`ToolProfile`]: a flat map from metric
//! name to a scalar, count, distribution, ranked list, or flag set. Profiles
//! serialize to JSON with field names equal to the metric names; that JSON is
//! the tool-observation payload embedded in agent traces.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// The four evidence families an expert agent can own.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Dimension {
    Layout,
    Lexical,
    Syntactic,
    Pattern,
}

impl Dimension {
    pub const ALL: [Dimension; 4] = [
        Dimension::Layout,
        Dimension::Lexical,
        Dimension::Syntactic,
        Dimension::Pattern,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Dimension::Layout => "layout",
            Dimension::Lexical => "lexical",
            Dimension::Syntactic => "syntactic",
            Dimension::Pattern => "pattern",
        }
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Dimension {
    type Err = RegistryError;

    fn from_str(s: &str) -> Result<Self, RegistryError> {
        match s {
            "layout" => Ok(Dimension::Layout),
            "lexical" => Ok(Dimension::Lexical),
            "syntactic" => Ok(Dimension::Syntactic),
            "pattern" => Ok(Dimension::Pattern),
            other => Err(RegistryError::UnknownDimension(other.to_string())),
        }
    }
}

/// The 17 registered stylometric tools, in canonical registry order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ToolName {
    WhitespaceProfile,
    DelimiterLayoutProfile,
    CommentLayoutProfile,
    FormatStabilityProfile,
    TokenFrequencyProfile,
    TokenNgramProfile,
    CharNgramProfile,
    IdentifierStyleProfile,
    AbstractLexicalProfile,
    AstNodeProfile,
    AstPathProfile,
    TreeShapeProfile,
    ConstructUsageProfile,
    LizardFunctionProfile,
    ControlStrategyProfile,
    ApiIdiomProfile,
    SemanticHabitProfile,
}

impl ToolName {
    pub const ALL: [ToolName; 17] = [
        ToolName::WhitespaceProfile,
        ToolName::DelimiterLayoutProfile,
        ToolName::CommentLayoutProfile,
        ToolName::FormatStabilityProfile,
        ToolName::TokenFrequencyProfile,
        ToolName::TokenNgramProfile,
        ToolName::CharNgramProfile,
        ToolName::IdentifierStyleProfile,
        ToolName::AbstractLexicalProfile,
        ToolName::AstNodeProfile,
        ToolName::AstPathProfile,
        ToolName::TreeShapeProfile,
        ToolName::ConstructUsageProfile,
        ToolName::LizardFunctionProfile,
        ToolName::ControlStrategyProfile,
        ToolName::ApiIdiomProfile,
        ToolName::SemanticHabitProfile,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ToolName::WhitespaceProfile => "whitespace_profile",
            ToolName::DelimiterLayoutProfile => "delimiter_layout_profile",
            ToolName::CommentLayoutProfile => "comment_layout_profile",
            ToolName::FormatStabilityProfile => "format_stability_profile",
            ToolName::TokenFrequencyProfile => "token_frequency_profile",
            ToolName::TokenNgramProfile => "token_ngram_profile",
            ToolName::CharNgramProfile => "char_ngram_profile",
            ToolName::IdentifierStyleProfile => "identifier_style_profile",
            ToolName::AbstractLexicalProfile => "abstract_lexical_profile",
            ToolName::AstNodeProfile => "ast_node_profile",
            ToolName::AstPathProfile => "ast_path_profile",
            ToolName::TreeShapeProfile => "tree_shape_profile",
            ToolName::ConstructUsageProfile => "construct_usage_profile",
            ToolName::LizardFunctionProfile => "lizard_function_profile",
            ToolName::ControlStrategyProfile => "control_strategy_profile",
            ToolName::ApiIdiomProfile => "api_idiom_profile",
            ToolName::SemanticHabitProfile => "semantic_habit_profile",
        }
    }

    pub fn dimension(self) -> Dimension {
        match self {
            ToolName::WhitespaceProfile
            | ToolName::DelimiterLayoutProfile
            | ToolName::CommentLayoutProfile
            | ToolName::FormatStabilityProfile => Dimension::Layout,
            ToolName::TokenFrequencyProfile
            | ToolName::TokenNgramProfile
            | ToolName::CharNgramProfile
            | ToolName::IdentifierStyleProfile
            | ToolName::AbstractLexicalProfile => Dimension::Lexical,
            ToolName::AstNodeProfile
            | ToolName::AstPathProfile
            | ToolName::TreeShapeProfile
            | ToolName::ConstructUsageProfile => Dimension::Syntactic,
            ToolName::LizardFunctionProfile
            | ToolName::ControlStrategyProfile
            | ToolName::ApiIdiomProfile
            | ToolName::SemanticHabitProfile => Dimension::Pattern,
        }
    }

    /// Tools of one dimension, in canonical (lowest-index-first) order.
    pub fn for_dimension(dimension: Dimension) -> Vec<ToolName> {
        Self::ALL
            .iter()
            .copied()
            .filter(|t| t.dimension() == dimension)
            .collect()
    }
}

impl fmt::Display for ToolName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ToolName {
    type Err = RegistryError;

    /// Accepts the canonical registry name, the `extract_`-prefixed tool-call
    /// form, and the short form without the `_profile` suffix.
    fn from_str(s: &str) -> Result<Self, RegistryError> {
        let name = s.strip_prefix("extract_").unwrap_or(s);
        for tool in ToolName::ALL {
            if name == tool.as_str()
                || Some(name) == tool.as_str().strip_suffix("_profile")
            {
                return Ok(tool);
            }
        }
        Err(RegistryError::UnknownTool(s.to_string()))
    }
}

/// A disableable capability: one of the 17 profile tools or the standalone
/// fingerprint comparator (invoked by the coordinator outside the ReAct loop).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DisableTarget {
    Tool(ToolName),
    Fingerprint,
}

impl Serialize for DisableTarget {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for DisableTarget {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl DisableTarget {
    pub fn as_str(self) -> &'static str {
        match self {
            DisableTarget::Tool(t) => t.as_str(),
            DisableTarget::Fingerprint => "fingerprint",
        }
    }
}

impl fmt::Display for DisableTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DisableTarget {
    type Err = RegistryError;

    fn from_str(s: &str) -> Result<Self, RegistryError> {
        if s == "fingerprint" || s == "dolos" || s == "analyze_with_dolos" {
            return Ok(DisableTarget::Fingerprint);
        }
        ToolName::from_str(s).map(DisableTarget::Tool)
    }
}

/// The 8 capabilities disabled on cross-language pairs.
pub fn cross_language_disabled() -> BTreeSet<DisableTarget> {
    [
        DisableTarget::Tool(ToolName::TokenFrequencyProfile),
        DisableTarget::Tool(ToolName::TokenNgramProfile),
        DisableTarget::Tool(ToolName::AbstractLexicalProfile),
        DisableTarget::Tool(ToolName::AstNodeProfile),
        DisableTarget::Tool(ToolName::AstPathProfile),
        DisableTarget::Tool(ToolName::ConstructUsageProfile),
        DisableTarget::Fingerprint,
        DisableTarget::Tool(ToolName::ApiIdiomProfile),
    ]
    .into_iter()
    .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RegistryError {
    #[error("unknown tool `{0}`; registry: {}", registry_names())]
    UnknownTool(String),
    #[error("unknown dimension `{0}` (expected layout|lexical|syntactic|pattern)")]
    UnknownDimension(String),
}

fn registry_names() -> String {
    ToolName::ALL
        .iter()
        .map(|t| t.as_str())
        .collect::<Vec<_>>()
        .join(", ")
}

/// One metric value inside a profile.
///
/// Serializes untagged: counts and scalars as numbers, ranked lists as
/// `[[entry, count], ...]` sorted by descending count with lexicographic
/// tie-break, distributions and count maps as objects, flag sets as arrays.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum MetricValue {
    Count(u64),
    Scalar(f64),
    Ranked(Vec<(String, u64)>),
    Dist(BTreeMap<String, f64>),
    CountMap(BTreeMap<String, u64>),
    Flags(BTreeSet<String>),
}

impl MetricValue {
    pub fn as_scalar(&self) -> Option<f64> {
        match self {
            MetricValue::Scalar(v) => Some(*v),
            MetricValue::Count(c) => Some(*c as f64),
            _ => None,
        }
    }

    pub fn as_count(&self) -> Option<u64> {
        match self {
            MetricValue::Count(c) => Some(*c),
            _ => None,
        }
    }
}

/// Output of one stylometric tool on one code sample.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ToolProfile {
    pub tool_name: ToolName,
    pub dimension: Dimension,
    /// True whenever a real structural parse was unavailable and the
    /// documented fallback was used.
    pub degraded: bool,
    pub metrics: BTreeMap<String, MetricValue>,
}

impl ToolProfile {
    pub fn new(tool_name: ToolName, degraded: bool) -> Self {
        ToolProfile {
            tool_name,
            dimension: tool_name.dimension(),
            degraded,
            metrics: BTreeMap::new(),
        }
    }

    pub fn set(&mut self, name: &str, value: MetricValue) {
        self.metrics.insert(name.to_string(), value);
    }

    pub fn scalar(&self, name: &str) -> Option<f64> {
        self.metrics.get(name).and_then(MetricValue::as_scalar)
    }

    pub fn count(&self, name: &str) -> Option<u64> {
        self.metrics.get(name).and_then(MetricValue::as_count)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("profile serialization is infallible")
    }
}

/// Shared similarity report of the masked k-gram winnowing comparator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FingerprintReport {
    /// Jaccard similarity of the selected fingerprint sets, in [0, 1].
    pub similarity: f64,
    /// Number of shared selected fingerprints.
    pub total_overlap: u64,
    /// Length in tokens of the longest shared masked token run.
    pub longest_fragment: u64,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_has_17_tools_across_4_dimensions() {
        assert_eq!(ToolName::ALL.len(), 17);
        assert_eq!(ToolName::for_dimension(Dimension::Layout).len(), 4);
        assert_eq!(ToolName::for_dimension(Dimension::Lexical).len(), 5);
        assert_eq!(ToolName::for_dimension(Dimension::Syntactic).len(), 4);
        assert_eq!(ToolName::for_dimension(Dimension::Pattern).len(), 4);
    }

    #[test]
    fn tool_names_parse_in_all_three_forms() {
        for tool in ToolName::ALL {
            assert_eq!(tool.as_str().parse::<ToolName>().unwrap(), tool);
            let prefixed = format!("extract_{}", tool.as_str());
            assert_eq!(prefixed.parse::<ToolName>().unwrap(), tool);
            let short = tool.as_str().strip_suffix("_profile").unwrap();
            assert_eq!(short.parse::<ToolName>().unwrap(), tool);
        }
        assert!("bogus_profile".parse::<ToolName>().is_err());
    }

    #[test]
    fn cross_language_disable_list_has_exactly_8_entries() {
        let disabled = cross_language_disabled();
        assert_eq!(disabled.len(), 8);
        assert!(disabled.contains(&DisableTarget::Fingerprint));
        assert!(disabled.contains(&DisableTarget::Tool(ToolName::ApiIdiomProfile)));
    }

    #[test]
    fn metric_values_serialize_untagged() {
        let mut profile = ToolProfile::new(ToolName::WhitespaceProfile, false);
        profile.set("tab_lines", MetricValue::Count(2));
        profile.set("avg_indent", MetricValue::Scalar(4.0));
        let json = profile.to_json();
        assert_eq!(json["metrics"]["tab_lines"], serde_json::json!(2));
        assert_eq!(json["metrics"]["avg_indent"], serde_json::json!(4.0));
        assert_eq!(json["tool_name"], "whitespace_profile");
        assert_eq!(json["dimension"], "layout");
    }
}
