//! Structured-output parsing: one repair pass, then strict validation of
//! field presence, enum membership, and numeric ranges per registered schema.
//!
//! Validation returns the parsed `serde_json::Value`; typed conversion
//! happens downstream where the target structs live. A payload that fails
//! after repair produces a [`ParseError`] carrying the raw text.

use serde_json::Value;

use super::repair::repair_payload;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchemaId {
    ReactStep,
    ExpertReport,
    Preliminary,
    Synthesis,
    Reflection,
    PlannerDecision,
    DebateTurn,
    DebateJudge,
    FinalDecision,
}

impl SchemaId {
    pub fn as_str(self) -> &'static str {
        match self {
            SchemaId::ReactStep => "react_step",
            SchemaId::ExpertReport => "expert_report",
            SchemaId::Preliminary => "preliminary",
            SchemaId::Synthesis => "synthesis",
            SchemaId::Reflection => "reflection",
            SchemaId::PlannerDecision => "planner_decision",
            SchemaId::DebateTurn => "debate_turn",
            SchemaId::DebateJudge => "debate_judge",
            SchemaId::FinalDecision => "final_decision",
        }
    }
}

#[derive(Debug, Clone, thiserror::Error)]
#[error("schema `{schema}` rejected payload: {message}")]
pub struct ParseError {
    pub schema: &'static str,
    pub message: String,
    /// The raw backend text, preserved for the trace.
    pub raw: String,
}

type Check = Result<(), String>;

const TENDENCIES: [&str; 3] = ["same_author", "different_author", "uncertain"];
const DIMENSIONS: [&str; 4] = ["layout", "lexical", "syntactic", "pattern"];
const LEVELS: [&str; 3] = ["low", "medium", "high"];
const SEVERITIES: [&str; 4] = ["low", "medium", "high", "critical"];
const STRENGTHS: [&str; 3] = ["weak", "moderate", "strong"];
const WEIGHT_SIGNALS: [&str; 5] =
    ["strengthen", "weaken", "strengthen_strong", "weaken_strong", "neutral"];

/// Parses and validates one top-level JSON object. Tries the raw text first,
/// then the single repair pass.
pub fn parse_structured(raw: &str, schema: SchemaId) -> Result<Value, ParseError> {
    let value = serde_json::from_str::<Value>(raw)
        .ok()
        .filter(Value::is_object)
        .or_else(|| {
            serde_json::from_str::<Value>(&repair_payload(raw)).ok().filter(Value::is_object)
        })
        .ok_or_else(|| ParseError {
            schema: schema.as_str(),
            message: "not a JSON object after repair".to_string(),
            raw: raw.to_string(),
        })?;

    validate(&value, schema).map_err(|message| ParseError {
        schema: schema.as_str(),
        message,
        raw: raw.to_string(),
    })?;
    Ok(value)
}

fn validate(v: &Value, schema: SchemaId) -> Check {
    match schema {
        SchemaId::ReactStep => validate_react_step(v),
        SchemaId::ExpertReport => validate_expert_report(v),
        SchemaId::Preliminary => validate_preliminary(v),
        SchemaId::Synthesis => validate_synthesis(v),
        SchemaId::Reflection => validate_reflection(v),
        SchemaId::PlannerDecision => validate_planner(v),
        SchemaId::DebateTurn => validate_debate_turn(v),
        SchemaId::DebateJudge => validate_debate_judge(v),
        SchemaId::FinalDecision => validate_final_decision(v),
    }
}

fn field<'a>(v: &'a Value, name: &str) -> Result<&'a Value, String> {
    v.get(name).ok_or_else(|| format!("missing field `{name}`"))
}

fn str_field<'a>(v: &'a Value, name: &str) -> Result<&'a str, String> {
    field(v, name)?.as_str().ok_or_else(|| format!("field `{name}` must be a string"))
}

fn bool_field(v: &Value, name: &str) -> Result<bool, String> {
    field(v, name)?.as_bool().ok_or_else(|| format!("field `{name}` must be a boolean"))
}

fn num_field(v: &Value, name: &str) -> Result<f64, String> {
    field(v, name)?.as_f64().ok_or_else(|| format!("field `{name}` must be a number"))
}

fn unit_field(v: &Value, name: &str) -> Result<f64, String> {
    let value = num_field(v, name)?;
    if !(0.0..=1.0).contains(&value) {
        return Err(format!("field `{name}` = {value} out of range [0, 1]"));
    }
    Ok(value)
}

fn enum_field(v: &Value, name: &str, allowed: &[&str]) -> Result<String, String> {
    let s = str_field(v, name)?;
    if !allowed.contains(&s) {
        return Err(format!("field `{name}` = `{s}` not in {allowed:?}"));
    }
    Ok(s.to_string())
}

fn str_array_field(v: &Value, name: &str) -> Result<Vec<String>, String> {
    let arr = field(v, name)?
        .as_array()
        .ok_or_else(|| format!("field `{name}` must be an array"))?;
    arr.iter()
        .map(|e| {
            e.as_str()
                .map(str::to_string)
                .ok_or_else(|| format!("field `{name}` must contain only strings"))
        })
        .collect()
}

fn validate_react_step(v: &Value) -> Check {
    str_field(v, "thought")?;
    let stop = bool_field(v, "stop")?;
    let action = field(v, "action")?;
    let action_type = enum_field(action, "type", &["tool", "stop"])?;
    if (action_type == "stop") != stop {
        return Err("`stop` flag must match action type".to_string());
    }
    if action_type == "tool" {
        str_field(action, "name")?;
        if v.get("evidence").map(|e| !e.is_null()).unwrap_or(false) {
            return Err("`evidence` present on a non-stop step".to_string());
        }
    } else {
        let evidence = field(v, "evidence")?;
        if evidence.is_null() {
            return Err("stop step requires `evidence`".to_string());
        }
        str_field(evidence, "summary")?;
        let signals = str_array_field(evidence, "signals")?;
        if signals.is_empty() {
            return Err("stop evidence requires non-empty `signals`".to_string());
        }
        unit_field(evidence, "confidence")?;
    }
    Ok(())
}

fn validate_expert_report(v: &Value) -> Check {
    enum_field(v, "tendency", &TENDENCIES)?;
    unit_field(v, "similarity_score")?;
    unit_field(v, "confidence")?;
    for name in [
        "matches",
        "differences",
        "author_stable_matches",
        "template_or_task_matches",
        "high_risk_confounders",
    ] {
        str_array_field(v, name)?;
    }
    enum_field(v, "signal_quality", &LEVELS)?;
    enum_field(v, "confounder_risk", &LEVELS)?;
    str_field(v, "reasoning")?;
    Ok(())
}

fn validate_preliminary(v: &Value) -> Check {
    enum_field(v, "tendency", &TENDENCIES)?;
    unit_field(v, "confidence")?;
    str_array_field(v, "reasoning")?;
    str_array_field(v, "suspected_confounders")?;
    let routing = field(v, "dimension_routing")?;
    for dim in DIMENSIONS {
        let entry = field(routing, dim)?;
        enum_field(entry, "priority", &LEVELS)?;
        str_field(entry, "focus_question")?;
    }
    Ok(())
}

fn validate_synthesis(v: &Value) -> Check {
    let summaries = field(v, "per_dimension_summary")?
        .as_array()
        .ok_or("`per_dimension_summary` must be an array")?;
    if summaries.len() != 4 {
        return Err(format!("`per_dimension_summary` must have 4 entries, got {}", summaries.len()));
    }
    let mut seen = Vec::new();
    for entry in summaries {
        let dim = enum_field(entry, "dimension", &DIMENSIONS)?;
        if seen.contains(&dim) {
            return Err(format!("duplicate dimension `{dim}` in summary"));
        }
        seen.push(dim);
        enum_field(entry, "tendency", &TENDENCIES)?;
        unit_field(entry, "confidence")?;
        str_field(entry, "key_signal")?;
        bool_field(entry, "is_degraded")?;
        enum_field(entry, "signal_quality", &LEVELS)?;
        enum_field(entry, "confounder_risk", &LEVELS)?;
    }

    let cross = field(v, "cross_dimension_analysis")?;
    str_array_field(cross, "consensus")?;
    str_array_field(cross, "uncertain")?;
    enum_field(cross, "max_severity", &SEVERITIES)?;
    let conflicts =
        field(cross, "conflicts")?.as_array().ok_or("`conflicts` must be an array")?;
    for conflict in conflicts {
        let dims = str_array_field(conflict, "dimensions")?;
        if dims.len() != 2 || dims.iter().any(|d| !DIMENSIONS.contains(&d.as_str())) {
            return Err("each conflict needs exactly two known dimensions".to_string());
        }
        str_field(conflict, "description")?;
        enum_field(conflict, "severity", &SEVERITIES)?;
    }

    let update = field(v, "preliminary_update")?;
    enum_field(update, "status", &["confirmed", "weakened", "overturned"])?;
    str_field(update, "why")?;

    let balance = field(v, "evidence_balance")?;
    for name in
        ["same_author_support", "different_author_support", "main_drivers", "high_risk_confounders"]
    {
        str_array_field(balance, name)?;
    }

    let overall = field(v, "overall_assessment")?;
    enum_field(overall, "tendency", &TENDENCIES)?;
    unit_field(overall, "confidence")?;
    str_field(overall, "reasoning")?;

    str_field(v, "what_changed")?;
    str_array_field(v, "remaining_questions")?;
    Ok(())
}

fn validate_reflection(v: &Value) -> Check {
    num_field(v, "round")?;
    bool_field(v, "evidence_sufficient")?;
    let assessment = field(v, "assessment")?;
    num_field(assessment, "total_dimensions_analyzed")?;
    str_array_field(assessment, "high_confidence_dimensions")?;
    str_array_field(assessment, "resolved_conflicts")?;
    str_array_field(assessment, "unresolved_conflicts")?;
    enum_field(assessment, "overall_evidence_strength", &LEVELS)?;
    enum_field(v, "recommendation", &["FINALIZE", "CONTINUE"])?;
    str_field(v, "reasoning")?;
    Ok(())
}

fn validate_planner(v: &Value) -> Check {
    enum_field(
        v,
        "action_type",
        &["FINALIZE", "RECHECK_DIMENSION", "START_DEBATE", "ADJUST_WEIGHTS"],
    )?;
    str_field(v, "reasoning")?;
    if let Some(params) = v.get("params") {
        if !params.is_object() && !params.is_null() {
            return Err("`params` must be an object".to_string());
        }
    }
    Ok(())
}

fn validate_debate_turn(v: &Value) -> Check {
    // participant turns are recorded verbatim; only the core claim is required
    str_field(v, "claim")?;
    Ok(())
}

fn validate_debate_judge(v: &Value) -> Check {
    str_field(v, "debate_topic")?;
    enum_field(v, "proponent", &DIMENSIONS)?;
    enum_field(v, "opponent", &DIMENSIONS)?;
    num_field(v, "total_turns")?;

    let resolution = field(v, "resolution")?;
    bool_field(resolution, "conflict_resolved")?;
    str_field(resolution, "explanation")?;
    for name in ["dimension_credibility_update", "weight_recommendation"] {
        let map = field(resolution, name)?
            .as_object()
            .ok_or_else(|| format!("`{name}` must be an object"))?;
        for (dim, signal) in map {
            if !DIMENSIONS.contains(&dim.as_str()) {
                return Err(format!("`{name}` has unknown dimension `{dim}`"));
            }
            let s = signal.as_str().ok_or_else(|| format!("`{name}.{dim}` must be a string"))?;
            if !WEIGHT_SIGNALS.contains(&s) {
                return Err(format!("`{name}.{dim}` = `{s}` not in {WEIGHT_SIGNALS:?}"));
            }
        }
    }
    str_array_field(resolution, "new_evidence_from_debate")?;
    str_array_field(resolution, "remaining_issues")?;
    let patches = field(resolution, "report_patch_suggestions")?
        .as_array()
        .ok_or("`report_patch_suggestions` must be an array")?;
    for patch in patches {
        enum_field(patch, "dimension", &DIMENSIONS)?;
        if let Some(t) = patch.get("tendency").filter(|t| !t.is_null()) {
            let s = t.as_str().ok_or("patch `tendency` must be a string")?;
            if !TENDENCIES.contains(&s) {
                return Err(format!("patch tendency `{s}` invalid"));
            }
        }
        if patch.get("confidence").map(|c| !c.is_null()).unwrap_or(false) {
            unit_field(patch, "confidence")?;
        }
    }

    enum_field(v, "final_judgment", &TENDENCIES)?;
    unit_field(v, "confidence_after_debate")?;
    str_field(v, "recommended_next_action")?;
    Ok(())
}

fn validate_final_decision(v: &Value) -> Check {
    enum_field(v, "verdict", &TENDENCIES)?;
    unit_field(v, "confidence")?;

    let chain =
        field(v, "evidence_chain")?.as_array().ok_or("`evidence_chain` must be an array")?;
    if chain.len() != 4 {
        return Err(format!("`evidence_chain` must have 4 items, got {}", chain.len()));
    }
    let mut seen = Vec::new();
    for item in chain {
        let dim = enum_field(item, "dimension", &DIMENSIONS)?;
        if seen.contains(&dim) {
            return Err(format!("duplicate dimension `{dim}` in evidence chain"));
        }
        seen.push(dim);
        enum_field(item, "supports", &TENDENCIES)?;
        enum_field(item, "strength", &STRENGTHS)?;
        let weight = num_field(item, "weight")?;
        if weight < 0.0 {
            return Err(format!("chain weight {weight} must be non-negative"));
        }
        unit_field(item, "similarity_score")?;
        enum_field(item, "confounder_risk", &LEVELS)?;
        str_field(item, "key_evidence")?;
    }

    let alignment = field(v, "process_alignment")?;
    for name in
        ["preliminary_review_status", "dimension_alignment", "debate_contribution", "reflection_adoption"]
    {
        str_field(alignment, name)?;
    }
    str_field(v, "reasoning")?;
    str_array_field(v, "dissenting_opinions")?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn fenced_payload_is_repaired_and_parsed() {
        let raw = "```json\n{\"thought\": \"t\", \"action\": {\"type\": \"tool\", \"name\": \"whitespace_profile\"}, \"stop\": false}\n```";
        let v = parse_structured(raw, SchemaId::ReactStep).unwrap();
        assert_eq!(v["action"]["name"], "whitespace_profile");
    }

    #[test]
    fn stop_without_evidence_is_rejected() {
        let raw = json!({"thought": "done", "action": {"type": "stop"}, "stop": true}).to_string();
        let err = parse_structured(&raw, SchemaId::ReactStep).unwrap_err();
        assert!(err.message.contains("evidence"));
        assert_eq!(err.raw, raw);
    }

    #[test]
    fn out_of_range_similarity_names_the_field() {
        let raw = json!({
            "tendency": "same_author", "similarity_score": 1.4, "confidence": 0.5,
            "matches": [], "differences": [], "author_stable_matches": [],
            "template_or_task_matches": [], "high_risk_confounders": [],
            "signal_quality": "low", "confounder_risk": "low", "reasoning": "r"
        })
        .to_string();
        let err = parse_structured(&raw, SchemaId::ExpertReport).unwrap_err();
        assert!(err.message.contains("similarity_score"));
    }

    #[test]
    fn bad_verdict_enum_is_rejected() {
        let raw = json!({"verdict": "maybe"}).to_string();
        let err = parse_structured(&raw, SchemaId::FinalDecision).unwrap_err();
        assert!(err.message.contains("verdict"));
    }

    #[test]
    fn prose_wrapped_object_parses() {
        let raw = "Here is my answer: {\"claim\": \"x\"} thanks";
        assert!(parse_structured(raw, SchemaId::DebateTurn).is_ok());
    }

    #[test]
    fn non_object_fails_after_repair() {
        assert!(parse_structured("[1, 2]", SchemaId::DebateTurn).is_err());
        assert!(parse_structured("plain prose", SchemaId::DebateTurn).is_err());
    }
}
