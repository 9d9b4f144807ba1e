//! The single bounded repair pass for near-JSON payloads.
//!
//! Handles the three documented defect families: markdown code fences,
//! leading/trailing prose around the object, and missing trailing braces.
//! Repairing an already-valid object payload is the identity (after
//! whitespace trim), which keeps the pass safe to apply unconditionally.

/// Repairs `raw` toward a single top-level JSON object. Never errors; the
/// caller decides by attempting to parse the result.
pub fn repair_payload(raw: &str) -> String {
    let mut s = raw.trim();

    // strip markdown fences
    if s.starts_with("```") {
        if let Some(nl) = s.find('\n') {
            s = &s[nl + 1..];
        } else {
            s = "";
        }
    }
    if let Some(stripped) = s.trim_end().strip_suffix("```") {
        s = stripped;
    }
    let s = s.trim();

    // trim prose before the first opening brace
    let Some(open) = s.find('{') else {
        return s.to_string();
    };
    let s = &s[open..];

    // walk to the matching close, string-aware; cut trailing prose or append
    // the missing closers
    let mut depth = 0i32;
    let mut in_string = false;
    let mut escaped = false;
    for (i, c) in s.char_indices() {
        if in_string {
            if escaped {
                escaped = false;
            } else if c == '\\' {
                escaped = true;
            } else if c == '"' {
                in_string = false;
            }
            continue;
        }
        match c {
            '"' => in_string = true,
            '{' => depth += 1,
            '}' => {
                depth -= 1;
                if depth == 0 {
                    return s[..=i].to_string();
                }
            }
            _ => {}
        }
    }
    let mut out = s.to_string();
    if in_string {
        out.push('"');
    }
    for _ in 0..depth.max(0) {
        out.push('}');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valid_payload_is_identity() {
        let raw = r#"{"a": 1, "b": {"c": "}x{"}}"#;
        assert_eq!(repair_payload(raw), raw);
    }

    #[test]
    fn strips_fences() {
        let raw = "```json\n{\"a\": 1}\n```";
        assert_eq!(repair_payload(raw), "{\"a\": 1}");
    }

    #[test]
    fn trims_prose_on_both_sides() {
        let raw = "Here is my answer: {\"a\": 1} hope that helps";
        assert_eq!(repair_payload(raw), "{\"a\": 1}");
    }

    #[test]
    fn balances_missing_trailing_braces() {
        assert_eq!(repair_payload("{\"a\": {\"b\": 1}"), "{\"a\": {\"b\": 1}}");
    }

    #[test]
    fn no_brace_returns_trimmed_input() {
        assert_eq!(repair_payload("  not json  "), "not json");
    }
}
