//! Layout dimension tools: whitespace, delimiter placement, comment layout,
//! and formatting stability.
//!
//! Line-based definitions shared by every metric here:
//! - lines are `str::lines()` segments (no trailing empty segment, `\r` stripped);
//! - a line is *indented* when it has a non-empty leading run of spaces/tabs
//!   and non-whitespace content after it;
//! - indent depth is spaces-equivalent with tab = [`crate::stylometry::TAB_WIDTH`];
//! - a line is tab-led or space-led by its first leading character.
//!
//! Delimiter counts are measured on comment/string-masked text, so literal
//! interiors never contribute.

use std::collections::BTreeMap;

use super::profile::{MetricValue, ToolName, ToolProfile};
use super::stats::{mean, pop_std, ratio};
use super::tokens::{Token, TokenClass};
use super::{CodeSample, TAB_WIDTH};

pub(super) struct LineInfo {
    pub starts: Vec<usize>,
    pub lines: Vec<String>,
}

pub(super) fn line_info(text: &str) -> LineInfo {
    let mut starts = Vec::new();
    let mut offset = 0;
    for line in text.split('\n') {
        starts.push(offset);
        offset += line.len() + 1;
    }
    // split('\n') yields a final empty segment after a trailing newline;
    // drop it to match str::lines() semantics.
    let mut lines: Vec<String> =
        text.split('\n').map(|l| l.strip_suffix('\r').unwrap_or(l).to_string()).collect();
    if text.ends_with('\n') {
        lines.pop();
        starts.pop();
    }
    if text.is_empty() {
        lines.clear();
        starts.clear();
    }
    LineInfo { starts, lines }
}

impl LineInfo {
    pub fn line_of(&self, offset: usize) -> usize {
        match self.starts.binary_search(&offset) {
            Ok(i) => i,
            Err(i) => i.saturating_sub(1),
        }
    }
}

fn leading_ws(line: &str) -> &str {
    let end = line
        .char_indices()
        .find(|&(_, c)| c != ' ' && c != '\t')
        .map(|(i, _)| i)
        .unwrap_or(line.len());
    &line[..end]
}

pub(super) fn is_indented(line: &str) -> bool {
    let lead = leading_ws(line);
    !lead.is_empty() && !line.trim().is_empty()
}

pub(super) fn indent_depth(line: &str) -> u64 {
    leading_ws(line)
        .chars()
        .map(|c| if c == '\t' { TAB_WIDTH } else { 1 })
        .sum()
}

pub fn whitespace_profile(sample: &CodeSample) -> ToolProfile {
    let info = line_info(&sample.text);
    let lines = &info.lines;

    let mut tab_lines = 0u64;
    let mut space_lines = 0u64;
    let mut empty_lines = 0u64;
    let mut trailing = 0u64;
    let mut depths = Vec::new();
    let mut lengths = Vec::new();

    for line in lines {
        lengths.push(line.chars().count() as f64);
        if line.trim().is_empty() {
            empty_lines += 1;
        }
        if !line.is_empty() && matches!(line.chars().last(), Some(' ') | Some('\t')) {
            trailing += 1;
        }
        if is_indented(line) {
            depths.push(indent_depth(line) as f64);
            match line.chars().next() {
                Some('\t') => tab_lines += 1,
                _ => space_lines += 1,
            }
        }
    }

    let mut p = ToolProfile::new(ToolName::WhitespaceProfile, false);
    p.set("avg_indent", MetricValue::Scalar(mean(&depths)));
    p.set("tab_lines", MetricValue::Count(tab_lines));
    p.set("space_lines", MetricValue::Count(space_lines));
    p.set("avg_line_length", MetricValue::Scalar(mean(&lengths)));
    p.set("empty_line_ratio", MetricValue::Scalar(ratio(empty_lines, lines.len() as u64)));
    p.set("trailing_space_lines", MetricValue::Count(trailing));
    p.set("indent_std", MetricValue::Scalar(pop_std(&depths)));
    p
}

/// Replaces every non-newline character of string and comment tokens with a
/// NUL sentinel so positional scans skip literal interiors.
pub(super) fn masked_text(text: &str, tokens: &[Token]) -> String {
    let mut masked: Vec<char> = text.chars().collect();
    // Build a byte->char index map once.
    let mut byte_to_char = vec![0usize; text.len() + 1];
    for (ci, (bi, c)) in text.char_indices().enumerate() {
        for b in bi..bi + c.len_utf8() {
            byte_to_char[b] = ci;
        }
    }
    byte_to_char[text.len()] = masked.len();

    for tok in tokens {
        if matches!(tok.class, TokenClass::Str | TokenClass::Comment) {
            let start = byte_to_char[tok.start];
            let end = start + tok.text.chars().count();
            for c in masked[start..end].iter_mut() {
                if *c != '\n' {
                    *c = '\0';
                }
            }
        }
    }
    masked.into_iter().collect()
}

const CONTROL_KEYWORDS: &[&str] =
    &["if", "for", "while", "switch", "catch", "foreach", "elif", "unless", "until", "when"];

pub fn delimiter_layout_profile(sample: &CodeSample) -> ToolProfile {
    let tokens = sample.tokens();
    let masked = masked_text(&sample.text, &tokens);
    let info = line_info(&sample.text);

    let mut comma_space = 0u64;
    let mut comma_tight = 0u64;
    let chars: Vec<char> = masked.chars().collect();
    for (i, &c) in chars.iter().enumerate() {
        if c == ',' {
            match chars.get(i + 1) {
                Some(' ') | Some('\t') => comma_space += 1,
                Some('\n') | Some('\r') | None => {}
                Some(_) => comma_tight += 1,
            }
        }
    }

    let mut space_before = 0u64;
    let mut tight_before = 0u64;
    let code: Vec<&Token> = tokens.iter().collect();
    for (i, tok) in code.iter().enumerate() {
        if tok.class == TokenClass::Kw && CONTROL_KEYWORDS.contains(&tok.text.as_str()) {
            match code.get(i + 1) {
                Some(next) if next.class == TokenClass::Ws => {
                    if let Some(after) = code.get(i + 2) {
                        if after.class == TokenClass::Punc && after.text == "(" {
                            space_before += 1;
                        }
                    }
                }
                Some(next) if next.class == TokenClass::Punc && next.text == "(" => {
                    tight_before += 1;
                }
                _ => {}
            }
        }
    }

    let mut same_line = 0u64;
    let mut next_line = 0u64;
    for tok in &tokens {
        if tok.class == TokenClass::Punc && tok.text == "{" {
            let line = info.line_of(tok.start);
            let line_start = info.starts[line];
            let before = &sample.text[line_start..tok.start];
            if before.chars().all(|c| c == ' ' || c == '\t') {
                next_line += 1;
            } else {
                same_line += 1;
            }
        }
    }

    let mut p = ToolProfile::new(ToolName::DelimiterLayoutProfile, false);
    p.set("control_space_before_paren", MetricValue::Count(space_before));
    p.set("control_tight_before_paren", MetricValue::Count(tight_before));
    p.set("comma_space", MetricValue::Count(comma_space));
    p.set("comma_tight", MetricValue::Count(comma_tight));
    p.set("same_line_block_opener", MetricValue::Count(same_line));
    p.set("next_line_block_opener", MetricValue::Count(next_line));
    p
}

const DOC_COMMENT_PREFIXES: &[&str] = &["///", "//!", "/**", "##", "-- |", "{-|"];

pub fn comment_layout_profile(sample: &CodeSample) -> ToolProfile {
    let tokens = sample.tokens();
    let info = line_info(&sample.text);

    let mut inline = 0u64;
    let mut standalone = 0u64;
    let mut doc = 0u64;
    let mut comment_lines: BTreeMap<usize, ()> = BTreeMap::new();

    for tok in &tokens {
        if tok.class != TokenClass::Comment {
            continue;
        }
        let line = info.line_of(tok.start);
        let spanned = tok.text.matches('\n').count();
        for l in line..=line + spanned {
            comment_lines.insert(l, ());
        }
        let line_start = info.starts[line];
        let before = &sample.text[line_start..tok.start];
        if before.chars().all(|c| c == ' ' || c == '\t') {
            standalone += 1;
        } else {
            inline += 1;
        }
        if DOC_COMMENT_PREFIXES.iter().any(|p| tok.text.starts_with(p)) {
            doc += 1;
        }
    }

    let mut p = ToolProfile::new(ToolName::CommentLayoutProfile, false);
    p.set(
        "comment_line_ratio",
        MetricValue::Scalar(ratio(comment_lines.len() as u64, info.lines.len() as u64)),
    );
    p.set("inline_comments", MetricValue::Count(inline));
    p.set("standalone_comments", MetricValue::Count(standalone));
    p.set("doc_comments", MetricValue::Count(doc));
    p
}

pub fn format_stability_profile(sample: &CodeSample) -> ToolProfile {
    let info = line_info(&sample.text);

    // Indent unit switches over consecutive members of the indented-line
    // sequence: a switch is a change between tab-led and space-led.
    let leads: Vec<bool> = info
        .lines
        .iter()
        .filter(|l| is_indented(l))
        .map(|l| l.starts_with('\t'))
        .collect();
    let pairs = leads.len().saturating_sub(1) as u64;
    let switches = leads.windows(2).filter(|w| w[0] != w[1]).count() as u64;

    let lengths: Vec<f64> = info.lines.iter().map(|l| l.chars().count() as f64).collect();

    let mut p = ToolProfile::new(ToolName::FormatStabilityProfile, false);
    p.set("indent_switch_rate", MetricValue::Scalar(ratio(switches, pairs)));
    p.set("line_length_std", MetricValue::Scalar(pop_std(&lengths)));
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stylometry::Language;

    fn sample(text: &str, lang: Language) -> CodeSample {
        CodeSample::new(text, lang, "test")
    }

    #[test]
    fn whitespace_profile_on_tab_indented_lines() {
        let p = whitespace_profile(&sample("a\n\tb\n\tc\n", Language::Unknown));
        assert_eq!(p.count("tab_lines"), Some(2));
        assert_eq!(p.count("space_lines"), Some(0));
        assert_eq!(p.scalar("empty_line_ratio"), Some(0.0));
        // two indented lines, one tab each, spaces-equivalent 4
        assert_eq!(p.scalar("avg_indent"), Some(4.0));
        assert_eq!(p.scalar("indent_std"), Some(0.0));
    }

    #[test]
    fn delimiter_profile_on_kr_if() {
        let p = delimiter_layout_profile(&sample("if (x) { y(); }", Language::C));
        assert_eq!(p.count("control_space_before_paren"), Some(1));
        assert_eq!(p.count("control_tight_before_paren"), Some(0));
        assert_eq!(p.count("same_line_block_opener"), Some(1));
        assert_eq!(p.count("next_line_block_opener"), Some(0));
    }

    #[test]
    fn delimiter_counts_ignore_string_interiors() {
        let p = delimiter_layout_profile(&sample("f(\"a,b\", c);", Language::C));
        assert_eq!(p.count("comma_space"), Some(1));
        assert_eq!(p.count("comma_tight"), Some(0));
    }

    #[test]
    fn comment_layout_distinguishes_inline_and_standalone() {
        let text = "// top\nx = 1 # trail\n";
        let p = comment_layout_profile(&sample(text, Language::Unknown));
        assert_eq!(p.count("standalone_comments"), Some(1));
        assert_eq!(p.count("inline_comments"), Some(1));
        assert_eq!(p.scalar("comment_line_ratio"), Some(1.0));
    }

    #[test]
    fn indent_switch_rate_counts_unit_changes() {
        // indented lines: tab, space, tab -> 2 switches over 2 pairs
        let text = "a\n\tb\n  c\n\td\n";
        let p = format_stability_profile(&sample(text, Language::Unknown));
        assert_eq!(p.scalar("indent_switch_rate"), Some(1.0));
    }

    #[test]
    fn empty_input_zeroes_everything() {
        let p = whitespace_profile(&sample("", Language::C));
        assert_eq!(p.scalar("avg_indent"), Some(0.0));
        assert_eq!(p.scalar("empty_line_ratio"), Some(0.0));
        assert!(!p.degraded);
    }
}
