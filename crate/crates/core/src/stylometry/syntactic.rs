//! Syntactic dimension tools over the structural parse, with documented
//! degraded fallbacks when no grammar strategy exists for the language or
//! the parse-error density exceeds 20% of lines: keyword pseudo-nodes for
//! node ratios, abstract token bigrams for paths, bracket nesting for tree
//! shape, and keyword counting for construct usage.

use std::collections::BTreeMap;

use super::profile::{MetricValue, ToolName, ToolProfile};
use super::stats::{bump, mean, pop_std, ranked_top, ratio, RANKED_LIMIT};
use super::structure::{self, NodeKind, ParseOutcome};
use super::tokens::TokenClass;
use super::CodeSample;

const DEGRADE_ERROR_DENSITY: f64 = 0.20;

/// A usable (non-degraded) parse, or None when the fallback applies.
fn usable_parse(sample: &CodeSample) -> Option<ParseOutcome> {
    let outcome = structure::parse(&sample.text, sample.language)?;
    if outcome.error_density() > DEGRADE_ERROR_DENSITY {
        return None;
    }
    Some(outcome)
}

fn zeroed(tool: ToolName, names_counts: &[&str], names_scalars: &[&str]) -> ToolProfile {
    let mut p = ToolProfile::new(tool, false);
    for n in names_counts {
        p.set(n, MetricValue::Count(0));
    }
    for n in names_scalars {
        p.set(n, MetricValue::Scalar(0.0));
    }
    p
}

pub fn ast_node_profile(sample: &CodeSample) -> ToolProfile {
    if sample.is_blank() {
        let mut p = ToolProfile::new(ToolName::AstNodeProfile, false);
        p.set("node_ratios", MetricValue::Dist(BTreeMap::new()));
        return p;
    }

    if let Some(parse) = usable_parse(sample) {
        let mut counts: BTreeMap<String, u64> = BTreeMap::new();
        for node in &parse.nodes {
            bump(&mut counts, node.kind.as_str());
        }
        let total: u64 = counts.values().sum();
        let dist: BTreeMap<String, f64> =
            counts.into_iter().map(|(k, v)| (k, ratio(v, total))).collect();
        let mut p = ToolProfile::new(ToolName::AstNodeProfile, false);
        p.set("node_ratios", MetricValue::Dist(dist));
        return p;
    }

    // degraded: keyword pseudo-nodes
    let mut counts: BTreeMap<String, u64> = BTreeMap::new();
    for tok in sample.tokens() {
        if tok.class == TokenClass::Kw {
            if let Some(kind) = pseudo_kind(&tok.text) {
                bump(&mut counts, kind.as_str());
            }
        }
    }
    let total: u64 = counts.values().sum();
    let dist: BTreeMap<String, f64> =
        counts.into_iter().map(|(k, v)| (k, ratio(v, total))).collect();
    let mut p = ToolProfile::new(ToolName::AstNodeProfile, true);
    p.set("node_ratios", MetricValue::Dist(dist));
    p
}

fn pseudo_kind(keyword: &str) -> Option<NodeKind> {
    Some(match keyword {
        "if" | "elif" | "elsif" | "unless" => NodeKind::If,
        "else" => NodeKind::Else,
        "for" | "foreach" => NodeKind::For,
        "while" | "until" => NodeKind::While,
        "switch" | "match" | "select" => NodeKind::Switch,
        "case" | "when" | "default" => NodeKind::Case,
        "try" | "begin" => NodeKind::Try,
        "catch" | "except" | "rescue" => NodeKind::Catch,
        "return" | "yield" => NodeKind::Return,
        "break" => NodeKind::Break,
        "continue" | "next" => NodeKind::Continue,
        "throw" | "raise" => NodeKind::Throw,
        "import" | "using" | "package" | "from" | "module" => NodeKind::Import,
        "class" | "struct" | "interface" | "enum" => NodeKind::Class,
        "def" | "func" => NodeKind::Function,
        _ => return None,
    })
}

pub fn ast_path_profile(sample: &CodeSample) -> ToolProfile {
    if sample.is_blank() {
        let mut p = ToolProfile::new(ToolName::AstPathProfile, false);
        p.set("parent_child_pairs", MetricValue::Ranked(Vec::new()));
        p.set("sibling_pairs", MetricValue::Ranked(Vec::new()));
        return p;
    }

    if let Some(parse) = usable_parse(sample) {
        let mut parent_child = BTreeMap::new();
        let mut siblings = BTreeMap::new();
        for node in &parse.nodes {
            for &child in &node.children {
                bump(
                    &mut parent_child,
                    format!("{}>{}", node.kind.as_str(), parse.nodes[child].kind.as_str()),
                );
            }
            for pair in node.children.windows(2) {
                bump(
                    &mut siblings,
                    format!(
                        "{}|{}",
                        parse.nodes[pair[0]].kind.as_str(),
                        parse.nodes[pair[1]].kind.as_str()
                    ),
                );
            }
        }
        let mut p = ToolProfile::new(ToolName::AstPathProfile, false);
        p.set("parent_child_pairs", MetricValue::Ranked(ranked_top(&parent_child, RANKED_LIMIT)));
        p.set("sibling_pairs", MetricValue::Ranked(ranked_top(&siblings, RANKED_LIMIT)));
        return p;
    }

    // degraded: abstract token bigrams stand in for paths
    let tokens = sample.tokens();
    let code: Vec<_> = tokens.iter().filter(|t| t.class.is_code()).collect();
    let mut bigrams = BTreeMap::new();
    for pair in code.windows(2) {
        bump(&mut bigrams, format!("{} {}", pair[0].class.as_str(), pair[1].class.as_str()));
    }
    let mut p = ToolProfile::new(ToolName::AstPathProfile, true);
    p.set("parent_child_pairs", MetricValue::Ranked(ranked_top(&bigrams, RANKED_LIMIT)));
    p.set("sibling_pairs", MetricValue::Ranked(Vec::new()));
    p
}

pub fn tree_shape_profile(sample: &CodeSample) -> ToolProfile {
    if sample.is_blank() {
        return zeroed(
            ToolName::TreeShapeProfile,
            &["max_depth", "node_count"],
            &["avg_branching", "branching_std"],
        );
    }

    if let Some(parse) = usable_parse(sample) {
        let mut depths = vec![0usize; parse.nodes.len()];
        let mut max_depth = 0usize;
        for (idx, node) in parse.nodes.iter().enumerate() {
            for &child in &node.children {
                depths[child] = depths[idx] + 1;
                max_depth = max_depth.max(depths[child]);
            }
        }
        let branching: Vec<f64> = parse
            .nodes
            .iter()
            .filter(|n| !n.children.is_empty())
            .map(|n| n.children.len() as f64)
            .collect();
        let mut p = ToolProfile::new(ToolName::TreeShapeProfile, false);
        p.set("max_depth", MetricValue::Count(max_depth as u64));
        p.set("node_count", MetricValue::Count(parse.nodes.len() as u64));
        p.set("avg_branching", MetricValue::Scalar(mean(&branching)));
        p.set("branching_std", MetricValue::Scalar(pop_std(&branching)));
        return p;
    }

    // degraded: bracket-nesting pseudo-tree
    let tokens = sample.tokens();
    let mut child_counts: Vec<u64> = vec![0]; // [0] is the pseudo-root
    let mut stack: Vec<usize> = vec![0];
    let mut depth = 0usize;
    let mut max_depth = 0usize;
    let mut groups = 0u64;
    for tok in &tokens {
        if !tok.class.is_code() {
            continue;
        }
        match tok.text.as_str() {
            "(" | "[" | "{" => {
                groups += 1;
                child_counts[*stack.last().unwrap()] += 1;
                child_counts.push(0);
                stack.push(child_counts.len() - 1);
                depth += 1;
                max_depth = max_depth.max(depth);
            }
            ")" | "]" | "}" => {
                if stack.len() > 1 {
                    stack.pop();
                    depth -= 1;
                }
            }
            _ => {}
        }
    }
    let branching: Vec<f64> =
        child_counts.iter().filter(|&&c| c > 0).map(|&c| c as f64).collect();
    let mut p = ToolProfile::new(ToolName::TreeShapeProfile, true);
    p.set("max_depth", MetricValue::Count(max_depth as u64));
    p.set("node_count", MetricValue::Count(groups + 1));
    p.set("avg_branching", MetricValue::Scalar(mean(&branching)));
    p.set("branching_std", MetricValue::Scalar(pop_std(&branching)));
    p
}

const DEGRADED_IF: &[&str] = &["if", "elif", "elsif", "unless"];
const DEGRADED_FOR: &[&str] = &["for", "foreach"];
const DEGRADED_WHILE: &[&str] = &["while", "until"];
const DEGRADED_SWITCH: &[&str] = &["switch"];
const DEGRADED_RETURN: &[&str] = &["return"];

pub fn construct_usage_profile(sample: &CodeSample) -> ToolProfile {
    let count_names =
        ["if_count", "for_count", "while_count", "switch_count", "return_count", "statement_count"];
    let ratio_names = ["if_ratio", "for_ratio", "while_ratio", "switch_ratio", "return_ratio"];
    if sample.is_blank() {
        return zeroed(ToolName::ConstructUsageProfile, &count_names, &ratio_names);
    }

    let (counts, statements, degraded) = if let Some(parse) = usable_parse(sample) {
        let count_kind = |kind: NodeKind| -> u64 {
            parse.nodes.iter().filter(|n| n.kind == kind).count() as u64
        };
        let statements = parse
            .nodes
            .iter()
            .filter(|n| !matches!(n.kind, NodeKind::Root | NodeKind::Block))
            .count() as u64;
        (
            [
                count_kind(NodeKind::If),
                count_kind(NodeKind::For),
                count_kind(NodeKind::While),
                count_kind(NodeKind::Switch),
                count_kind(NodeKind::Return),
            ],
            statements,
            false,
        )
    } else {
        let tokens = sample.tokens();
        let count_kw = |set: &[&str]| -> u64 {
            tokens
                .iter()
                .filter(|t| t.class == TokenClass::Kw && set.contains(&t.text.as_str()))
                .count() as u64
        };
        // statement proxy: lines carrying at least one code token
        let info = super::layout::line_info(&sample.text);
        let mut has_code = vec![false; info.lines.len()];
        for t in &tokens {
            if t.class.is_code() {
                let l = info.line_of(t.start);
                if l < has_code.len() {
                    has_code[l] = true;
                }
            }
        }
        let statements = has_code.iter().filter(|&&b| b).count() as u64;
        (
            [
                count_kw(DEGRADED_IF),
                count_kw(DEGRADED_FOR),
                count_kw(DEGRADED_WHILE),
                count_kw(DEGRADED_SWITCH),
                count_kw(DEGRADED_RETURN),
            ],
            statements,
            true,
        )
    };

    let mut p = ToolProfile::new(ToolName::ConstructUsageProfile, degraded);
    for (name, value) in count_names.iter().take(5).zip(counts.iter()) {
        p.set(name, MetricValue::Count(*value));
    }
    p.set("statement_count", MetricValue::Count(statements));
    for (name, value) in ratio_names.iter().zip(counts.iter()) {
        p.set(name, MetricValue::Scalar(ratio(*value, statements)));
    }
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
    fn construct_usage_counts_python_constructs() {
        let src = "def f(x):\n    if x:\n        return 1\n    for i in y:\n        pass\n    return 0\n";
        let p = construct_usage_profile(&sample(src, Language::Python));
        assert_eq!(p.count("if_count"), Some(1));
        assert_eq!(p.count("for_count"), Some(1));
        assert_eq!(p.count("return_count"), Some(2));
        assert!(!p.degraded);
    }

    #[test]
    fn haskell_falls_back_to_keyword_pseudo_nodes() {
        let src = "main = do\n  if x then a else b\n";
        let p = ast_node_profile(&sample(src, Language::Haskell));
        assert!(p.degraded);
        if let Some(MetricValue::Dist(d)) = p.metrics.get("node_ratios") {
            assert!(d.contains_key("if"));
        } else {
            panic!("node_ratios missing");
        }
    }

    #[test]
    fn tree_shape_bracket_fallback_counts_nesting() {
        let p = tree_shape_profile(&sample("f (g [1, 2])\n", Language::Unknown));
        assert!(p.degraded);
        assert_eq!(p.count("max_depth"), Some(2));
        assert_eq!(p.count("node_count"), Some(3));
    }

    #[test]
    fn node_ratios_sum_to_one() {
        let src = "int main() {\n  if (a) { b(); }\n  return 0;\n}\n";
        let p = ast_node_profile(&sample(src, Language::C));
        if let Some(MetricValue::Dist(d)) = p.metrics.get("node_ratios") {
            let sum: f64 = d.values().sum();
            assert!((sum - 1.0).abs() < 1e-9);
        } else {
            panic!("node_ratios missing");
        }
    }
}
