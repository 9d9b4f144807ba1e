//! Pattern dimension tools: function-level complexity metrics, control
//! strategy, API/idiom families, and semantic naming habits.
//!
//! Cyclomatic complexity counts 1 + decision points, where decision points
//! are the branch/loop keywords, `and`/`or`, `&&`/`||`, and the ternary `?`
//! (outside Ruby, where `?` ends predicate method names). Files without
//! function definitions are measured as one implicit entry function:
//! `function_count` stays 0 but the NLOC/CCN aggregates cover the whole file
//! and the entry point owns all complexity.

use std::collections::{BTreeMap, BTreeSet};

use super::language::Language;
use super::profile::{MetricValue, ToolName, ToolProfile};
use super::stats::{mean, ratio};
use super::structure::{self, HeaderTok, NodeKind, ParseOutcome};
use super::tokens::TokenClass;
use super::CodeSample;

const DEGRADE_ERROR_DENSITY: f64 = 0.20;

const DECISION_KEYWORDS: &[&str] = &[
    "if", "elif", "elsif", "unless", "for", "foreach", "while", "until", "case", "when", "catch",
    "except", "rescue", "and", "or",
];

fn is_decision(tok: &HeaderTok, language: Language) -> bool {
    match tok.1 {
        TokenClass::Kw => DECISION_KEYWORDS.contains(&tok.0.as_str()),
        TokenClass::Op => {
            tok.0 == "&&" || tok.0 == "||" || (tok.0 == "?" && language != Language::Ruby)
        }
        _ => false,
    }
}

fn usable_parse(sample: &CodeSample) -> Option<ParseOutcome> {
    let outcome = structure::parse(&sample.text, sample.language)?;
    if outcome.error_density() > DEGRADE_ERROR_DENSITY {
        return None;
    }
    Some(outcome)
}

struct FunctionInfo {
    name: String,
    param_count: u64,
    nloc: u64,
    ccn: u64,
    recursive: bool,
}

/// Parameter count from a definition header: entries of the parameter paren
/// group split on top-level commas. Go receivers (a paren group directly
/// after `func`) are skipped; a lone `void` counts as zero.
fn param_count(header: &[HeaderTok], language: Language) -> u64 {
    let mut groups: Vec<(usize, usize)> = Vec::new(); // (start, end) token index of '(' groups
    let mut depth = 0i32;
    let mut start = 0usize;
    for (i, tok) in header.iter().enumerate() {
        match tok.0.as_str() {
            "(" if tok.1 == TokenClass::Punc => {
                if depth == 0 {
                    start = i;
                }
                depth += 1;
            }
            ")" if tok.1 == TokenClass::Punc => {
                depth -= 1;
                if depth == 0 {
                    groups.push((start, i));
                }
            }
            _ => {}
        }
    }
    let group = if language == Language::Go
        && header.first().map(|t| t.0 == "func").unwrap_or(false)
        && header.get(1).map(|t| t.0 == "(").unwrap_or(false)
    {
        groups.get(1)
    } else {
        groups.first()
    };
    let Some(&(start, end)) = group else { return 0 };
    let inner = &header[start + 1..end];
    if inner.is_empty() {
        return 0;
    }
    if inner.len() == 1 && inner[0].0 == "void" {
        return 0;
    }
    let mut depth = 0i32;
    let mut commas = 0u64;
    for tok in inner {
        match tok.0.as_str() {
            "(" | "[" => depth += 1,
            ")" | "]" => depth -= 1,
            "," if depth == 0 => commas += 1,
            _ => {}
        }
    }
    commas + 1
}

/// Function name from a definition header: the identifier after `def`/`func`
/// (skipping a Go receiver group), otherwise the identifier before the first
/// paren.
fn function_name(header: &[HeaderTok]) -> Option<String> {
    if let Some(first) = header.first() {
        if first.0 == "def" || first.0 == "func" {
            let mut i = 1;
            if header.get(i).map(|t| t.0 == "(").unwrap_or(false) {
                let mut depth = 0i32;
                while i < header.len() {
                    match header[i].0.as_str() {
                        "(" => depth += 1,
                        ")" => {
                            depth -= 1;
                            if depth == 0 {
                                i += 1;
                                break;
                            }
                        }
                        _ => {}
                    }
                    i += 1;
                }
            }
            return header.get(i).filter(|t| t.1 == TokenClass::Id).map(|t| t.0.clone());
        }
    }
    let paren = header.iter().position(|t| t.0 == "(" && t.1 == TokenClass::Punc)?;
    header[..paren]
        .iter()
        .rev()
        .find(|t| t.1 == TokenClass::Id)
        .map(|t| t.0.clone())
}

fn nloc_in_range(parse: &ParseOutcome, start: usize, end: usize) -> u64 {
    parse
        .line_has_code
        .iter()
        .enumerate()
        .filter(|&(i, &has)| has && i >= start && i <= end)
        .count() as u64
}

fn collect_functions(parse: &ParseOutcome, language: Language) -> Vec<FunctionInfo> {
    let mut out = Vec::new();
    for (idx, node) in parse.nodes.iter().enumerate() {
        if node.kind != NodeKind::Function {
            continue;
        }
        let name = function_name(&node.header).unwrap_or_default();
        let subtree = parse.subtree(idx);
        let mut ccn = 1u64;
        let mut recursive = false;
        for &n in &subtree {
            let header = &parse.nodes[n].header;
            ccn += header.iter().filter(|t| is_decision(t, language)).count() as u64;
            if !name.is_empty() && n != idx {
                for pair in header.windows(2) {
                    if pair[0].1 == TokenClass::Id && pair[0].0 == name && pair[1].0 == "(" {
                        recursive = true;
                    }
                }
            }
        }
        out.push(FunctionInfo {
            param_count: param_count(&node.header, language),
            nloc: nloc_in_range(parse, node.start_line, node.end_line),
            ccn,
            recursive,
            name,
        });
    }
    out
}

fn whole_file_ccn(sample: &CodeSample) -> u64 {
    let tokens = sample.tokens();
    1 + tokens
        .iter()
        .filter(|t| {
            is_decision(&(t.text.clone(), t.class), sample.language)
        })
        .count() as u64
}

fn whole_file_nloc(sample: &CodeSample) -> u64 {
    let info = super::layout::line_info(&sample.text);
    let tokens = sample.tokens();
    let mut has_code = vec![false; info.lines.len()];
    for t in &tokens {
        if t.class.is_code() {
            let l = info.line_of(t.start);
            if l < has_code.len() {
                has_code[l] = true;
            }
        }
    }
    has_code.iter().filter(|&&b| b).count() as u64
}

const MAIN_LIKE: &[&str] = &["main", "Main"];

pub fn lizard_function_profile(sample: &CodeSample) -> ToolProfile {
    if sample.is_blank() {
        let mut p = ToolProfile::new(ToolName::LizardFunctionProfile, false);
        for n in ["function_count", "max_nloc", "max_ccn"] {
            p.set(n, MetricValue::Count(0));
        }
        for n in [
            "avg_nloc",
            "avg_ccn",
            "avg_param_count",
            "complexity_concentration_ratio",
            "main_like_ccn_ratio",
        ] {
            p.set(n, MetricValue::Scalar(0.0));
        }
        return p;
    }

    let parse = usable_parse(sample);
    let degraded = parse.is_none();
    let functions = parse.as_ref().map(|p| collect_functions(p, sample.language)).unwrap_or_default();

    let mut p = ToolProfile::new(ToolName::LizardFunctionProfile, degraded);
    if functions.is_empty() {
        // implicit whole-file entry function
        let nloc = whole_file_nloc(sample);
        let ccn = whole_file_ccn(sample);
        p.set("function_count", MetricValue::Count(0));
        p.set("avg_nloc", MetricValue::Scalar(nloc as f64));
        p.set("max_nloc", MetricValue::Count(nloc));
        p.set("avg_ccn", MetricValue::Scalar(ccn as f64));
        p.set("max_ccn", MetricValue::Count(ccn));
        p.set("avg_param_count", MetricValue::Scalar(0.0));
        p.set("complexity_concentration_ratio", MetricValue::Scalar(1.0));
        p.set("main_like_ccn_ratio", MetricValue::Scalar(1.0));
        return p;
    }

    let nlocs: Vec<f64> = functions.iter().map(|f| f.nloc as f64).collect();
    let ccns: Vec<f64> = functions.iter().map(|f| f.ccn as f64).collect();
    let params: Vec<f64> = functions.iter().map(|f| f.param_count as f64).collect();
    let total_ccn: u64 = functions.iter().map(|f| f.ccn).sum();
    let max_ccn = functions.iter().map(|f| f.ccn).max().unwrap_or(0);
    let main_ccn: u64 = functions
        .iter()
        .filter(|f| MAIN_LIKE.contains(&f.name.as_str()))
        .map(|f| f.ccn)
        .sum();

    p.set("function_count", MetricValue::Count(functions.len() as u64));
    p.set("avg_nloc", MetricValue::Scalar(mean(&nlocs)));
    p.set("max_nloc", MetricValue::Count(functions.iter().map(|f| f.nloc).max().unwrap_or(0)));
    p.set("avg_ccn", MetricValue::Scalar(mean(&ccns)));
    p.set("max_ccn", MetricValue::Count(max_ccn));
    p.set("avg_param_count", MetricValue::Scalar(mean(&params)));
    p.set("complexity_concentration_ratio", MetricValue::Scalar(ratio(max_ccn, total_ccn)));
    p.set("main_like_ccn_ratio", MetricValue::Scalar(ratio(main_ccn, total_ccn)));
    p
}

const GUARD_EXITS: &[&str] = &["return", "break", "continue", "throw", "raise", "next"];

pub fn control_strategy_profile(sample: &CodeSample) -> ToolProfile {
    if sample.is_blank() {
        let mut p = ToolProfile::new(ToolName::ControlStrategyProfile, false);
        for n in ["guard_clause_count", "recursive_function_hints", "loop_count", "if_count"] {
            p.set(n, MetricValue::Count(0));
        }
        p.set("guard_if_ratio", MetricValue::Scalar(0.0));
        return p;
    }

    if let Some(parse) = usable_parse(sample) {
        let if_count =
            parse.nodes.iter().filter(|n| n.kind == NodeKind::If).count() as u64;
        let loop_count = parse
            .nodes
            .iter()
            .filter(|n| matches!(n.kind, NodeKind::For | NodeKind::While))
            .count() as u64;

        let mut guards = 0u64;
        for node in &parse.nodes {
            if node.kind != NodeKind::If {
                continue;
            }
            let block_guard = node.children.len() == 1
                && matches!(
                    parse.nodes[node.children[0]].kind,
                    NodeKind::Return | NodeKind::Break | NodeKind::Continue | NodeKind::Throw
                );
            let inline_guard = node.children.is_empty()
                && node.header.iter().skip(1).any(|t| GUARD_EXITS.contains(&t.0.as_str()));
            if block_guard || inline_guard {
                guards += 1;
            }
        }

        let recursive = collect_functions(&parse, sample.language)
            .iter()
            .filter(|f| f.recursive)
            .count() as u64;

        let mut p = ToolProfile::new(ToolName::ControlStrategyProfile, false);
        p.set("guard_clause_count", MetricValue::Count(guards));
        p.set("guard_if_ratio", MetricValue::Scalar(ratio(guards, if_count)));
        p.set("recursive_function_hints", MetricValue::Count(recursive));
        p.set("loop_count", MetricValue::Count(loop_count));
        p.set("if_count", MetricValue::Count(if_count));
        return p;
    }

    // degraded: keyword counting; guard/recursion signals are structural and
    // unavailable without a parse
    let tokens = sample.tokens();
    let count_kw = |set: &[&str]| -> u64 {
        tokens
            .iter()
            .filter(|t| t.class == TokenClass::Kw && set.contains(&t.text.as_str()))
            .count() as u64
    };
    let if_count = count_kw(&["if", "elif", "elsif", "unless"]);
    let loop_count = count_kw(&["for", "foreach", "while", "until"]);
    let mut p = ToolProfile::new(ToolName::ControlStrategyProfile, true);
    p.set("guard_clause_count", MetricValue::Count(0));
    p.set("guard_if_ratio", MetricValue::Scalar(0.0));
    p.set("recursive_function_hints", MetricValue::Count(0));
    p.set("loop_count", MetricValue::Count(loop_count));
    p.set("if_count", MetricValue::Count(if_count));
    p
}

const API_FAMILIES: &[(&str, &[&str])] = &[
    (
        "collections",
        &[
            "vector", "map", "set", "list", "dict", "array", "deque", "stack", "queue", "tuple",
            "HashMap", "HashSet", "ArrayList", "LinkedList", "TreeMap", "Vec", "slice", "Hash",
        ],
    ),
    ("sorting", &["sort", "sorted", "qsort", "Sort", "stable_sort", "sort_by", "order_by"]),
    (
        "io",
        &[
            "printf", "scanf", "cin", "cout", "cerr", "print", "println", "puts", "gets", "input",
            "open", "read", "readline", "write", "fprintf", "sprintf", "Scanner",
            "BufferedReader", "fmt", "Println", "Printf", "Scan", "readLine", "Console",
            "WriteLine", "ReadLine", "getline", "putStrLn", "getLine", "interact",
        ],
    ),
    ("assertions", &["assert", "Assert", "static_assert", "assert_eq", "assert_ne"]),
    (
        "exceptions",
        &[
            "try", "catch", "except", "finally", "raise", "throw", "throws", "rescue", "panic",
            "recover", "Exception", "RuntimeError", "ValueError", "IOException",
        ],
    ),
];

const COMPETITIVE_HEADER_MARKERS: &[&str] =
    &["bits/stdc++.h", "using namespace std", "import java.util.*", "sys.setrecursionlimit"];

const FAST_IO_MARKERS: &[&str] = &[
    "sync_with_stdio", "cin.tie", "sys.stdin.readline", "BufferedReader", "bufio.New", "setvbuf",
];

pub fn api_idiom_profile(sample: &CodeSample) -> ToolProfile {
    let tokens = sample.tokens();
    let mut families: BTreeMap<String, u64> =
        API_FAMILIES.iter().map(|(name, _)| (name.to_string(), 0)).collect();

    for tok in &tokens {
        if !matches!(tok.class, TokenClass::Id | TokenClass::Kw) {
            continue;
        }
        for (family, members) in API_FAMILIES {
            if members.contains(&tok.text.as_str()) {
                *families.get_mut(*family).unwrap() += 1;
            }
        }
    }

    let mut flags = BTreeSet::new();
    if COMPETITIVE_HEADER_MARKERS.iter().any(|m| sample.text.contains(m)) {
        flags.insert("competitive_header".to_string());
    }
    if FAST_IO_MARKERS.iter().any(|m| sample.text.contains(m)) {
        flags.insert("fast_io_optimization".to_string());
    }

    let mut p = ToolProfile::new(ToolName::ApiIdiomProfile, false);
    p.set("api_families", MetricValue::CountMap(families));
    p.set("plugin_flags", MetricValue::Flags(flags));
    p
}

const HELPER_MARKERS: &[&str] = &["helper", "util", "do_", "calc", "get_", "is_"];

pub fn semantic_habit_profile(sample: &CodeSample) -> ToolProfile {
    let tokens = sample.tokens();
    let ids: Vec<&str> = tokens
        .iter()
        .filter(|t| t.class == TokenClass::Id)
        .map(|t| t.text.as_str())
        .collect();
    let total = ids.len() as u64;

    let mut short = 0u64;
    let mut helper = 0u64;
    let mut upper_const = 0u64;
    for id in &ids {
        if id.chars().count() <= 2 {
            short += 1;
        }
        let lower = id.to_ascii_lowercase();
        if HELPER_MARKERS.iter().any(|m| lower.contains(m)) {
            helper += 1;
        }
        let case = super::lexical::classify_case(id);
        if case == "screaming" || (case == "upper" && id.chars().count() >= 2) {
            upper_const += 1;
        }
    }

    let assert_like = tokens
        .iter()
        .filter(|t| matches!(t.class, TokenClass::Id | TokenClass::Kw))
        .filter(|t| {
            t.text.to_ascii_lowercase().starts_with("assert") || t.text == "static_assert"
        })
        .count() as u64;

    let mut p = ToolProfile::new(ToolName::SemanticHabitProfile, false);
    p.set("short_temp_ratio", MetricValue::Scalar(ratio(short, total)));
    p.set("helper_name_ratio", MetricValue::Scalar(ratio(helper, total)));
    p.set("uppercase_constant_ratio", MetricValue::Scalar(ratio(upper_const, total)));
    p.set("assert_like_count", MetricValue::Count(assert_like));
    p
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(text: &str, lang: Language) -> CodeSample {
        CodeSample::new(text, lang, "test")
    }

    #[test]
    fn lizard_measures_explicit_functions() {
        let src = "int main() {\n  if (a && b) { x(); }\n  return 0;\n}\nint helper(int a, int b) {\n  return a + b;\n}\n";
        let p = lizard_function_profile(&sample(src, Language::C));
        assert_eq!(p.count("function_count"), Some(2));
        assert_eq!(p.count("max_ccn"), Some(3)); // 1 + if + &&
        assert_eq!(p.scalar("main_like_ccn_ratio"), Some(0.75));
        assert_eq!(p.scalar("avg_param_count"), Some(1.0));
    }

    #[test]
    fn file_without_functions_is_one_implicit_entry() {
        let src = "x = 1\nif x:\n    print(x)\n";
        let p = lizard_function_profile(&sample(src, Language::Python));
        assert_eq!(p.count("function_count"), Some(0));
        assert_eq!(p.count("max_ccn"), Some(2));
        assert_eq!(p.scalar("main_like_ccn_ratio"), Some(1.0));
        assert_eq!(p.scalar("complexity_concentration_ratio"), Some(1.0));
    }

    #[test]
    fn guard_clauses_detected_in_block_and_inline_form() {
        let src = "int f(int x) {\n  if (x < 0) return -1;\n  if (x > 10) {\n    return 10;\n  }\n  if (x) {\n    y();\n    z();\n  }\n  return x;\n}\n";
        let p = control_strategy_profile(&sample(src, Language::C));
        assert_eq!(p.count("if_count"), Some(3));
        assert_eq!(p.count("guard_clause_count"), Some(2));
    }

    #[test]
    fn recursion_hint_found() {
        let src = "def fact(n):\n    if n <= 1:\n        return 1\n    return n * fact(n - 1)\n";
        let p = control_strategy_profile(&sample(src, Language::Python));
        assert_eq!(p.count("recursive_function_hints"), Some(1));
    }

    #[test]
    fn competitive_header_flag_set() {
        let src = "#include <bits/stdc++.h>\nusing namespace std;\nint main(){cin.tie(0);}\n";
        let p = api_idiom_profile(&sample(src, Language::Cpp));
        if let Some(MetricValue::Flags(flags)) = p.metrics.get("plugin_flags") {
            assert!(flags.contains("competitive_header"));
            assert!(flags.contains("fast_io_optimization"));
        } else {
            panic!("plugin_flags missing");
        }
    }

    #[test]
    fn semantic_habits_measure_naming() {
        let src = "MAX = 10\nok = get_value(v)\n";
        let p = semantic_habit_profile(&sample(src, Language::Python));
        // ids: MAX, ok, get_value, v -> short: ok, v; helper: get_value; const: MAX
        assert_eq!(p.scalar("short_temp_ratio"), Some(0.5));
        assert_eq!(p.scalar("helper_name_ratio"), Some(0.25));
        assert_eq!(p.scalar("uppercase_constant_ratio"), Some(0.25));
    }
}
