//! Lightweight structural parse shared by the syntactic and pattern tools.
//!
//! This is a style-oriented statement/block parser, not a grammar-faithful
//! AST. Three strategies cover the supported languages:
//!
//! - brace-delimited (C, C++, C#, Java, Go): statements split on `;`, blocks
//!   on `{`/`}` at zero paren depth, with `for(;;)` headers kept intact;
//! - indent-delimited (Python): logical lines grouped by indentation, a
//!   block opens when a line ends with `:`;
//! - keyword-delimited (Ruby): `def`/`if`/`do`/... open, `end` closes.
//!
//! Haskell and unknown languages have no strategy here; callers use the
//! degraded fallbacks instead. Every code token lands in exactly one node's
//! header, so token scans over subtree headers are exhaustive body scans.

use super::language::Language;
use super::layout::{indent_depth, line_info, LineInfo};
use super::tokens::{Token, TokenClass};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NodeKind {
    Root,
    Function,
    Class,
    If,
    Else,
    For,
    While,
    Switch,
    Case,
    Try,
    Catch,
    Return,
    Break,
    Continue,
    Throw,
    Import,
    Call,
    Assign,
    Block,
    Stmt,
}

impl NodeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            NodeKind::Root => "root",
            NodeKind::Function => "function",
            NodeKind::Class => "class",
            NodeKind::If => "if",
            NodeKind::Else => "else",
            NodeKind::For => "for",
            NodeKind::While => "while",
            NodeKind::Switch => "switch",
            NodeKind::Case => "case",
            NodeKind::Try => "try",
            NodeKind::Catch => "catch",
            NodeKind::Return => "return",
            NodeKind::Break => "break",
            NodeKind::Continue => "continue",
            NodeKind::Throw => "throw",
            NodeKind::Import => "import",
            NodeKind::Call => "call",
            NodeKind::Assign => "assign",
            NodeKind::Block => "block",
            NodeKind::Stmt => "stmt",
        }
    }
}

/// One header token: (text, class).
pub type HeaderTok = (String, TokenClass);

#[derive(Debug, Clone)]
pub struct Node {
    pub kind: NodeKind,
    pub children: Vec<usize>,
    pub header: Vec<HeaderTok>,
    pub start_line: usize,
    pub end_line: usize,
}

#[derive(Debug, Clone)]
pub struct ParseOutcome {
    /// Index 0 is the root.
    pub nodes: Vec<Node>,
    /// Structural mismatches (stray closers, unclosed blocks at EOF).
    pub error_events: usize,
    pub line_count: usize,
    /// Per line: whether it carries at least one code token.
    pub line_has_code: Vec<bool>,
}

impl ParseOutcome {
    /// Parse-error density over lines; above 0.20 callers degrade.
    pub fn error_density(&self) -> f64 {
        if self.line_count == 0 {
            0.0
        } else {
            self.error_events as f64 / self.line_count as f64
        }
    }

    pub fn subtree(&self, idx: usize) -> Vec<usize> {
        let mut out = vec![idx];
        let mut i = 0;
        while i < out.len() {
            out.extend(self.nodes[out[i]].children.iter().copied());
            i += 1;
        }
        out
    }
}


pub fn parse(text: &str, language: Language) -> Option<ParseOutcome> {
    let info = line_info(text);
    let tokens = super::tokenize(text, language);
    let mut line_has_code = vec![false; info.lines.len()];
    for tok in &tokens {
        if tok.class.is_code() {
            let line = info.line_of(tok.start);
            if line < line_has_code.len() {
                line_has_code[line] = true;
            }
        }
    }

    let mut outcome = match language {
        Language::C | Language::Cpp | Language::CSharp | Language::Java | Language::Go => {
            parse_braced(&tokens, &info, language)
        }
        Language::Python => parse_indented(&tokens, &info, language),
        Language::Ruby => parse_ruby(&tokens, &info),
        Language::Haskell | Language::Unknown => return None,
    };
    outcome.line_count = info.lines.len();
    outcome.line_has_code = line_has_code;
    finalize_end_lines(&mut outcome, 0);
    Some(outcome)
}

fn finalize_end_lines(outcome: &mut ParseOutcome, idx: usize) -> usize {
    let children = outcome.nodes[idx].children.clone();
    let mut end = outcome.nodes[idx].end_line;
    for child in children {
        end = end.max(finalize_end_lines(outcome, child));
    }
    outcome.nodes[idx].end_line = end;
    end
}

/// Leading declaration modifiers skipped before keyword classification.
const MODIFIERS: &[&str] = &[
    "public", "private", "protected", "static", "final", "abstract", "virtual", "override",
    "inline", "constexpr", "extern", "unsafe", "internal", "sealed", "readonly", "synchronized",
    "native", "transient", "export", "async",
];

fn strip_modifiers(header: &[HeaderTok]) -> &[HeaderTok] {
    let mut i = 0;
    while i < header.len()
        && header[i].1 == TokenClass::Kw
        && MODIFIERS.contains(&header[i].0.as_str())
    {
        i += 1;
    }
    &header[i..]
}

fn keyword_kind(word: &str, next: Option<&str>) -> Option<NodeKind> {
    Some(match word {
        "if" | "elif" | "elsif" | "unless" => NodeKind::If,
        "else" => {
            if next == Some("if") {
                NodeKind::If
            } else {
                NodeKind::Else
            }
        }
        "for" | "foreach" => NodeKind::For,
        "while" | "until" | "do" => NodeKind::While,
        "switch" | "match" | "select" => NodeKind::Switch,
        "case" | "when" | "default" => NodeKind::Case,
        "try" | "begin" => NodeKind::Try,
        "catch" | "except" | "rescue" => NodeKind::Catch,
        "finally" | "ensure" | "with" => NodeKind::Block,
        "return" | "yield" => NodeKind::Return,
        "break" => NodeKind::Break,
        "continue" | "next" | "redo" | "retry" => NodeKind::Continue,
        "throw" | "raise" => NodeKind::Throw,
        "import" | "package" | "using" | "from" => NodeKind::Import,
        "class" | "struct" | "interface" | "enum" | "union" | "namespace" | "module" => {
            NodeKind::Class
        }
        "func" | "def" => NodeKind::Function,
        _ => return None,
    })
}

/// True for assignment-ish operators: `=` and compound forms, excluding
/// comparison operators.
fn is_assign_op(op: &str) -> bool {
    if matches!(op, "==" | "!=" | "<=" | ">=" | "===" | "!==" | "<=>" | "=>" | "=<<") {
        return false;
    }
    op == "=" || op == ":=" || (op.len() >= 2 && op.ends_with('='))
}

fn classify(header: &[HeaderTok], block_form: bool) -> NodeKind {
    if header.is_empty() {
        return NodeKind::Block;
    }
    // `raise` is a plain method in Ruby, not a keyword; match by text.
    if header[0].0 == "raise" {
        return NodeKind::Throw;
    }
    if header[0].0 == "#" {
        return NodeKind::Import; // preprocessor directive
    }
    let stripped = strip_modifiers(header);
    let head = if stripped.is_empty() { header } else { stripped };
    if head[0].1 == TokenClass::Kw {
        if let Some(kind) = keyword_kind(&head[0].0, head.get(1).map(|t| t.0.as_str())) {
            return kind;
        }
    }
    if block_form {
        // `name(args)` immediately before `{` is a definition header.
        let last_is_close = head.last().map(|t| t.0 == ")").unwrap_or(false);
        if last_is_close {
            if let Some(paren) = head.iter().position(|t| t.0 == "(") {
                if paren > 0 && head[paren - 1].1 == TokenClass::Id {
                    return NodeKind::Function;
                }
            }
        }
    }
    // top-level assignment operator
    let mut depth = 0i32;
    for tok in head {
        match (tok.1, tok.0.as_str()) {
            (TokenClass::Punc, "(") | (TokenClass::Punc, "[") => depth += 1,
            (TokenClass::Punc, ")") | (TokenClass::Punc, "]") => depth -= 1,
            (TokenClass::Op, op) if depth == 0 && is_assign_op(op) => return NodeKind::Assign,
            _ => {}
        }
    }
    if head.len() >= 2 && head[0].1 == TokenClass::Id && head[1].0 == "(" {
        return NodeKind::Call;
    }
    NodeKind::Stmt
}

fn root_node() -> Node {
    Node { kind: NodeKind::Root, children: Vec::new(), header: Vec::new(), start_line: 0, end_line: 0 }
}

fn parse_braced(tokens: &[Token], info: &LineInfo, _language: Language) -> ParseOutcome {
    let mut nodes = vec![root_node()];
    let mut stack: Vec<usize> = vec![0];
    let mut pending: Vec<HeaderTok> = Vec::new();
    let mut pending_start_line = 0usize;
    let mut paren_depth = 0i32;
    let mut errors = 0usize;

    let flush = |nodes: &mut Vec<Node>,
                     stack: &[usize],
                     pending: &mut Vec<HeaderTok>,
                     start_line: usize,
                     end_line: usize,
                     kind_override: Option<NodeKind>| {
        if pending.is_empty() && kind_override.is_none() {
            return None;
        }
        let kind = kind_override.unwrap_or_else(|| classify(pending, false));
        let idx = nodes.len();
        nodes.push(Node {
            kind,
            children: Vec::new(),
            header: std::mem::take(pending),
            start_line,
            end_line,
        });
        let parent = *stack.last().unwrap();
        nodes[parent].children.push(idx);
        Some(idx)
    };

    for tok in tokens {
        if !tok.class.is_code() {
            continue;
        }
        let line = info.line_of(tok.start);
        if pending.is_empty() {
            pending_start_line = line;
        }
        match (tok.class, tok.text.as_str()) {
            (TokenClass::Punc, "{") if paren_depth == 0 => {
                let kind = classify(&pending, true);
                let idx = nodes.len();
                nodes.push(Node {
                    kind,
                    children: Vec::new(),
                    header: std::mem::take(&mut pending),
                    start_line: pending_start_line,
                    end_line: line,
                });
                let parent = *stack.last().unwrap();
                nodes[parent].children.push(idx);
                stack.push(idx);
            }
            (TokenClass::Punc, "}") if paren_depth == 0 => {
                flush(&mut nodes, &stack, &mut pending, pending_start_line, line, None);
                if stack.len() > 1 {
                    let closed = stack.pop().unwrap();
                    nodes[closed].end_line = line;
                } else {
                    errors += 1;
                }
            }
            (TokenClass::Punc, ";") if paren_depth == 0 => {
                flush(&mut nodes, &stack, &mut pending, pending_start_line, line, None);
            }
            (TokenClass::Punc, ":")
                if paren_depth == 0
                    && pending
                        .first()
                        .map(|t| matches!(t.0.as_str(), "case" | "default" | "when"))
                        .unwrap_or(false) =>
            {
                flush(&mut nodes, &stack, &mut pending, pending_start_line, line, Some(NodeKind::Case));
            }
            (TokenClass::Punc, "(") | (TokenClass::Punc, "[") => {
                paren_depth += 1;
                pending.push((tok.text.clone(), tok.class));
            }
            (TokenClass::Punc, ")") | (TokenClass::Punc, "]") => {
                paren_depth = (paren_depth - 1).max(0);
                pending.push((tok.text.clone(), tok.class));
            }
            _ => pending.push((tok.text.clone(), tok.class)),
        }
    }
    let last_line = info.lines.len().saturating_sub(1);
    flush(&mut nodes, &stack, &mut pending, pending_start_line, last_line, None);
    errors += stack.len() - 1;

    ParseOutcome { nodes, error_events: errors, line_count: 0, line_has_code: Vec::new() }
}

/// Groups code tokens into logical lines: a newline ends the line when the
/// bracket depth is zero and the previous code token is not a trailing
/// backslash.
fn logical_lines(tokens: &[Token], info: &LineInfo) -> Vec<(Vec<HeaderTok>, usize, usize, u64)> {
    let mut lines = Vec::new();
    let mut current: Vec<HeaderTok> = Vec::new();
    let mut start_line = 0usize;
    let mut end_line = 0usize;
    let mut indent = 0u64;
    let mut depth = 0i32;

    for tok in tokens {
        match tok.class {
            TokenClass::Ws => {
                if tok.text.contains('\n')
                    && depth == 0
                    && !current.is_empty()
                    && current.last().map(|t| t.0 != "\\").unwrap_or(true)
                {
                    lines.push((std::mem::take(&mut current), start_line, end_line, indent));
                }
            }
            TokenClass::Comment => {}
            _ => {
                let line = info.line_of(tok.start);
                if current.is_empty() {
                    start_line = line;
                    indent = indent_depth(&info.lines[line]);
                }
                end_line = line;
                match tok.text.as_str() {
                    "(" | "[" | "{" => depth += 1,
                    ")" | "]" | "}" => depth = (depth - 1).max(0),
                    _ => {}
                }
                current.push((tok.text.clone(), tok.class));
            }
        }
    }
    if !current.is_empty() {
        lines.push((current, start_line, end_line, indent));
    }
    lines
}

fn parse_indented(tokens: &[Token], info: &LineInfo, _language: Language) -> ParseOutcome {
    let mut nodes = vec![root_node()];
    // (indent, node) stack; root sits below any real indent
    let mut stack: Vec<(i64, usize)> = vec![(-1, 0)];

    for (header, start_line, end_line, indent) in logical_lines(tokens, info) {
        while stack.len() > 1 && indent as i64 <= stack.last().unwrap().0 {
            stack.pop();
        }
        let opens = header.last().map(|t| t.0 == ":" && t.1 == TokenClass::Punc).unwrap_or(false);
        let kind = classify(&header, opens);
        let idx = nodes.len();
        nodes.push(Node { kind, children: Vec::new(), header, start_line, end_line });
        let parent = stack.last().unwrap().1;
        nodes[parent].children.push(idx);
        if opens {
            stack.push((indent as i64, idx));
        }
    }

    ParseOutcome { nodes, error_events: 0, line_count: 0, line_has_code: Vec::new() }
}

const RUBY_OPENERS: &[&str] =
    &["def", "class", "module", "if", "unless", "while", "until", "for", "begin", "case"];
const RUBY_MIDDLES: &[&str] = &["elsif", "else", "when", "rescue", "ensure"];

fn parse_ruby(tokens: &[Token], info: &LineInfo) -> ParseOutcome {
    let mut nodes = vec![root_node()];
    let mut stack: Vec<usize> = vec![0];
    let mut errors = 0usize;

    for (header, start_line, end_line, _indent) in logical_lines(tokens, info) {
        let first = header[0].0.as_str();
        let first_is_kw = header[0].1 == TokenClass::Kw;

        if first_is_kw && first == "end" {
            if stack.len() > 1 {
                let closed = stack.pop().unwrap();
                nodes[closed].end_line = end_line;
            } else {
                errors += 1;
            }
            continue;
        }

        let middle = first_is_kw && RUBY_MIDDLES.contains(&first);
        if middle && stack.len() > 1 {
            let closed = stack.pop().unwrap();
            nodes[closed].end_line = start_line.saturating_sub(1).max(nodes[closed].start_line);
        }

        let opens = (first_is_kw && RUBY_OPENERS.contains(&first))
            || middle
            || header.iter().skip(1).any(|t| t.1 == TokenClass::Kw && t.0 == "do");
        let kind = classify(&header, opens);
        let idx = nodes.len();
        nodes.push(Node { kind, children: Vec::new(), header, start_line, end_line });
        let parent = *stack.last().unwrap();
        nodes[parent].children.push(idx);
        if opens {
            stack.push(idx);
        }
    }

    errors += stack.len() - 1;
    ParseOutcome { nodes, error_events: errors, line_count: 0, line_has_code: Vec::new() }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(outcome: &ParseOutcome) -> Vec<NodeKind> {
        outcome.nodes.iter().map(|n| n.kind).collect()
    }

    #[test]
    fn braced_if_return_tree() {
        let src = "int main() {\n  if (x) {\n    return 0;\n  }\n  return 1;\n}\n";
        let out = parse(src, Language::C).unwrap();
        let k = kinds(&out);
        assert_eq!(
            k,
            vec![NodeKind::Root, NodeKind::Function, NodeKind::If, NodeKind::Return, NodeKind::Return]
        );
        assert_eq!(out.nodes[1].children, vec![2, 4]);
        assert_eq!(out.nodes[2].children, vec![3]);
        assert_eq!(out.error_events, 0);
    }

    #[test]
    fn python_indent_tree() {
        let src = "def f(x):\n    if x:\n        return 1\n    return 0\n";
        let out = parse(src, Language::Python).unwrap();
        let k = kinds(&out);
        assert_eq!(
            k,
            vec![NodeKind::Root, NodeKind::Function, NodeKind::If, NodeKind::Return, NodeKind::Return]
        );
        assert_eq!(out.nodes[1].children, vec![2, 4]);
    }

    #[test]
    fn ruby_def_end_tree() {
        let src = "def f(x)\n  if x\n    return 1\n  end\n  0\nend\n";
        let out = parse(src, Language::Ruby).unwrap();
        let k = kinds(&out);
        assert_eq!(
            k,
            vec![NodeKind::Root, NodeKind::Function, NodeKind::If, NodeKind::Return, NodeKind::Stmt]
        );
        assert_eq!(out.error_events, 0);
    }

    #[test]
    fn stray_closers_count_as_errors() {
        let out = parse("}\n}\n", Language::C).unwrap();
        assert_eq!(out.error_events, 2);
        assert!(out.error_density() > 0.2);
    }

    #[test]
    fn case_labels_split_on_colon() {
        let src = "switch (x) {\ncase 1:\n  y = 2;\n  break;\n}\n";
        let out = parse(src, Language::C).unwrap();
        let k = kinds(&out);
        assert!(k.contains(&NodeKind::Switch));
        assert!(k.contains(&NodeKind::Case));
        assert!(k.contains(&NodeKind::Assign));
        assert!(k.contains(&NodeKind::Break));
    }

    #[test]
    fn haskell_has_no_strategy() {
        assert!(parse("main = putStrLn \"hi\"\n", Language::Haskell).is_none());
    }
}
