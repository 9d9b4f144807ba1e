//! Lossless per-language lexer.
//!
//! Concatenating the `text` of every token (including whitespace and
//! comments) reconstructs the input byte-exactly; unterminated strings and
//! comments extend to end of line or end of input rather than erroring.
//! Keyword classification uses a per-language keyword table; `Unknown` uses
//! the union table and C-style plus `#` comments.

use serde::Serialize;

use super::language::Language;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum TokenClass {
    Id,
    Num,
    Str,
    Kw,
    Op,
    Punc,
    Comment,
    Ws,
}

impl TokenClass {
    pub fn as_str(self) -> &'static str {
        match self {
            TokenClass::Id => "ID",
            TokenClass::Num => "NUM",
            TokenClass::Str => "STR",
            TokenClass::Kw => "KW",
            TokenClass::Op => "OP",
            TokenClass::Punc => "PUNC",
            TokenClass::Comment => "COMMENT",
            TokenClass::Ws => "WS",
        }
    }

    /// True for the classes that participate in lexical statistics
    /// (everything except whitespace and comments).
    pub fn is_code(self) -> bool {
        !matches!(self, TokenClass::Comment | TokenClass::Ws)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub text: String,
    pub class: TokenClass,
    /// Byte offset of the token start in the original text.
    pub start: usize,
}

impl Token {
    /// The masked form used by abstract n-grams and fingerprinting:
    /// identifiers and literals collapse to their class name, everything
    /// else keeps its text.
    pub fn abstract_text(&self) -> &str {
        match self.class {
            TokenClass::Id => "ID",
            TokenClass::Num => "NUM",
            TokenClass::Str => "STR",
            _ => &self.text,
        }
    }
}

const C_KEYWORDS: &[&str] = &[
    "auto", "break", "case", "char", "const", "continue", "default", "do", "double", "else",
    "enum", "extern", "float", "for", "goto", "if", "inline", "int", "long", "register",
    "restrict", "return", "short", "signed", "sizeof", "static", "struct", "switch", "typedef",
    "union", "unsigned", "void", "volatile", "while", "_Bool",
];

const CPP_EXTRA: &[&str] = &[
    "and", "bool", "catch", "class", "constexpr", "decltype", "delete", "explicit", "export",
    "false", "final", "friend", "mutable", "namespace", "new", "noexcept", "not", "nullptr",
    "operator", "or", "override", "private", "protected", "public", "template", "this", "throw",
    "true", "try", "typeid", "typename", "using", "virtual", "wchar_t",
];

const CSHARP_KEYWORDS: &[&str] = &[
    "abstract", "as", "base", "bool", "break", "byte", "case", "catch", "char", "checked",
    "class", "const", "continue", "decimal", "default", "delegate", "do", "double", "else",
    "enum", "event", "explicit", "extern", "false", "finally", "fixed", "float", "for",
    "foreach", "goto", "if", "implicit", "in", "int", "interface", "internal", "is", "lock",
    "long", "namespace", "new", "null", "object", "operator", "out", "override", "params",
    "private", "protected", "public", "readonly", "ref", "return", "sbyte", "sealed", "short",
    "sizeof", "stackalloc", "static", "string", "struct", "switch", "this", "throw", "true",
    "try", "typeof", "uint", "ulong", "unchecked", "unsafe", "ushort", "using", "var",
    "virtual", "void", "volatile", "while",
];

const JAVA_KEYWORDS: &[&str] = &[
    "abstract", "assert", "boolean", "break", "byte", "case", "catch", "char", "class", "const",
    "continue", "default", "do", "double", "else", "enum", "extends", "false", "final",
    "finally", "float", "for", "goto", "if", "implements", "import", "instanceof", "int",
    "interface", "long", "native", "new", "null", "package", "private", "protected", "public",
    "record", "return", "short", "static", "strictfp", "super", "switch", "synchronized",
    "this", "throw", "throws", "transient", "true", "try", "var", "void", "volatile", "while",
];

const GO_KEYWORDS: &[&str] = &[
    "break", "case", "chan", "const", "continue", "default", "defer", "else", "fallthrough",
    "false", "for", "func", "go", "goto", "if", "import", "interface", "map", "nil", "package",
    "range", "return", "select", "struct", "switch", "true", "type", "var",
];

const PYTHON_KEYWORDS: &[&str] = &[
    "False", "None", "True", "and", "as", "assert", "async", "await", "break", "case", "class",
    "continue", "def", "del", "elif", "else", "except", "finally", "for", "from", "global",
    "if", "import", "in", "is", "lambda", "match", "nonlocal", "not", "or", "pass", "raise",
    "return", "try", "while", "with", "yield",
];

const RUBY_KEYWORDS: &[&str] = &[
    "BEGIN", "END", "alias", "and", "begin", "break", "case", "class", "def", "do", "else",
    "elsif", "end", "ensure", "false", "for", "if", "in", "module", "next", "nil", "not", "or",
    "redo", "rescue", "retry", "return", "self", "super", "then", "true", "undef", "unless",
    "until", "when", "while", "yield",
];

const HASKELL_KEYWORDS: &[&str] = &[
    "case", "class", "data", "default", "deriving", "do", "else", "foreign", "if", "import",
    "in", "infix", "infixl", "infixr", "instance", "let", "module", "newtype", "of", "then",
    "type", "where",
];

pub fn is_keyword(word: &str, language: Language) -> bool {
    match language {
        Language::C => C_KEYWORDS.contains(&word),
        Language::Cpp => C_KEYWORDS.contains(&word) || CPP_EXTRA.contains(&word),
        Language::CSharp => CSHARP_KEYWORDS.contains(&word),
        Language::Java => JAVA_KEYWORDS.contains(&word),
        Language::Go => GO_KEYWORDS.contains(&word),
        Language::Python => PYTHON_KEYWORDS.contains(&word),
        Language::Ruby => RUBY_KEYWORDS.contains(&word),
        Language::Haskell => HASKELL_KEYWORDS.contains(&word),
        Language::Unknown => {
            C_KEYWORDS.contains(&word)
                || CPP_EXTRA.contains(&word)
                || CSHARP_KEYWORDS.contains(&word)
                || JAVA_KEYWORDS.contains(&word)
                || GO_KEYWORDS.contains(&word)
                || PYTHON_KEYWORDS.contains(&word)
                || RUBY_KEYWORDS.contains(&word)
                || HASKELL_KEYWORDS.contains(&word)
        }
    }
}

/// Multi-character operators, longest first so maximal munch wins.
const MULTI_OPS: &[&str] = &[
    ">>>=", "<<=", ">>=", "**=", "//=", "===", "!==", "<=>", "...", "->*", ">>>", "=<<", "..=",
    "<<", ">>", "&&", "||", "==", "!=", "<=", ">=", "+=", "-=", "*=", "/=", "%=", "&=", "|=",
    "^=", "->", "=>", "::", "++", "--", "**", "//", "..", "?.", "??", ":=", "<-", "|>", "<|",
];

const PUNC_CHARS: &[char] = &['(', ')', '{', '}', '[', ']', ';', ',', ':'];

struct CommentSyntax {
    line: &'static [&'static str],
    block: Option<(&'static str, &'static str)>,
}

fn comment_syntax(language: Language) -> CommentSyntax {
    match language {
        Language::Python | Language::Ruby => CommentSyntax { line: &["#"], block: None },
        Language::Haskell => CommentSyntax { line: &["--"], block: Some(("{-", "-}")) },
        Language::Unknown => CommentSyntax { line: &["//", "#"], block: Some(("/*", "*/")) },
        _ => CommentSyntax { line: &["//"], block: Some(("/*", "*/")) },
    }
}

/// Lexes `text` into a lossless token stream.
pub fn tokenize(text: &str, language: Language) -> Vec<Token> {
    let bytes = text.as_bytes();
    let comments = comment_syntax(language);
    let mut tokens = Vec::new();
    let mut pos = 0usize;

    let push = |tokens: &mut Vec<Token>, start: usize, end: usize, class: TokenClass| {
        tokens.push(Token { text: text[start..end].to_string(), class, start });
    };

    while pos < bytes.len() {
        let rest = &text[pos..];
        let c = rest.chars().next().unwrap();

        // whitespace run
        if c.is_whitespace() {
            let end = pos
                + rest
                    .char_indices()
                    .find(|&(_, ch)| !ch.is_whitespace())
                    .map(|(i, _)| i)
                    .unwrap_or(rest.len());
            push(&mut tokens, pos, end, TokenClass::Ws);
            pos = end;
            continue;
        }

        // comments before operators: `//` and `--` are comment starters in
        // their languages even though they munch as operators elsewhere
        if let Some(starter) = comments.line.iter().find(|s| rest.starts_with(**s)) {
            // Python/Ruby `#` only starts a comment; the C-family `#` falls
            // through to the operator path (preprocessor marker).
            let _ = starter;
            let end = pos + rest.find('\n').unwrap_or(rest.len());
            push(&mut tokens, pos, end, TokenClass::Comment);
            pos = end;
            continue;
        }
        if let Some((open, close)) = comments.block {
            if rest.starts_with(open) {
                let end = match rest[open.len()..].find(close) {
                    Some(i) => pos + open.len() + i + close.len(),
                    None => text.len(),
                };
                push(&mut tokens, pos, end, TokenClass::Comment);
                pos = end;
                continue;
            }
        }

        // strings
        if let Some(end) = match_string(rest, language) {
            push(&mut tokens, pos, pos + end, TokenClass::Str);
            pos += end;
            continue;
        }

        // numbers
        if c.is_ascii_digit() {
            let end = pos + match_number(rest);
            push(&mut tokens, pos, end, TokenClass::Num);
            pos = end;
            continue;
        }

        // identifiers and keywords
        if c == '_' || c.is_ascii_alphabetic() {
            let end = pos
                + rest
                    .char_indices()
                    .find(|&(_, ch)| !(ch == '_' || ch.is_ascii_alphanumeric()))
                    .map(|(i, _)| i)
                    .unwrap_or(rest.len());
            let class = if is_keyword(&text[pos..end], language) {
                TokenClass::Kw
            } else {
                TokenClass::Id
            };
            push(&mut tokens, pos, end, class);
            pos = end;
            continue;
        }

        // multi-character operators
        if let Some(op) = MULTI_OPS.iter().find(|op| rest.starts_with(**op)) {
            push(&mut tokens, pos, pos + op.len(), TokenClass::Op);
            pos += op.len();
            continue;
        }

        // single character: punctuation or operator (catch-all)
        let len = c.len_utf8();
        let class = if PUNC_CHARS.contains(&c) { TokenClass::Punc } else { TokenClass::Op };
        push(&mut tokens, pos, pos + len, class);
        pos += len;
    }

    tokens
}

/// Matches a string literal at the start of `rest`, returning its byte
/// length. Single-line kinds stop at an unescaped newline; everything stops
/// at end of input.
fn match_string(rest: &str, language: Language) -> Option<usize> {
    // Python triple quotes span lines.
    if language == Language::Python {
        for q in ["\"\"\"", "'''"] {
            if rest.starts_with(q) {
                return Some(match rest[3..].find(q) {
                    Some(i) => 3 + i + 3,
                    None => rest.len(),
                });
            }
        }
    }
    // Go raw strings span lines, no escapes.
    if language == Language::Go && rest.starts_with('`') {
        return Some(match rest[1..].find('`') {
            Some(i) => 1 + i + 1,
            None => rest.len(),
        });
    }

    let quote = rest.chars().next()?;
    let quoted = match (quote, language) {
        ('"', _) => true,
        // Haskell apostrophes appear inside identifiers; treat as operator.
        ('\'', Language::Haskell) => false,
        ('\'', _) => true,
        _ => false,
    };
    if !quoted {
        return None;
    }

    let mut chars = rest.char_indices().skip(1);
    let mut escaped = false;
    for (i, ch) in &mut chars {
        if escaped {
            escaped = false;
            continue;
        }
        match ch {
            '\\' => escaped = true,
            '\n' => return Some(i), // unterminated: stop before the newline
            c if c == quote => return Some(i + c.len_utf8()),
            _ => {}
        }
    }
    Some(rest.len())
}

/// Matches a numeric literal at the start of `rest` (first char is a digit).
fn match_number(rest: &str) -> usize {
    let bytes = rest.as_bytes();
    let mut i = 0;

    if rest.starts_with("0x") || rest.starts_with("0X") || rest.starts_with("0b")
        || rest.starts_with("0B") || rest.starts_with("0o") || rest.starts_with("0O")
    {
        i = 2;
        while i < bytes.len() && (bytes[i].is_ascii_hexdigit() || bytes[i] == b'_') {
            i += 1;
        }
        return i.max(1);
    }

    while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'_' || bytes[i] == b'\'')
    {
        i += 1;
    }
    // fractional part only when a digit follows the dot
    if i + 1 < bytes.len() && bytes[i] == b'.' && bytes[i + 1].is_ascii_digit() {
        i += 1;
        while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'_') {
            i += 1;
        }
    }
    // exponent
    if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
        let mut j = i + 1;
        if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
            j += 1;
        }
        if j < bytes.len() && bytes[j].is_ascii_digit() {
            i = j;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
        }
    }
    // type suffixes (1L, 2.5f, 3u, 10m)
    while i < bytes.len() && matches!(bytes[i], b'u' | b'U' | b'l' | b'L' | b'f' | b'F' | b'd' | b'D' | b'm' | b'M') {
        i += 1;
    }
    i.max(1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn classes(text: &str, lang: Language) -> Vec<(String, TokenClass)> {
        tokenize(text, lang)
            .into_iter()
            .map(|t| (t.text, t.class))
            .collect()
    }

    #[test]
    fn c_declaration_token_stream() {
        let got = classes("int i = 0;", Language::C);
        let want = vec![
            ("int".into(), TokenClass::Kw),
            (" ".into(), TokenClass::Ws),
            ("i".into(), TokenClass::Id),
            (" ".into(), TokenClass::Ws),
            ("=".into(), TokenClass::Op),
            (" ".into(), TokenClass::Ws),
            ("0".into(), TokenClass::Num),
            (";".into(), TokenClass::Punc),
        ];
        assert_eq!(got, want);
    }

    #[test]
    fn empty_input_yields_empty_stream() {
        assert!(tokenize("", Language::C).is_empty());
    }

    #[test]
    fn python_hash_comment_is_comment_class() {
        let got = classes("x=1 # hi", Language::Python);
        assert_eq!(
            got,
            vec![
                ("x".into(), TokenClass::Id),
                ("=".into(), TokenClass::Op),
                ("1".into(), TokenClass::Num),
                (" ".into(), TokenClass::Ws),
                ("# hi".into(), TokenClass::Comment),
            ]
        );
    }

    #[test]
    fn c_line_and_block_comments() {
        let got = classes("a; // x\n/* y */b", Language::C);
        assert_eq!(got[3], ("// x".into(), TokenClass::Comment));
        assert_eq!(got[5], ("/* y */".into(), TokenClass::Comment));
        assert_eq!(got[6], ("b".into(), TokenClass::Id));
    }

    #[test]
    fn python_floor_division_is_operator_not_comment() {
        let got = classes("a // b", Language::Python);
        assert_eq!(got[2], ("//".into(), TokenClass::Op));
    }

    #[test]
    fn unterminated_string_stops_at_newline() {
        let got = classes("s = \"abc\nx", Language::C);
        assert_eq!(got[4], ("\"abc".into(), TokenClass::Str));
        assert_eq!(got.last().unwrap(), &("x".into(), TokenClass::Id));
    }

    #[test]
    fn reconstruction_on_mixed_snippet() {
        let text = "def f(x):\n\treturn \"a\\\"b\" + x # done\n";
        let joined: String = tokenize(text, Language::Python)
            .iter()
            .map(|t| t.text.as_str())
            .collect();
        assert_eq!(joined, text);
    }
}
