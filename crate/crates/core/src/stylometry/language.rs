//! Programming-language detection for code samples.
//!
//! Detection order: filename-extension hint, shebang line, then a weighted
//! table of language-distinctive content markers. `Unknown` is a value, not
//! an error; it is returned for empty input, ties, and low-evidence text.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Language {
    C,
    Cpp,
    CSharp,
    Java,
    Go,
    Python,
    Ruby,
    Haskell,
    Unknown,
}

impl Language {
    pub const KNOWN: [Language; 8] = [
        Language::C,
        Language::Cpp,
        Language::CSharp,
        Language::Java,
        Language::Go,
        Language::Python,
        Language::Ruby,
        Language::Haskell,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Language::C => "c",
            Language::Cpp => "cpp",
            Language::CSharp => "csharp",
            Language::Java => "java",
            Language::Go => "go",
            Language::Python => "python",
            Language::Ruby => "ruby",
            Language::Haskell => "haskell",
            Language::Unknown => "unknown",
        }
    }

    /// Whether a structural grammar is available. Haskell's layout rule is
    /// out of scope; its syntactic tools run in degraded mode.
    pub fn has_grammar(self) -> bool {
        !matches!(self, Language::Haskell | Language::Unknown)
    }
}

impl fmt::Display for Language {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Language {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "c" => Ok(Language::C),
            "cpp" | "c++" | "cxx" => Ok(Language::Cpp),
            "csharp" | "cs" | "c#" => Ok(Language::CSharp),
            "java" => Ok(Language::Java),
            "go" | "golang" => Ok(Language::Go),
            "python" | "py" => Ok(Language::Python),
            "ruby" | "rb" => Ok(Language::Ruby),
            "haskell" | "hs" => Ok(Language::Haskell),
            "unknown" => Ok(Language::Unknown),
            other => Err(format!("unknown language `{other}`")),
        }
    }
}

fn extension_language(hint: &str) -> Option<Language> {
    let ext = hint.rsplit('.').next()?.to_ascii_lowercase();
    match ext.as_str() {
        "py" | "pyw" => Some(Language::Python),
        "c" | "h" => Some(Language::C),
        "cpp" | "cc" | "cxx" | "hpp" | "hh" | "hxx" => Some(Language::Cpp),
        "cs" => Some(Language::CSharp),
        "java" => Some(Language::Java),
        "go" => Some(Language::Go),
        "rb" => Some(Language::Ruby),
        "hs" | "lhs" => Some(Language::Haskell),
        _ => None,
    }
}

fn shebang_language(text: &str) -> Option<Language> {
    let first = text.lines().next()?;
    if !first.starts_with("#!") {
        return None;
    }
    if first.contains("python") {
        Some(Language::Python)
    } else if first.contains("ruby") {
        Some(Language::Ruby)
    } else {
        None
    }
}

/// (language, marker, weight) rows. Markers are plain substring matches;
/// weights were tuned on the hand-labeled snippet fixture set.
const MARKERS: &[(Language, &str, u32)] = &[
    (Language::Cpp, "std::", 3),
    (Language::Cpp, "using namespace", 3),
    (Language::Cpp, "template<", 3),
    (Language::Cpp, "template <", 3),
    (Language::Cpp, "#include <iostream>", 4),
    (Language::Cpp, "#include <vector>", 4),
    (Language::Cpp, "#include <string>", 3),
    (Language::Cpp, "#include <map>", 3),
    (Language::Cpp, "#include <algorithm>", 4),
    (Language::Cpp, "bits/stdc++.h", 4),
    (Language::Cpp, "cout", 2),
    (Language::Cpp, "cin >>", 3),
    (Language::Cpp, "nullptr", 2),
    (Language::Cpp, "::", 1),
    (Language::C, "#include <stdio.h>", 4),
    (Language::C, "#include <stdlib.h>", 4),
    (Language::C, "#include <string.h>", 3),
    (Language::C, "#include", 2),
    (Language::C, "printf(", 3),
    (Language::C, "scanf(", 3),
    (Language::C, "malloc(", 3),
    (Language::C, "int main(", 1),
    (Language::C, "->", 1),
    (Language::CSharp, "using System", 4),
    (Language::CSharp, "Console.", 4),
    (Language::CSharp, "namespace ", 2),
    (Language::CSharp, "public class", 1),
    (Language::CSharp, "string[] args", 3),
    (Language::CSharp, "foreach (", 2),
    (Language::Java, "public static void main", 4),
    (Language::Java, "System.out", 4),
    (Language::Java, "import java", 4),
    (Language::Java, "public class", 2),
    (Language::Java, "@Override", 3),
    (Language::Java, "extends ", 1),
    (Language::Go, "package main", 4),
    (Language::Go, "func ", 3),
    (Language::Go, ":=", 2),
    (Language::Go, "fmt.", 3),
    (Language::Go, "import (", 2),
    (Language::Go, "chan ", 2),
    (Language::Python, "def ", 3),
    (Language::Python, "elif ", 3),
    (Language::Python, "self.", 2),
    (Language::Python, "print(", 2),
    (Language::Python, "import ", 1),
    (Language::Python, "__main__", 4),
    (Language::Python, "lambda ", 2),
    (Language::Python, "None", 1),
    (Language::Ruby, "puts ", 4),
    (Language::Ruby, "elsif", 4),
    (Language::Ruby, "do |", 4),
    (Language::Ruby, ".each", 3),
    (Language::Ruby, "require '", 3),
    (Language::Ruby, "\nend", 3),
    (Language::Ruby, "nil", 1),
    (Language::Haskell, " :: ", 4),
    (Language::Haskell, " where", 3),
    (Language::Haskell, "putStrLn", 4),
    (Language::Haskell, "module ", 2),
    (Language::Haskell, "main =", 3),
    (Language::Haskell, "import Data.", 3),
    (Language::Haskell, " <- ", 2),
];

/// Minimum winning score; below it the content evidence is too thin.
const MIN_SCORE: u32 = 3;

/// Detects the language of `sample_text`, extension hint first, then shebang,
/// then the content-marker table. Deterministic for fixed inputs.
pub fn detect_language(sample_text: &str, filename_hint: Option<&str>) -> Language {
    if sample_text.trim().is_empty() {
        return Language::Unknown;
    }
    if let Some(lang) = filename_hint.and_then(extension_language) {
        return lang;
    }
    if let Some(lang) = shebang_language(sample_text) {
        return lang;
    }

    let mut scores: Vec<(Language, u32)> = Language::KNOWN.iter().map(|&l| (l, 0)).collect();
    for &(lang, marker, weight) in MARKERS {
        if sample_text.contains(marker) {
            let entry = scores.iter_mut().find(|(l, _)| *l == lang).unwrap();
            entry.1 += weight;
        }
    }

    let best = scores.iter().map(|&(_, s)| s).max().unwrap_or(0);
    if best < MIN_SCORE {
        return Language::Unknown;
    }
    let mut winners = scores.iter().filter(|&&(_, s)| s == best);
    let first = winners.next().map(|&(l, _)| l);
    match (first, winners.next()) {
        (Some(lang), None) => lang,
        _ => Language::Unknown,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extension_hint_dominates() {
        assert_eq!(detect_language("print(1)", Some("x.py")), Language::Python);
        // even over contradictory content
        assert_eq!(
            detect_language("#include <vector>\nint main(){}", Some("solve.java")),
            Language::Java
        );
    }

    #[test]
    fn cpp_heuristic_on_include_vector() {
        assert_eq!(
            detect_language("#include <vector>\nint main(){}", None),
            Language::Cpp
        );
    }

    #[test]
    fn empty_input_is_unknown() {
        assert_eq!(detect_language("", Some("x.py")), Language::Unknown);
        assert_eq!(detect_language("   \n\t ", None), Language::Unknown);
    }

    #[test]
    fn shebang_beats_content_markers() {
        assert_eq!(
            detect_language("#!/usr/bin/env ruby\nx = 1", None),
            Language::Ruby
        );
    }

    #[test]
    fn thin_evidence_is_unknown() {
        assert_eq!(detect_language("x = 1", None), Language::Unknown);
    }
}
