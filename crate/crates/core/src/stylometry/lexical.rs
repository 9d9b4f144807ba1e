//! Lexical dimension tools: token frequencies, n-grams, character n-grams,
//! identifier morphology, and abstract lexical templates.
//!
//! "Code tokens" everywhere below means every token class except whitespace
//! and comments. Character n-grams run over whitespace-normalized text (runs
//! collapsed to one space, ends trimmed) so this channel does not re-measure
//! layout.

use std::collections::{BTreeMap, HashSet};

use super::profile::{MetricValue, ToolName, ToolProfile};
use super::stats::{bump, mean, ranked_top, ratio, RANKED_LIMIT};
use super::tokens::{Token, TokenClass};
use super::CodeSample;

fn code_tokens(tokens: &[Token]) -> Vec<&Token> {
    tokens.iter().filter(|t| t.class.is_code()).collect()
}

pub fn token_frequency_profile(sample: &CodeSample) -> ToolProfile {
    let tokens = sample.tokens();
    let code = code_tokens(&tokens);
    let total = code.len() as u64;

    let count_class = |class: TokenClass| code.iter().filter(|t| t.class == class).count() as u64;
    let mut token_counts = BTreeMap::new();
    for tok in &code {
        bump(&mut token_counts, tok.text.clone());
    }

    let mut p = ToolProfile::new(ToolName::TokenFrequencyProfile, false);
    p.set("keyword_ratio", MetricValue::Scalar(ratio(count_class(TokenClass::Kw), total)));
    p.set("identifier_ratio", MetricValue::Scalar(ratio(count_class(TokenClass::Id), total)));
    p.set("operator_ratio", MetricValue::Scalar(ratio(count_class(TokenClass::Op), total)));
    p.set("punctuation_ratio", MetricValue::Scalar(ratio(count_class(TokenClass::Punc), total)));
    p.set("token_top", MetricValue::Ranked(ranked_top(&token_counts, RANKED_LIMIT)));
    p
}

/// Longest n such that some n-gram of the sequence occurs at two or more
/// distinct start positions (overlaps allowed). Binary search over n; the
/// predicate is monotone because any repeat of length n+1 contains one of
/// length n.
fn longest_repeated(texts: &[&str]) -> u64 {
    if texts.len() < 2 {
        return 0;
    }
    let has_repeat = |n: usize| -> bool {
        let mut seen = HashSet::new();
        texts.windows(n).any(|w| !seen.insert(w.to_vec()))
    };
    let mut lo = 0usize;
    let mut hi = texts.len() - 1;
    while lo < hi {
        let mid = (lo + hi + 1) / 2;
        if has_repeat(mid) {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    lo as u64
}

pub fn token_ngram_profile(sample: &CodeSample) -> ToolProfile {
    let tokens = sample.tokens();
    let code = code_tokens(&tokens);

    let mut bigrams = BTreeMap::new();
    for pair in code.windows(2) {
        bump(&mut bigrams, format!("{} {}", pair[0].text, pair[1].text));
    }

    let abstracted: Vec<&str> = code.iter().map(|t| t.abstract_text()).collect();
    let mut trigrams = BTreeMap::new();
    for tri in abstracted.windows(3) {
        bump(&mut trigrams, tri.join(" "));
    }

    let texts: Vec<&str> = code.iter().map(|t| t.text.as_str()).collect();

    let mut p = ToolProfile::new(ToolName::TokenNgramProfile, false);
    p.set("token_bigrams", MetricValue::Ranked(ranked_top(&bigrams, RANKED_LIMIT)));
    p.set("abstract_token_trigrams", MetricValue::Ranked(ranked_top(&trigrams, RANKED_LIMIT)));
    p.set("longest_repeated_sequence", MetricValue::Count(longest_repeated(&texts)));
    p
}

pub fn char_ngram_profile(sample: &CodeSample) -> ToolProfile {
    let normalized: String = sample.text.split_whitespace().collect::<Vec<_>>().join(" ");
    let chars: Vec<char> = normalized.chars().collect();

    let grams = |n: usize| -> Vec<(String, u64)> {
        let mut counts = BTreeMap::new();
        for w in chars.windows(n) {
            bump(&mut counts, w.iter().collect::<String>());
        }
        ranked_top(&counts, RANKED_LIMIT)
    };

    let mut p = ToolProfile::new(ToolName::CharNgramProfile, false);
    p.set("char_4gram", MetricValue::Ranked(grams(4)));
    p.set("char_5gram", MetricValue::Ranked(grams(5)));
    p
}

pub(super) const CASE_CLASSES: [&str; 7] =
    ["lower", "upper", "camel", "pascal", "snake", "screaming", "mixed"];

/// Classifies one identifier into a casing class. Identifiers without
/// letters are `mixed`; underscored identifiers split into snake/screaming
/// by letter case; single-case identifiers without underscores are
/// lower/upper; the rest split camel/pascal by the first character.
pub(super) fn classify_case(identifier: &str) -> &'static str {
    let letters: Vec<char> = identifier.chars().filter(|c| c.is_ascii_alphabetic()).collect();
    if letters.is_empty() {
        return "mixed";
    }
    let all_lower = letters.iter().all(|c| c.is_ascii_lowercase());
    let all_upper = letters.iter().all(|c| c.is_ascii_uppercase());
    if identifier.contains('_') {
        if all_lower {
            "snake"
        } else if all_upper {
            "screaming"
        } else {
            "mixed"
        }
    } else if all_lower {
        "lower"
    } else if all_upper {
        "upper"
    } else if identifier.chars().next().is_some_and(|c| c.is_ascii_lowercase()) {
        "camel"
    } else if identifier.chars().next().is_some_and(|c| c.is_ascii_uppercase()) {
        "pascal"
    } else {
        "mixed"
    }
}

pub fn identifier_style_profile(sample: &CodeSample) -> ToolProfile {
    let tokens = sample.tokens();
    let ids: Vec<&Token> = tokens.iter().filter(|t| t.class == TokenClass::Id).collect();
    let total = ids.len() as u64;

    let mut cases: BTreeMap<String, f64> =
        CASE_CLASSES.iter().map(|c| (c.to_string(), 0.0)).collect();
    let mut lengths = Vec::new();
    let mut unique = HashSet::new();
    let mut with_digit = 0u64;
    let mut with_underscore = 0u64;

    for id in &ids {
        *cases.get_mut(classify_case(&id.text)).unwrap() += 1.0;
        lengths.push(id.text.chars().count() as f64);
        unique.insert(id.text.as_str());
        if id.text.chars().any(|c| c.is_ascii_digit()) {
            with_digit += 1;
        }
        if id.text.contains('_') {
            with_underscore += 1;
        }
    }
    if total > 0 {
        for v in cases.values_mut() {
            *v /= total as f64;
        }
    }

    let mut p = ToolProfile::new(ToolName::IdentifierStyleProfile, false);
    p.set("identifier_cases", MetricValue::Dist(cases));
    p.set("avg_length", MetricValue::Scalar(mean(&lengths)));
    p.set("unique_ratio", MetricValue::Scalar(ratio(unique.len() as u64, total)));
    p.set("digit_ratio", MetricValue::Scalar(ratio(with_digit, total)));
    p.set("underscore_ratio", MetricValue::Scalar(ratio(with_underscore, total)));
    p
}

const ABSTRACT_CLASSES: [&str; 6] = ["ID", "NUM", "STR", "KW", "OP", "PUNC"];

pub fn abstract_lexical_profile(sample: &CodeSample) -> ToolProfile {
    let tokens = sample.tokens();
    let code = code_tokens(&tokens);
    let total = code.len() as u64;

    let mut dist: BTreeMap<String, f64> =
        ABSTRACT_CLASSES.iter().map(|c| (c.to_string(), 0.0)).collect();
    for tok in &code {
        *dist.get_mut(tok.class.as_str()).unwrap() += 1.0;
    }
    if total > 0 {
        for v in dist.values_mut() {
            *v /= total as f64;
        }
    }

    let mut bigrams = BTreeMap::new();
    for pair in code.windows(2) {
        bump(&mut bigrams, format!("{} {}", pair[0].class.as_str(), pair[1].class.as_str()));
    }

    let mut p = ToolProfile::new(ToolName::AbstractLexicalProfile, false);
    p.set("abstract_distribution", MetricValue::Dist(dist));
    p.set("abstract_bigrams", MetricValue::Ranked(ranked_top(&bigrams, RANKED_LIMIT)));
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
    fn case_classification_covers_the_seven_classes() {
        assert_eq!(classify_case("flag"), "lower");
        assert_eq!(classify_case("N"), "upper");
        assert_eq!(classify_case("myVar"), "camel");
        assert_eq!(classify_case("MyVar"), "pascal");
        assert_eq!(classify_case("is_half"), "snake");
        assert_eq!(classify_case("MAX_SIZE"), "screaming");
        assert_eq!(classify_case("My_Var"), "mixed");
        assert_eq!(classify_case("_"), "mixed");
        assert_eq!(classify_case("x2"), "lower");
    }

    #[test]
    fn frequency_ratios_sum_at_most_one() {
        let p = token_frequency_profile(&sample("int i = 0; // c\n\"s\"", Language::C));
        let sum = p.scalar("keyword_ratio").unwrap()
            + p.scalar("identifier_ratio").unwrap()
            + p.scalar("operator_ratio").unwrap()
            + p.scalar("punctuation_ratio").unwrap();
        assert!(sum <= 1.0 + 1e-12);
    }

    #[test]
    fn longest_repeated_handles_overlaps() {
        assert_eq!(longest_repeated(&["a", "a", "a"]), 2);
        assert_eq!(longest_repeated(&["a", "b", "c"]), 0);
        assert_eq!(longest_repeated(&["x", "y", "x", "y"]), 2);
        assert_eq!(longest_repeated(&[]), 0);
    }

    #[test]
    fn identifier_distribution_sums_to_one() {
        let p = identifier_style_profile(&sample("foo Bar BAZ_X q_r", Language::Unknown));
        if let Some(MetricValue::Dist(d)) = p.metrics.get("identifier_cases") {
            let sum: f64 = d.values().sum();
            assert!((sum - 1.0).abs() < 1e-9);
            assert_eq!(d.len(), 7);
        } else {
            panic!("identifier_cases missing");
        }
    }

    #[test]
    fn abstract_bigrams_use_class_names() {
        let p = abstract_lexical_profile(&sample("if (x)", Language::C));
        if let Some(MetricValue::Ranked(list)) = p.metrics.get("abstract_bigrams") {
            assert!(list.iter().any(|(g, _)| g == "KW PUNC"));
        } else {
            panic!("abstract_bigrams missing");
        }
    }

    #[test]
    fn empty_input_has_zeroed_distributions() {
        let p = abstract_lexical_profile(&sample("", Language::C));
        if let Some(MetricValue::Dist(d)) = p.metrics.get("abstract_distribution") {
            assert!(d.values().all(|&v| v == 0.0));
        } else {
            panic!("abstract_distribution missing");
        }
    }
}
