//! Masked k-gram winnowing fingerprint comparator.
//!
//! Identifiers and literals are masked to their abstract classes before
//! hashing, so shared fingerprints reflect structural/token-shape overlap
//! rather than shared names. Robust winnowing selects, per sliding window of
//! hashes, the rightmost minimal hash; similarity is the Jaccard index of the
//! two selected-hash sets.

use std::collections::BTreeSet;

use super::profile::FingerprintReport;
use super::CodeSample;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FingerprintParams {
    /// Token-gram length (minimum 3).
    pub k: usize,
    /// Winnowing window over the gram-hash sequence (minimum 1).
    pub window: usize,
}

impl Default for FingerprintParams {
    fn default() -> Self {
        FingerprintParams { k: 5, window: 4 }
    }
}

impl FingerprintParams {
    pub fn new(k: usize, window: usize) -> Self {
        FingerprintParams { k: k.max(3), window: window.max(1) }
    }
}

/// Stable 64-bit FNV-1a; the std hasher is not guaranteed stable across
/// releases and fingerprints must replay identically everywhere.
pub(crate) fn fnv1a(bytes: &[u8]) -> u64 {
    let mut hash = 0xcbf29ce484222325u64;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x100000001b3);
    }
    hash
}

fn masked_stream(sample: &CodeSample) -> Vec<String> {
    sample
        .tokens()
        .iter()
        .filter(|t| t.class.is_code())
        .map(|t| t.abstract_text().to_string())
        .collect()
}

pub(crate) fn gram_hashes(stream: &[String], k: usize) -> Vec<u64> {
    stream
        .windows(k)
        .map(|gram| {
            let mut bytes = Vec::new();
            for (i, tok) in gram.iter().enumerate() {
                if i > 0 {
                    bytes.push(0x1f);
                }
                bytes.extend_from_slice(tok.as_bytes());
            }
            fnv1a(&bytes)
        })
        .collect()
}

/// Robust winnowing: per window pick the rightmost minimal hash; consecutive
/// windows picking the same position contribute once.
pub(crate) fn winnow(hashes: &[u64], window: usize) -> BTreeSet<u64> {
    let mut selected = BTreeSet::new();
    if hashes.is_empty() {
        return selected;
    }
    let w = window.min(hashes.len());
    let mut last_pos = usize::MAX;
    for start in 0..=hashes.len() - w {
        let mut best = start;
        for i in start..start + w {
            if hashes[i] <= hashes[best] {
                best = i;
            }
        }
        if best != last_pos {
            selected.insert(hashes[best]);
            last_pos = best;
        }
    }
    selected
}

fn longest_common_run(a: &[String], b: &[String]) -> u64 {
    if a.is_empty() || b.is_empty() {
        return 0;
    }
    let mut prev = vec![0u64; b.len() + 1];
    let mut best = 0u64;
    for item_a in a {
        let mut row = vec![0u64; b.len() + 1];
        for (j, item_b) in b.iter().enumerate() {
            if item_a == item_b {
                row[j + 1] = prev[j] + 1;
                best = best.max(row[j + 1]);
            }
        }
        prev = row;
    }
    best
}

/// Compares two samples by masked-token fingerprints. Symmetric; samples
/// shorter than `k` tokens report zero similarity and zero overlap.
pub fn fingerprint_similarity(
    a: &CodeSample,
    b: &CodeSample,
    params: FingerprintParams,
) -> FingerprintReport {
    let stream_a = masked_stream(a);
    let stream_b = masked_stream(b);
    if stream_a.len() < params.k || stream_b.len() < params.k {
        return FingerprintReport { similarity: 0.0, total_overlap: 0, longest_fragment: 0 };
    }

    let set_a = winnow(&gram_hashes(&stream_a, params.k), params.window);
    let set_b = winnow(&gram_hashes(&stream_b, params.k), params.window);

    let overlap = set_a.intersection(&set_b).count() as u64;
    let union = set_a.union(&set_b).count() as u64;
    let similarity = if union == 0 { 0.0 } else { overlap as f64 / union as f64 };

    FingerprintReport {
        similarity,
        total_overlap: overlap,
        longest_fragment: longest_common_run(&stream_a, &stream_b),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stylometry::Language;

    fn sample(text: &str, lang: Language) -> CodeSample {
        CodeSample::new(text, lang, "test")
    }

    #[test]
    fn identity_is_full_similarity() {
        let s = sample("int main() { return f(1) + f(2); }", Language::C);
        let r = fingerprint_similarity(&s, &s, FingerprintParams::new(5, 4));
        assert_eq!(r.similarity, 1.0);
        assert!(r.total_overlap > 0);
    }

    #[test]
    fn disjoint_masked_alphabets_share_nothing() {
        let kws = sample("if else while for return break if else while for", Language::C);
        let nums = sample("1 2 3 4 5 6 7 8 9 10", Language::C);
        let r = fingerprint_similarity(&kws, &nums, FingerprintParams::new(3, 2));
        assert_eq!(r.similarity, 0.0);
        assert_eq!(r.total_overlap, 0);
    }

    #[test]
    fn short_input_reports_zero() {
        let tiny = sample("x = 1", Language::Python);
        let other = sample("int main() { return 0; }", Language::C);
        let r = fingerprint_similarity(&tiny, &other, FingerprintParams::new(5, 4));
        assert_eq!(r.similarity, 0.0);
        assert_eq!(r.total_overlap, 0);
        assert_eq!(r.longest_fragment, 0);
    }

    #[test]
    fn symmetric_in_both_inputs() {
        let a = sample("for (i = 0; i < n; i++) { s += a[i]; }", Language::C);
        let b = sample("while (j < m) { t += b[j]; j++; }", Language::C);
        let p = FingerprintParams::default();
        let r1 = fingerprint_similarity(&a, &b, p);
        let r2 = fingerprint_similarity(&b, &a, p);
        assert_eq!(r1.similarity, r2.similarity);
        assert_eq!(r1.total_overlap, r2.total_overlap);
        assert_eq!(r1.longest_fragment, r2.longest_fragment);
    }

    #[test]
    fn masking_makes_renamed_code_identical() {
        let a = sample("int alpha = beta + 1;", Language::C);
        let b = sample("int gamma = delta + 2;", Language::C);
        let r = fingerprint_similarity(&a, &b, FingerprintParams::new(3, 2));
        assert_eq!(r.similarity, 1.0);
        assert_eq!(r.longest_fragment, 7);
    }
}
