//! Small shared numeric helpers for profile extraction.

use std::collections::BTreeMap;

/// Ranked lists are truncated to this many entries.
pub const RANKED_LIMIT: usize = 20;

pub fn mean(values: &[f64]) -> f64 {
    if values.is_empty() {
        0.0
    } else {
        values.iter().sum::<f64>() / values.len() as f64
    }
}

/// Population standard deviation (divide by N); 0 for empty input.
pub fn pop_std(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    let m = mean(values);
    let var = values.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / values.len() as f64;
    var.sqrt()
}

pub fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Top entries by descending count, deterministic lexicographic tie-break.
pub fn ranked_top(counts: &BTreeMap<String, u64>, limit: usize) -> Vec<(String, u64)> {
    let mut entries: Vec<(String, u64)> =
        counts.iter().map(|(k, v)| (k.clone(), *v)).collect();
    entries.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    entries.truncate(limit);
    entries
}

pub fn bump(counts: &mut BTreeMap<String, u64>, key: impl Into<String>) {
    *counts.entry(key.into()).or_insert(0) += 1;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranked_top_breaks_ties_lexicographically() {
        let mut counts = BTreeMap::new();
        counts.insert("b".to_string(), 3);
        counts.insert("a".to_string(), 3);
        counts.insert("c".to_string(), 5);
        let top = ranked_top(&counts, 2);
        assert_eq!(top, vec![("c".to_string(), 5), ("a".to_string(), 3)]);
    }

    #[test]
    fn pop_std_of_constant_is_zero() {
        assert_eq!(pop_std(&[2.0, 2.0, 2.0]), 0.0);
        assert_eq!(pop_std(&[]), 0.0);
    }
}
