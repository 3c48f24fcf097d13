//! Per-year keyword relative-frequency distributions and alignment of a
//! distribution pair onto its union vocabulary.

use std::cmp::Ordering;
use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::ingest::YearBucket;

/// A year's keyword frequency table for one field. Entries are sorted by
/// keyword; zero-count keywords are never stored, so every count is >= 1.
#[derive(Debug, Clone)]
pub struct KeywordDistribution {
    field_code: String,
    year: i32,
    entries: Vec<(String, u64)>,
    total_count: u64,
}

impl KeywordDistribution {
    pub fn field_code(&self) -> &str {
        &self.field_code
    }

    pub fn year(&self) -> i32 {
        self.year
    }

    pub fn total_count(&self) -> u64 {
        self.total_count
    }

    pub fn vocab_size(&self) -> usize {
        self.entries.len()
    }

    pub fn count(&self, keyword: &str) -> Option<u64> {
        self.entries
            .binary_search_by(|(kw, _)| kw.as_str().cmp(keyword))
            .ok()
            .map(|i| self.entries[i].1)
    }

    /// Relative frequency count/total for a stored keyword.
    pub fn relfreq(&self, keyword: &str) -> Option<f64> {
        self.count(keyword)
            .map(|c| c as f64 / self.total_count as f64)
    }

    /// `(keyword, count, relfreq)` triples in keyword order.
    pub fn entries(&self) -> impl Iterator<Item = (&str, u64, f64)> {
        let total = self.total_count as f64;
        self.entries
            .iter()
            .map(move |(kw, c)| (kw.as_str(), *c, *c as f64 / total))
    }
}

/// Counts keyword occurrences across a bucket's records (records carry
/// already-deduplicated keyword lists, so each record contributes at most
/// one occurrence per keyword).
pub fn build_distribution(bucket: &YearBucket) -> Result<KeywordDistribution> {
    let mut counts: HashMap<&str, u64> = HashMap::new();
    for record in &bucket.records {
        for kw in &record.keywords {
            *counts.entry(kw.as_str()).or_insert(0) += 1;
        }
    }
    if counts.is_empty() {
        return Err(Error::EmptyVocabulary {
            field: bucket.field_code.clone(),
            year: bucket.year,
        });
    }
    let mut entries: Vec<(String, u64)> = counts
        .into_iter()
        .map(|(kw, c)| (kw.to_string(), c))
        .collect();
    entries.sort_unstable_by(|a, b| a.0.cmp(&b.0));
    let total_count = entries.iter().map(|(_, c)| *c).sum();
    Ok(KeywordDistribution {
        field_code: bucket.field_code.clone(),
        year: bucket.year,
        entries,
        total_count,
    })
}

/// Two distributions re-expressed on their union vocabulary, zero-padded
/// where a keyword is absent from one year. Vocabulary order is
/// lexicographic, which makes downstream output byte-reproducible.
#[derive(Debug, Clone)]
pub struct AlignedDistributionPair {
    pub union_vocab: Vec<String>,
    pub p: Vec<f64>,
    pub q: Vec<f64>,
    pub v_left: usize,
    pub v_right: usize,
    pub common_count: usize,
}

impl AlignedDistributionPair {
    pub fn union_size(&self) -> usize {
        self.union_vocab.len()
    }
}

/// Merges two sorted vocabularies into the union and carries each side's
/// relative frequencies across, with 0 where a keyword is absent.
pub fn align_pair(
    left: &KeywordDistribution,
    right: &KeywordDistribution,
) -> AlignedDistributionPair {
    let lt = left.total_count as f64;
    let rt = right.total_count as f64;
    let mut union_vocab = Vec::with_capacity(left.entries.len() + right.entries.len());
    let mut p = Vec::with_capacity(union_vocab.capacity());
    let mut q = Vec::with_capacity(union_vocab.capacity());
    let mut common_count = 0usize;

    let mut li = left.entries.iter().peekable();
    let mut ri = right.entries.iter().peekable();
    loop {
        match (li.peek(), ri.peek()) {
            (Some((lk, lc)), Some((rk, rc))) => match lk.cmp(rk) {
                Ordering::Less => {
                    union_vocab.push(lk.clone());
                    p.push(*lc as f64 / lt);
                    q.push(0.0);
                    li.next();
                }
                Ordering::Greater => {
                    union_vocab.push(rk.clone());
                    p.push(0.0);
                    q.push(*rc as f64 / rt);
                    ri.next();
                }
                Ordering::Equal => {
                    union_vocab.push(lk.clone());
                    p.push(*lc as f64 / lt);
                    q.push(*rc as f64 / rt);
                    common_count += 1;
                    li.next();
                    ri.next();
                }
            },
            (Some((lk, lc)), None) => {
                union_vocab.push(lk.clone());
                p.push(*lc as f64 / lt);
                q.push(0.0);
                li.next();
            }
            (None, Some((rk, rc))) => {
                union_vocab.push(rk.clone());
                p.push(0.0);
                q.push(*rc as f64 / rt);
                ri.next();
            }
            (None, None) => break,
        }
    }

    AlignedDistributionPair {
        union_vocab,
        p,
        q,
        v_left: left.vocab_size(),
        v_right: right.vocab_size(),
        common_count,
    }
}
