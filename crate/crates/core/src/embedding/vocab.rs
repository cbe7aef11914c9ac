use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::text::ProcessedDoc;

/// Word/index maps with corpus frequencies. Index order is by descending count,
/// ties broken lexicographically.
#[derive(Debug, Clone, PartialEq)]
pub struct Vocabulary {
    words: Vec<String>,
    counts: Vec<u64>,
    index: HashMap<String, usize>,
    min_count: u64,
}

impl Vocabulary {
    /// Builds from `(word, count)` pairs, dropping words below `min_count`.
    pub fn from_counts(counts: HashMap<String, u64>, min_count: u64) -> Result<Self> {
        let mut entries: Vec<(String, u64)> =
            counts.into_iter().filter(|(_, c)| *c >= min_count).collect();
        if entries.is_empty() {
            return Err(Error::EmptyVocabulary(min_count as usize));
        }
        entries.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        let (words, counts): (Vec<_>, Vec<_>) = entries.into_iter().unzip();
        Ok(Self::from_parts(words, counts, min_count))
    }

    pub(crate) fn from_parts(words: Vec<String>, counts: Vec<u64>, min_count: u64) -> Self {
        let index = words.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
        Vocabulary {
            words,
            counts,
            index,
            min_count,
        }
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn index_of(&self, word: &str) -> Option<usize> {
        self.index.get(word).copied()
    }

    pub fn word(&self, idx: usize) -> &str {
        &self.words[idx]
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn count(&self, idx: usize) -> u64 {
        self.counts[idx]
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn min_count(&self) -> u64 {
        self.min_count
    }

    pub fn total_count(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// Counts bag tokens across `docs` and keeps words seen at least `min_count` times.
pub fn build_vocabulary(docs: &[ProcessedDoc], min_count: u64) -> Result<Vocabulary> {
    if min_count == 0 {
        return Err(Error::InvalidConfig("min_count must be >= 1".into()));
    }
    let mut counts: HashMap<String, u64> = HashMap::new();
    for doc in docs {
        for w in &doc.bag_tokens {
            *counts.entry(w.clone()).or_insert(0) += 1;
        }
    }
    Vocabulary::from_counts(counts, min_count)
}
