use std::collections::{BTreeMap, BTreeSet};

use log::warn;
use serde::{Deserialize, Serialize};

use super::skipgram::{dot, EmbeddingModel};
use crate::error::{Error, Result};
use crate::text::lemmatize;

/// Cosine similarity; zero when either vector is zero.
pub fn cosine(a: &[f64], b: &[f64]) -> f64 {
    let na = dot(a, a).sqrt();
    let nb = dot(b, b).sqrt();
    if na == 0.0 || nb == 0.0 {
        return 0.0;
    }
    dot(a, b) / (na * nb)
}

/// Vocabulary words whose input-vector cosine with `target` is at least
/// `cutoff`, best first (ties by word). The target itself is excluded.
pub fn most_similar(model: &EmbeddingModel, target: &str, cutoff: f64) -> Result<Vec<(String, f64)>> {
    let t = model
        .vocab
        .index_of(target)
        .ok_or_else(|| Error::OutOfVocabulary(target.to_string()))?;
    let tv = model.input_row(t);
    let mut out: Vec<(String, f64)> = (0..model.vocab.len())
        .filter(|&i| i != t)
        .map(|i| (model.vocab.word(i).to_string(), cosine(tv, model.input_row(i))))
        .filter(|(_, s)| *s >= cutoff)
        .collect();
    out.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    Ok(out)
}

/// Seed words plus the words learned from them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KeywordSet {
    pub seeds: BTreeSet<String>,
    /// Learned words with their best similarity to any seed, best first.
    pub learned: Vec<(String, f64)>,
    pub cutoff: f64,
}

impl KeywordSet {
    pub fn from_words<I, S>(words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        KeywordSet {
            seeds: words.into_iter().map(|w| lemmatize(w.as_ref())).collect(),
            learned: Vec::new(),
            cutoff: 1.0,
        }
    }

    pub fn contains(&self, word: &str) -> bool {
        self.seeds.contains(word) || self.learned.iter().any(|(w, _)| w == word)
    }

    /// Seeds followed by learned words.
    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.seeds
            .iter()
            .map(String::as_str)
            .chain(self.learned.iter().map(|(w, _)| w.as_str()))
    }

    pub fn word_set(&self) -> BTreeSet<&str> {
        self.words().collect()
    }

    pub fn len(&self) -> usize {
        self.seeds.len() + self.learned.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Expands each in-vocabulary seed with [`most_similar`] and merges the
/// results, keeping each word once with its highest score.
///
/// Seeds are matched in lemma space. Out-of-vocabulary seeds are kept as
/// members but contribute no neighbours; if every seed is out of vocabulary
/// this is an error.
pub fn expand_keywords<I, S>(model: &EmbeddingModel, seeds: I, cutoff: f64) -> Result<KeywordSet>
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    if !(cutoff > 0.0 && cutoff <= 1.0) {
        return Err(Error::InvalidConfig(format!("cutoff {cutoff} outside (0,1]")));
    }
    let seeds: BTreeSet<String> = seeds.into_iter().map(|s| lemmatize(s.as_ref().trim())).collect();
    let mut best: BTreeMap<String, f64> = BTreeMap::new();
    let mut any = false;
    for seed in &seeds {
        match most_similar(model, seed, cutoff) {
            Ok(neighbours) => {
                any = true;
                for (w, s) in neighbours {
                    if seeds.contains(&w) {
                        continue;
                    }
                    let e = best.entry(w).or_insert(s);
                    if s > *e {
                        *e = s;
                    }
                }
            }
            Err(Error::OutOfVocabulary(w)) => warn!("seed {w:?} is not in the vocabulary"),
            Err(e) => return Err(e),
        }
    }
    if !any {
        return Err(Error::AllSeedsOutOfVocabulary(seeds.into_iter().collect()));
    }
    let mut learned: Vec<(String, f64)> = best.into_iter().collect();
    learned.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    Ok(KeywordSet { seeds, learned, cutoff })
}
