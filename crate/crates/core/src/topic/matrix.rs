use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::text::ProcessedDoc;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Weighting {
    /// Raw term counts.
    #[default]
    Counts,
    /// `tf × ln(D / df)`.
    Tfidf,
}

impl std::str::FromStr for Weighting {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "counts" | "count" => Ok(Weighting::Counts),
            "tfidf" | "tf-idf" => Ok(Weighting::Tfidf),
            other => Err(Error::InvalidConfig(format!("unknown weighting {other:?}"))),
        }
    }
}

impl std::fmt::Display for Weighting {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Weighting::Counts => "counts",
            Weighting::Tfidf => "tfidf",
        })
    }
}

/// Sparse document-term weights over a pruned vocabulary.
#[derive(Debug, Clone, PartialEq)]
pub struct TermDocMatrix {
    /// Terms in lexicographic order.
    pub vocab: Vec<String>,
    pub doc_ids: Vec<String>,
    /// Per document: `(term index, weight)` sorted by term index, zero weights omitted.
    pub rows: Vec<Vec<(usize, f64)>>,
    /// Document frequency of each term.
    pub doc_freq: Vec<usize>,
    pub weighting: Weighting,
}

impl TermDocMatrix {
    pub fn num_docs(&self) -> usize {
        self.rows.len()
    }

    pub fn num_terms(&self) -> usize {
        self.vocab.len()
    }

    pub fn term_index(&self, term: &str) -> Option<usize> {
        self.vocab.binary_search_by(|t| t.as_str().cmp(term)).ok()
    }

    /// Weight of `term` in document `doc` (zero when absent).
    pub fn weight(&self, doc: usize, term: &str) -> f64 {
        let Some(t) = self.term_index(term) else { return 0.0 };
        self.rows[doc]
            .binary_search_by_key(&t, |&(i, _)| i)
            .map(|p| self.rows[doc][p].1)
            .unwrap_or(0.0)
    }
}

/// Builds the document-term matrix from bag tokens, dropping terms that occur
/// in fewer than `min_doc_freq` documents.
pub fn build_term_doc_matrix(
    docs: &[&ProcessedDoc],
    min_doc_freq: usize,
    weighting: Weighting,
) -> Result<TermDocMatrix> {
    if docs.is_empty() {
        return Err(Error::EmptyMatrix(min_doc_freq));
    }
    let per_doc: Vec<HashMap<&str, usize>> = docs
        .iter()
        .map(|d| {
            let mut tf = HashMap::new();
            for w in &d.bag_tokens {
                *tf.entry(w.as_str()).or_insert(0) += 1;
            }
            tf
        })
        .collect();
    let mut df: BTreeMap<&str, usize> = BTreeMap::new();
    for tf in &per_doc {
        for &w in tf.keys() {
            *df.entry(w).or_insert(0) += 1;
        }
    }
    let kept: Vec<(&str, usize)> = df.into_iter().filter(|&(_, n)| n >= min_doc_freq).collect();
    if kept.is_empty() {
        return Err(Error::EmptyMatrix(min_doc_freq));
    }
    let vocab: Vec<String> = kept.iter().map(|(w, _)| w.to_string()).collect();
    let doc_freq: Vec<usize> = kept.iter().map(|&(_, n)| n).collect();
    let index: HashMap<&str, usize> = kept.iter().enumerate().map(|(i, &(w, _))| (w, i)).collect();
    let n_docs = docs.len() as f64;

    let rows = per_doc
        .iter()
        .map(|tf| {
            let mut row: Vec<(usize, f64)> = tf
                .iter()
                .filter_map(|(w, &count)| {
                    let t = *index.get(w)?;
                    let weight = match weighting {
                        Weighting::Counts => count as f64,
                        Weighting::Tfidf => count as f64 * (n_docs / doc_freq[t] as f64).ln(),
                    };
                    (weight > 0.0).then_some((t, weight))
                })
                .collect();
            row.sort_by_key(|&(t, _)| t);
            row
        })
        .collect();

    Ok(TermDocMatrix {
        vocab,
        doc_ids: docs.iter().map(|d| d.article_id.clone()).collect(),
        rows,
        doc_freq,
        weighting,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doc(id: &str, words: &str) -> ProcessedDoc {
        ProcessedDoc {
            article_id: id.into(),
            text: String::new(),
            sentences: vec![],
            bag_tokens: words.split_whitespace().map(str::to_string).collect(),
        }
    }

    #[test]
    fn term_in_every_doc_has_zero_tfidf() {
        let docs = [doc("1", "protest a"), doc("2", "protest b"), doc("3", "protest protest")];
        let refs: Vec<_> = docs.iter().collect();
        let m = build_term_doc_matrix(&refs, 1, Weighting::Tfidf).unwrap();
        for d in 0..3 {
            assert_eq!(m.weight(d, "protest"), 0.0);
        }
        assert!(m.weight(0, "a") > 0.0);
    }

    #[test]
    fn counts_mode_entries_are_integers() {
        let docs = [doc("1", "x x y"), doc("2", "y z")];
        let refs: Vec<_> = docs.iter().collect();
        let m = build_term_doc_matrix(&refs, 1, Weighting::Counts).unwrap();
        assert_eq!(m.vocab, ["x", "y", "z"]);
        assert_eq!(m.rows[0], [(0, 2.0), (1, 1.0)]);
        assert!(m.rows.iter().flatten().all(|&(_, w)| w.fract() == 0.0 && w >= 0.0));
    }

    #[test]
    fn pruned_terms_absent() {
        let docs = [doc("1", "rare common"), doc("2", "common")];
        let refs: Vec<_> = docs.iter().collect();
        let m = build_term_doc_matrix(&refs, 2, Weighting::Counts).unwrap();
        assert_eq!(m.vocab, ["common"]);
        assert_eq!(m.term_index("rare"), None);
        assert!(m.rows.iter().flatten().all(|&(t, _)| t < m.num_terms()));
    }

    #[test]
    fn empty_inputs() {
        assert!(matches!(build_term_doc_matrix(&[], 1, Weighting::Counts), Err(Error::EmptyMatrix(_))));
        let docs = [doc("1", "a"), doc("2", "b")];
        let refs: Vec<_> = docs.iter().collect();
        assert!(matches!(build_term_doc_matrix(&refs, 2, Weighting::Counts), Err(Error::EmptyMatrix(2))));
    }
}
