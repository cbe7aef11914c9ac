use std::collections::BTreeSet;

use log::warn;

use super::lda::TopicModel;
use crate::embedding::KeywordSet;
use crate::error::{Error, Result};
use crate::text::ProcessedDoc;

/// Documents whose bag tokens contain at least one keyword.
pub fn keyword_filter<'a>(docs: &'a [ProcessedDoc], keywords: &KeywordSet) -> Vec<&'a ProcessedDoc> {
    let set = keywords.word_set();
    docs.iter()
        .filter(|d| d.bag_tokens.iter().any(|w| set.contains(w.as_str())))
        .collect()
}

/// Topics whose `top_n` most probable words include a keyword.
pub fn relevant_topics(model: &TopicModel, keywords: &KeywordSet, top_n: usize) -> Result<BTreeSet<usize>> {
    if top_n == 0 {
        return Err(Error::InvalidConfig("top_n must be >= 1".into()));
    }
    let set = keywords.word_set();
    let topics: BTreeSet<usize> = (0..model.k())
        .filter(|&t| {
            model
                .top_word_indices(t, top_n)
                .into_iter()
                .any(|w| set.contains(model.vocab[w].as_str()))
        })
        .collect();
    if topics.is_empty() {
        warn!("no topic has a keyword among its top {top_n} words");
    }
    Ok(topics)
}

/// Ids of documents whose probability mass on `topics` reaches `threshold`.
pub fn filter_by_topic(model: &TopicModel, topics: &BTreeSet<usize>, threshold: f64) -> Result<Vec<String>> {
    if !(threshold > 0.0 && threshold <= 1.0) {
        return Err(Error::InvalidConfig(format!("threshold {threshold} outside (0,1]")));
    }
    if topics.is_empty() {
        return Ok(Vec::new());
    }
    Ok((0..model.num_docs())
        .filter(|&d| {
            let row = model.theta_row(d);
            topics.iter().filter(|&&t| t < row.len()).map(|&t| row[t]).sum::<f64>() >= threshold
        })
        .map(|d| model.doc_ids[d].clone())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topic::LdaConfig;
    use proptest::prelude::*;

    fn doc(id: &str, words: &str) -> ProcessedDoc {
        ProcessedDoc {
            article_id: id.into(),
            text: String::new(),
            sentences: vec![],
            bag_tokens: words.split_whitespace().map(str::to_string).collect(),
        }
    }

    fn model(theta: Vec<f64>, phi: Vec<f64>, vocab: &[&str]) -> TopicModel {
        TopicModel {
            config: LdaConfig { k: 2, ..Default::default() },
            vocab: vocab.iter().map(|s| s.to_string()).collect(),
            doc_ids: (0..theta.len() / 2).map(|i| format!("d{i}")).collect(),
            phi,
            theta,
            assignments: vec![],
        }
    }

    #[test]
    fn keyword_presence() {
        let docs = [doc("1", "farmer dharna"), doc("2", "cricket match"), doc("3", "surgical strike")];
        let kw = KeywordSet::from_words(["dharna", "strike"]);
        let kept: Vec<_> = keyword_filter(&docs, &kw).iter().map(|d| d.article_id.as_str()).collect();
        assert_eq!(kept, ["1", "3"]);
    }

    #[test]
    fn topic_selection_by_top_words() {
        let m = model(vec![0.5, 0.5], vec![0.6, 0.3, 0.1, 0.1, 0.2, 0.7], &["protest", "police", "cricket"]);
        let kw = KeywordSet::from_words(["protest"]);
        assert_eq!(relevant_topics(&m, &kw, 1).unwrap(), BTreeSet::from([0]));
        assert_eq!(relevant_topics(&m, &kw, 3).unwrap(), BTreeSet::from([0, 1]));
        let none = KeywordSet::from_words(["bandh"]);
        assert!(relevant_topics(&m, &none, 10).unwrap().is_empty());
        assert!(relevant_topics(&m, &kw, 0).is_err());
    }

    #[test]
    fn threshold_on_topic_mass() {
        let m = model(vec![0.95, 0.05, 0.3, 0.7], vec![0.5; 4], &["a", "b"]);
        assert_eq!(filter_by_topic(&m, &BTreeSet::from([0]), 0.4).unwrap(), ["d0"]);
        assert_eq!(filter_by_topic(&m, &BTreeSet::from([0, 1]), 1.0 - 1e-12).unwrap(), ["d0", "d1"]);
        assert!(filter_by_topic(&m, &BTreeSet::new(), 0.4).unwrap().is_empty());
        assert!(filter_by_topic(&m, &BTreeSet::from([0]), 0.0).is_err());
    }

    proptest! {
        #[test]
        fn keyword_filter_monotone(extra in prop::sample::subsequence(vec!["a", "b", "c", "d", "e"], 0..5)) {
            let docs = [doc("1", "a x"), doc("2", "b y"), doc("3", "c"), doc("4", "z"), doc("5", "e d")];
            let base = KeywordSet::from_words(["a"]);
            let more = KeywordSet::from_words(extra.iter().copied().chain(["a"]));
            let small: BTreeSet<_> = keyword_filter(&docs, &base).iter().map(|d| d.article_id.clone()).collect();
            let big: BTreeSet<_> = keyword_filter(&docs, &more).iter().map(|d| d.article_id.clone()).collect();
            prop_assert!(small.is_subset(&big));
            prop_assert!(big.len() <= docs.len());
        }
    }
}
