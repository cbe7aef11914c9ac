//! Shallow preprocessing: tokens, lemmas, sentences and the modeling bag.

mod lemma;
mod sentence;
mod token;

use std::collections::HashSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::corpus::Article;
use crate::error::{Error, Result};

pub use lemma::lemmatize;
pub use sentence::split_sentences;
pub use token::{char_slice, is_punct, tokenize, CharOffsets, Token};

const BUNDLED_STOPWORDS: &str = include_str!("../../data/stopwords.txt");

/// Stop-word set held in lemma space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StopWords(HashSet<String>);

impl StopWords {
    pub fn from_words<'a>(words: impl IntoIterator<Item = &'a str>) -> Self {
        StopWords(
            words
                .into_iter()
                .map(str::trim)
                .filter(|w| !w.is_empty() && !w.starts_with('#'))
                .map(lemmatize)
                .collect(),
        )
    }

    pub fn bundled() -> Self {
        Self::from_words(BUNDLED_STOPWORDS.lines())
    }

    /// Reads one lowercase word per line.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(Self::from_words(text.lines()))
    }

    pub fn contains_lemma(&self, lemma: &str) -> bool {
        self.0.contains(lemma)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl Default for StopWords {
    fn default() -> Self {
        Self::bundled()
    }
}

/// An article body split into sentences, plus the filtered lemma bag used by
/// the embedding and topic models.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProcessedDoc {
    pub article_id: String,
    /// The text the token offsets point into.
    pub text: String,
    pub sentences: Vec<Vec<Token>>,
    pub bag_tokens: Vec<String>,
}

impl ProcessedDoc {
    pub fn tokens(&self) -> impl Iterator<Item = &Token> {
        self.sentences.iter().flatten()
    }

    pub fn is_empty(&self) -> bool {
        self.sentences.is_empty()
    }
}

/// Tokenizes, lemmatizes and sentence-splits `text`; bag drops stop words and punctuation.
pub fn process_text(article_id: &str, text: &str, stopwords: &StopWords) -> ProcessedDoc {
    let sentences = split_sentences(text, tokenize(text));
    let bag_tokens = sentences
        .iter()
        .flatten()
        .filter(|t| !t.is_punct() && !stopwords.contains_lemma(&t.lemma))
        .map(|t| t.lemma.clone())
        .collect();
    ProcessedDoc {
        article_id: article_id.to_string(),
        text: text.to_string(),
        sentences,
        bag_tokens,
    }
}

/// Preprocesses an article body. Lemmatization happens before stop-word removal.
pub fn preprocess_document(article: &Article, stopwords: &StopWords) -> ProcessedDoc {
    process_text(&article.id, &article.body, stopwords)
}

#[cfg(test)]
mod tests {
    use super::*;
    use chrono::{NaiveDate, TimeZone, Utc};
    use proptest::prelude::*;

    fn article(body: &str) -> Article {
        Article::new(
            "https://e.com/a",
            "s",
            "t",
            body,
            NaiveDate::from_ymd_opt(2017, 1, 16).unwrap(),
            Utc.with_ymd_and_hms(2017, 1, 16, 0, 0, 0).unwrap(),
        )
    }

    #[test]
    fn all_stopwords() {
        let doc = preprocess_document(&article("the of and"), &StopWords::bundled());
        assert!(doc.bag_tokens.is_empty());
        assert_eq!(doc.sentences.len(), 1);
    }

    #[test]
    fn farmers_are_protesting() {
        let doc = preprocess_document(&article("Farmers are protesting!"), &StopWords::bundled());
        assert_eq!(doc.bag_tokens, ["farmer", "protest"]);
        assert_eq!(doc.sentences[0].len(), 4);
    }

    #[test]
    fn empty_body() {
        let doc = preprocess_document(&article(""), &StopWords::bundled());
        assert!(doc.sentences.is_empty());
        assert!(doc.bag_tokens.is_empty());
    }

    #[test]
    fn bundled_list_size() {
        let sw = StopWords::bundled();
        assert!(sw.len() > 140, "{}", sw.len());
        assert!(sw.contains_lemma("the"));
        assert!(!sw.contains_lemma("protest"));
    }

    proptest! {
        #[test]
        fn bag_is_subset_of_lemmas_and_excludes_stopwords(body in "[A-Za-z ,.!?']{0,120}") {
            let sw = StopWords::bundled();
            let doc = process_text("x", &body, &sw);
            let lemmas: HashSet<&str> = doc.tokens().map(|t| t.lemma.as_str()).collect();
            for b in &doc.bag_tokens {
                prop_assert!(lemmas.contains(b.as_str()));
                prop_assert!(!sw.contains_lemma(b));
                prop_assert!(!b.chars().all(is_punct));
            }
            for (i, s) in doc.sentences.iter().enumerate() {
                prop_assert!(!s.is_empty());
                prop_assert!(s.iter().all(|t| t.sentence_index == i));
            }
        }
    }
}
