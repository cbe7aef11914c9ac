#![allow(dead_code)]

use std::path::PathBuf;

use serde::Deserialize;
use unrest_core::ner::{tag_entities, EntityLabel, Gazetteer};
use unrest_core::related::{default_patterns, extract_related, extract_title_entities, RelatedEntitySet};
use unrest_core::relation::{document_relations, VerbLexicon};
use unrest_core::text::{process_text, StopWords};

pub fn fixture(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(rel)
}

/// Body and title through tagging, relations and the default trigger patterns.
pub fn related_for(doc_id: &str, title: &str, body: &str, window: usize) -> RelatedEntitySet {
    let doc = process_text(doc_id, body, &StopWords::bundled());
    let gazetteer = Gazetteer::bundled();
    let lexicon = VerbLexicon::bundled();
    let spans = tag_entities(&doc, &gazetteer);
    let body_triplets = document_relations(&doc, &spans, &lexicon);
    let title_triplets = extract_title_entities(doc_id, title, &gazetteer, &lexicon);
    extract_related(&body_triplets, &title_triplets, &default_patterns(), window)
}

#[derive(Debug, Deserialize)]
pub struct RelatedArticle {
    pub doc_id: String,
    pub published_at: String,
    pub title: String,
    pub body: String,
}

#[derive(Debug, Deserialize, PartialEq, Eq)]
pub struct ExpectedSets {
    pub doc_id: String,
    pub persons: Vec<String>,
    pub organizations: Vec<String>,
    pub locations: Vec<String>,
    pub dates: Vec<String>,
}

impl ExpectedSets {
    pub fn of(set: &RelatedEntitySet, doc_id: &str) -> Self {
        let own = |l| set.surfaces(l).into_iter().map(String::from).collect();
        ExpectedSets {
            doc_id: doc_id.to_string(),
            persons: own(EntityLabel::Person),
            organizations: own(EntityLabel::Organization),
            locations: own(EntityLabel::Location),
            dates: own(EntityLabel::Date),
        }
    }
}

fn read_lines<T: for<'de> Deserialize<'de>>(rel: &str) -> Vec<T> {
    std::fs::read_to_string(fixture(rel))
        .unwrap()
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

/// `(expected, actual)` per document of the 20-article fixture at window 2.
pub fn related20() -> Vec<(ExpectedSets, ExpectedSets)> {
    let articles: Vec<RelatedArticle> = read_lines("related20/articles.jsonl");
    let expected: Vec<ExpectedSets> = read_lines("related20/expected.jsonl");
    assert_eq!(articles.len(), expected.len());
    articles
        .iter()
        .zip(expected)
        .map(|(a, e)| {
            assert_eq!(a.doc_id, e.doc_id);
            let set = related_for(&a.doc_id, &a.title, &a.body, 2);
            (e, ExpectedSets::of(&set, &a.doc_id))
        })
        .collect()
}
