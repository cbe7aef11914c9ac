use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ner::{normalize_surface, EntityLabel};
use crate::related::RelatedEntitySet;
use crate::relation::{Origin, RelationTriplet};

/// One annotator file line: an item and its 0/1 scores.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldRecord {
    pub item_id: String,
    pub scores: Vec<u8>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldLabel {
    pub item_id: String,
    pub annotator_scores: Vec<u8>,
    pub final_label: bool,
}

impl GoldLabel {
    /// Relevant when the mean score is at least one half.
    pub fn new(item_id: impl Into<String>, scores: Vec<u8>) -> Self {
        let ones = scores.iter().filter(|&&s| s != 0).count();
        GoldLabel {
            item_id: item_id.into(),
            final_label: !scores.is_empty() && 2 * ones >= scores.len(),
            annotator_scores: scores,
        }
    }
}

/// Merges annotator records per item (records for the same item from several
/// files concatenate) and applies the mean-threshold rule. Items with no
/// scores are an error listing their ids.
pub fn aggregate_gold<I>(records: I) -> Result<Vec<GoldLabel>>
where
    I: IntoIterator<Item = GoldRecord>,
{
    let mut by_item: BTreeMap<String, Vec<u8>> = BTreeMap::new();
    for r in records {
        if let Some(bad) = r.scores.iter().find(|&&s| s > 1) {
            return Err(Error::InvalidRecord { context: r.item_id, message: format!("score {bad} is not 0 or 1") });
        }
        by_item.entry(r.item_id).or_default().extend(r.scores);
    }
    let missing: Vec<String> = by_item.iter().filter(|(_, s)| s.is_empty()).map(|(id, _)| id.clone()).collect();
    if !missing.is_empty() {
        return Err(Error::MissingGold(missing));
    }
    Ok(by_item.into_iter().map(|(id, scores)| GoldLabel::new(id, scores)).collect())
}

/// Reads and aggregates every annotator file.
pub fn load_gold(paths: &[std::path::PathBuf]) -> Result<Vec<GoldLabel>> {
    let mut records = Vec::new();
    for p in paths {
        records.extend(crate::jsonl::read_jsonl::<GoldRecord>(p)?);
    }
    aggregate_gold(records)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub true_positives: usize,
    pub false_positives: usize,
    pub false_negatives: usize,
    pub true_negatives: usize,
    pub precision: f64,
    pub recall: f64,
    pub f_measure: f64,
    pub accuracy: f64,
}

fn ratio(a: usize, b: usize) -> f64 {
    if b == 0 {
        0.0
    } else {
        a as f64 / b as f64
    }
}

impl EvalReport {
    pub fn from_counts(tp: usize, fp: usize, fn_: usize, tn: usize) -> Self {
        let precision = ratio(tp, tp + fp);
        let recall = ratio(tp, tp + fn_);
        let f_measure = if precision + recall > 0.0 { 2.0 * precision * recall / (precision + recall) } else { 0.0 };
        EvalReport {
            true_positives: tp,
            false_positives: fp,
            false_negatives: fn_,
            true_negatives: tn,
            precision,
            recall,
            f_measure,
            accuracy: ratio(tp + tn, tp + fp + fn_ + tn),
        }
    }

    pub fn total(&self) -> usize {
        self.true_positives + self.false_positives + self.false_negatives + self.true_negatives
    }
}

/// Confusion-matrix metrics of a predicted-relevant set over `universe`.
pub fn evaluate_binary(predicted: &BTreeSet<String>, gold: &[GoldLabel], universe: &BTreeSet<String>) -> Result<EvalReport> {
    let labels: BTreeMap<&str, bool> = gold.iter().map(|g| (g.item_id.as_str(), g.final_label)).collect();
    let missing: Vec<String> = universe.iter().filter(|id| !labels.contains_key(id.as_str())).cloned().collect();
    if !missing.is_empty() {
        return Err(Error::MissingGold(missing));
    }
    let outside: Vec<String> = predicted.difference(universe).cloned().collect();
    if !outside.is_empty() {
        return Err(Error::KeyMismatch(outside));
    }
    let (mut tp, mut fp, mut fn_, mut tn) = (0, 0, 0, 0);
    for id in universe {
        match (predicted.contains(id), labels[id.as_str()]) {
            (true, true) => tp += 1,
            (true, false) => fp += 1,
            (false, true) => fn_ += 1,
            (false, false) => tn += 1,
        }
    }
    Ok(EvalReport::from_counts(tp, fp, fn_, tn))
}

/// Entity of a judged triplet, compared on label and normalized surface.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct JudgedEntity {
    pub label: EntityLabel,
    pub surface: String,
}

/// A triplet with a relevance judgement, from the system or from annotators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JudgedTriplet {
    pub doc_id: String,
    pub doc_position: usize,
    pub relevant: bool,
    #[serde(default)]
    pub entities: Vec<JudgedEntity>,
}

impl JudgedTriplet {
    fn entity_key(&self) -> BTreeSet<(EntityLabel, String)> {
        self.entities.iter().map(|e| (e.label, normalize_surface(&e.surface))).collect()
    }
}

#[derive(Deserialize)]
struct PartEntities {
    #[serde(default)]
    entities: Vec<JudgedEntity>,
}

#[derive(Deserialize)]
struct GoldTripletLine {
    doc_id: String,
    doc_position: usize,
    relevant: bool,
    entities: Option<Vec<JudgedEntity>>,
    part1: Option<PartEntities>,
    part2: Option<PartEntities>,
}

/// Parses one triplet-gold JSON line. The related entities come from an
/// `entities` list when present, otherwise from the part1/part2 entity lists.
pub fn parse_gold_triplet(line: &str) -> Result<JudgedTriplet> {
    let g: GoldTripletLine = serde_json::from_str(line).map_err(|e| Error::json("triplet gold", e))?;
    let entities = g.entities.unwrap_or_else(|| {
        g.part1.into_iter().chain(g.part2).flat_map(|p| p.entities).collect()
    });
    Ok(JudgedTriplet { doc_id: g.doc_id, doc_position: g.doc_position, relevant: g.relevant, entities })
}

pub fn load_gold_triplets(path: &std::path::Path) -> Result<Vec<JudgedTriplet>> {
    crate::jsonl::read_lines_with(path, parse_gold_triplet)
}

/// System judgement of body triplets: relevant iff the triplet holds at least
/// one related entity, and those entities are the ones compared.
pub fn judge_triplets(triplets: &[RelationTriplet], related: &RelatedEntitySet) -> Vec<JudgedTriplet> {
    let related_keys: BTreeSet<(EntityLabel, String)> = EntityLabel::ALL
        .iter()
        .filter_map(|&l| related.list(l))
        .flatten()
        .map(|e| (e.span.label, normalize_surface(&e.span.surface)))
        .collect();
    triplets
        .iter()
        .filter(|t| t.origin == Origin::Body)
        .map(|t| {
            let mut entities: Vec<JudgedEntity> = t
                .entities()
                .filter(|e| related_keys.contains(&(e.label, normalize_surface(&e.surface))))
                .map(|e| JudgedEntity { label: e.label, surface: e.surface.clone() })
                .collect();
            entities.dedup();
            JudgedTriplet {
                doc_id: t.doc_id.clone(),
                doc_position: t.doc_position,
                relevant: !entities.is_empty(),
                entities,
            }
        })
        .collect()
}

/// Scores system triplet judgements against gold, keyed by `(doc_id, doc_position)`.
///
/// A prediction is a true positive when both sides call the triplet relevant
/// and the entity sets agree; relevant on both sides with different entities
/// is a false positive. Gold triplets without a prediction count as predicted
/// irrelevant. Accuracy is over all gold triplets.
pub fn evaluate_relations(predicted: &[JudgedTriplet], gold: &[JudgedTriplet]) -> Result<EvalReport> {
    let key = |t: &JudgedTriplet| (t.doc_id.clone(), t.doc_position);
    let gold_map: BTreeMap<(String, usize), &JudgedTriplet> = gold.iter().map(|g| (key(g), g)).collect();
    let pred_map: BTreeMap<(String, usize), &JudgedTriplet> = predicted.iter().map(|p| (key(p), p)).collect();
    let unknown: Vec<String> = pred_map
        .keys()
        .filter(|k| !gold_map.contains_key(*k))
        .map(|(d, p)| format!("{d}#{p}"))
        .collect();
    if !unknown.is_empty() {
        return Err(Error::KeyMismatch(unknown));
    }
    let (mut tp, mut fp, mut fn_, mut tn) = (0, 0, 0, 0);
    for (k, g) in &gold_map {
        let p = pred_map.get(k);
        let said_relevant = p.is_some_and(|p| p.relevant);
        match (said_relevant, g.relevant) {
            (true, true) if p.is_some_and(|p| p.entity_key() == g.entity_key()) => tp += 1,
            (true, _) => fp += 1,
            (false, true) => fn_ += 1,
            (false, false) => tn += 1,
        }
    }
    Ok(EvalReport::from_counts(tp, fp, fn_, tn))
}
