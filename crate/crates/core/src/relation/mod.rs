//! Relation triplets `<part1, verb phrase, part2>` split around verb pivots.

mod lexicon;

use serde::{Deserialize, Serialize};

pub use lexicon::{VerbLexicon, PARTICLES};

use crate::ner::{EntityLabel, EntitySpan};
use crate::text::{CharOffsets, ProcessedDoc, Token};

/// Words before a verb-lexicon hit that make it a noun ("a protest", "in protest").
const NOUN_MARKERS: &[&str] = &[
    "a", "an", "the", "this", "that", "these", "those", "their", "his", "her", "its", "our", "my", "your",
    "any", "every", "no", "some", "such", "another", "each", "of", "in", "at", "during", "after", "before",
    "against", "about", "into", "from", "with", "without", "over", "under", "by", "mass", "massive",
    "huge", "big", "large", "peaceful", "indefinite", "day-long", "statewide", "nationwide", "hunger",
    "general", "silent", "candle", "protest", "further",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Origin {
    #[default]
    Body,
    Title,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Part {
    pub text: String,
    pub char_start: usize,
    pub char_end: usize,
    pub entities: Vec<EntitySpan>,
}

impl Part {
    fn empty(at: usize) -> Self {
        Part { text: String::new(), char_start: at, char_end: at, entities: Vec::new() }
    }

    pub fn has_label(&self, label: EntityLabel) -> bool {
        self.entities.iter().any(|e| e.label == label)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerbPhrase {
    pub text: String,
    pub char_start: usize,
    pub char_end: usize,
    /// Base form of the last main verb (or auxiliary when there is none). Empty for title placeholders.
    pub head_lemma: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub particle: Option<String>,
}

impl VerbPhrase {
    /// `head` or `head particle`.
    pub fn key(&self) -> String {
        match &self.particle {
            Some(p) => format!("{} {}", self.head_lemma, p),
            None => self.head_lemma.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationTriplet {
    pub doc_id: String,
    pub doc_position: usize,
    pub sentence_index: usize,
    pub part1: Part,
    pub verb: VerbPhrase,
    pub part2: Part,
    #[serde(default)]
    pub origin: Origin,
}

impl RelationTriplet {
    pub fn entities(&self) -> impl Iterator<Item = &EntitySpan> {
        self.part1.entities.iter().chain(&self.part2.entities)
    }

    pub fn has_entities(&self) -> bool {
        self.entities().next().is_some()
    }
}

/// Verb phrase located by token indices `[start, end)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerbSpan {
    pub start: usize,
    pub end: usize,
    pub head_lemma: String,
    pub particle: Option<String>,
}

#[derive(Clone, Copy, PartialEq)]
enum Kind {
    Main,
    Aux,
    Other,
}

fn classify(tokens: &[Token], i: usize, masked: &[bool], lexicon: &VerbLexicon) -> (Kind, Option<String>) {
    let t = &tokens[i];
    if masked[i] || t.is_punct() {
        return (Kind::Other, None);
    }
    if let Some(b) = lexicon.auxiliary_base(&t.surface) {
        return (Kind::Aux, Some(b.to_string()));
    }
    let Some(base) = lexicon.verb_base(&t.surface) else { return (Kind::Other, None) };
    let prev = (i > 0).then(|| tokens[i - 1].surface.to_lowercase());
    // Past forms after a marker stay verbs: "the protest ended".
    let nominal_shape = lexicon.is_base_form(&t.surface) || t.surface.to_lowercase().ends_with("ing");
    if nominal_shape && prev.as_deref().is_some_and(|p| NOUN_MARKERS.contains(&p)) {
        return (Kind::Other, None);
    }
    // A bare base form opening the sentence reads as a noun ("Protest erupted ...").
    if i == 0 && lexicon.is_base_form(&t.surface) {
        return (Kind::Other, None);
    }
    (Kind::Main, Some(base.to_string()))
}

/// Verb phrases of one sentence, left to right. `masked` marks tokens inside entities.
pub fn find_verb_phrases(tokens: &[Token], masked: &[bool], lexicon: &VerbLexicon) -> Vec<VerbSpan> {
    let kinds: Vec<(Kind, Option<String>)> = (0..tokens.len()).map(|i| classify(tokens, i, masked, lexicon)).collect();
    let is_verb = |i: usize| i < tokens.len() && kinds[i].0 != Kind::Other;
    let mut out = Vec::new();
    let mut i = 0;
    while i < tokens.len() {
        if !is_verb(i) {
            i += 1;
            continue;
        }
        let start = i;
        let mut end = i + 1;
        loop {
            if is_verb(end) {
                end += 1;
                continue;
            }
            // "plan to stage", "will also hold": inner words bridge two verbs.
            let mut j = end;
            while j < tokens.len() && !masked[j] && VerbLexicon::is_inner(&tokens[j].surface) {
                j += 1;
            }
            if j > end && is_verb(j) {
                end = j + 1;
                continue;
            }
            break;
        }
        let head = (start..end)
            .rev()
            .find(|&k| kinds[k].0 == Kind::Main)
            .or_else(|| (start..end).rev().find(|&k| kinds[k].0 == Kind::Aux))
            .expect("run holds a verb");
        let mut particle = None;
        if kinds[head].0 == Kind::Main && end < tokens.len() && !masked[end] && VerbLexicon::is_particle(&tokens[end].surface) {
            particle = Some(tokens[end].surface.to_lowercase());
            end += 1;
        }
        let has_particle = particle.is_some();
        out.push(VerbSpan {
            start,
            end,
            head_lemma: kinds[head].1.clone().unwrap_or_default(),
            particle,
        });
        i = end;
        // A bare base form right after a particle is its object: "go on strike", "call off protest".
        if has_particle && is_verb(i) && kinds[i].0 == Kind::Main && lexicon.is_base_form(&tokens[i].surface) {
            i += 1;
        }
    }
    out
}

fn is_clause_break(t: &Token) -> bool {
    matches!(t.surface.as_str(), "," | ";")
}

/// Tokens `[lo, hi)` trimmed of edge punctuation, as a part with its entities.
fn make_part(tokens: &[Token], mut lo: usize, mut hi: usize, text: &str, offsets: &CharOffsets, spans: &[EntitySpan], at: usize) -> Part {
    while lo < hi && tokens[lo].is_punct() {
        lo += 1;
    }
    while hi > lo && (tokens[hi - 1].is_punct() || VerbLexicon::is_inner(&tokens[hi - 1].surface)) {
        hi -= 1;
    }
    if lo >= hi {
        return Part::empty(at);
    }
    let (s, e) = (tokens[lo].char_start, tokens[hi - 1].char_end);
    Part {
        text: offsets.slice(text, s, e).unwrap_or_default().to_string(),
        char_start: s,
        char_end: e,
        entities: spans.iter().filter(|x| x.within(s, e)).cloned().collect(),
    }
}

/// Triplets of one sentence; `doc_position` is left at 0.
pub fn extract_triplets(
    doc_id: &str,
    tokens: &[Token],
    spans: &[EntitySpan],
    text: &str,
    offsets: &CharOffsets,
    lexicon: &VerbLexicon,
) -> Vec<RelationTriplet> {
    let entity_of = |i: usize| {
        spans
            .iter()
            .position(|s| s.char_start <= tokens[i].char_start && tokens[i].char_end <= s.char_end)
    };
    let owner: Vec<Option<usize>> = (0..tokens.len()).map(entity_of).collect();
    let masked: Vec<bool> = owner.iter().map(Option::is_some).collect();
    // A comma between two temporal entities ("Thursday, February 16") does not break a clause.
    let breaks: Vec<bool> = (0..tokens.len())
        .map(|i| {
            if masked[i] || !is_clause_break(&tokens[i]) {
                return false;
            }
            let temporal = |j: Option<usize>| {
                j.and_then(|j| owner[j]).is_some_and(|e| matches!(spans[e].label, EntityLabel::Date | EntityLabel::Time))
            };
            !(temporal(i.checked_sub(1)) && temporal(Some(i + 1).filter(|&j| j < tokens.len())))
        })
        .collect();

    let phrases = find_verb_phrases(tokens, &masked, lexicon);
    let mut out = Vec::new();
    for (k, vp) in phrases.iter().enumerate() {
        let left_bound = if k == 0 { 0 } else { phrases[k - 1].end };
        let right_bound = phrases.get(k + 1).map_or(tokens.len(), |n| n.start);
        let lo = (left_bound..vp.start).rev().find(|&i| breaks[i]).map_or(left_bound, |i| i + 1);
        let hi = (vp.end..right_bound).find(|&i| breaks[i]).unwrap_or(right_bound);
        let (vs, ve) = (tokens[vp.start].char_start, tokens[vp.end - 1].char_end);
        let part1 = make_part(tokens, lo, vp.start, text, offsets, spans, vs);
        let part2 = make_part(tokens, vp.end, hi, text, offsets, spans, ve);
        if part1.entities.is_empty() && part2.entities.is_empty() {
            continue;
        }
        out.push(RelationTriplet {
            doc_id: doc_id.to_string(),
            doc_position: 0,
            sentence_index: tokens[vp.start].sentence_index,
            part1,
            verb: VerbPhrase {
                text: offsets.slice(text, vs, ve).unwrap_or_default().to_string(),
                char_start: vs,
                char_end: ve,
                head_lemma: vp.head_lemma.clone(),
                particle: vp.particle.clone(),
            },
            part2,
            origin: Origin::Body,
        });
    }
    out
}

/// All triplets of a document in sentence order, numbered from 0.
pub fn document_relations(doc: &ProcessedDoc, spans: &[EntitySpan], lexicon: &VerbLexicon) -> Vec<RelationTriplet> {
    let offsets = CharOffsets::new(&doc.text);
    let mut out: Vec<RelationTriplet> = Vec::new();
    for (s, tokens) in doc.sentences.iter().enumerate() {
        let sentence_spans: Vec<EntitySpan> = spans.iter().filter(|x| x.sentence_index == s).cloned().collect();
        out.extend(extract_triplets(&doc.article_id, tokens, &sentence_spans, &doc.text, &offsets, lexicon));
    }
    for (i, t) in out.iter_mut().enumerate() {
        t.doc_position = i;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ner::{tag_entities, Gazetteer};
    use crate::text::{process_text, StopWords};

    fn run(text: &str) -> Vec<RelationTriplet> {
        let doc = process_text("d", text, &StopWords::bundled());
        let spans = tag_entities(&doc, &Gazetteer::bundled());
        document_relations(&doc, &spans, &VerbLexicon::bundled())
    }

    fn phrases(text: &str) -> Vec<(String, String)> {
        let doc = process_text("d", text, &StopWords::bundled());
        let toks = &doc.sentences[0];
        let masked = vec![false; toks.len()];
        find_verb_phrases(toks, &masked, &VerbLexicon::bundled())
            .into_iter()
            .map(|v| {
                let surf: Vec<_> = toks[v.start..v.end].iter().map(|t| t.surface.as_str()).collect();
                (surf.join(" "), v.head_lemma)
            })
            .collect()
    }

    fn summary(t: &RelationTriplet) -> (Vec<String>, String, Vec<String>) {
        let ents = |p: &Part| p.entities.iter().map(|e| format!("{}:{}", e.label, e.surface)).collect();
        (ents(&t.part1), t.verb.key(), ents(&t.part2))
    }

    #[test]
    fn verb_phrase_detection() {
        assert_eq!(phrases("JPP called for Jharkhand bandh"), [("called for".into(), "call".into())]);
        assert_eq!(phrases("Unions will stage a protest"), [("will stage".into(), "stage".into())]);
        assert!(phrases("Heavy traffic near the market").is_empty());
        assert_eq!(phrases("They plan to observe a bandh"), [("plan to observe".into(), "observe".into())]);
        assert_eq!(phrases("Narendra Modi called a meeting"), [("called".into(), "call".into())]);
        assert_eq!(phrases("Employees will go on strike on Tuesday"), [("will go on".into(), "go".into())]);
    }

    #[test]
    fn two_relation_example_triplets() {
        let t = run("JPP called on February 16.");
        assert_eq!(t.len(), 1);
        assert_eq!(summary(&t[0]), (vec!["ORGANIZATION:JPP".into()], "call on".into(), vec!["DATE:February 16".into()]));
        let t = run("JPP called for Jharkhand bandh.");
        assert_eq!(summary(&t[0]), (vec!["ORGANIZATION:JPP".into()], "call for".into(), vec!["LOCATION:Jharkhand".into()]));
        assert_eq!(t[0].part2.text, "Jharkhand bandh");
    }

    #[test]
    fn no_entities_no_triplet() {
        assert!(run("Workers will protest against the decision.").is_empty());
        assert!(run("").is_empty());
    }

    #[test]
    fn comma_truncates_parts() {
        let t = run("In Ranchi, the JMM announced a rally on Thursday, February 16, sources said.");
        let ann = t.iter().find(|t| t.verb.head_lemma == "announce").unwrap();
        assert_eq!(ann.part1.text, "the JMM");
        assert_eq!(ann.part2.text, "a rally on Thursday, February 16");
        assert!(ann.part2.has_label(EntityLabel::Date));
    }

    #[test]
    fn positions_and_offsets() {
        let t = run("The BJP will hold a rally in Patna. Police said Congress workers blocked roads in Ranchi.");
        assert!(t.len() >= 2);
        for (i, x) in t.iter().enumerate() {
            assert_eq!(x.doc_position, i);
            assert!(x.part1.char_end <= x.verb.char_start);
            assert!(x.verb.char_start <= x.verb.char_end && x.verb.char_end <= x.part2.char_start);
        }
        assert_eq!(t[0].sentence_index, 0);
        assert_eq!(t.last().unwrap().sentence_index, 1);
    }
}
