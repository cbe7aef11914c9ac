use once_cell::sync::Lazy;

use super::gazetteer::key_of;
use super::patterns::{match_money, match_percent, match_temporal};
use super::{EntityLabel, EntitySpan, Gazetteer};
use crate::temporal::grammar::{MONTHS, WEEKDAYS};
use crate::text::{process_text, CharOffsets, ProcessedDoc, StopWords, Token};

/// A capitalized run ending in one of these is an organization.
pub const ORG_SUFFIXES: &[&str] = &[
    "party", "union", "sena", "morcha", "association", "samiti", "sangh", "sabha", "manch", "parishad",
    "dal", "congress", "front", "federation", "council", "committee", "forum", "league", "police",
    "department", "ministry", "board", "corporation", "university", "college", "organisation",
    "organization", "society", "trust", "group", "movement", "andolan", "coalition", "alliance",
];

/// Leading words stripped before testing a run for a person-name shape.
const TITLES: &[&str] = &[
    "mr", "mrs", "ms", "dr", "shri", "sri", "smt", "prof", "chief", "minister", "president", "secretary",
    "leader", "general", "governor", "deputy", "mla", "mp", "inspector", "superintendent", "commissioner",
    "collector", "spokesperson", "convener", "chairman", "activist",
];

const CONNECTORS: &[&str] = &["of", "for", "&"];

static STOPWORDS: Lazy<StopWords> = Lazy::new(StopWords::bundled);

#[derive(Debug, Clone, Copy)]
struct Candidate {
    label: EntityLabel,
    start: usize,
    end: usize,
}

fn is_cap_word(t: &Token) -> bool {
    t.is_capitalized() && t.surface.chars().any(char::is_alphabetic) && !t.is_punct()
}

fn is_title_case(t: &Token) -> bool {
    let mut chars = t.surface.chars();
    chars.next().is_some_and(char::is_uppercase) && chars.all(|c| c.is_lowercase() || c == '\'' || c == '-')
}

fn is_acronym(t: &Token) -> bool {
    let n = t.surface.chars().count();
    (2..=6).contains(&n)
        && t.surface.chars().all(|c| c.is_ascii_uppercase() || c.is_ascii_digit())
        && t.surface.chars().filter(char::is_ascii_uppercase).count() >= 2
}

fn is_calendar_word(t: &Token) -> bool {
    let w = t.surface.to_lowercase();
    MONTHS.contains(&w.as_str()) || WEEKDAYS.contains(&w.as_str())
}

fn gazetteer_candidates(tokens: &[Token], gazetteer: &Gazetteer, out: &mut Vec<Candidate>) {
    let max = gazetteer.max_tokens();
    for i in 0..tokens.len() {
        for n in (1..=max.min(tokens.len() - i)).rev() {
            let key = key_of(tokens[i..i + n].iter().map(|t| t.surface.as_str()));
            let Some(label) = gazetteer.lookup(&key) else { continue };
            // Single-word names only when capitalized ("modi" may be an ordinary word elsewhere).
            if n == 1 && label == EntityLabel::Person && !tokens[i].is_capitalized() {
                continue;
            }
            out.push(Candidate { label, start: i, end: i + n });
            break;
        }
    }
}

fn pattern_candidates(tokens: &[Token], out: &mut Vec<Candidate>) {
    let mut i = 0;
    while i < tokens.len() {
        if let Some((n, label)) = match_temporal(tokens, i) {
            out.push(Candidate { label, start: i, end: i + n });
            i += n;
        } else if let Some(n) = match_money(tokens, i) {
            out.push(Candidate { label: EntityLabel::Money, start: i, end: i + n });
            i += n;
        } else if let Some(n) = match_percent(tokens, i) {
            out.push(Candidate { label: EntityLabel::Percent, start: i, end: i + n });
            i += n;
        } else {
            i += 1;
        }
    }
}

/// Classifies a run of capitalized tokens `[start, end)` into zero or more candidates.
fn classify_run(tokens: &[Token], mut start: usize, end: usize, out: &mut Vec<Candidate>) {
    let lower = |i: usize| tokens[i].surface.to_lowercase();
    let strippable = |w: &str| (STOPWORDS.contains_lemma(w) && w != "all") || CONNECTORS.contains(&w);
    while start < end && strippable(&lower(start)) {
        start += 1;
    }
    if start >= end {
        return;
    }
    // Split after organization suffixes: "Delhi Police Commissioner X" → ORG + rest.
    if let Some(mut j) = (start..end).find(|&j| ORG_SUFFIXES.contains(&lower(j).as_str())) {
        // Stacked suffixes belong to one name: "Trade Union Congress".
        while j + 1 < end && ORG_SUFFIXES.contains(&lower(j + 1).as_str()) {
            j += 1;
        }
        // "Federation of India": a connector after the suffix continues the name.
        if j > start && j + 1 < end && CONNECTORS.contains(&lower(j + 1).as_str()) {
            out.push(Candidate { label: EntityLabel::Organization, start, end });
            return;
        }
        if j > start {
            out.push(Candidate { label: EntityLabel::Organization, start, end: j + 1 });
        }
        classify_run(tokens, j + 1, end, out);
        return;
    }
    // Without a suffix, connectors separate independent names.
    if let Some(c) = (start..end).find(|&j| CONNECTORS.contains(&lower(j).as_str())) {
        classify_run(tokens, start, c, out);
        classify_run(tokens, c + 1, end, out);
        return;
    }
    let mut s = start;
    while s < end && TITLES.contains(&lower(s).trim_end_matches('.')) {
        s += 1;
    }
    let n = end - s;
    if n == 1 && is_acronym(&tokens[s]) {
        out.push(Candidate { label: EntityLabel::Organization, start: s, end });
    } else if (2..=4).contains(&n) && tokens[s..end].iter().all(is_title_case) {
        out.push(Candidate { label: EntityLabel::Person, start: s, end });
    }
}

fn capitalization_candidates(tokens: &[Token], covered: &[bool], out: &mut Vec<Candidate>) {
    let usable = |i: usize| !covered[i] && is_cap_word(&tokens[i]) && !is_calendar_word(&tokens[i]);
    let mut i = 0;
    while i < tokens.len() {
        if !usable(i) {
            i += 1;
            continue;
        }
        let start = i;
        let mut end = i + 1;
        loop {
            if end < tokens.len() && usable(end) {
                end += 1;
            } else if end + 1 < tokens.len()
                && !covered[end]
                && CONNECTORS.contains(&tokens[end].surface.to_lowercase().as_str())
                && usable(end + 1)
            {
                end += 2;
            } else {
                break;
            }
        }
        classify_run(tokens, start, end, out);
        i = end;
    }
}

/// Longest candidates first, then leftmost; drops anything overlapping an accepted span.
fn resolve_overlaps(mut cands: Vec<Candidate>) -> Vec<Candidate> {
    cands.sort_by(|a, b| (b.end - b.start).cmp(&(a.end - a.start)).then(a.start.cmp(&b.start)));
    let mut accepted: Vec<Candidate> = Vec::new();
    for c in cands {
        if accepted.iter().all(|a| c.end <= a.start || a.end <= c.start) {
            accepted.push(c);
        }
    }
    accepted.sort_by_key(|c| c.start);
    accepted
}

/// Tags one sentence. Token offsets point into `text`.
pub fn tag_sentence(tokens: &[Token], text: &str, offsets: &CharOffsets, gazetteer: &Gazetteer) -> Vec<EntitySpan> {
    if tokens.is_empty() {
        return Vec::new();
    }
    let mut cands = Vec::new();
    gazetteer_candidates(tokens, gazetteer, &mut cands);
    let n_gazetteer = cands.len();
    pattern_candidates(tokens, &mut cands);
    // Capitalized runs may extend a gazetteer name ("Delhi Police") but not a date.
    let mut covered = vec![false; tokens.len()];
    for c in &cands[n_gazetteer..] {
        covered[c.start..c.end].iter_mut().for_each(|x| *x = true);
    }
    capitalization_candidates(tokens, &covered, &mut cands);
    resolve_overlaps(cands)
        .into_iter()
        .map(|c| {
            let (start, end) = (tokens[c.start].char_start, tokens[c.end - 1].char_end);
            EntitySpan {
                label: c.label,
                char_start: start,
                char_end: end,
                surface: offsets.slice(text, start, end).unwrap_or_default().to_string(),
                sentence_index: tokens[c.start].sentence_index,
            }
        })
        .collect()
}

/// Tags every sentence of a preprocessed document, spans sorted by offset.
pub fn tag_entities(doc: &ProcessedDoc, gazetteer: &Gazetteer) -> Vec<EntitySpan> {
    let offsets = CharOffsets::new(&doc.text);
    doc.sentences
        .iter()
        .flat_map(|s| tag_sentence(s, &doc.text, &offsets, gazetteer))
        .collect()
}

/// Preprocesses and tags raw text (used for titles).
pub fn tag_text(text: &str, gazetteer: &Gazetteer) -> (ProcessedDoc, Vec<EntitySpan>) {
    let doc = process_text("", text, &STOPWORDS);
    let spans = tag_entities(&doc, gazetteer);
    (doc, spans)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tags(text: &str) -> Vec<(EntityLabel, String)> {
        tag_text(text, &Gazetteer::bundled()).1.into_iter().map(|s| (s.label, s.surface)).collect()
    }

    fn has(text: &str, label: EntityLabel, surface: &str) -> bool {
        tags(text).contains(&(label, surface.to_string()))
    }

    #[test]
    fn documented_examples() {
        assert_eq!(tags("Narendra Modi called a meeting"), [(EntityLabel::Person, "Narendra Modi".to_string())]);
        assert!(has("They will protest on february 16.", EntityLabel::Date, "february 16"));
        assert_eq!(tags("The JPP called for Jharkhand bandh."), [
            (EntityLabel::Organization, "JPP".to_string()),
            (EntityLabel::Location, "Jharkhand".to_string()),
        ]);
        assert!(tags("").is_empty());
    }

    #[test]
    fn capitalization_heuristics() {
        assert!(has("Members of the Adivasi Yuva Morcha gathered.", EntityLabel::Organization, "Adivasi Yuva Morcha"));
        assert!(has("He met Suresh Mahto in the evening.", EntityLabel::Person, "Suresh Mahto"));
        assert!(has("Convener Ramesh Oraon said so.", EntityLabel::Person, "Ramesh Oraon"));
        assert!(has("Leaders of the AJSU and the XYZ met.", EntityLabel::Organization, "XYZ"));
        // A lone capitalized word is not enough.
        assert!(tags("Protesters gathered near the office.").is_empty());
        assert!(tags("March begins soon.").is_empty());
    }

    #[test]
    fn organization_name_shapes() {
        assert!(has("The All India Transport Union announced a strike.", EntityLabel::Organization, "All India Transport Union"));
        assert!(has("The Students Federation of India plans a rally.", EntityLabel::Organization, "Students Federation of India"));
        assert!(has("Delhi Police Commissioner Amulya Patnaik spoke.", EntityLabel::Person, "Amulya Patnaik"));
        assert!(has("In Patna, workers gathered.", EntityLabel::Location, "Patna"));
        assert!(has("The All India Trade Union Congress said so.", EntityLabel::Organization, "All India Trade Union Congress"));
    }

    #[test]
    fn dates_money_percent() {
        let t = tags("On Thursday, 10 am, workers demanded Rs 500 and a 12% raise next week.");
        assert!(t.contains(&(EntityLabel::Date, "Thursday".into())));
        assert!(t.contains(&(EntityLabel::Time, "10 am".into())));
        assert!(t.contains(&(EntityLabel::Money, "Rs 500".into())));
        assert!(t.contains(&(EntityLabel::Percent, "12%".into())));
        assert!(t.contains(&(EntityLabel::Date, "next week".into())));
    }

    #[test]
    fn spans_sorted_and_disjoint() {
        let (doc, spans) = tag_text(
            "Jharkhand Mukti Morcha leader Hemant Soren announced a bandh in Ranchi on February 16, 2017. \
             The Delhi Police said the AAP rally will go on.",
            &Gazetteer::bundled(),
        );
        assert!(spans.windows(2).all(|w| w[0].char_end <= w[1].char_start));
        let offsets = CharOffsets::new(&doc.text);
        for s in &spans {
            assert_eq!(offsets.slice(&doc.text, s.char_start, s.char_end), Some(s.surface.as_str()));
        }
        let labels: Vec<_> = spans.iter().map(|s| (s.label, s.surface.as_str())).collect();
        assert!(labels.contains(&(EntityLabel::Organization, "Jharkhand Mukti Morcha")));
        assert!(labels.contains(&(EntityLabel::Person, "Hemant Soren")));
        assert!(labels.contains(&(EntityLabel::Date, "February 16, 2017")));
        assert!(labels.contains(&(EntityLabel::Organization, "Delhi Police")));
        assert!(labels.contains(&(EntityLabel::Organization, "AAP")));
        assert_eq!(spans.last().unwrap().sentence_index, 1);
    }
}
