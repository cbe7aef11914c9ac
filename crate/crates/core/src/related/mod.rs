//! Window-based extraction of the entities actually involved in an event.

mod patterns;

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

pub use patterns::{default_patterns, load_patterns, matches, parse_patterns, Scope, TriggerPattern};

use crate::ner::{normalize_surface, tag_text, EntityLabel, EntitySpan, Gazetteer};
use crate::relation::{document_relations, Origin, Part, RelationTriplet, VerbPhrase, VerbLexicon};
use crate::temporal::merge_date_spans_at;

pub const DEFAULT_WINDOW: usize = 2;

/// An entity kept by the extractor, with where it came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelatedEntity {
    pub span: EntitySpan,
    pub origin: Origin,
    /// Position of the triplet the entity was taken from.
    pub source_position: usize,
    /// Position of the triplet whose pattern match opened the window.
    pub fired_by: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelatedEntitySet {
    pub doc_id: String,
    pub persons: Vec<RelatedEntity>,
    pub organizations: Vec<RelatedEntity>,
    pub locations: Vec<RelatedEntity>,
    pub dates: Vec<RelatedEntity>,
    /// Body triplet positions whose pattern matched.
    pub matched_relations: Vec<usize>,
    /// Title triplet positions whose pattern matched.
    #[serde(default)]
    pub matched_title_relations: Vec<usize>,
    /// Every pattern hit, body then title.
    #[serde(default)]
    pub firings: Vec<Firing>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Firing {
    pub origin: Origin,
    pub position: usize,
    pub pattern: String,
}

impl RelatedEntitySet {
    pub fn is_empty(&self) -> bool {
        self.persons.is_empty() && self.organizations.is_empty() && self.locations.is_empty() && self.dates.is_empty()
    }

    pub fn list(&self, label: EntityLabel) -> Option<&[RelatedEntity]> {
        match label {
            EntityLabel::Person => Some(&self.persons),
            EntityLabel::Organization => Some(&self.organizations),
            EntityLabel::Location => Some(&self.locations),
            EntityLabel::Date => Some(&self.dates),
            _ => None,
        }
    }

    /// Surfaces of one class in order.
    pub fn surfaces(&self, label: EntityLabel) -> Vec<&str> {
        self.list(label)
            .unwrap_or_default()
            .iter()
            .map(|e| e.span.surface.as_str())
            .collect()
    }

    fn list_mut(&mut self, label: EntityLabel) -> Option<&mut Vec<RelatedEntity>> {
        match label {
            EntityLabel::Person => Some(&mut self.persons),
            EntityLabel::Organization => Some(&mut self.organizations),
            EntityLabel::Location => Some(&mut self.locations),
            EntityLabel::Date => Some(&mut self.dates),
            _ => None,
        }
    }
}

/// Entities of one part, adjacent DATE/TIME spans merged and TIME-only runs dropped.
fn part_entities(part: &Part) -> Vec<EntitySpan> {
    let mut out: Vec<EntitySpan> = part
        .entities
        .iter()
        .filter(|e| !matches!(e.label, EntityLabel::Date | EntityLabel::Time))
        .cloned()
        .collect();
    for m in merge_date_spans_at(&part.entities, &part.text, part.char_start) {
        if m.has_date {
            out.push(EntitySpan {
                label: EntityLabel::Date,
                char_start: m.char_start,
                char_end: m.char_end,
                surface: m.surface,
                sentence_index: m.sentence_index,
            });
        }
    }
    out.sort_by_key(|e| e.char_start);
    out
}

struct Harvester {
    set: RelatedEntitySet,
    seen: HashSet<(EntityLabel, String)>,
}

impl Harvester {
    fn harvest(&mut self, triplet: &RelationTriplet, fired_by: usize) {
        for part in [&triplet.part1, &triplet.part2] {
            for span in part_entities(part) {
                let key = (span.label, normalize_surface(&span.surface));
                let Some(list) = self.set.list_mut(span.label) else { continue };
                if self.seen.insert(key) {
                    list.push(RelatedEntity {
                        span,
                        origin: triplet.origin,
                        source_position: triplet.doc_position,
                        fired_by,
                    });
                }
            }
        }
    }

    /// Scans `triplets` in order; each pattern hit harvests its window.
    fn scan(&mut self, triplets: &[RelationTriplet], patterns: &[TriggerPattern], window: usize) -> Vec<usize> {
        let mut fired = Vec::new();
        for (p, t) in triplets.iter().enumerate() {
            if !t.has_entities() {
                continue;
            }
            let Some(pattern) = patterns.iter().find(|pat| matches(pat, t)) else { continue };
            fired.push(t.doc_position);
            self.set.firings.push(Firing { origin: t.origin, position: t.doc_position, pattern: pattern.to_string() });
            let lo = p.saturating_sub(window);
            let hi = (p + window).min(triplets.len() - 1);
            for q in &triplets[lo..=hi] {
                self.harvest(q, t.doc_position);
            }
        }
        fired
    }
}

/// Related entities of one document: body triplets first, then title triplets,
/// with per-class deduplication on normalized surface (earlier wins).
pub fn extract_related(
    triplets: &[RelationTriplet],
    title_triplets: &[RelationTriplet],
    patterns: &[TriggerPattern],
    window: usize,
) -> RelatedEntitySet {
    let doc_id = triplets
        .first()
        .or(title_triplets.first())
        .map(|t| t.doc_id.clone())
        .unwrap_or_default();
    let mut h = Harvester {
        set: RelatedEntitySet { doc_id, ..Default::default() },
        seen: HashSet::new(),
    };
    h.set.matched_relations = h.scan(triplets, patterns, window);
    h.set.matched_title_relations = h.scan(title_triplets, patterns, window);
    h.set
}

/// Triplets for a title. A title with entities but no verb phrase yields one
/// verbless triplet holding all of them. Offsets refer to the title text.
pub fn extract_title_entities(doc_id: &str, title: &str, gazetteer: &Gazetteer, lexicon: &VerbLexicon) -> Vec<RelationTriplet> {
    let (mut doc, spans) = tag_text(title, gazetteer);
    doc.article_id = doc_id.to_string();
    let mut triplets = document_relations(&doc, &spans, lexicon);
    if triplets.is_empty() && !spans.is_empty() {
        let offsets = crate::text::CharOffsets::new(title);
        let start_all = doc.tokens().next().map_or(0, |t| t.char_start);
        let end_all = doc.tokens().last().map_or(0, |t| t.char_end);
        triplets.push(RelationTriplet {
            doc_id: doc_id.to_string(),
            doc_position: 0,
            sentence_index: spans[0].sentence_index,
            part1: Part {
                text: offsets.slice(title, start_all, end_all).unwrap_or_default().to_string(),
                char_start: start_all,
                char_end: end_all,
                entities: spans,
            },
            verb: VerbPhrase {
                text: String::new(),
                char_start: end_all,
                char_end: end_all,
                head_lemma: String::new(),
                particle: None,
            },
            part2: Part { text: String::new(), char_start: end_all, char_end: end_all, entities: Vec::new() },
            origin: Origin::Title,
        });
    }
    for t in &mut triplets {
        t.origin = Origin::Title;
    }
    triplets
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ner::tag_entities;
    use crate::text::{process_text, StopWords};

    fn body(text: &str) -> Vec<RelationTriplet> {
        let doc = process_text("d", text, &StopWords::bundled());
        let spans = tag_entities(&doc, &Gazetteer::bundled());
        document_relations(&doc, &spans, &VerbLexicon::bundled())
    }

    fn title(text: &str) -> Vec<RelationTriplet> {
        extract_title_entities("d", text, &Gazetteer::bundled(), &VerbLexicon::bundled())
    }

    #[test]
    fn two_relation_example() {
        let t = body("JPP called on February 16. JPP called for Jharkhand bandh.");
        assert_eq!(t.len(), 2);
        let pats = parse_patterns("call on | DATE | part2\ncall for | - | either", std::path::Path::new("p")).unwrap();
        let r = extract_related(&t, &[], &pats, 1);
        assert_eq!(r.surfaces(EntityLabel::Organization), ["JPP"]);
        assert_eq!(r.surfaces(EntityLabel::Date), ["February 16"]);
        assert_eq!(r.surfaces(EntityLabel::Location), ["Jharkhand"]);
        assert!(r.persons.is_empty());
        assert_eq!(r.matched_relations, [0, 1]);
    }

    #[test]
    fn unrelated_person_excluded() {
        let t = body("Narendra Modi called a meeting to discuss issue raised in protest.");
        assert!(!t.is_empty());
        let r = extract_related(&t, &[], &default_patterns(), DEFAULT_WINDOW);
        assert!(r.persons.is_empty());
        assert!(r.is_empty());
    }

    #[test]
    fn empty_patterns_give_nothing() {
        let t = body("The JMM will stage a dharna in Ranchi on Monday.");
        assert!(extract_related(&t, &title("Dharna in Ranchi tomorrow"), &[], 5).is_empty());
    }

    #[test]
    fn window_and_dedup() {
        let t = body(
            "The BJP will stage a protest in Patna. Lalu Prasad said the RJD supports Nitish Kumar. \
             Police said the BJP will hold talks with Nitish Kumar. Rahul Gandhi said Congress workers met in Delhi.",
        );
        let pats = default_patterns();
        let r0 = extract_related(&t, &[], &pats, 0);
        assert_eq!(r0.surfaces(EntityLabel::Organization), ["BJP"]);
        assert_eq!(r0.surfaces(EntityLabel::Location), ["Patna"]);
        let r1 = extract_related(&t, &[], &pats, 1);
        assert!(r1.surfaces(EntityLabel::Person).contains(&"Lalu Prasad"));
        assert_eq!(r1.surfaces(EntityLabel::Organization).iter().filter(|s| **s == "BJP").count(), 1);
        for label in [EntityLabel::Person, EntityLabel::Organization, EntityLabel::Location] {
            let a: HashSet<_> = r0.surfaces(label).into_iter().collect();
            let b: HashSet<_> = r1.surfaces(label).into_iter().collect();
            assert!(a.is_subset(&b));
        }
        for e in r1.persons.iter().chain(&r1.organizations) {
            assert!(e.source_position.abs_diff(e.fired_by) <= 1);
        }
    }

    #[test]
    fn title_triplets() {
        let t = title("JPP calls Jharkhand bandh on February 16");
        assert_eq!(t.len(), 1);
        let labels: HashSet<_> = t[0].entities().map(|e| e.label).collect();
        assert_eq!(labels, HashSet::from([EntityLabel::Organization, EntityLabel::Location, EntityLabel::Date]));
        assert!(title("Weather update for the week").is_empty());
        let v = title("Protest in Delhi tomorrow");
        assert_eq!(v.len(), 1);
        assert!(v[0].verb.head_lemma.is_empty());
        assert_eq!(v[0].origin, Origin::Title);
        let labels: Vec<_> = v[0].entities().map(|e| e.label).collect();
        assert_eq!(labels, [EntityLabel::Location, EntityLabel::Date]);
    }

    #[test]
    fn title_after_body_body_wins() {
        let b = body("The JMM will stage a dharna on Monday.");
        let t = title("JMM dharna in Ranchi tomorrow");
        let r = extract_related(&b, &t, &default_patterns(), DEFAULT_WINDOW);
        assert_eq!(r.organizations.len(), 1);
        assert_eq!(r.organizations[0].origin, Origin::Body);
        assert_eq!(r.surfaces(EntityLabel::Location), ["Ranchi"]);
        assert_eq!(r.locations[0].origin, Origin::Title);
        assert_eq!(r.surfaces(EntityLabel::Date), ["Monday", "tomorrow"]);
    }
}
