use proptest::prelude::*;
use unrest_core::ner::{tag_entities, EntitySpan, Gazetteer};
use unrest_core::relation::{document_relations, RelationTriplet, VerbLexicon};
use unrest_core::text::{process_text, StopWords};

fn relations(text: &str) -> (Vec<EntitySpan>, Vec<RelationTriplet>) {
    let doc = process_text("d", text, &StopWords::bundled());
    let spans = tag_entities(&doc, &Gazetteer::bundled());
    let triplets = document_relations(&doc, &spans, &VerbLexicon::bundled());
    (spans, triplets)
}

fn fixture() -> String {
    std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/relations6/article.txt"))
        .unwrap()
        .trim()
        .to_string()
}

type Row = (usize, &'static str, &'static str, &'static str, Option<&'static str>, &'static str, &'static [&'static str]);

// Traced by hand: "Rain lashed the city" has no lexicon verb, and "discuss the issue"
// carries no entity, so neither yields a triplet.
const EXPECTED: &[Row] = &[
    (0, "JPP", "called on", "call", Some("on"), "february 16", &["ORGANIZATION:JPP", "DATE:february 16"]),
    (1, "JPP", "called for", "call", Some("for"), "Jharkhand bandh", &["ORGANIZATION:JPP", "LOCATION:Jharkhand"]),
    (2, "The Kisan Sabha", "will stage", "stage", None, "a dharna in Patna", &["ORGANIZATION:Kisan Sabha", "LOCATION:Patna"]),
    (2, "and farmers from Gaya", "will join", "join", None, "", &["LOCATION:Gaya"]),
    (4, "Police", "arrested", "arrest", None, "Suresh Mahto on Monday", &["PERSON:Suresh Mahto", "DATE:Monday"]),
    (4, "the JMM", "condemned", "condemn", None, "the arrest", &["ORGANIZATION:JMM"]),
    (5, "Narendra Modi", "called", "call", None, "a meeting", &["PERSON:Narendra Modi"]),
];

#[test]
fn six_sentence_fixture_matches_hand_trace() {
    let (_, got) = relations(&fixture());
    assert_eq!(got.len(), EXPECTED.len());
    for (i, (t, row)) in got.iter().zip(EXPECTED).enumerate() {
        let &(sentence, p1, verb, head, particle, p2, ents) = row;
        assert_eq!(t.doc_position, i);
        assert_eq!(t.sentence_index, sentence, "triplet {i}");
        assert_eq!(t.part1.text, p1, "triplet {i}");
        assert_eq!(t.verb.text, verb, "triplet {i}");
        assert_eq!(t.verb.head_lemma, head, "triplet {i}");
        assert_eq!(t.verb.particle.as_deref(), particle, "triplet {i}");
        assert_eq!(t.part2.text, p2, "triplet {i}");
        let got_ents: Vec<String> = t.entities().map(|e| format!("{}:{}", e.label.as_str(), e.surface)).collect();
        assert_eq!(got_ents, ents, "triplet {i}");
    }
}

#[test]
fn triplet_jsonl_schema() {
    let (_, got) = relations(&fixture());
    let v = serde_json::to_value(&got[0]).unwrap();
    for key in ["doc_id", "doc_position", "sentence_index", "part1", "verb", "part2"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["verb"]["head_lemma"], "call");
    assert!(v["part1"]["entities"].is_array());
    let back: RelationTriplet = serde_json::from_value(v).unwrap();
    assert_eq!(back, got[0]);
}

fn check_invariants(spans: &[EntitySpan], triplets: &[RelationTriplet]) -> Result<(), TestCaseError> {
    for (i, t) in triplets.iter().enumerate() {
        prop_assert_eq!(t.doc_position, i);
        prop_assert!(t.part1.char_end <= t.verb.char_start);
        prop_assert!(t.verb.char_start < t.verb.char_end);
        prop_assert!(t.verb.char_end <= t.part2.char_start);
        prop_assert!(t.has_entities());
        for e in t.entities() {
            prop_assert!(spans.contains(e), "entity {:?} not among input spans", e);
        }
    }
    Ok(())
}

const WORDS: &[&str] = &[
    "JPP", "called", "on", "for", "the", "Kisan", "Sabha", "will", "stage", "a", "protest", "in", "Patna",
    "Monday", "March", "5", "Narendra", "Modi", "police", "arrested", "and", "to", "join", "rally", ",",
    ".", "strike", "go", "Congress", "workers", "Delhi", "not", "held", "dharna", "tomorrow",
];

proptest! {
    #[test]
    fn triplet_invariants_hold(words in prop::collection::vec(prop::sample::select(WORDS), 1..40)) {
        let text = words.join(" ");
        let (spans, triplets) = relations(&text);
        check_invariants(&spans, &triplets)?;
    }
}

#[test]
fn fixture_satisfies_invariants() {
    let (spans, triplets) = relations(&fixture());
    check_invariants(&spans, &triplets).unwrap();
}
