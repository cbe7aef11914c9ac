use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ner::EntityLabel;
use crate::relation::RelationTriplet;

const BUNDLED: &str = include_str!("../../data/patterns.txt");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scope {
    Part2,
    Either,
}

/// Verb head (+ particle) with an optional entity label required in scope.
/// A pattern without a verb matches only verbless title triplets.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TriggerPattern {
    pub head: Option<String>,
    pub particle: Option<String>,
    pub label: Option<EntityLabel>,
    pub scope: Scope,
}

impl TriggerPattern {
    pub fn verb_key(&self) -> Option<String> {
        let head = self.head.as_ref()?;
        Some(match &self.particle {
            Some(p) => format!("{head} {p}"),
            None => head.clone(),
        })
    }
}

impl std::fmt::Display for TriggerPattern {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let label = self.label.map_or("-", EntityLabel::as_str);
        let scope = match self.scope {
            Scope::Part2 => "part2",
            Scope::Either => "either",
        };
        write!(f, "{} | {label} | {scope}", self.verb_key().unwrap_or_else(|| "-".into()))
    }
}

/// True iff the verb head (+particle) is the pattern's and the required label
/// occurs in the pattern's scope.
pub fn matches(pattern: &TriggerPattern, triplet: &RelationTriplet) -> bool {
    let verb_ok = match &pattern.head {
        None => triplet.verb.head_lemma.is_empty(),
        Some(head) => {
            triplet.verb.head_lemma.eq_ignore_ascii_case(head)
                && match (&pattern.particle, &triplet.verb.particle) {
                    (None, None) => true,
                    (Some(a), Some(b)) => a.eq_ignore_ascii_case(b),
                    _ => false,
                }
        }
    };
    if !verb_ok {
        return false;
    }
    match (pattern.label, pattern.scope) {
        (None, _) => true,
        (Some(l), Scope::Part2) => triplet.part2.has_label(l),
        (Some(l), Scope::Either) => triplet.part1.has_label(l) || triplet.part2.has_label(l),
    }
}

pub fn parse_patterns(text: &str, source: &Path) -> Result<Vec<TriggerPattern>> {
    let mut out: Vec<TriggerPattern> = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| Error::Parse { path: source.display().to_string(), line: n + 1, message };
        let fields: Vec<&str> = line.split('|').map(str::trim).collect();
        let [verb, label, scope] = fields.as_slice() else {
            return Err(err(format!("expected `verb | label | scope`, got {} fields", fields.len())));
        };
        let (head, particle) = if *verb == "-" {
            (None, None)
        } else {
            let words: Vec<String> = verb.split_whitespace().map(str::to_lowercase).collect();
            match words.as_slice() {
                [h] => (Some(h.clone()), None),
                [h, p] => (Some(h.clone()), Some(p.clone())),
                _ => return Err(err(format!("verb phrase {verb:?} must be a head with at most one particle"))),
            }
        };
        let label = match *label {
            "-" | "" => None,
            l => Some(l.parse::<EntityLabel>().map_err(|_| err(format!("unknown entity label {l:?}")))?),
        };
        let scope = match scope.to_ascii_lowercase().as_str() {
            "part2" => Scope::Part2,
            "either" => Scope::Either,
            s => return Err(err(format!("scope must be part2 or either, got {s:?}"))),
        };
        if head.is_none() && label.is_none() {
            return Err(err("a verbless pattern needs an entity label".into()));
        }
        let p = TriggerPattern { head, particle, label, scope };
        if !out.contains(&p) {
            out.push(p);
        }
    }
    Ok(out)
}

pub fn load_patterns(path: &Path) -> Result<Vec<TriggerPattern>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_patterns(&text, path)
}

pub fn default_patterns() -> Vec<TriggerPattern> {
    parse_patterns(BUNDLED, Path::new("patterns.txt")).expect("bundled patterns parse")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ner::EntitySpan;
    use crate::relation::{Origin, Part, VerbPhrase};

    fn part(labels: &[EntityLabel]) -> Part {
        Part {
            text: String::new(),
            char_start: 0,
            char_end: 0,
            entities: labels
                .iter()
                .map(|&label| EntitySpan { label, char_start: 0, char_end: 1, surface: "x".into(), sentence_index: 0 })
                .collect(),
        }
    }

    fn triplet(head: &str, particle: Option<&str>, p1: &[EntityLabel], p2: &[EntityLabel]) -> RelationTriplet {
        RelationTriplet {
            doc_id: "d".into(),
            doc_position: 0,
            sentence_index: 0,
            part1: part(p1),
            verb: VerbPhrase {
                text: String::new(),
                char_start: 0,
                char_end: 0,
                head_lemma: head.into(),
                particle: particle.map(str::to_string),
            },
            part2: part(p2),
            origin: Origin::Body,
        }
    }

    #[test]
    fn parse_lines() {
        let p = parse_patterns("call on | DATE | part2\n# x\ncall on | DATE | part2\n- | LOCATION | either\n", Path::new("f")).unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(p[0].to_string(), "call on | DATE | part2");
        assert_eq!(p[1].head, None);
        let e = parse_patterns("stage | - | either\ncall | CITY | part2\n", Path::new("f")).unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }), "{e}");
        assert!(parse_patterns("a b c | - | part2", Path::new("f")).is_err());
        assert!(parse_patterns("call | - | left", Path::new("f")).is_err());
        assert!(parse_patterns("- | - | either", Path::new("f")).is_err());
        assert!(default_patterns().len() >= 25);
    }

    #[test]
    fn matching_rules() {
        use EntityLabel::*;
        let call_on = &parse_patterns("call on | DATE | part2", Path::new("f")).unwrap()[0];
        assert!(matches(call_on, &triplet("call", Some("on"), &[Organization], &[Date])));
        assert!(!matches(call_on, &triplet("call", Some("on"), &[Organization], &[])));
        assert!(!matches(call_on, &triplet("call", Some("on"), &[Date], &[Organization])));
        assert!(!matches(call_on, &triplet("call", Some("for"), &[], &[Date])));
        let stage = &parse_patterns("stage | - | either", Path::new("f")).unwrap()[0];
        assert!(matches(stage, &triplet("stage", None, &[Person], &[])));
        assert!(!matches(stage, &triplet("", None, &[Person], &[])));
        let title = &parse_patterns("- | DATE | either", Path::new("f")).unwrap()[0];
        assert!(matches(title, &triplet("", None, &[Location, Date], &[])));
        assert!(!matches(title, &triplet("stage", None, &[Date], &[])));
    }
}
