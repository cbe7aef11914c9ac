//! Seven-class entity tagging: gazetteer lookup, date/time/money/percent
//! patterns and capitalization heuristics, plus import of external annotations.

mod gazetteer;
mod import;
mod patterns;
mod tagger;

use serde::{Deserialize, Serialize};

use crate::error::Error;

pub use gazetteer::Gazetteer;
pub use import::{import_annotations, AnnotationRecord, ImportResult, Rejection};
pub use patterns::{match_money, match_percent, match_temporal};
pub use tagger::{tag_entities, tag_sentence, tag_text, ORG_SUFFIXES};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum EntityLabel {
    Location,
    Organization,
    Date,
    Money,
    Person,
    Percent,
    Time,
}

impl EntityLabel {
    pub const ALL: [EntityLabel; 7] = [
        EntityLabel::Location,
        EntityLabel::Organization,
        EntityLabel::Date,
        EntityLabel::Money,
        EntityLabel::Person,
        EntityLabel::Percent,
        EntityLabel::Time,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            EntityLabel::Location => "LOCATION",
            EntityLabel::Organization => "ORGANIZATION",
            EntityLabel::Date => "DATE",
            EntityLabel::Money => "MONEY",
            EntityLabel::Person => "PERSON",
            EntityLabel::Percent => "PERCENT",
            EntityLabel::Time => "TIME",
        }
    }
}

impl std::fmt::Display for EntityLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for EntityLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let upper = s.trim().to_ascii_uppercase();
        let label = match upper.as_str() {
            "LOC" => EntityLabel::Location,
            "ORG" => EntityLabel::Organization,
            "PER" => EntityLabel::Person,
            _ => *EntityLabel::ALL
                .iter()
                .find(|l| l.as_str() == upper)
                .ok_or_else(|| Error::InvalidConfig(format!("unknown entity label {s:?}")))?,
        };
        Ok(label)
    }
}

/// A labelled span with character offsets into the document text.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EntitySpan {
    pub label: EntityLabel,
    pub char_start: usize,
    pub char_end: usize,
    pub surface: String,
    pub sentence_index: usize,
}

impl EntitySpan {
    pub fn overlaps(&self, other: &EntitySpan) -> bool {
        self.char_start < other.char_end && other.char_start < self.char_end
    }

    pub fn within(&self, start: usize, end: usize) -> bool {
        start <= self.char_start && self.char_end <= end
    }
}

/// Lowercase with whitespace runs collapsed to one space.
pub fn normalize_surface(s: &str) -> String {
    s.split_whitespace().map(str::to_lowercase).collect::<Vec<_>>().join(" ")
}
