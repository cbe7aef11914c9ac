use serde::{Deserialize, Serialize};

use super::{EntityLabel, EntitySpan};
use crate::text::{CharOffsets, ProcessedDoc};

/// One externally produced annotation (annotation JSONL line).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnotationRecord {
    pub doc_id: String,
    pub label: String,
    pub char_start: usize,
    pub char_end: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub surface: Option<String>,
}

impl AnnotationRecord {
    pub fn from_span(doc_id: &str, span: &EntitySpan) -> Self {
        AnnotationRecord {
            doc_id: doc_id.to_string(),
            label: span.label.to_string(),
            char_start: span.char_start,
            char_end: span.char_end,
            surface: Some(span.surface.clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rejection {
    /// Position of the record in the input batch.
    pub index: usize,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ImportResult {
    pub spans: Vec<EntitySpan>,
    pub rejected: Vec<Rejection>,
}

/// Validates annotations for `doc`. Bad records are rejected one by one; the
/// rest are returned sorted by offset.
pub fn import_annotations(doc: &ProcessedDoc, records: &[AnnotationRecord]) -> ImportResult {
    let offsets = CharOffsets::new(&doc.text);
    let sentence_bounds: Vec<(usize, usize)> = doc
        .sentences
        .iter()
        .filter_map(|s| Some((s.first()?.char_start, s.last()?.char_end)))
        .collect();
    let mut result = ImportResult::default();
    let mut order: Vec<usize> = (0..records.len()).collect();
    order.sort_by_key(|&i| (records[i].char_start, records[i].char_end));

    for i in order {
        let r = &records[i];
        let check = || -> Result<EntitySpan, String> {
            if r.doc_id != doc.article_id {
                return Err(format!("doc_id {:?} does not match {:?}", r.doc_id, doc.article_id));
            }
            let label: EntityLabel = r.label.parse().map_err(|_| format!("label {:?} is not one of the 7 classes", r.label))?;
            if r.char_start >= r.char_end {
                return Err(format!("empty or inverted span {}..{}", r.char_start, r.char_end));
            }
            if r.char_end > offsets.char_len() {
                return Err(format!("char_end {} beyond text length {}", r.char_end, offsets.char_len()));
            }
            let surface = offsets.slice(&doc.text, r.char_start, r.char_end).unwrap_or_default();
            if let Some(expected) = &r.surface {
                if expected != surface {
                    return Err(format!("surface {expected:?} does not match text {surface:?}"));
                }
            }
            let sentence_index = sentence_bounds
                .iter()
                .position(|&(s, e)| s <= r.char_start && r.char_end <= e)
                .ok_or_else(|| "span crosses a sentence boundary".to_string())?;
            let span = EntitySpan {
                label,
                char_start: r.char_start,
                char_end: r.char_end,
                surface: surface.to_string(),
                sentence_index,
            };
            if let Some(prev) = result.spans.iter().find(|s| s.overlaps(&span)) {
                return Err(format!("overlaps accepted span {}..{}", prev.char_start, prev.char_end));
            }
            Ok(span)
        };
        match check() {
            Ok(span) => result.spans.push(span),
            Err(reason) => result.rejected.push(Rejection { index: i, reason }),
        }
    }
    result.rejected.sort_by_key(|r| r.index);
    result
}
