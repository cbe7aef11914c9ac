use serde::{Deserialize, Serialize};

use crate::ner::{EntityLabel, EntitySpan};
use crate::text::CharOffsets;

/// A run of DATE/TIME spans joined into one surface.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MergedDate {
    pub surface: String,
    pub char_start: usize,
    pub char_end: usize,
    pub sentence_index: usize,
    /// False when every merged span was a TIME.
    pub has_date: bool,
}

fn is_temporal(label: EntityLabel) -> bool {
    matches!(label, EntityLabel::Date | EntityLabel::Time)
}

/// Joins DATE/TIME spans separated only by whitespace or a single comma.
/// Spans are expected in text order; other labels are ignored.
pub fn merge_adjacent_date_spans(spans: &[EntitySpan], text: &str) -> Vec<MergedDate> {
    merge_date_spans_at(spans, text, 0)
}

/// Like [`merge_adjacent_date_spans`] when `text` is an excerpt starting at
/// character `base` of the text the span offsets refer to.
pub fn merge_date_spans_at(spans: &[EntitySpan], text: &str, base: usize) -> Vec<MergedDate> {
    let offsets = CharOffsets::new(text);
    let mut out: Vec<MergedDate> = Vec::new();
    for span in spans.iter().filter(|s| is_temporal(s.label)) {
        if let Some(prev) = out.last_mut() {
            let joinable = prev.sentence_index == span.sentence_index
                && span.char_start >= prev.char_end
                && offsets
                    .slice(text, prev.char_end.wrapping_sub(base), span.char_start.wrapping_sub(base))
                    .is_some_and(|gap| gap.chars().all(|c| c.is_whitespace() || c == ',') && gap.matches(',').count() <= 1);
            if joinable {
                prev.char_end = span.char_end;
                prev.has_date |= span.label == EntityLabel::Date;
                prev.surface = offsets
                    .slice(text, prev.char_start.wrapping_sub(base), prev.char_end.wrapping_sub(base))
                    .map(str::to_string)
                    .unwrap_or_else(|| format!("{} {}", prev.surface, span.surface));
                continue;
            }
        }
        out.push(MergedDate {
            surface: span.surface.clone(),
            char_start: span.char_start,
            char_end: span.char_end,
            sentence_index: span.sentence_index,
            has_date: span.label == EntityLabel::Date,
        });
    }
    out
}
