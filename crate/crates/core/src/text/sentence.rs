use std::collections::HashSet;

use once_cell::sync::Lazy;

use super::token::{CharOffsets, Token};

static ABBREVIATIONS: Lazy<HashSet<&'static str>> = Lazy::new(|| {
    [
        "mr", "mrs", "ms", "dr", "prof", "sr", "jr", "st", "sh", "smt", "shri", "lt", "col", "gen",
        "capt", "maj", "sgt", "gov", "govt", "dept", "no", "nos", "vs", "etc", "inc", "ltd", "co",
        "corp", "jan", "feb", "mar", "apr", "jun", "jul", "aug", "sep", "sept", "oct", "nov", "dec",
        "rs", "approx", "fig", "u.s", "u.k", "a.m", "p.m", "i.e", "e.g",
    ]
    .into_iter()
    .collect()
});

fn is_terminal(t: &Token) -> bool {
    matches!(t.surface.as_str(), "." | "?" | "!")
}

fn is_closer(t: &Token) -> bool {
    matches!(
        t.surface.as_str(),
        "\"" | "'" | ")" | "]" | "\u{201d}" | "\u{2019}"
    )
}

fn starts_sentence(t: &Token) -> bool {
    t.surface
        .chars()
        .find(|c| c.is_alphanumeric())
        .is_some_and(|c| c.is_uppercase() || c.is_numeric())
}

/// Groups tokens into sentences and assigns `sentence_index`.
///
/// A break follows `.`, `?` or `!` (plus any closing quotes or brackets) when
/// whitespace and a capitalized or numeric token come next, unless the period
/// ends a known abbreviation or a single-letter initial. A blank line always
/// breaks.
pub fn split_sentences(text: &str, tokens: Vec<Token>) -> Vec<Vec<Token>> {
    let offsets = CharOffsets::new(text);
    let gap = |a: &Token, b: &Token| offsets.slice(text, a.char_end, b.char_start).unwrap_or("");
    let mut breaks = vec![false; tokens.len()];

    let mut i = 0;
    while i < tokens.len() {
        let t = &tokens[i];
        if is_terminal(t) {
            let mut last = i;
            while last + 1 < tokens.len()
                && (is_terminal(&tokens[last + 1]) || is_closer(&tokens[last + 1]))
                && gap(&tokens[last], &tokens[last + 1]).is_empty()
            {
                last += 1;
            }
            let abbreviation = t.surface == "."
                && i > 0
                && gap(&tokens[i - 1], t).is_empty()
                && {
                    let prev = tokens[i - 1].surface.to_lowercase();
                    ABBREVIATIONS.contains(prev.as_str())
                        || (prev.chars().count() == 1 && prev.chars().all(char::is_alphabetic))
                };
            if let Some(next) = tokens.get(last + 1) {
                let g = gap(&tokens[last], next);
                if !abbreviation && !g.is_empty() && starts_sentence(next) {
                    breaks[last] = true;
                }
            }
            i = last + 1;
            continue;
        }
        i += 1;
    }
    for i in 0..tokens.len().saturating_sub(1) {
        let g = gap(&tokens[i], &tokens[i + 1]);
        if g.matches('\n').count() >= 2 {
            breaks[i] = true;
        }
    }

    let mut sentences: Vec<Vec<Token>> = Vec::new();
    let mut current = Vec::new();
    for (mut tok, brk) in tokens.into_iter().zip(breaks) {
        tok.sentence_index = sentences.len();
        current.push(tok);
        if brk {
            sentences.push(std::mem::take(&mut current));
        }
    }
    if !current.is_empty() {
        sentences.push(current);
    }
    sentences
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::tokenize;

    fn split(text: &str) -> Vec<String> {
        split_sentences(text, tokenize(text))
            .iter()
            .map(|s| s.iter().map(|t| t.surface.as_str()).collect::<Vec<_>>().join(" "))
            .collect()
    }

    #[test]
    fn basic_split() {
        assert_eq!(
            split("JPP called on February 16. The bandh will be observed! Will it? yes."),
            ["JPP called on February 16 .", "The bandh will be observed !", "Will it ? yes ."]
        );
    }

    #[test]
    fn abbreviations_and_initials_do_not_split() {
        assert_eq!(
            split("Dr. Sharma met Mr. N. Modi on Feb. 16. Then he left."),
            ["Dr . Sharma met Mr . N . Modi on Feb . 16 .", "Then he left ."]
        );
    }

    #[test]
    fn closing_quote_stays_with_sentence() {
        assert_eq!(
            split("He said \"we will protest.\" Police refused."),
            ["He said \" we will protest . \"", "Police refused ."]
        );
    }

    #[test]
    fn blank_line_breaks() {
        assert_eq!(split("Headline without stop\n\nBody starts here"), ["Headline without stop", "Body starts here"]);
    }

    #[test]
    fn indices_contiguous() {
        let text = "One. Two. Three.";
        let sents = split_sentences(text, tokenize(text));
        for (i, s) in sents.iter().enumerate() {
            assert!(s.iter().all(|t| t.sentence_index == i));
        }
        assert_eq!(sents.len(), 3);
    }
}
