use serde::{Deserialize, Serialize};

use super::lemma::lemmatize;

/// A token with character (Unicode scalar) offsets into its source text.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    pub surface: String,
    pub lemma: String,
    pub char_start: usize,
    pub char_end: usize,
    pub sentence_index: usize,
}

impl Token {
    pub fn is_punct(&self) -> bool {
        self.surface.chars().all(is_punct)
    }

    pub fn is_capitalized(&self) -> bool {
        self.surface.chars().next().is_some_and(char::is_uppercase)
    }
}

pub fn is_punct(c: char) -> bool {
    c.is_ascii_punctuation()
        || matches!(
            c,
            '\u{2010}'..='\u{2027}' | '\u{00ab}' | '\u{00bb}' | '\u{00a1}' | '\u{00bf}' | '\u{20b9}'
        )
}

/// Splits on whitespace and detaches leading and trailing punctuation,
/// one token per punctuation character. Sentence indices are left at 0.
pub fn tokenize(text: &str) -> Vec<Token> {
    let mut tokens = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        if chars[i].is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        while i < chars.len() && !chars[i].is_whitespace() {
            i += 1;
        }
        let end = i;
        let mut lo = start;
        let mut hi = end;
        while lo < hi && is_punct(chars[lo]) {
            lo += 1;
        }
        while hi > lo && is_punct(chars[hi - 1]) {
            hi -= 1;
        }
        // An apostrophe-s stays with its word (the lemmatizer strips it).
        for p in start..lo {
            tokens.push(make(&chars[p..p + 1], p));
        }
        if lo < hi {
            tokens.push(make(&chars[lo..hi], lo));
        }
        for p in hi..end {
            tokens.push(make(&chars[p..p + 1], p));
        }
    }
    tokens
}

fn make(chars: &[char], start: usize) -> Token {
    let surface: String = chars.iter().collect();
    let lemma = if surface.chars().all(is_punct) {
        surface.clone()
    } else {
        lemmatize(&surface)
    };
    Token {
        surface,
        lemma,
        char_start: start,
        char_end: start + chars.len(),
        sentence_index: 0,
    }
}

/// Maps character offsets to byte offsets for one text.
#[derive(Debug, Clone)]
pub struct CharOffsets {
    bytes: Vec<usize>,
}

impl CharOffsets {
    pub fn new(text: &str) -> Self {
        let mut bytes: Vec<usize> = text.char_indices().map(|(b, _)| b).collect();
        bytes.push(text.len());
        CharOffsets { bytes }
    }

    pub fn char_len(&self) -> usize {
        self.bytes.len() - 1
    }

    /// The substring between two character offsets, or `None` if out of range.
    pub fn slice<'a>(&self, text: &'a str, start: usize, end: usize) -> Option<&'a str> {
        if start > end || end >= self.bytes.len() {
            return None;
        }
        text.get(self.bytes[start]..self.bytes[end])
    }
}

/// One-off character slice; prefer [`CharOffsets`] for repeated use.
pub fn char_slice(text: &str, start: usize, end: usize) -> Option<&str> {
    CharOffsets::new(text).slice(text, start, end)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn surfaces(text: &str) -> Vec<String> {
        tokenize(text).into_iter().map(|t| t.surface).collect()
    }

    #[test]
    fn empty_text() {
        assert!(tokenize("").is_empty());
        assert!(tokenize("   \n\t").is_empty());
    }

    #[test]
    fn trailing_punctuation_detached() {
        let toks = tokenize("Farmers protest.");
        let got: Vec<_> = toks.iter().map(|t| (t.surface.as_str(), t.char_start, t.char_end)).collect();
        assert_eq!(got, [("Farmers", 0, 7), ("protest", 8, 15), (".", 15, 16)]);
        assert!(toks[2].is_punct());
    }

    #[test]
    fn local_terms_stay_intact() {
        assert_eq!(surfaces("Jharkhand bandh"), ["Jharkhand", "bandh"]);
    }

    #[test]
    fn internal_punctuation_kept() {
        assert_eq!(
            surfaces("\"U.S.-backed\" 10,000 (march)"),
            ["\"", "U.S.-backed", "\"", "10,000", "(", "march", ")"]
        );
        assert_eq!(surfaces("10% ₹500"), ["10", "%", "₹", "500"]);
    }

    #[test]
    fn offsets_are_characters_not_bytes() {
        let text = "धरना protest";
        let toks = tokenize(text);
        assert_eq!(toks[1].char_start, 5);
        let map = CharOffsets::new(text);
        assert_eq!(map.slice(text, toks[1].char_start, toks[1].char_end), Some("protest"));
        assert_eq!(map.slice(text, 0, 99), None);
    }

    proptest! {
        #[test]
        fn offsets_reconstruct_surfaces(text in "\\PC{0,80}") {
            let toks = tokenize(&text);
            let map = CharOffsets::new(&text);
            let mut prev_end = 0;
            for t in &toks {
                prop_assert!(t.char_start < t.char_end);
                prop_assert!(t.char_end <= map.char_len());
                prop_assert!(t.char_start >= prev_end);
                prop_assert_eq!(map.slice(&text, t.char_start, t.char_end), Some(t.surface.as_str()));
                prop_assert!(!t.surface.chars().any(char::is_whitespace));
                prop_assert_eq!(t.lemma.to_lowercase(), t.lemma.clone());
                prev_end = t.char_end;
            }
        }
    }
}
