use std::collections::{HashMap, HashSet};
use std::path::Path;

use crate::error::{Error, Result};
use crate::text::lemmatize;

const BUNDLED: &str = include_str!("../../data/verbs.txt");

const AUXILIARIES: &[(&str, &str)] = &[
    ("be", "be"), ("is", "be"), ("are", "be"), ("was", "be"), ("were", "be"), ("been", "be"),
    ("being", "be"), ("am", "be"), ("have", "have"), ("has", "have"), ("had", "have"),
    ("having", "have"), ("do", "do"), ("does", "do"), ("did", "do"), ("will", "will"),
    ("would", "would"), ("shall", "shall"), ("should", "should"), ("can", "can"), ("could", "could"),
    ("may", "may"), ("might", "might"), ("must", "must"),
];

pub const PARTICLES: &[&str] = &["on", "for", "off", "out", "up", "against", "down"];

/// Words that may sit inside a verb phrase when another verb follows.
const INNER: &[&str] = &["to", "not", "also", "further", "jointly", "again", "n't"];

fn is_vowel(c: char) -> bool {
    matches!(c, 'a' | 'e' | 'i' | 'o' | 'u')
}

/// Ends consonant-vowel-consonant with a single vowel group ("plan", "stop").
fn doubles_final(base: &str) -> bool {
    let c: Vec<char> = base.chars().collect();
    let n = c.len();
    if n < 3 || matches!(c[n - 1], 'w' | 'x' | 'y') {
        return false;
    }
    let groups = c.windows(2).filter(|w| !is_vowel(w[0]) && is_vowel(w[1])).count() + usize::from(is_vowel(c[0]));
    !is_vowel(c[n - 1]) && is_vowel(c[n - 2]) && !is_vowel(c[n - 3]) && groups == 1
}

/// Regular inflections of a base verb.
fn inflections(base: &str) -> Vec<String> {
    let mut out = vec![base.to_string()];
    let last = base.chars().last().unwrap_or(' ');
    let before_last = base.chars().rev().nth(1).unwrap_or(' ');
    let stem_y = base.strip_suffix('y').filter(|_| !is_vowel(before_last));
    match stem_y {
        Some(stem) => {
            out.push(format!("{stem}ies"));
            out.push(format!("{stem}ied"));
        }
        None if ["s", "x", "z", "ch", "sh", "o"].iter().any(|s| base.ends_with(s)) => out.push(format!("{base}es")),
        None => out.push(format!("{base}s")),
    }
    if stem_y.is_none() {
        out.push(if last == 'e' { format!("{base}d") } else { format!("{base}ed") });
    }
    if let Some(stem) = base.strip_suffix("ie") {
        out.push(format!("{stem}ying"));
    } else if last == 'e' && !base.ends_with("ee") {
        out.push(format!("{}ing", &base[..base.len() - 1]));
    } else {
        out.push(format!("{base}ing"));
    }
    if doubles_final(base) {
        out.push(format!("{base}{last}ed"));
        out.push(format!("{base}{last}ing"));
    }
    out
}

/// Verb forms mapped to base lemmas, plus auxiliaries.
#[derive(Debug, Clone, PartialEq)]
pub struct VerbLexicon {
    bases: HashSet<String>,
    forms: HashMap<String, String>,
    auxiliaries: HashMap<String, String>,
}

impl Default for VerbLexicon {
    fn default() -> Self {
        Self::bundled()
    }
}

impl VerbLexicon {
    pub fn bundled() -> Self {
        Self::parse(BUNDLED, Path::new("verbs.txt")).expect("bundled verb lexicon parses")
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, path)
    }

    /// One verb per line: `base` or `base<TAB>form,form`. `#` comments.
    pub fn parse(text: &str, source: &Path) -> Result<Self> {
        let mut lex = VerbLexicon {
            bases: HashSet::new(),
            forms: HashMap::new(),
            auxiliaries: AUXILIARIES.iter().map(|&(f, b)| (f.to_string(), b.to_string())).collect(),
        };
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (base, extra) = line.split_once('\t').unwrap_or((line, ""));
            let base = base.trim().to_lowercase();
            if base.is_empty() || base.contains(char::is_whitespace) {
                return Err(Error::Parse {
                    path: source.display().to_string(),
                    line: n + 1,
                    message: format!("bad verb {base:?}"),
                });
            }
            for form in inflections(&base)
                .into_iter()
                .chain(extra.split(',').map(|f| f.trim().to_lowercase()).filter(|f| !f.is_empty()))
            {
                lex.forms.entry(form).or_insert_with(|| base.clone());
            }
            lex.bases.insert(base);
        }
        Ok(lex)
    }

    /// Base lemma of a main verb form.
    pub fn verb_base(&self, word: &str) -> Option<&str> {
        let w = word.to_lowercase();
        if let Some(b) = self.forms.get(&w) {
            return Some(b);
        }
        let lemma = lemmatize(&w);
        self.bases.get(&lemma).map(String::as_str)
    }

    pub fn auxiliary_base(&self, word: &str) -> Option<&str> {
        self.auxiliaries.get(&word.to_lowercase()).map(String::as_str)
    }

    pub fn is_base_form(&self, word: &str) -> bool {
        self.bases.contains(&word.to_lowercase())
    }

    pub fn is_particle(word: &str) -> bool {
        PARTICLES.contains(&word.to_lowercase().as_str())
    }

    pub(crate) fn is_inner(word: &str) -> bool {
        INNER.contains(&word.to_lowercase().as_str())
    }

    pub fn len(&self) -> usize {
        self.bases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bases.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regular_inflections() {
        let lex = VerbLexicon::bundled();
        for (form, base) in [
            ("called", "call"), ("calls", "call"), ("calling", "call"), ("staged", "stage"), ("staging", "stage"),
            ("planned", "plan"), ("planning", "plan"), ("rallied", "rally"), ("rallies", "rally"),
            ("held", "hold"), ("marches", "march"), ("observing", "observe"), ("went", "go"), ("said", "say"),
            ("Announced", "announce"), ("organised", "organise"), ("gheraoed", "gherao"),
        ] {
            assert_eq!(lex.verb_base(form), Some(base), "{form}");
        }
        assert_eq!(lex.verb_base("meeting"), Some("meet"));
        assert_eq!(lex.verb_base("table"), None);
        assert_eq!(lex.auxiliary_base("will"), Some("will"));
        assert_eq!(lex.auxiliary_base("was"), Some("be"));
    }

    #[test]
    fn custom_lexicon() {
        let lex = VerbLexicon::parse("# c\nhartal\nfight\tfought\n", Path::new("x")).unwrap();
        assert_eq!(lex.len(), 2);
        assert_eq!(lex.verb_base("fought"), Some("fight"));
        assert_eq!(lex.verb_base("call"), None);
        assert!(VerbLexicon::parse("two words\n", Path::new("x")).is_err());
    }
}
