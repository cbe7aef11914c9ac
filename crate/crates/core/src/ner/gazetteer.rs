use std::collections::HashMap;
use std::path::{Path, PathBuf};

use super::EntityLabel;
use crate::error::{Error, Result};
use crate::text::tokenize;

const BUNDLED: [(&str, &str); 3] = [
    ("locations.tsv", include_str!("../../data/gazetteer/locations.tsv")),
    ("organizations.tsv", include_str!("../../data/gazetteer/organizations.tsv")),
    ("persons.tsv", include_str!("../../data/gazetteer/persons.tsv")),
];

/// Surface → label lookup over lowercased, token-joined keys.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Gazetteer {
    entries: HashMap<String, EntityLabel>,
    max_tokens: usize,
    pub sources: Vec<PathBuf>,
}

/// Lowercased surfaces joined by single spaces, tokenized the same way as text.
pub(crate) fn key_of<'a>(surfaces: impl IntoIterator<Item = &'a str>) -> String {
    surfaces.into_iter().map(str::to_lowercase).collect::<Vec<_>>().join(" ")
}

impl Gazetteer {
    pub fn new() -> Self {
        Self::default()
    }

    /// The built-in lists of Indian states and cities, parties and unions, and public figures.
    pub fn bundled() -> Self {
        let mut g = Gazetteer::new();
        for (name, text) in BUNDLED {
            g.add_tsv(text, Path::new(name)).expect("bundled gazetteer is consistent");
        }
        g
    }

    /// Loads every `*.tsv` / `*.txt` file in `dir` (sorted by name).
    pub fn load_dir(dir: &Path) -> Result<Self> {
        let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
            .map_err(|e| Error::io(dir, e))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "tsv" || x == "txt"))
            .collect();
        paths.sort();
        let mut g = Gazetteer::new();
        for p in paths {
            g.load_file(&p)?;
        }
        Ok(g)
    }

    pub fn load_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        self.add_tsv(&text, path)
    }

    /// Adds `surface<TAB>label` lines; `#` starts a comment line.
    pub fn add_tsv(&mut self, text: &str, source: &Path) -> Result<()> {
        for (n, line) in text.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.trim_start().starts_with('#') {
                continue;
            }
            let err = |message: String| Error::Parse { path: source.display().to_string(), line: n + 1, message };
            let (surface, label) = line
                .split_once('\t')
                .ok_or_else(|| err("expected surface<TAB>label".into()))?;
            let label: EntityLabel = label.parse().map_err(|e: Error| err(e.to_string()))?;
            self.insert(surface, label).map_err(|e| err(e.to_string()))?;
        }
        self.sources.push(source.to_path_buf());
        Ok(())
    }

    /// Adds one entry; the same surface with a different label is an error.
    pub fn insert(&mut self, surface: &str, label: EntityLabel) -> Result<()> {
        let tokens = tokenize(surface);
        if tokens.is_empty() {
            return Err(Error::InvalidConfig("empty gazetteer surface".into()));
        }
        let key = key_of(tokens.iter().map(|t| t.surface.as_str()));
        match self.entries.get(&key) {
            Some(&existing) if existing != label => Err(Error::InvalidConfig(format!(
                "{key:?} is both {existing} and {label}"
            ))),
            _ => {
                self.max_tokens = self.max_tokens.max(tokens.len());
                self.entries.insert(key, label);
                Ok(())
            }
        }
    }

    pub fn lookup(&self, key: &str) -> Option<EntityLabel> {
        self.entries.get(key).copied()
    }

    pub fn max_tokens(&self) -> usize {
        self.max_tokens
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_has_expected_entries() {
        let g = Gazetteer::bundled();
        assert_eq!(g.lookup("jharkhand"), Some(EntityLabel::Location));
        assert_eq!(g.lookup("jharkhand mukti morcha"), Some(EntityLabel::Organization));
        assert_eq!(g.lookup("narendra modi"), Some(EntityLabel::Person));
        assert_eq!(g.lookup("jammu and kashmir"), Some(EntityLabel::Location));
        assert!(g.max_tokens() >= 4);
    }

    #[test]
    fn conflicting_labels_rejected() {
        let mut g = Gazetteer::new();
        g.add_tsv("Ranchi\tLOCATION\nRANCHI\tLOCATION\n", Path::new("a")).unwrap();
        assert_eq!(g.len(), 1);
        let e = g.add_tsv("# c\nranchi\tORGANIZATION\n", Path::new("b")).unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }));
        assert!(g.add_tsv("Ranchi\tCITY\n", Path::new("c")).is_err());
        assert!(g.add_tsv("no tab here\n", Path::new("d")).is_err());
    }

    #[test]
    fn load_dir_reads_tsv_files() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("loc.tsv"), "Dumka\tLOCATION\n").unwrap();
        std::fs::write(dir.path().join("org.tsv"), "Adivasi Sengel Abhiyan\tORGANIZATION\n").unwrap();
        std::fs::write(dir.path().join("README"), "ignored").unwrap();
        let g = Gazetteer::load_dir(dir.path()).unwrap();
        assert_eq!(g.len(), 2);
        assert_eq!(g.sources.len(), 2);
        assert_eq!(g.lookup("adivasi sengel abhiyan"), Some(EntityLabel::Organization));
    }
}
