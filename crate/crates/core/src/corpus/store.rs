use std::collections::HashSet;
use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use chrono::NaiveDate;
use log::warn;

use super::article::{article_id, Article};
use crate::error::{Error, Result};

pub const ARTICLES_FILE: &str = "articles.jsonl";

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct IngestStats {
    pub inserted: usize,
    pub duplicates_skipped: usize,
}

/// Append-only JSONL article store in a directory. One writer at a time.
#[derive(Debug)]
pub struct CorpusStore {
    dir: PathBuf,
    ids: HashSet<String>,
    date_range: Option<(NaiveDate, NaiveDate)>,
}

impl CorpusStore {
    /// Opens (creating if needed) the store in `dir`.
    pub fn open(dir: impl AsRef<Path>) -> Result<Self> {
        let dir = dir.as_ref().to_path_buf();
        fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
        let mut store = CorpusStore {
            dir,
            ids: HashSet::new(),
            date_range: None,
        };
        for article in store.read_all()? {
            store.note(&article);
        }
        Ok(store)
    }

    /// Opens an existing store without creating it.
    pub fn open_existing(dir: impl AsRef<Path>) -> Result<Self> {
        let dir = dir.as_ref();
        if !dir.join(ARTICLES_FILE).is_file() {
            return Err(Error::io(
                dir.join(ARTICLES_FILE),
                std::io::Error::new(std::io::ErrorKind::NotFound, "corpus store not found"),
            ));
        }
        Self::open(dir)
    }

    pub fn path(&self) -> &Path {
        &self.dir
    }

    pub fn count(&self) -> usize {
        self.ids.len()
    }

    pub fn date_range(&self) -> Option<(NaiveDate, NaiveDate)> {
        self.date_range
    }

    pub fn contains(&self, id: &str) -> bool {
        self.ids.contains(id)
    }

    fn file(&self) -> PathBuf {
        self.dir.join(ARTICLES_FILE)
    }

    fn note(&mut self, a: &Article) {
        self.ids.insert(a.id.clone());
        self.date_range = Some(match self.date_range {
            None => (a.published_at, a.published_at),
            Some((lo, hi)) => (lo.min(a.published_at), hi.max(a.published_at)),
        });
    }

    /// Appends articles whose url is not stored yet.
    ///
    /// Ids are recomputed from the url, and articles failing validation are
    /// rejected as invalid records.
    pub fn store_articles(&mut self, articles: impl IntoIterator<Item = Article>) -> Result<IngestStats> {
        let path = self.file();
        let file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&path)
            .map_err(|e| Error::io(&path, e))?;
        let mut w = BufWriter::new(file);
        let mut stats = IngestStats::default();
        for mut a in articles {
            let id = article_id(&a.url);
            if a.id != id {
                a.id = id;
            }
            a.validate().map_err(|message| Error::InvalidRecord {
                context: format!("article {}", a.url),
                message,
            })?;
            if self.ids.contains(&a.id) {
                stats.duplicates_skipped += 1;
                continue;
            }
            let line = serde_json::to_string(&a).map_err(|e| Error::json("article", e))?;
            writeln!(w, "{line}").map_err(|e| Error::io(&path, e))?;
            self.note(&a);
            stats.inserted += 1;
        }
        w.flush().map_err(|e| Error::io(&path, e))?;
        Ok(stats)
    }

    fn read_all(&self) -> Result<Vec<Article>> {
        let path = self.file();
        if !path.exists() {
            return Ok(Vec::new());
        }
        read_articles_jsonl(&path)
    }

    /// Articles published inside `range` (inclusive), sorted by date then id.
    pub fn load_corpus(&self, range: Option<(NaiveDate, NaiveDate)>) -> Result<Vec<Article>> {
        if let Some((lo, hi)) = range {
            if lo > hi {
                warn!("inverted date range {lo}..{hi}; returning no articles");
                return Ok(Vec::new());
            }
        }
        let mut articles: Vec<Article> = self
            .read_all()?
            .into_iter()
            .filter(|a| range.is_none_or(|(lo, hi)| a.published_at >= lo && a.published_at <= hi))
            .collect();
        if articles.is_empty() && range.is_some() {
            warn!("no articles in requested date range");
        }
        articles.sort_by(|a, b| (a.published_at, &a.id).cmp(&(b.published_at, &b.id)));
        Ok(articles)
    }
}

/// Reads a JSONL file of articles, validating each record. Invalid UTF-8 is replaced.
pub fn read_articles_jsonl(path: &Path) -> Result<Vec<Article>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut out = Vec::new();
    let mut reader = BufReader::new(file);
    let mut buf = Vec::new();
    let mut line_no = 0;
    loop {
        buf.clear();
        let n = reader.read_until(b'\n', &mut buf).map_err(|e| Error::io(path, e))?;
        if n == 0 {
            break;
        }
        line_no += 1;
        let line = String::from_utf8_lossy(&buf);
        if line.trim().is_empty() {
            continue;
        }
        let mut a: Article = parse_article_line(&line).map_err(|message| Error::Parse {
            path: path.display().to_string(),
            line: line_no,
            message,
        })?;
        if a.id.is_empty() {
            a.id = article_id(&a.url);
        }
        a.validate().map_err(|message| Error::Parse {
            path: path.display().to_string(),
            line: line_no,
            message,
        })?;
        out.push(a);
    }
    Ok(out)
}

fn parse_article_line(line: &str) -> Result<Article, String> {
    let mut value: serde_json::Value = serde_json::from_str(line).map_err(|e| e.to_string())?;
    // Imports may omit the id; it is derived from the url.
    if let Some(obj) = value.as_object_mut() {
        let url = obj.get("url").and_then(|u| u.as_str()).unwrap_or("").to_string();
        let id = article_id(&url);
        obj.insert("id".into(), serde_json::Value::String(id));
    }
    serde_json::from_value(value).map_err(|e| e.to_string())
}
