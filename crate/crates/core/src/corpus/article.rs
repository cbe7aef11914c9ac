use std::hash::Hasher;

use chrono::{DateTime, NaiveDate, Utc};
use fnv::FnvHasher;
use serde::{Deserialize, Serialize};

/// One fetched news item. Field names are the on-disk JSONL schema.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Article {
    pub id: String,
    pub url: String,
    pub source: String,
    pub title: String,
    pub body: String,
    pub published_at: NaiveDate,
    pub fetched_at: DateTime<Utc>,
}

impl Article {
    /// Builds an article and derives its id from the url.
    pub fn new(
        url: impl Into<String>,
        source: impl Into<String>,
        title: impl Into<String>,
        body: impl Into<String>,
        published_at: NaiveDate,
        fetched_at: DateTime<Utc>,
    ) -> Self {
        let url = url.into();
        Article {
            id: article_id(&url),
            url,
            source: source.into(),
            title: title.into(),
            body: body.into(),
            published_at,
            fetched_at,
        }
    }

    /// Checks the type invariants; returns the first violation.
    pub fn validate(&self) -> Result<(), String> {
        if self.url.trim().is_empty() {
            return Err("url is empty".into());
        }
        let expected = article_id(&self.url);
        if self.id != expected {
            return Err(format!("id {} does not match url hash {}", self.id, expected));
        }
        if self.published_at > self.fetched_at.date_naive() {
            return Err(format!(
                "published_at {} is after fetched_at {}",
                self.published_at, self.fetched_at
            ));
        }
        Ok(())
    }
}

/// Lowercases scheme and host and strips trailing slashes.
pub fn normalize_url(url: &str) -> String {
    let url = url.trim();
    let (scheme, rest) = match url.find("://") {
        Some(i) => (&url[..i], &url[i + 3..]),
        None => ("", url),
    };
    let host_end = rest.find(['/', '?', '#']).unwrap_or(rest.len());
    let mut out = String::with_capacity(url.len());
    if !scheme.is_empty() {
        out.push_str(&scheme.to_ascii_lowercase());
        out.push_str("://");
    }
    out.push_str(&rest[..host_end].to_ascii_lowercase());
    out.push_str(&rest[host_end..]);
    while out.ends_with('/') {
        out.pop();
    }
    out
}

/// Lowercase hex of the 64-bit FNV-1a hash of the normalized url.
pub fn article_id(url: &str) -> String {
    let mut hasher = FnvHasher::default();
    hasher.write(normalize_url(url).as_bytes());
    format!("{:016x}", hasher.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use chrono::TimeZone;

    #[test]
    fn normalization_ignores_case_of_host_and_trailing_slash() {
        assert_eq!(
            normalize_url("HTTPS://WWW.Example.com/News/A/"),
            "https://www.example.com/News/A"
        );
        assert_eq!(article_id("https://example.com/x/"), article_id("HTTPS://EXAMPLE.com/x"));
        assert_ne!(article_id("https://example.com/X"), article_id("https://example.com/x"));
    }

    #[test]
    fn id_is_sixteen_hex_digits() {
        let id = article_id("https://example.com/a");
        assert_eq!(id.len(), 16);
        assert!(id.chars().all(|c| c.is_ascii_hexdigit() && !c.is_ascii_uppercase()));
    }

    #[test]
    fn empty_string_hash_is_fnv_offset_basis() {
        assert_eq!(article_id(""), "cbf29ce484222325");
    }

    #[test]
    fn validate_rejects_future_publication() {
        let fetched = Utc.with_ymd_and_hms(2017, 1, 16, 0, 0, 0).unwrap();
        let a = Article::new(
            "https://e.com/a",
            "src",
            "t",
            "b",
            NaiveDate::from_ymd_opt(2017, 1, 17).unwrap(),
            fetched,
        );
        assert!(a.validate().is_err());
        let mut b = a.clone();
        b.published_at = NaiveDate::from_ymd_opt(2017, 1, 16).unwrap();
        assert!(b.validate().is_ok());
        b.id = "0".into();
        assert!(b.validate().is_err());
    }
}
