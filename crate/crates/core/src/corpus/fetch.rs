use std::collections::BTreeMap;
use std::io::Read;
use std::path::Path;
use std::thread;
use std::time::Duration;

use chrono::{DateTime, Utc};
use log::{debug, warn};
use rayon::prelude::*;

use super::article::Article;
use super::feed::{parse_feed, FeedItem};
use super::html::extract_main_text;
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct FetchConfig {
    /// Attempts per url, including the first.
    pub attempts: u32,
    pub timeout: Duration,
    pub backoff: Duration,
    pub max_body_bytes: u64,
}

impl Default for FetchConfig {
    fn default() -> Self {
        FetchConfig {
            attempts: 3,
            timeout: Duration::from_secs(20),
            backoff: Duration::from_millis(500),
            max_body_bytes: 8 << 20,
        }
    }
}

/// One line of a feeds file: `source<TAB>location`, or a bare location.
/// Locations are http(s) urls or local file paths.
#[derive(Debug, Clone, PartialEq)]
pub struct FeedSource {
    pub source: String,
    pub location: String,
}

pub fn parse_feed_list(text: &str) -> Vec<FeedSource> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| match l.split_once('\t') {
            Some((source, loc)) => FeedSource {
                source: source.trim().to_string(),
                location: loc.trim().to_string(),
            },
            None => FeedSource {
                source: host_of(l).unwrap_or("local").to_string(),
                location: l.to_string(),
            },
        })
        .collect()
}

fn is_http(url: &str) -> bool {
    let lower = url.to_ascii_lowercase();
    lower.starts_with("http://") || lower.starts_with("https://")
}

fn host_of(url: &str) -> Option<&str> {
    let rest = url.split_once("://")?.1;
    Some(rest.split(['/', '?', '#', ':']).next().unwrap_or(rest))
}

/// GETs a url, retrying network failures with linear backoff.
pub fn http_get(url: &str, cfg: &FetchConfig) -> Result<Vec<u8>> {
    if !is_http(url) {
        return Err(Error::Network {
            url: url.to_string(),
            attempts: 0,
            message: "not an http(s) url".into(),
        });
    }
    let agent = ureq::AgentBuilder::new().timeout(cfg.timeout).build();
    let attempts = cfg.attempts.max(1);
    let mut last = String::new();
    for attempt in 1..=attempts {
        match agent.get(url).call() {
            Ok(resp) => {
                let mut buf = Vec::new();
                resp.into_reader()
                    .take(cfg.max_body_bytes)
                    .read_to_end(&mut buf)
                    .map_err(|e| Error::Network {
                        url: url.to_string(),
                        attempts: attempt,
                        message: e.to_string(),
                    })?;
                return Ok(buf);
            }
            // Client errors will not improve on retry.
            Err(ureq::Error::Status(code, _)) if (400..500).contains(&code) => {
                return Err(Error::Network {
                    url: url.to_string(),
                    attempts: attempt,
                    message: format!("HTTP {code}"),
                });
            }
            Err(e) => {
                last = e.to_string();
                debug!("attempt {attempt}/{attempts} for {url} failed: {last}");
                if attempt < attempts {
                    thread::sleep(cfg.backoff * attempt);
                }
            }
        }
    }
    Err(Error::Network {
        url: url.to_string(),
        attempts,
        message: last,
    })
}

/// Downloads a page and returns its main article text.
pub fn fetch_article_body(url: &str, cfg: &FetchConfig) -> Result<String> {
    let bytes = http_get(url, cfg)?;
    extract_main_text(&String::from_utf8_lossy(&bytes))
        .ok_or_else(|| Error::ExtractionEmpty(url.to_string()))
}

fn read_location(location: &str, cfg: &FetchConfig) -> Result<Vec<u8>> {
    if is_http(location) {
        http_get(location, cfg)
    } else {
        std::fs::read(location).map_err(|e| Error::io(Path::new(location), e))
    }
}

#[derive(Debug, Default, Clone, PartialEq)]
pub struct FetchReport {
    pub articles: Vec<Article>,
    pub feeds_failed: usize,
    pub items_skipped: usize,
}

/// Fetches every feed and resolves item bodies.
///
/// Bodies come from `content:encoded`/Atom content when present, otherwise from
/// the linked page, falling back to the summary. Hosts are processed in parallel;
/// requests to one host are sequential.
pub fn fetch_feeds(feeds: &[FeedSource], cfg: &FetchConfig, now: DateTime<Utc>) -> FetchReport {
    let mut by_host: BTreeMap<String, Vec<&FeedSource>> = BTreeMap::new();
    for f in feeds {
        let key = host_of(&f.location).unwrap_or("").to_ascii_lowercase();
        by_host.entry(key).or_default().push(f);
    }
    let groups: Vec<_> = by_host.into_values().collect();
    let results: Vec<FetchReport> = groups
        .par_iter()
        .map(|group| {
            let mut report = FetchReport::default();
            for feed in group {
                let parsed = read_location(&feed.location, cfg).and_then(|b| parse_feed(&b));
                let parsed = match parsed {
                    Ok(p) => p,
                    Err(e) => {
                        warn!("feed {} failed: {e}", feed.location);
                        report.feeds_failed += 1;
                        continue;
                    }
                };
                report.items_skipped += parsed.skipped_without_url;
                for item in parsed.items {
                    match resolve_item(item, &feed.source, cfg, now) {
                        Some(a) => report.articles.push(a),
                        None => report.items_skipped += 1,
                    }
                }
            }
            report
        })
        .collect();

    let mut out = FetchReport::default();
    for r in results {
        out.articles.extend(r.articles);
        out.feeds_failed += r.feeds_failed;
        out.items_skipped += r.items_skipped;
    }
    out.articles.sort_by(|a, b| a.id.cmp(&b.id));
    out
}

fn resolve_item(item: FeedItem, source: &str, cfg: &FetchConfig, now: DateTime<Utc>) -> Option<Article> {
    let body = match item.content {
        Some(c) => c,
        None => match fetch_article_body(&item.url, cfg) {
            Ok(b) => b,
            Err(e) => {
                warn!("body for {}: {e}", item.url);
                item.summary.clone()?
            }
        },
    };
    let today = now.date_naive();
    let published = item.published_at.unwrap_or(today).min(today);
    Some(Article::new(item.url, source, item.title, body, published, now))
}
