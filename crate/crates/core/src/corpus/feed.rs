//! RSS 2.0 and Atom feed parsing.

use chrono::{DateTime, NaiveDate, Utc};
use quick_xml::events::{BytesStart, Event};
use quick_xml::Reader;

use super::html;
use crate::error::{Error, Result};

/// A feed entry before its body has been resolved.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FeedItem {
    pub url: String,
    pub title: String,
    pub published_at: Option<NaiveDate>,
    /// Plain-text summary (`description` / `summary`).
    pub summary: Option<String>,
    /// Plain-text full content (`content:encoded` / Atom `content`).
    pub content: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ParsedFeed {
    pub items: Vec<FeedItem>,
    /// Items dropped because they had no link.
    pub skipped_without_url: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Flavor {
    Rss,
    Atom,
}

#[derive(Default)]
struct ItemBuilder {
    url: Option<String>,
    fallback_url: Option<String>,
    title: String,
    pub_date: Option<NaiveDate>,
    updated: Option<NaiveDate>,
    summary: Option<String>,
    content: Option<String>,
}

impl ItemBuilder {
    fn finish(self) -> Option<FeedItem> {
        let url = self.url.or(self.fallback_url)?;
        if url.trim().is_empty() {
            return None;
        }
        Some(FeedItem {
            url: url.trim().to_string(),
            title: collapse_ws(&self.title),
            published_at: self.pub_date.or(self.updated),
            summary: self.summary.map(|s| html::html_to_text(&s)).filter(|s| !s.is_empty()),
            content: self.content.map(|s| html::html_to_text(&s)).filter(|s| !s.is_empty()),
        })
    }
}

/// Parses an RSS 2.0 or Atom document into partial articles.
pub fn parse_feed(feed_bytes: &[u8]) -> Result<ParsedFeed> {
    let mut reader = Reader::from_reader(feed_bytes);
    reader.config_mut().trim_text(false);

    let mut flavor: Option<Flavor> = None;
    let mut stack: Vec<Vec<u8>> = Vec::new();
    let mut item: Option<ItemBuilder> = None;
    let mut item_depth = 0usize;
    // Field currently being collected (direct child of the item) and its text.
    let mut field: Option<Vec<u8>> = None;
    let mut text = String::new();
    let mut out = ParsedFeed::default();

    let malformed = |reader: &Reader<&[u8]>, message: String| Error::MalformedXml {
        offset: reader.error_position(),
        message,
    };

    loop {
        let event = reader
            .read_event()
            .map_err(|e| malformed(&reader, e.to_string()))?;
        match event {
            Event::Start(e) => {
                let name = e.name().as_ref().to_vec();
                if flavor.is_none() {
                    flavor = Some(root_flavor(&name)?);
                }
                stack.push(name.clone());
                let depth = stack.len();
                let is_item_tag = match flavor {
                    Some(Flavor::Rss) => name == b"item",
                    Some(Flavor::Atom) => e.local_name().as_ref() == b"entry",
                    None => false,
                };
                if item.is_none() && is_item_tag {
                    item = Some(ItemBuilder::default());
                    item_depth = depth;
                } else if let Some(it) = item.as_mut() {
                    if depth == item_depth + 1 {
                        if flavor == Some(Flavor::Atom) && e.local_name().as_ref() == b"link" {
                            take_atom_link(it, &e);
                        }
                        field = Some(name);
                        text.clear();
                    } else if field.is_some() {
                        // Nested markup inside a field (e.g. xhtml content) is kept as text.
                        text.push(' ');
                    }
                }
            }
            Event::Empty(e) => {
                if flavor.is_none() {
                    // A self-closing root holds no items.
                    root_flavor(e.name().as_ref())?;
                    return Ok(out);
                }
                if let Some(it) = item.as_mut() {
                    if stack.len() == item_depth
                        && flavor == Some(Flavor::Atom)
                        && e.local_name().as_ref() == b"link"
                    {
                        take_atom_link(it, &e);
                    }
                }
            }
            Event::Text(t) => {
                if field.is_some() {
                    let s = t
                        .unescape_with(html::resolve_entity)
                        .map(|c| c.into_owned())
                        .unwrap_or_else(|_| String::from_utf8_lossy(&t).into_owned());
                    text.push_str(&s);
                }
            }
            Event::CData(t) => {
                if field.is_some() {
                    text.push_str(&String::from_utf8_lossy(&t));
                }
            }
            Event::End(e) => {
                let depth = stack.len();
                match stack.pop() {
                    Some(open) if open == e.name().as_ref() => {}
                    Some(open) => {
                        return Err(malformed(
                            &reader,
                            format!(
                                "expected </{}>, found </{}>",
                                String::from_utf8_lossy(&open),
                                String::from_utf8_lossy(e.name().as_ref())
                            ),
                        ))
                    }
                    None => return Err(malformed(&reader, "unbalanced end tag".into())),
                }
                if item.is_some() && depth == item_depth + 1 {
                    if let (Some(name), Some(it)) = (field.take(), item.as_mut()) {
                        assign_field(it, flavor.unwrap_or(Flavor::Rss), &name, &text);
                    }
                    text.clear();
                } else if item.is_some() && depth == item_depth {
                    match item.take().and_then(ItemBuilder::finish) {
                        Some(fi) => out.items.push(fi),
                        None => out.skipped_without_url += 1,
                    }
                }
            }
            Event::Eof => break,
            _ => {}
        }
    }

    if flavor.is_none() {
        return Err(Error::MalformedXml {
            offset: reader.buffer_position(),
            message: "document has no root element".into(),
        });
    }
    if let Some(open) = stack.last() {
        return Err(Error::MalformedXml {
            offset: reader.buffer_position(),
            message: format!(
                "unexpected end of document inside <{}>",
                String::from_utf8_lossy(open)
            ),
        });
    }
    Ok(out)
}

fn root_flavor(name: &[u8]) -> Result<Flavor> {
    let local = name.rsplit(|&b| b == b':').next().unwrap_or(name);
    match local {
        b"rss" => Ok(Flavor::Rss),
        b"feed" => Ok(Flavor::Atom),
        other => Err(Error::UnsupportedFeed(String::from_utf8_lossy(other).into_owned())),
    }
}

fn take_atom_link(it: &mut ItemBuilder, e: &BytesStart<'_>) {
    let mut href = None;
    let mut rel = None;
    for attr in e.attributes().flatten() {
        let value = attr
            .unescape_value()
            .map(|v| v.into_owned())
            .unwrap_or_else(|_| String::from_utf8_lossy(&attr.value).into_owned());
        match attr.key.as_ref() {
            b"href" => href = Some(value),
            b"rel" => rel = Some(value),
            _ => {}
        }
    }
    let Some(href) = href else { return };
    match rel.as_deref() {
        None | Some("alternate") => {
            if it.url.is_none() {
                it.url = Some(href);
            }
        }
        _ => {
            if it.fallback_url.is_none() {
                it.fallback_url = Some(href);
            }
        }
    }
}

fn assign_field(it: &mut ItemBuilder, flavor: Flavor, name: &[u8], text: &str) {
    let value = text.trim();
    match (flavor, name) {
        (_, b"title") => it.title = value.to_string(),
        (Flavor::Rss, b"link") => {
            if !value.is_empty() {
                it.url = Some(value.to_string());
            }
        }
        (Flavor::Rss, b"pubDate") | (Flavor::Rss, b"dc:date") => {
            if it.pub_date.is_none() {
                it.pub_date = parse_feed_date(value);
            }
        }
        (Flavor::Rss, b"description") => it.summary = Some(value.to_string()),
        (Flavor::Rss, b"content:encoded") => it.content = Some(value.to_string()),
        (Flavor::Atom, n) => match n.rsplit(|&b| b == b':').next().unwrap_or(n) {
            b"published" => it.pub_date = parse_feed_date(value),
            b"updated" => it.updated = parse_feed_date(value),
            b"summary" => it.summary = Some(value.to_string()),
            b"content" => it.content = Some(value.to_string()),
            b"title" => it.title = value.to_string(),
            _ => {}
        },
        _ => {}
    }
}

/// Accepts RFC 2822, RFC 3339 and bare ISO dates; returns the UTC calendar date.
pub fn parse_feed_date(s: &str) -> Option<NaiveDate> {
    let s = s.trim();
    if let Ok(dt) = DateTime::parse_from_rfc2822(s) {
        return Some(dt.with_timezone(&Utc).date_naive());
    }
    if let Ok(dt) = DateTime::parse_from_rfc3339(s) {
        return Some(dt.with_timezone(&Utc).date_naive());
    }
    for fmt in ["%a, %d %b %Y %H:%M:%S %Z", "%d %b %Y %H:%M:%S %z"] {
        if let Ok(dt) = DateTime::parse_from_str(s, fmt) {
            return Some(dt.with_timezone(&Utc).date_naive());
        }
    }
    NaiveDate::parse_from_str(s.get(..10).unwrap_or(s), "%Y-%m-%d").ok()
}

fn collapse_ws(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}
