//! Minimal HTML handling: entity decoding, tag stripping and main-text extraction.

const SKIPPED: &[&str] = &[
    "script", "style", "noscript", "nav", "header", "footer", "aside", "form", "iframe", "svg",
    "select", "button", "template",
];
const VOID: &[&str] = &[
    "br", "img", "meta", "link", "input", "hr", "source", "wbr", "area", "base", "col", "embed",
    "param", "track",
];
const BLOCK: &[&str] = &[
    "p", "div", "article", "section", "main", "li", "ul", "ol", "h1", "h2", "h3", "h4", "h5",
    "h6", "br", "td", "tr", "table", "blockquote", "pre", "body", "figure", "figcaption",
];
const CONTAINERS: &[&str] = &["article", "main", "section", "div", "td", "body"];

/// Minimum non-link words for a block to count as article text.
const MIN_WORDS: usize = 10;

pub(crate) fn resolve_entity(name: &str) -> Option<&'static str> {
    Some(match name {
        "nbsp" => " ",
        "amp" => "&",
        "lt" => "<",
        "gt" => ">",
        "quot" => "\"",
        "apos" => "'",
        "mdash" => "\u{2014}",
        "ndash" => "\u{2013}",
        "hellip" => "\u{2026}",
        "lsquo" => "\u{2018}",
        "rsquo" => "\u{2019}",
        "ldquo" => "\u{201c}",
        "rdquo" => "\u{201d}",
        "rupee" | "#8377" => "\u{20b9}",
        _ => return None,
    })
}

/// Decodes named and numeric character references; unknown ones are kept verbatim.
pub fn decode_entities(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    let mut rest = s;
    while let Some(amp) = rest.find('&') {
        out.push_str(&rest[..amp]);
        let tail = &rest[amp + 1..];
        let end = tail.find(';').filter(|&i| i > 0 && i <= 10);
        let decoded = end.and_then(|i| {
            let name = &tail[..i];
            if let Some(num) = name.strip_prefix('#') {
                let code = match num.strip_prefix(['x', 'X']) {
                    Some(hex) => u32::from_str_radix(hex, 16).ok(),
                    None => num.parse().ok(),
                };
                code.and_then(char::from_u32).map(|c| (c.to_string(), i))
            } else {
                resolve_entity(name).map(|r| (r.to_string(), i))
            }
        });
        match decoded {
            Some((text, i)) => {
                out.push_str(&text);
                rest = &tail[i + 1..];
            }
            None => {
                out.push('&');
                rest = tail;
            }
        }
    }
    out.push_str(rest);
    out
}

#[derive(Debug)]
enum Piece<'a> {
    Open { name: String, self_closing: bool },
    Close(String),
    Text(&'a str),
}

fn lex(html: &str) -> Vec<Piece<'_>> {
    let mut pieces = Vec::new();
    let bytes = html.as_bytes();
    let mut i = 0;
    let mut text_start = 0;
    while i < bytes.len() {
        if bytes[i] != b'<' {
            i += 1;
            continue;
        }
        let next = bytes.get(i + 1).copied().unwrap_or(b' ');
        if !(next.is_ascii_alphabetic() || next == b'/' || next == b'!' || next == b'?') {
            i += 1;
            continue;
        }
        if text_start < i {
            pieces.push(Piece::Text(&html[text_start..i]));
        }
        if html[i..].starts_with("<!--") {
            let end = html[i + 4..].find("-->").map(|e| i + 4 + e + 3).unwrap_or(bytes.len());
            i = end;
            text_start = i;
            continue;
        }
        let end = html[i..].find('>').map(|e| i + e + 1).unwrap_or(bytes.len());
        let inner_end = if bytes[end - 1] == b'>' { end - 1 } else { end };
        let inner = html[i + 1..inner_end.max(i + 1)].trim();
        if let Some(name) = inner.strip_prefix('/') {
            pieces.push(Piece::Close(tag_name(name)));
        } else if !inner.starts_with('!') && !inner.starts_with('?') {
            let name = tag_name(inner);
            let self_closing = inner.ends_with('/') || VOID.contains(&name.as_str());
            let raw_text = name == "script" || name == "style";
            pieces.push(Piece::Open { name: name.clone(), self_closing });
            if raw_text && !self_closing {
                let close = format!("</{name}");
                let lower = html[end..].to_ascii_lowercase();
                let body_end = lower.find(&close).map(|e| end + e).unwrap_or(bytes.len());
                i = body_end;
                text_start = i;
                continue;
            }
        }
        i = end;
        text_start = i;
    }
    if text_start < bytes.len() {
        pieces.push(Piece::Text(&html[text_start..]));
    }
    pieces
}

fn tag_name(s: &str) -> String {
    s.split(|c: char| c.is_whitespace() || c == '/' || c == '>')
        .next()
        .unwrap_or("")
        .to_ascii_lowercase()
}

/// Strips tags and decodes entities; collapses whitespace to single spaces.
pub fn html_to_text(s: &str) -> String {
    if !s.contains('<') {
        return decode_entities(s).split_whitespace().collect::<Vec<_>>().join(" ");
    }
    let mut out = String::new();
    for piece in lex(s) {
        match piece {
            Piece::Open { name, .. } | Piece::Close(name) => {
                if BLOCK.contains(&name.as_str()) {
                    out.push(' ');
                }
            }
            Piece::Text(t) => out.push_str(&decode_entities(t)),
        }
    }
    out.split_whitespace().collect::<Vec<_>>().join(" ")
}

struct Segment {
    text: String,
    in_link: bool,
    /// A block boundary precedes this segment.
    block_break: bool,
}

struct Candidate {
    name: String,
    segments: std::ops::Range<usize>,
    tags: usize,
}

/// Picks the main text block of a page by link and tag density.
///
/// An `<article>` element with enough non-link text wins outright; otherwise the
/// container with the highest ratio of non-link characters to log tag count is
/// chosen. Returns `None` when no block has at least ten non-link words.
pub fn extract_main_text(html: &str) -> Option<String> {
    let mut segments: Vec<Segment> = Vec::new();
    // (name, first segment index, tag count at open)
    let mut stack: Vec<(String, usize, usize)> = Vec::new();
    let mut candidates: Vec<Candidate> = Vec::new();
    let mut skip_depth = 0usize;
    let mut link_depth = 0usize;
    let mut tags = 0usize;
    let mut pending_break = false;

    for piece in lex(html) {
        match piece {
            Piece::Open { name, self_closing } => {
                tags += 1;
                if BLOCK.contains(&name.as_str()) {
                    pending_break = true;
                }
                if self_closing {
                    continue;
                }
                if SKIPPED.contains(&name.as_str()) {
                    skip_depth += 1;
                }
                if name == "a" {
                    link_depth += 1;
                }
                stack.push((name, segments.len(), tags));
            }
            Piece::Close(name) => {
                if BLOCK.contains(&name.as_str()) {
                    pending_break = true;
                }
                let Some(pos) = stack.iter().rposition(|(n, _, _)| *n == name) else {
                    continue;
                };
                for (open, first, tags_at_open) in stack.drain(pos..).rev() {
                    if SKIPPED.contains(&open.as_str()) {
                        skip_depth = skip_depth.saturating_sub(1);
                    }
                    if open == "a" {
                        link_depth = link_depth.saturating_sub(1);
                    }
                    if CONTAINERS.contains(&open.as_str()) {
                        candidates.push(Candidate {
                            name: open,
                            segments: first..segments.len(),
                            tags: tags - tags_at_open + 1,
                        });
                    }
                }
            }
            Piece::Text(t) => {
                if skip_depth > 0 {
                    continue;
                }
                let text = decode_entities(t);
                if text.trim().is_empty() {
                    continue;
                }
                segments.push(Segment {
                    text,
                    in_link: link_depth > 0,
                    block_break: std::mem::take(&mut pending_break),
                });
            }
        }
    }
    // Unclosed containers still count.
    for (open, first, tags_at_open) in stack.into_iter().rev() {
        if CONTAINERS.contains(&open.as_str()) {
            candidates.push(Candidate {
                name: open,
                segments: first..segments.len(),
                tags: tags - tags_at_open + 1,
            });
        }
    }
    if candidates.is_empty() && !segments.is_empty() {
        candidates.push(Candidate {
            name: "document".into(),
            segments: 0..segments.len(),
            tags: tags + 1,
        });
    }

    let stats = |c: &Candidate| {
        let mut plain_chars = 0usize;
        let mut plain_words = 0usize;
        let mut link_chars = 0usize;
        for s in &segments[c.segments.clone()] {
            let n = s.text.trim().chars().count();
            if s.in_link {
                link_chars += n;
            } else {
                plain_chars += n;
                plain_words += s.text.split_whitespace().count();
            }
        }
        (plain_chars, plain_words, link_chars)
    };
    let eligible = |c: &Candidate| {
        let (plain, words, link) = stats(c);
        words >= MIN_WORDS && (link as f64) <= 0.5 * (plain + link) as f64
    };

    let best_article = candidates
        .iter()
        .filter(|c| c.name == "article" && eligible(c))
        .max_by_key(|c| stats(c).0);
    let best = best_article.or_else(|| {
        candidates
            .iter()
            .filter(|c| eligible(c))
            .map(|c| (c, stats(c).0 as f64 / (2.0 + c.tags as f64).ln()))
            .fold(None::<(&Candidate, f64)>, |acc, (c, score)| match acc {
                Some((_, s)) if s >= score => acc,
                _ => Some((c, score)),
            })
            .map(|(c, _)| c)
    })?;

    let mut paragraphs: Vec<String> = Vec::new();
    let mut current = String::new();
    for s in &segments[best.segments.clone()] {
        if s.in_link && s.block_break && s.text.split_whitespace().count() < 4 {
            continue;
        }
        if s.block_break && !current.trim().is_empty() {
            paragraphs.push(std::mem::take(&mut current));
        }
        current.push_str(&s.text);
    }
    if !current.trim().is_empty() {
        paragraphs.push(current);
    }
    let text = paragraphs
        .iter()
        .map(|p| p.split_whitespace().collect::<Vec<_>>().join(" "))
        .filter(|p| !p.is_empty())
        .collect::<Vec<_>>()
        .join("\n\n");
    (!text.is_empty()).then_some(text)
}
