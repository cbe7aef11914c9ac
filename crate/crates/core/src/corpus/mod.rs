//! Corpus building: feed parsing, page text extraction and the JSONL article store.

mod article;
mod feed;
mod fetch;
pub mod html;
mod store;

pub use article::{article_id, normalize_url, Article};
pub use feed::{parse_feed, parse_feed_date, FeedItem, ParsedFeed};
pub use fetch::{fetch_article_body, fetch_feeds, http_get, parse_feed_list, FetchConfig, FeedSource, FetchReport};
pub use store::{read_articles_jsonl, CorpusStore, IngestStats, ARTICLES_FILE};
