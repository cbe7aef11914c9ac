//! Forecasting planned civil-unrest events from news articles.
//!
//! The pipeline filters event-relevant articles with learned keywords and a
//! topic model, extracts the entities actually involved in each event, resolves
//! future date mentions, and emits forecast records.

pub mod corpus;
pub mod embedding;
pub mod error;
pub mod eval;
pub mod jsonl;
pub mod ner;
pub mod pipeline;
pub mod related;
pub mod relation;
pub mod temporal;
pub mod text;
pub mod topic;

pub use error::{Error, Result};
