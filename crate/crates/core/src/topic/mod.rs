//! Keyword filtering followed by LDA-based topic filtering.

mod filter;
pub mod io;
mod lda;
mod matrix;

pub use filter::{filter_by_topic, keyword_filter, relevant_topics};
pub use lda::{train_lda, train_lda_observed, GibbsState, LdaConfig, TopicModel};
pub use matrix::{build_term_doc_matrix, TermDocMatrix, Weighting};

pub const DEFAULT_MIN_DOC_FREQ: usize = 5;
pub const DEFAULT_TOP_N: usize = 10;
pub const DEFAULT_THRESHOLD: f64 = 0.4;
