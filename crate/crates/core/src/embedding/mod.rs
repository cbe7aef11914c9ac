//! Skip-gram word embeddings and seed-keyword expansion.

pub mod io;
mod keywords;
mod skipgram;
mod vocab;

pub use keywords::{cosine, expand_keywords, most_similar, KeywordSet};
pub use skipgram::{pair_gradient, pair_loss, sigmoid, train_skipgram, EmbeddingModel, PairGradient, SkipGramParams};
pub use vocab::{build_vocabulary, Vocabulary};

/// Seed words for the civil-unrest domain, in lemma form.
pub const DEFAULT_SEEDS: [&str; 2] = ["protest", "demonstration"];

/// Similarity cutoff for keyword expansion.
pub const DEFAULT_CUTOFF: f64 = 0.68;
