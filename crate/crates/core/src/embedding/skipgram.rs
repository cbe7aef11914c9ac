//! Skip-gram with negative sampling.

use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::vocab::Vocabulary;
use crate::error::{Error, Result};
use crate::text::ProcessedDoc;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkipGramParams {
    pub dim: usize,
    /// Maximum context distance; the effective window is sampled in `1..=window`.
    pub window: usize,
    pub negative: usize,
    pub epochs: usize,
    pub learning_rate: f64,
    pub min_count: u64,
    /// Training fails when any vector norm exceeds this.
    pub max_norm: f64,
    /// Hogwild updates across threads; results are not reproducible.
    pub parallel: bool,
}

impl Default for SkipGramParams {
    fn default() -> Self {
        SkipGramParams {
            dim: 100,
            window: 5,
            negative: 5,
            epochs: 5,
            learning_rate: 0.025,
            min_count: 5,
            max_norm: 1e3,
            parallel: false,
        }
    }
}

impl SkipGramParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidConfig(m.to_string()));
        if self.dim < 2 {
            return bad("dim must be >= 2");
        }
        if self.window == 0 {
            return bad("window must be >= 1");
        }
        if self.epochs == 0 {
            return bad("epochs must be >= 1");
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return bad("learning_rate must be > 0");
        }
        if self.min_count == 0 {
            return bad("min_count must be >= 1");
        }
        if self.max_norm.is_nan() || self.max_norm <= 0.0 {
            return bad("max_norm must be > 0");
        }
        Ok(())
    }
}

/// Trained word vectors. `input` rows are the word embeddings; `output` rows
/// are the context vectors used during training.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingModel {
    pub vocab: Vocabulary,
    pub dim: usize,
    pub input: Vec<f64>,
    pub output: Vec<f64>,
    pub params: SkipGramParams,
    pub seed: u64,
}

impl EmbeddingModel {
    pub fn input_row(&self, idx: usize) -> &[f64] {
        &self.input[idx * self.dim..(idx + 1) * self.dim]
    }

    pub fn output_row(&self, idx: usize) -> &[f64] {
        &self.output[idx * self.dim..(idx + 1) * self.dim]
    }

    pub fn vector(&self, word: &str) -> Option<&[f64]> {
        self.vocab.index_of(word).map(|i| self.input_row(i))
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// Negative-sampling loss for one (center, context) pair:
/// `-ln σ(u_o·v_c) - Σ_k ln σ(-u_k·v_c)`.
pub fn pair_loss(center: &[f64], context: &[f64], negatives: &[&[f64]]) -> f64 {
    let mut loss = -sigmoid(dot(context, center)).ln();
    for n in negatives {
        loss -= sigmoid(-dot(n, center)).ln();
    }
    loss
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairGradient {
    pub center: Vec<f64>,
    pub context: Vec<f64>,
    pub negatives: Vec<Vec<f64>>,
}

/// Analytic gradient of [`pair_loss`] with respect to each vector.
pub fn pair_gradient(center: &[f64], context: &[f64], negatives: &[&[f64]]) -> PairGradient {
    let pos = sigmoid(dot(context, center)) - 1.0;
    let mut g_center: Vec<f64> = context.iter().map(|u| pos * u).collect();
    let g_context = center.iter().map(|v| pos * v).collect();
    let mut g_neg = Vec::with_capacity(negatives.len());
    for n in negatives {
        let s = sigmoid(dot(n, center));
        for (g, u) in g_center.iter_mut().zip(n.iter()) {
            *g += s * u;
        }
        g_neg.push(center.iter().map(|v| s * v).collect());
    }
    PairGradient {
        center: g_center,
        context: g_context,
        negatives: g_neg,
    }
}

/// One gradient step on a single target: updates `target` in place and
/// accumulates the center-vector step into `center_step`.
#[inline]
fn step_target(center: &[f64], center_step: &mut [f64], target: &mut [f64], label: f64, lr: f64) {
    let g = (label - sigmoid(dot(center, target))) * lr;
    for ((acc, t), c) in center_step.iter_mut().zip(target.iter_mut()).zip(center) {
        *acc += g * *t;
        *t += g * c;
    }
}

/// Cumulative unigram^0.75 table for drawing negatives.
pub(crate) struct NoiseTable {
    cumulative: Vec<f64>,
}

impl NoiseTable {
    pub(crate) fn new(counts: &[u64]) -> Self {
        let mut acc = 0.0;
        let mut cumulative: Vec<f64> = counts
            .iter()
            .map(|&c| {
                acc += (c as f64).powf(0.75);
                acc
            })
            .collect();
        for c in &mut cumulative {
            *c /= acc;
        }
        NoiseTable { cumulative }
    }

    pub(crate) fn sample<R: Rng>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.gen();
        self.cumulative
            .partition_point(|&c| c <= u)
            .min(self.cumulative.len() - 1)
    }
}

fn encode_docs(docs: &[ProcessedDoc], vocab: &Vocabulary) -> Vec<Vec<usize>> {
    docs.iter()
        .map(|d| d.bag_tokens.iter().filter_map(|w| vocab.index_of(w)).collect())
        .filter(|s: &Vec<usize>| !s.is_empty())
        .collect()
}

/// Trains skip-gram vectors over the bag tokens of `docs`.
///
/// Inputs start uniform in `[-0.5/d, 0.5/d)`, outputs at zero. The learning
/// rate decays linearly to 1e-4 of its initial value. In the default
/// sequential mode the same seed gives bit-identical vectors.
pub fn train_skipgram(
    docs: &[ProcessedDoc],
    vocab: &Vocabulary,
    params: &SkipGramParams,
    seed: u64,
) -> Result<EmbeddingModel> {
    params.validate()?;
    if vocab.is_empty() {
        return Err(Error::EmptyVocabulary(params.min_count as usize));
    }
    let d = params.dim;
    let n = vocab.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let input: Vec<f64> = (0..n * d).map(|_| (rng.gen::<f64>() - 0.5) / d as f64).collect();
    let output = vec![0.0; n * d];
    let mut model = EmbeddingModel {
        vocab: vocab.clone(),
        dim: d,
        input,
        output,
        params: params.clone(),
        seed,
    };
    let sentences = encode_docs(docs, vocab);
    let noise = NoiseTable::new(vocab.counts());
    let total_words: usize = sentences.iter().map(Vec::len).sum::<usize>() * params.epochs;

    if params.parallel {
        train_hogwild(&mut model, &sentences, &noise, total_words, seed)?;
    } else {
        let mut processed = 0usize;
        let mut center_step = vec![0.0; d];
        for epoch in 0..params.epochs {
            for sent in &sentences {
                for (pos, &center) in sent.iter().enumerate() {
                    let lr = decayed_lr(params.learning_rate, processed, total_words);
                    processed += 1;
                    let shrink = rng.gen_range(0..params.window);
                    let reach = params.window - shrink;
                    let lo = pos.saturating_sub(reach);
                    let hi = (pos + reach).min(sent.len() - 1);
                    for (ctx_pos, &context) in sent.iter().enumerate().take(hi + 1).skip(lo) {
                        if ctx_pos == pos {
                            continue;
                        }
                        center_step.iter_mut().for_each(|x| *x = 0.0);
                        let c = &model.input[center * d..(center + 1) * d];
                        step_target(c, &mut center_step, &mut model.output[context * d..(context + 1) * d], 1.0, lr);
                        for _ in 0..params.negative {
                            let neg = noise.sample(&mut rng);
                            if neg == context {
                                continue;
                            }
                            step_target(c, &mut center_step, &mut model.output[neg * d..(neg + 1) * d], 0.0, lr);
                        }
                        for (v, s) in model.input[center * d..(center + 1) * d].iter_mut().zip(&center_step) {
                            *v += s;
                        }
                    }
                }
            }
            check_divergence(&model, epoch)?;
        }
    }
    Ok(model)
}

fn decayed_lr(lr0: f64, processed: usize, total: usize) -> f64 {
    let frac = 1.0 - processed as f64 / (total.max(1) as f64 + 1.0);
    lr0 * frac.max(1e-4)
}

fn check_divergence(model: &EmbeddingModel, epoch: usize) -> Result<()> {
    check_norms(&model.input, &model.output, model.dim, model.params.max_norm, epoch)
}

fn check_norms(input: &[f64], output: &[f64], dim: usize, bound: f64, epoch: usize) -> Result<()> {
    let norm = input
        .chunks(dim)
        .chain(output.chunks(dim))
        .map(|r| dot(r, r).sqrt())
        .fold(0.0, |m: f64, n| if n.is_nan() || n > m { n } else { m });
    if !norm.is_finite() || norm > bound {
        return Err(Error::Divergence { norm, bound, epoch });
    }
    Ok(())
}

/// Lock-free shared matrix; concurrent updates may be lost (hogwild).
struct SharedMatrix {
    cells: Vec<AtomicU64>,
    dim: usize,
}

impl SharedMatrix {
    fn new(values: &[f64], dim: usize) -> Self {
        SharedMatrix {
            cells: values.iter().map(|v| AtomicU64::new(v.to_bits())).collect(),
            dim,
        }
    }

    fn load(&self, row: usize, out: &mut [f64]) {
        for (o, c) in out.iter_mut().zip(&self.cells[row * self.dim..(row + 1) * self.dim]) {
            *o = f64::from_bits(c.load(Ordering::Relaxed));
        }
    }

    fn store(&self, row: usize, vals: &[f64]) {
        for (v, c) in vals.iter().zip(&self.cells[row * self.dim..(row + 1) * self.dim]) {
            c.store(v.to_bits(), Ordering::Relaxed);
        }
    }

    fn into_vec(self) -> Vec<f64> {
        self.cells.into_iter().map(|c| f64::from_bits(c.into_inner())).collect()
    }
}

fn train_hogwild(
    model: &mut EmbeddingModel,
    sentences: &[Vec<usize>],
    noise: &NoiseTable,
    total_words: usize,
    seed: u64,
) -> Result<()> {
    let d = model.dim;
    let params = model.params.clone();
    let input = SharedMatrix::new(&model.input, d);
    let output = SharedMatrix::new(&model.output, d);
    let processed = AtomicUsize::new(0);
    let threads = rayon::current_num_threads().max(1);
    let chunk = sentences.len().div_ceil(threads).max(1);

    for epoch in 0..params.epochs {
        sentences.par_chunks(chunk).enumerate().for_each(|(t, part)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream((epoch * threads + t) as u64 + 1);
            let mut center_vec = vec![0.0; d];
            let mut target = vec![0.0; d];
            let mut center_step = vec![0.0; d];
            for sent in part {
                for (pos, &center) in sent.iter().enumerate() {
                    let lr = decayed_lr(params.learning_rate, processed.fetch_add(1, Ordering::Relaxed), total_words);
                    let reach = params.window - rng.gen_range(0..params.window);
                    let lo = pos.saturating_sub(reach);
                    let hi = (pos + reach).min(sent.len() - 1);
                    for (ctx_pos, &context) in sent.iter().enumerate().take(hi + 1).skip(lo) {
                        if ctx_pos == pos {
                            continue;
                        }
                        input.load(center, &mut center_vec);
                        center_step.iter_mut().for_each(|x| *x = 0.0);
                        let mut train = |row: usize, label: f64, step: &mut [f64]| {
                            output.load(row, &mut target);
                            step_target(&center_vec, step, &mut target, label, lr);
                            output.store(row, &target);
                        };
                        train(context, 1.0, &mut center_step);
                        for _ in 0..params.negative {
                            let neg = noise.sample(&mut rng);
                            if neg != context {
                                train(neg, 0.0, &mut center_step);
                            }
                        }
                        for (v, s) in center_vec.iter_mut().zip(&center_step) {
                            *v += s;
                        }
                        input.store(center, &center_vec);
                    }
                }
            }
        });
        let snapshot_in: Vec<f64> = input.cells.iter().map(|c| f64::from_bits(c.load(Ordering::Relaxed))).collect();
        let snapshot_out: Vec<f64> = output.cells.iter().map(|c| f64::from_bits(c.load(Ordering::Relaxed))).collect();
        check_norms(&snapshot_in, &snapshot_out, d, params.max_norm, epoch)?;
    }
    model.input = input.into_vec();
    model.output = output.into_vec();
    Ok(())
}
