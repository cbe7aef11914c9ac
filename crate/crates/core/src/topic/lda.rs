use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::matrix::{TermDocMatrix, Weighting};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LdaConfig {
    pub k: usize,
    pub alpha: f64,
    pub eta: f64,
    pub passes: usize,
    pub seed: u64,
}

impl Default for LdaConfig {
    fn default() -> Self {
        LdaConfig {
            k: 50,
            alpha: 0.0067,
            eta: 6.89,
            passes: 20,
            seed: 42,
        }
    }
}

impl LdaConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        if self.k < 2 {
            return bad(format!("K must be >= 2, got {}", self.k));
        }
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return bad(format!("alpha must be > 0, got {}", self.alpha));
        }
        if !(self.eta > 0.0 && self.eta.is_finite()) {
            return bad(format!("eta must be > 0, got {}", self.eta));
        }
        if self.passes < 1 {
            return bad("passes must be >= 1".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TopicModel {
    pub config: LdaConfig,
    pub vocab: Vec<String>,
    pub doc_ids: Vec<String>,
    /// K × |V|, row-major.
    pub phi: Vec<f64>,
    /// D × K, row-major.
    pub theta: Vec<f64>,
    /// Topic of every token, per document. Empty after loading from disk.
    pub assignments: Vec<Vec<usize>>,
}

impl TopicModel {
    pub fn k(&self) -> usize {
        self.config.k
    }

    pub fn num_docs(&self) -> usize {
        self.doc_ids.len()
    }

    pub fn phi_row(&self, topic: usize) -> &[f64] {
        let v = self.vocab.len();
        &self.phi[topic * v..(topic + 1) * v]
    }

    pub fn theta_row(&self, doc: usize) -> &[f64] {
        let k = self.k();
        &self.theta[doc * k..(doc + 1) * k]
    }

    /// Indices of the `n` most probable words of `topic` (ties by vocabulary order).
    pub fn top_word_indices(&self, topic: usize, n: usize) -> Vec<usize> {
        let row = self.phi_row(topic);
        let mut idx: Vec<usize> = (0..row.len()).collect();
        idx.sort_by(|&a, &b| row[b].total_cmp(&row[a]).then(a.cmp(&b)));
        idx.truncate(n);
        idx
    }

    pub fn top_words(&self, topic: usize, n: usize) -> Vec<(&str, f64)> {
        let row = self.phi_row(topic);
        self.top_word_indices(topic, n)
            .into_iter()
            .map(|i| (self.vocab[i].as_str(), row[i]))
            .collect()
    }

    pub fn dominant_topic(&self, doc: usize) -> usize {
        let row = self.theta_row(doc);
        (0..row.len()).fold(0, |best, t| if row[t] > row[best] { t } else { best })
    }
}

/// Sampler count tables, exposed to the per-sweep observer.
#[derive(Debug, Clone)]
pub struct GibbsState {
    pub k: usize,
    pub num_terms: usize,
    /// Term index of every token, per document.
    pub docs: Vec<Vec<usize>>,
    pub z: Vec<Vec<usize>>,
    /// D × K
    pub n_dk: Vec<u64>,
    /// K × V
    pub n_kw: Vec<u64>,
    pub n_k: Vec<u64>,
}

impl GibbsState {
    pub fn total_tokens(&self) -> u64 {
        self.docs.iter().map(|d| d.len() as u64).sum()
    }

    /// Checks that the count tables agree with the token lists and assignments.
    pub fn check_conservation(&self) -> std::result::Result<(), String> {
        let k = self.k;
        for (d, doc) in self.docs.iter().enumerate() {
            let sum: u64 = self.n_dk[d * k..(d + 1) * k].iter().sum();
            if sum != doc.len() as u64 {
                return Err(format!("doc {d}: sum n_dk = {sum}, length {}", doc.len()));
            }
        }
        let total = self.total_tokens();
        let kw: u64 = self.n_kw.iter().sum();
        let nk: u64 = self.n_k.iter().sum();
        if kw != total || nk != total {
            return Err(format!("sum n_kw = {kw}, sum n_k = {nk}, tokens {total}"));
        }
        for t in 0..k {
            let row: u64 = self.n_kw[t * self.num_terms..(t + 1) * self.num_terms].iter().sum();
            if row != self.n_k[t] {
                return Err(format!("topic {t}: sum n_kw = {row}, n_k = {}", self.n_k[t]));
            }
        }
        Ok(())
    }
}

/// Integer token counts for each document. Tf-idf weights are rounded to the
/// nearest integer, at least 1 for a nonzero entry.
fn token_lists(matrix: &TermDocMatrix) -> Vec<Vec<usize>> {
    matrix
        .rows
        .iter()
        .map(|row| {
            let mut tokens = Vec::new();
            for &(t, w) in row {
                let n = match matrix.weighting {
                    Weighting::Counts => w as usize,
                    Weighting::Tfidf => (w.round() as usize).max(1),
                };
                tokens.extend(std::iter::repeat_n(t, n));
            }
            tokens
        })
        .collect()
}

pub fn train_lda(matrix: &TermDocMatrix, config: &LdaConfig) -> Result<TopicModel> {
    train_lda_observed(matrix, config, |_, _| {})
}

/// Collapsed Gibbs sampling; `observer` sees the state after every full sweep.
pub fn train_lda_observed<F>(matrix: &TermDocMatrix, config: &LdaConfig, mut observer: F) -> Result<TopicModel>
where
    F: FnMut(usize, &GibbsState),
{
    config.validate()?;
    let k = config.k;
    let v = matrix.num_terms();
    if v == 0 || matrix.num_docs() == 0 {
        return Err(Error::EmptyMatrix(0));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let docs = token_lists(matrix);

    let mut state = GibbsState {
        k,
        num_terms: v,
        z: docs.iter().map(|d| Vec::with_capacity(d.len())).collect(),
        n_dk: vec![0; docs.len() * k],
        n_kw: vec![0; k * v],
        n_k: vec![0; k],
        docs,
    };
    for d in 0..state.docs.len() {
        for i in 0..state.docs[d].len() {
            let w = state.docs[d][i];
            let t = rng.gen_range(0..k);
            state.z[d].push(t);
            state.n_dk[d * k + t] += 1;
            state.n_kw[t * v + w] += 1;
            state.n_k[t] += 1;
        }
    }

    let v_eta = v as f64 * config.eta;
    let mut p = vec![0.0; k];
    for sweep in 0..config.passes {
        for d in 0..state.docs.len() {
            for i in 0..state.docs[d].len() {
                let w = state.docs[d][i];
                let old = state.z[d][i];
                state.n_dk[d * k + old] -= 1;
                state.n_kw[old * v + w] -= 1;
                state.n_k[old] -= 1;

                let mut total = 0.0;
                for (t, slot) in p.iter_mut().enumerate() {
                    total += (state.n_dk[d * k + t] as f64 + config.alpha)
                        * (state.n_kw[t * v + w] as f64 + config.eta)
                        / (state.n_k[t] as f64 + v_eta);
                    *slot = total;
                }
                let u = rng.gen::<f64>() * total;
                let new = p.iter().position(|&c| u < c).unwrap_or(k - 1);

                state.z[d][i] = new;
                state.n_dk[d * k + new] += 1;
                state.n_kw[new * v + w] += 1;
                state.n_k[new] += 1;
            }
        }
        observer(sweep, &state);
    }

    let mut phi = vec![0.0; k * v];
    for t in 0..k {
        let denom = state.n_k[t] as f64 + v_eta;
        for w in 0..v {
            phi[t * v + w] = (state.n_kw[t * v + w] as f64 + config.eta) / denom;
        }
    }
    let k_alpha = k as f64 * config.alpha;
    let mut theta = vec![0.0; state.docs.len() * k];
    for (d, doc) in state.docs.iter().enumerate() {
        let denom = doc.len() as f64 + k_alpha;
        for t in 0..k {
            theta[d * k + t] = (state.n_dk[d * k + t] as f64 + config.alpha) / denom;
        }
    }

    Ok(TopicModel {
        config: *config,
        vocab: matrix.vocab.clone(),
        doc_ids: matrix.doc_ids.clone(),
        phi,
        theta,
        assignments: state.z,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn matrix(rows: Vec<Vec<(usize, f64)>>, vocab: &[&str]) -> TermDocMatrix {
        TermDocMatrix {
            vocab: vocab.iter().map(|s| s.to_string()).collect(),
            doc_ids: (0..rows.len()).map(|i| i.to_string()).collect(),
            doc_freq: vec![1; vocab.len()],
            rows,
            weighting: Weighting::Counts,
        }
    }

    #[test]
    fn config_validation() {
        assert!(LdaConfig::default().validate().is_ok());
        for bad in [
            LdaConfig { k: 1, ..Default::default() },
            LdaConfig { alpha: 0.0, ..Default::default() },
            LdaConfig { eta: -1.0, ..Default::default() },
            LdaConfig { passes: 0, ..Default::default() },
        ] {
            assert!(matches!(bad.validate(), Err(Error::InvalidConfig(_))));
        }
    }

    #[test]
    fn single_word_vocabulary_is_point_mass() {
        let m = matrix(vec![vec![(0, 3.0)], vec![(0, 5.0)]], &["protest"]);
        let model = train_lda(&m, &LdaConfig { k: 2, passes: 3, ..Default::default() }).unwrap();
        assert_eq!(model.phi, vec![1.0, 1.0]);
    }

    #[test]
    fn distributions_normalized_and_counts_conserved() {
        let m = matrix(
            vec![vec![(0, 2.0), (1, 1.0)], vec![(1, 4.0), (2, 1.0)], vec![(0, 1.0), (2, 3.0)]],
            &["a", "b", "c"],
        );
        let cfg = LdaConfig { k: 3, passes: 10, seed: 5, ..Default::default() };
        let mut sweeps = 0;
        let model = train_lda_observed(&m, &cfg, |_, s| {
            s.check_conservation().unwrap();
            sweeps += 1;
        })
        .unwrap();
        assert_eq!(sweeps, 10);
        for t in 0..3 {
            assert!((model.phi_row(t).iter().sum::<f64>() - 1.0).abs() < 1e-9);
        }
        for d in 0..3 {
            assert!((model.theta_row(d).iter().sum::<f64>() - 1.0).abs() < 1e-9);
        }
        assert_eq!(model.assignments.iter().map(Vec::len).sum::<usize>(), 12);
    }

    #[test]
    fn deterministic_under_seed() {
        let m = matrix(vec![vec![(0, 2.0), (1, 3.0)], vec![(1, 1.0), (2, 4.0)]], &["a", "b", "c"]);
        let cfg = LdaConfig { k: 2, passes: 5, seed: 11, ..Default::default() };
        assert_eq!(train_lda(&m, &cfg).unwrap(), train_lda(&m, &cfg).unwrap());
    }

    #[test]
    fn tfidf_weights_rounded_with_floor_of_one() {
        let mut m = matrix(vec![vec![(0, 0.2), (1, 2.6)]], &["a", "b"]);
        m.weighting = Weighting::Tfidf;
        assert_eq!(token_lists(&m), vec![vec![0, 1, 1, 1]]);
    }
}
