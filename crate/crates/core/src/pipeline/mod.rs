//! Full-run orchestration: config, seeds, stages and the run report.

mod config;
mod seed;

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::time::Instant;

use chrono::NaiveDate;
use log::info;
use serde::{Deserialize, Serialize};

pub use config::{validate_config, PipelineConfig, Problem};
pub use seed::SeedSplitter;

use crate::corpus::{Article, CorpusStore};
use crate::embedding::{build_vocabulary, expand_keywords, io as emb_io, train_skipgram, KeywordSet};
use crate::error::{Error, Result};
use crate::eval::{
    assemble_forecasts, evaluate_binary, evaluate_relations, judge_triplets, load_gold, load_gold_triplets,
    write_forecasts_csv, write_forecasts_jsonl, EvalReport, ForecastRecord,
};
use crate::jsonl::write_jsonl;
use crate::ner::{tag_entities, EntitySpan, Gazetteer};
use crate::related::{default_patterns, extract_related, extract_title_entities, load_patterns, RelatedEntitySet, TriggerPattern};
use crate::relation::{document_relations, Origin, RelationTriplet, VerbLexicon};
use crate::temporal::NormalizeOptions;
use crate::text::{preprocess_document, ProcessedDoc, StopWords};
use crate::topic::{build_term_doc_matrix, filter_by_topic, io as topic_io, keyword_filter, relevant_topics, train_lda};

/// A preprocessed article with its entity spans (tag output line).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaggedDoc {
    pub article_id: String,
    pub url: String,
    pub title: String,
    pub published_at: NaiveDate,
    pub doc: ProcessedDoc,
    pub entities: Vec<EntitySpan>,
}

/// Lexicons and pattern files used by the extraction stages.
#[derive(Debug, Clone)]
pub struct Resources {
    pub stopwords: StopWords,
    pub gazetteer: Gazetteer,
    pub lexicon: VerbLexicon,
    pub patterns: Vec<TriggerPattern>,
}

impl Resources {
    pub fn bundled() -> Self {
        Resources {
            stopwords: StopWords::bundled(),
            gazetteer: Gazetteer::bundled(),
            lexicon: VerbLexicon::bundled(),
            patterns: default_patterns(),
        }
    }

    pub fn from_config(config: &PipelineConfig) -> Result<Self> {
        Ok(Resources {
            stopwords: config.stopwords.as_deref().map_or_else(|| Ok(StopWords::bundled()), StopWords::load)?,
            gazetteer: config.gazetteer.as_deref().map_or_else(|| Ok(Gazetteer::bundled()), Gazetteer::load_dir)?,
            lexicon: config.verbs.as_deref().map_or_else(|| Ok(VerbLexicon::bundled()), VerbLexicon::load)?,
            patterns: config.patterns.as_deref().map_or_else(|| Ok(default_patterns()), load_patterns)?,
        })
    }
}

pub fn tag_article(article: &Article, res: &Resources) -> TaggedDoc {
    let doc = preprocess_document(article, &res.stopwords);
    let entities = tag_entities(&doc, &res.gazetteer);
    TaggedDoc {
        article_id: article.id.clone(),
        url: article.url.clone(),
        title: article.title.clone(),
        published_at: article.published_at,
        doc,
        entities,
    }
}

/// Body triplets followed by title triplets.
pub fn tagged_relations(tagged: &TaggedDoc, res: &Resources) -> Vec<RelationTriplet> {
    let mut out = document_relations(&tagged.doc, &tagged.entities, &res.lexicon);
    out.extend(extract_title_entities(&tagged.article_id, &tagged.title, &res.gazetteer, &res.lexicon));
    out
}

/// Groups a flat triplet list by document (first-seen order) and runs the
/// related-entity extractor on each.
pub fn related_by_doc(triplets: &[RelationTriplet], patterns: &[TriggerPattern], window: usize) -> Vec<RelatedEntitySet> {
    let mut order: Vec<&str> = Vec::new();
    let mut groups: BTreeMap<&str, (Vec<RelationTriplet>, Vec<RelationTriplet>)> = BTreeMap::new();
    for t in triplets {
        let g = groups.entry(&t.doc_id).or_insert_with(|| {
            order.push(&t.doc_id);
            Default::default()
        });
        match t.origin {
            Origin::Body => g.0.push(t.clone()),
            Origin::Title => g.1.push(t.clone()),
        }
    }
    order
        .into_iter()
        .map(|id| {
            let (body, title) = &groups[id];
            let mut set = extract_related(body, title, patterns, window);
            set.doc_id = id.to_string();
            set
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageReport {
    pub stage: String,
    /// What `count` counts: documents, keywords, triplets, ...
    pub unit: String,
    pub count: usize,
    pub elapsed_ms: u64,
    pub outputs: Vec<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageFailure {
    pub stage: String,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineReport {
    pub seed: u64,
    pub stage_seeds: BTreeMap<String, u64>,
    pub stages: Vec<StageReport>,
    pub relevance: Option<EvalReport>,
    pub relations: Option<EvalReport>,
    pub failed: Option<StageFailure>,
}

/// One `(stage, unit, count)` row of a report, the part that is stable across runs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageCount {
    pub stage: String,
    pub unit: String,
    pub count: usize,
}

impl PipelineReport {
    pub fn counts(&self) -> Vec<StageCount> {
        self.stages
            .iter()
            .map(|s| StageCount { stage: s.stage.clone(), unit: s.unit.clone(), count: s.count })
            .collect()
    }

    pub fn count_of(&self, stage: &str) -> Option<usize> {
        self.stages.iter().find(|s| s.stage == stage).map(|s| s.count)
    }
}

pub const REPORT_FILE: &str = "report.json";
pub const FORECASTS_FILE: &str = "forecasts.jsonl";

struct Runner {
    out_dir: PathBuf,
    report: PipelineReport,
}

impl Runner {
    fn path(&self, name: &str) -> PathBuf {
        self.out_dir.join(name)
    }

    fn stage<T>(
        &mut self,
        name: &'static str,
        unit: &str,
        f: impl FnOnce(&Self) -> Result<(T, usize, Vec<PathBuf>)>,
    ) -> Result<T> {
        let start = Instant::now();
        match f(self) {
            Ok((value, count, outputs)) => {
                let elapsed_ms = start.elapsed().as_millis() as u64;
                info!("stage {name}: {count} {unit} in {elapsed_ms} ms");
                self.report.stages.push(StageReport { stage: name.into(), unit: unit.into(), count, elapsed_ms, outputs });
                Ok(value)
            }
            Err(e) => {
                self.report.failed = Some(StageFailure { stage: name.into(), error: e.to_string() });
                Err(Error::Stage { stage: name, source: Box::new(e) })
            }
        }
    }

    fn write_report(&self) -> Result<()> {
        let path = self.path(REPORT_FILE);
        let text = serde_json::to_string_pretty(&self.report).map_err(|e| Error::json("report", e))?;
        fs::write(&path, text + "\n").map_err(|e| Error::io(&path, e))
    }
}

fn write_ids(path: &Path, ids: impl IntoIterator<Item = impl AsRef<str>>) -> Result<()> {
    let text: String = ids.into_iter().map(|id| format!("{}\n", id.as_ref())).collect();
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Runs every stage in order, persisting each stage's output under `out_dir`
/// and finishing with `report.json`. A failing stage aborts the run; outputs
/// written so far and a report naming the failed stage are kept.
pub fn run_pipeline(config: &PipelineConfig) -> Result<PipelineReport> {
    let problems = validate_config(config);
    if !problems.is_empty() {
        let list: Vec<String> = problems.iter().map(Problem::to_string).collect();
        return Err(Error::InvalidConfig(list.join("; ")));
    }
    fs::create_dir_all(&config.out_dir).map_err(|e| Error::io(&config.out_dir, e))?;
    let seeds = SeedSplitter::new(config.seed);
    info!("pipeline seed {}", config.seed);
    let stage_seeds: BTreeMap<String, u64> =
        ["embedding", "lda"].iter().map(|s| (s.to_string(), seeds.seed(s))).collect();
    let mut r = Runner {
        out_dir: config.out_dir.clone(),
        report: PipelineReport {
            seed: config.seed,
            stage_seeds: stage_seeds.clone(),
            stages: Vec::new(),
            relevance: None,
            relations: None,
            failed: None,
        },
    };
    let conf_path = r.path("config.conf");
    fs::write(&conf_path, config.to_kv()).map_err(|e| Error::io(&conf_path, e))?;

    let result = run_stages(config, &stage_seeds, &mut r);
    r.write_report()?;
    result.map(|_| r.report)
}

fn run_stages(config: &PipelineConfig, stage_seeds: &BTreeMap<String, u64>, r: &mut Runner) -> Result<()> {
    let res = r.stage("resources", "patterns", |_| {
        let res = Resources::from_config(config)?;
        let n = res.patterns.len();
        Ok((res, n, vec![]))
    })?;

    let articles = r.stage("load", "documents", |_| {
        let store = CorpusStore::open_existing(&config.store)?;
        let articles = store.load_corpus(None)?;
        let n = articles.len();
        Ok((articles, n, vec![]))
    })?;

    let docs: Vec<ProcessedDoc> = r.stage("preprocess", "documents", |r| {
        if articles.is_empty() {
            return Err(Error::EmptyCorpus(config.store.clone()));
        }
        let docs: Vec<ProcessedDoc> = articles.iter().map(|a| preprocess_document(a, &res.stopwords)).collect();
        let out = r.path("preprocessed.jsonl");
        write_jsonl(&out, &docs)?;
        let n = docs.len();
        Ok((docs, n, vec![out]))
    })?;

    let model = r.stage("train-embeddings", "words", |r| {
        let vocab = build_vocabulary(&docs, config.embedding.min_count)?;
        let model = train_skipgram(&docs, &vocab, &config.embedding, stage_seeds["embedding"])?;
        let out = r.path("embeddings.bin");
        emb_io::save_model(&model, &out)?;
        let n = model.vocab.len();
        Ok((model, n, vec![out]))
    })?;

    let keywords: KeywordSet = r.stage("expand-keywords", "keywords", |r| {
        let kw = expand_keywords(&model, &config.keyword_seeds, config.cutoff)?;
        let out = r.path("keywords.json");
        let text = serde_json::to_string_pretty(&kw).map_err(|e| Error::json("keywords", e))?;
        fs::write(&out, text + "\n").map_err(|e| Error::io(&out, e))?;
        let n = kw.len();
        Ok((kw, n, vec![out]))
    })?;

    let kw_docs: Vec<&ProcessedDoc> = r.stage("filter-keywords", "documents", |r| {
        let kept = keyword_filter(&docs, &keywords);
        let out = r.path("keyword_docs.txt");
        write_ids(&out, kept.iter().map(|d| &d.article_id))?;
        let n = kept.len();
        Ok((kept, n, vec![out]))
    })?;

    let topic_model = r.stage("train-lda", "terms", |r| {
        let matrix = build_term_doc_matrix(&kw_docs, config.min_doc_freq, config.weighting)?;
        let lda = crate::topic::LdaConfig { seed: stage_seeds["lda"], ..config.lda };
        let model = train_lda(&matrix, &lda)?;
        let bin = r.path("lda.bin");
        topic_io::save_topic_model(&model, &bin)?;
        let words = r.path("topics.txt");
        let f = fs::File::create(&words).map_err(|e| Error::io(&words, e))?;
        topic_io::write_top_words(&model, config.top_n, BufWriter::new(f)).map_err(|e| Error::io(&words, e))?;
        let n = matrix.num_terms();
        Ok((model, n, vec![bin, words]))
    })?;

    let relevant: BTreeSet<String> = r.stage("filter-topics", "documents", |r| {
        let topics = relevant_topics(&topic_model, &keywords, config.top_n)?;
        let ids = filter_by_topic(&topic_model, &topics, config.threshold)?;
        let out = r.path("relevant.txt");
        let ids: BTreeSet<String> = ids.into_iter().collect();
        let ordered: Vec<&str> = articles.iter().filter(|a| ids.contains(&a.id)).map(|a| a.id.as_str()).collect();
        write_ids(&out, &ordered)?;
        let n = ids.len();
        Ok((ids, n, vec![out]))
    })?;
    let relevant_articles: Vec<&Article> = articles.iter().filter(|a| relevant.contains(&a.id)).collect();

    let tagged: Vec<TaggedDoc> = r.stage("tag", "entities", |r| {
        let tagged: Vec<TaggedDoc> = relevant_articles.iter().map(|a| tag_article(a, &res)).collect();
        let out = r.path("tagged.jsonl");
        write_jsonl(&out, &tagged)?;
        let n = tagged.iter().map(|t| t.entities.len()).sum();
        Ok((tagged, n, vec![out]))
    })?;

    let triplets: Vec<Vec<RelationTriplet>> = r.stage("relations", "triplets", |r| {
        let per_doc: Vec<Vec<RelationTriplet>> = tagged.iter().map(|t| tagged_relations(t, &res)).collect();
        let flat: Vec<&RelationTriplet> = per_doc.iter().flatten().collect();
        let out = r.path("relations.jsonl");
        write_jsonl(&out, &flat)?;
        let n = flat.len();
        drop(flat);
        Ok((per_doc, n, vec![out]))
    })?;

    let related: Vec<RelatedEntitySet> = r.stage("extract", "entities", |r| {
        let sets: Vec<RelatedEntitySet> = triplets
            .iter()
            .zip(&tagged)
            .map(|(ts, t)| {
                let mut set = related_by_doc(ts, &res.patterns, config.window).pop().unwrap_or_default();
                set.doc_id = t.article_id.clone();
                set
            })
            .collect();
        let out = r.path("related.jsonl");
        write_jsonl(&out, &sets)?;
        let n = sets
            .iter()
            .map(|s| s.persons.len() + s.organizations.len() + s.locations.len() + s.dates.len())
            .sum();
        Ok((sets, n, vec![out]))
    })?;

    r.stage("forecast", "records", |r| {
        let options = NormalizeOptions { day_first: config.day_first };
        let records: Vec<ForecastRecord> = related
            .iter()
            .zip(&relevant_articles)
            .flat_map(|(set, a)| assemble_forecasts(set, a, options))
            .collect();
        let jsonl = r.path(FORECASTS_FILE);
        let f = fs::File::create(&jsonl).map_err(|e| Error::io(&jsonl, e))?;
        write_forecasts_jsonl(&records, BufWriter::new(f))?;
        let csv = r.path("forecasts.csv");
        let f = fs::File::create(&csv).map_err(|e| Error::io(&csv, e))?;
        write_forecasts_csv(&records, BufWriter::new(f))?;
        Ok(((), records.len(), vec![jsonl, csv]))
    })?;

    if !config.relevance_gold.is_empty() {
        let report = r.stage("eval-relevance", "items", |_| {
            let gold = load_gold(&config.relevance_gold)?;
            let universe: BTreeSet<String> = articles.iter().map(|a| a.id.clone()).collect();
            let rep = evaluate_binary(&relevant, &gold, &universe)?;
            Ok((rep, rep.total(), vec![]))
        })?;
        r.report.relevance = Some(report);
    }
    if let Some(gold_path) = &config.relations_gold {
        let report = r.stage("eval-relations", "triplets", |_| {
            let gold = load_gold_triplets(gold_path)?;
            let annotated: BTreeSet<&str> = gold.iter().map(|g| g.doc_id.as_str()).collect();
            let predicted: Vec<_> = triplets
                .iter()
                .zip(&related)
                .filter(|(_, set)| annotated.contains(set.doc_id.as_str()))
                .flat_map(|(ts, set)| judge_triplets(ts, set))
                .collect();
            let rep = evaluate_relations(&predicted, &gold)?;
            Ok((rep, rep.total(), vec![]))
        })?;
        r.report.relations = Some(report);
    }
    Ok(())
}

/// Process exit code for an error: 1 for invalid input or configuration, 2 for a failed stage.
pub fn exit_code(error: &Error) -> i32 {
    match error {
        Error::InvalidConfig(_) | Error::Parse { .. } => 1,
        _ => 2,
    }
}
