use std::collections::{BTreeMap, BTreeSet};
use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use chrono::{NaiveDate, Utc};
use clap::{Args, Parser, Subcommand};
use log::{info, warn};

use unrest_core::corpus::{fetch_feeds, parse_feed_list, read_articles_jsonl, Article, CorpusStore, FetchConfig};
use unrest_core::embedding::{build_vocabulary, expand_keywords, io as emb_io, train_skipgram, KeywordSet, SkipGramParams};
use unrest_core::error::{Error, Result};
use unrest_core::eval::{
    assemble_forecasts, evaluate_binary, evaluate_relations, judge_triplets, load_gold, load_gold_triplets,
    write_forecasts_csv, write_forecasts_jsonl, EvalReport,
};
use unrest_core::jsonl::{read_jsonl, write_jsonl};
use unrest_core::ner::{import_annotations, AnnotationRecord, Gazetteer};
use unrest_core::pipeline::{
    exit_code, related_by_doc, run_pipeline, tag_article, tagged_relations, validate_config, PipelineConfig, Resources,
    TaggedDoc,
};
use unrest_core::related::{default_patterns, load_patterns, RelatedEntitySet};
use unrest_core::relation::{RelationTriplet, VerbLexicon};
use unrest_core::temporal::{normalize, NormalizeOptions};
use unrest_core::text::{preprocess_document, ProcessedDoc, StopWords};
use unrest_core::topic::{
    build_term_doc_matrix, filter_by_topic, io as topic_io, keyword_filter, relevant_topics, train_lda, LdaConfig,
    Weighting, DEFAULT_MIN_DOC_FREQ, DEFAULT_THRESHOLD, DEFAULT_TOP_N,
};

#[derive(Parser)]
#[command(name = "unrest", version, about = "Forecast planned civil-unrest events from news articles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fetch RSS/Atom feeds into a corpus store.
    Fetch {
        #[arg(long)]
        feeds: PathBuf,
        #[arg(long)]
        store: PathBuf,
        #[arg(long, default_value_t = 3)]
        attempts: u32,
        #[arg(long, default_value_t = 20)]
        timeout_secs: u64,
    },
    /// Import an article JSONL file into a corpus store.
    Import {
        #[arg(long)]
        jsonl: PathBuf,
        #[arg(long)]
        store: PathBuf,
    },
    /// Tokenize, lemmatize and sentence-split every stored article.
    Preprocess {
        #[arg(long)]
        store: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        stopwords: Option<PathBuf>,
    },
    /// Train skip-gram word vectors on preprocessed documents.
    TrainEmbeddings(TrainEmbeddings),
    /// Expand seed words into a keyword set.
    ExpandKeywords {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "protest,demonstration")]
        seeds: Vec<String>,
        #[arg(long, default_value_t = 0.68)]
        cutoff: f64,
        /// Keyword JSON output; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Keep preprocessed documents containing a keyword.
    FilterKeywords {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        keywords: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Train an LDA topic model by collapsed Gibbs sampling.
    TrainLda(TrainLda),
    /// Keep documents whose mass on keyword topics reaches a threshold.
    FilterTopics {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        keywords: PathBuf,
        #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
        threshold: f64,
        #[arg(long, default_value_t = DEFAULT_TOP_N)]
        top_n: usize,
        /// Relevant ids, one per line; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tag entities in stored articles, or import external annotations.
    Tag {
        #[arg(long)]
        store: PathBuf,
        #[arg(long)]
        gazetteer: Option<PathBuf>,
        /// Annotation JSONL to use instead of the built-in tagger.
        #[arg(long = "import")]
        import: Option<PathBuf>,
        /// Only tag these article ids (one per line).
        #[arg(long)]
        ids: Option<PathBuf>,
        #[arg(long)]
        stopwords: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Extract relation triplets from tagged documents and their titles.
    Relations {
        #[arg(long)]
        tagged: PathBuf,
        #[arg(long)]
        verbs: Option<PathBuf>,
        #[arg(long)]
        gazetteer: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Extract related entities with trigger patterns.
    Extract {
        #[arg(long)]
        relations: PathBuf,
        #[arg(long)]
        patterns: Option<PathBuf>,
        #[arg(long, default_value_t = 2)]
        window: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Assemble forecast records; `.csv` output writes CSV, anything else JSONL.
    Forecast {
        #[arg(long = "in")]
        input: PathBuf,
        /// Store holding the source articles (for publication dates and urls).
        #[arg(long)]
        store: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        month_first: bool,
    },
    /// Score relevance filtering or relation extraction against gold.
    #[command(subcommand)]
    Eval(EvalCommand),
    /// Run the full pipeline from a config file.
    Run {
        #[arg(long)]
        config: Option<PathBuf>,
        /// `key=value` overrides applied after the config file.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
        /// Print validation problems and exit.
        #[arg(long)]
        check: bool,
    },
    /// Resolve a date expression against an anchor date.
    NormalizeDate {
        #[arg(long)]
        surface: String,
        #[arg(long)]
        anchor: NaiveDate,
        #[arg(long)]
        month_first: bool,
    },
}

#[derive(Args)]
struct TrainEmbeddings {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 100)]
    dim: usize,
    #[arg(long, default_value_t = 5)]
    window: usize,
    #[arg(long, default_value_t = 5)]
    negative: usize,
    #[arg(long, default_value_t = 5)]
    epochs: usize,
    #[arg(long, default_value_t = 0.025)]
    learning_rate: f64,
    #[arg(long, default_value_t = 5)]
    min_count: u64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Hogwild multi-threaded training (not reproducible).
    #[arg(long)]
    parallel: bool,
    /// Also write vectors in word2vec text format.
    #[arg(long)]
    text: Option<PathBuf>,
}

#[derive(Args)]
struct TrainLda {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 50)]
    k: usize,
    #[arg(long, default_value_t = 0.0067)]
    alpha: f64,
    #[arg(long, default_value_t = 6.89)]
    eta: f64,
    #[arg(long, default_value_t = 20)]
    passes: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value = "counts")]
    weights: Weighting,
    #[arg(long, default_value_t = DEFAULT_MIN_DOC_FREQ)]
    min_doc_freq: usize,
    /// Write the top words of each topic here.
    #[arg(long)]
    top_words: Option<PathBuf>,
}

#[derive(Subcommand)]
enum EvalCommand {
    /// Precision/recall of the relevance filter against annotator files.
    Relevance {
        /// Ids judged relevant, one per line.
        #[arg(long)]
        predicted: PathBuf,
        /// Annotator JSONL files (`item_id`, `scores`).
        #[arg(long, required = true, num_args = 1..)]
        gold: Vec<PathBuf>,
        /// Ids under evaluation, one per line; defaults to every gold item.
        #[arg(long)]
        universe: Option<PathBuf>,
    },
    /// Precision/recall/accuracy of triplet relevance.
    Relations {
        #[arg(long)]
        relations: PathBuf,
        #[arg(long)]
        related: PathBuf,
        #[arg(long)]
        gold: PathBuf,
    },
}

fn read_ids(path: &Path) -> Result<Vec<String>> {
    let text = fs::read_to_string(path).map_err(|e| Error::InvalidConfig(format!("{}: {e}", path.display())))?;
    Ok(text.lines().map(str::trim).filter(|l| !l.is_empty()).map(String::from).collect())
}

fn read_keywords(path: &Path) -> Result<KeywordSet> {
    let text = fs::read_to_string(path).map_err(|e| Error::InvalidConfig(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::InvalidConfig(format!("{}: {e}", path.display())))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::InvalidConfig(format!("{}: {e}", dir.display())))?;
    }
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::InvalidConfig(format!("{}: {e}", path.display())))
}

fn write_or_stdout(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => {
            let mut w = create(p)?;
            w.write_all(text.as_bytes()).and_then(|_| w.flush()).map_err(|e| Error::InvalidConfig(e.to_string()))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn print_report(report: &EvalReport) -> Result<()> {
    let text = serde_json::to_string_pretty(report).expect("report serializes");
    println!("{text}");
    Ok(())
}

fn load_store_articles(store: &Path) -> Result<Vec<Article>> {
    CorpusStore::open_existing(store)?.load_corpus(None)
}

fn run(cmd: Command) -> Result<()> {
    match cmd {
        Command::Fetch { feeds, store, attempts, timeout_secs } => {
            let text = fs::read_to_string(&feeds).map_err(|e| Error::InvalidConfig(format!("{}: {e}", feeds.display())))?;
            let sources = parse_feed_list(&text);
            let cfg = FetchConfig { attempts, timeout: Duration::from_secs(timeout_secs), ..Default::default() };
            let report = fetch_feeds(&sources, &cfg, Utc::now());
            let stats = CorpusStore::open(&store)?.store_articles(report.articles)?;
            println!(
                "inserted {} duplicates {} feeds_failed {} items_skipped {}",
                stats.inserted, stats.duplicates_skipped, report.feeds_failed, report.items_skipped
            );
        }
        Command::Import { jsonl, store } => {
            let articles = read_articles_jsonl(&jsonl)?;
            let stats = CorpusStore::open(&store)?.store_articles(articles)?;
            println!("inserted {} duplicates {}", stats.inserted, stats.duplicates_skipped);
        }
        Command::Preprocess { store, out, stopwords } => {
            let sw = stopwords.as_deref().map_or_else(|| Ok(StopWords::bundled()), StopWords::load)?;
            let articles = load_store_articles(&store)?;
            if articles.is_empty() {
                return Err(Error::EmptyCorpus(store));
            }
            let docs: Vec<ProcessedDoc> = articles.iter().map(|a| preprocess_document(a, &sw)).collect();
            write_jsonl(&out, &docs)?;
            info!("preprocessed {} documents", docs.len());
        }
        Command::TrainEmbeddings(a) => {
            let docs: Vec<ProcessedDoc> = read_jsonl(&a.input)?;
            let params = SkipGramParams {
                dim: a.dim,
                window: a.window,
                negative: a.negative,
                epochs: a.epochs,
                learning_rate: a.learning_rate,
                min_count: a.min_count,
                parallel: a.parallel,
                ..Default::default()
            };
            params.validate()?;
            let vocab = build_vocabulary(&docs, a.min_count)?;
            let model = train_skipgram(&docs, &vocab, &params, a.seed)?;
            emb_io::save_model(&model, &a.out)?;
            if let Some(t) = a.text {
                let mut w = create(&t)?;
                emb_io::write_text(&model, &mut w).map_err(|e| Error::InvalidConfig(format!("{}: {e}", t.display())))?;
            }
            info!("trained {} vectors of dimension {}", model.vocab.len(), model.dim);
        }
        Command::ExpandKeywords { model, seeds, cutoff, out } => {
            let model = emb_io::load_model(&model)?;
            let kw = expand_keywords(&model, &seeds, cutoff)?;
            let text = serde_json::to_string_pretty(&kw).expect("keywords serialize") + "\n";
            write_or_stdout(out.as_deref(), &text)?;
        }
        Command::FilterKeywords { input, keywords, out } => {
            let docs: Vec<ProcessedDoc> = read_jsonl(&input)?;
            let kw = read_keywords(&keywords)?;
            let kept = keyword_filter(&docs, &kw);
            write_jsonl(&out, &kept)?;
            info!("{} of {} documents contain a keyword", kept.len(), docs.len());
        }
        Command::TrainLda(a) => {
            let docs: Vec<ProcessedDoc> = read_jsonl(&a.input)?;
            let refs: Vec<&ProcessedDoc> = docs.iter().collect();
            let cfg = LdaConfig { k: a.k, alpha: a.alpha, eta: a.eta, passes: a.passes, seed: a.seed };
            cfg.validate()?;
            let matrix = build_term_doc_matrix(&refs, a.min_doc_freq, a.weights)?;
            let model = train_lda(&matrix, &cfg)?;
            topic_io::save_topic_model(&model, &a.out)?;
            if let Some(p) = a.top_words {
                let mut w = create(&p)?;
                topic_io::write_top_words(&model, DEFAULT_TOP_N, &mut w)
                    .map_err(|e| Error::InvalidConfig(format!("{}: {e}", p.display())))?;
            }
        }
        Command::FilterTopics { model, keywords, threshold, top_n, out } => {
            let model = topic_io::load_topic_model(&model)?;
            let kw = read_keywords(&keywords)?;
            let topics = relevant_topics(&model, &kw, top_n)?;
            let ids = filter_by_topic(&model, &topics, threshold)?;
            info!("keyword topics {topics:?}; {} documents kept", ids.len());
            let text: String = ids.iter().map(|id| format!("{id}\n")).collect();
            write_or_stdout(out.as_deref(), &text)?;
        }
        Command::Tag { store, gazetteer, import, ids, stopwords, out } => {
            let mut res = Resources::bundled();
            if let Some(g) = gazetteer {
                res.gazetteer = Gazetteer::load_dir(&g)?;
            }
            if let Some(s) = stopwords {
                res.stopwords = StopWords::load(&s)?;
            }
            let mut articles = load_store_articles(&store)?;
            if let Some(ids) = ids {
                let keep: BTreeSet<String> = read_ids(&ids)?.into_iter().collect();
                articles.retain(|a| keep.contains(&a.id));
            }
            let mut tagged: Vec<TaggedDoc> = articles.iter().map(|a| tag_article(a, &res)).collect();
            if let Some(path) = import {
                let records: Vec<AnnotationRecord> = read_jsonl(&path)?;
                let mut by_doc: BTreeMap<&str, Vec<AnnotationRecord>> = BTreeMap::new();
                for r in &records {
                    by_doc.entry(r.doc_id.as_str()).or_default().push(r.clone());
                }
                let mut rejected = 0;
                for t in &mut tagged {
                    let result = import_annotations(&t.doc, by_doc.get(t.article_id.as_str()).map_or(&[][..], |v| v));
                    for r in &result.rejected {
                        warn!("{}: annotation {} rejected: {}", t.article_id, r.index, r.reason);
                    }
                    rejected += result.rejected.len();
                    t.entities = result.spans;
                }
                let known: BTreeSet<&str> = tagged.iter().map(|t| t.article_id.as_str()).collect();
                let orphans = records.iter().filter(|r| !known.contains(r.doc_id.as_str())).count();
                info!("imported {} annotations, {rejected} rejected, {orphans} for unknown documents", records.len());
            }
            write_jsonl(&out, &tagged)?;
        }
        Command::Relations { tagged, verbs, gazetteer, out } => {
            let mut res = Resources::bundled();
            if let Some(v) = verbs {
                res.lexicon = VerbLexicon::load(&v)?;
            }
            if let Some(g) = gazetteer {
                res.gazetteer = Gazetteer::load_dir(&g)?;
            }
            let docs: Vec<TaggedDoc> = read_jsonl(&tagged)?;
            let triplets: Vec<RelationTriplet> = docs.iter().flat_map(|t| tagged_relations(t, &res)).collect();
            write_jsonl(&out, &triplets)?;
            info!("{} triplets from {} documents", triplets.len(), docs.len());
        }
        Command::Extract { relations, patterns, window, out } => {
            let patterns = patterns.as_deref().map_or_else(|| Ok(default_patterns()), load_patterns)?;
            let triplets: Vec<RelationTriplet> = read_jsonl(&relations)?;
            let sets = related_by_doc(&triplets, &patterns, window);
            write_jsonl(&out, &sets)?;
        }
        Command::Forecast { input, store, out, month_first } => {
            let sets: Vec<RelatedEntitySet> = read_jsonl(&input)?;
            let articles: BTreeMap<String, Article> =
                load_store_articles(&store)?.into_iter().map(|a| (a.id.clone(), a)).collect();
            let options = NormalizeOptions { day_first: !month_first };
            let mut records = Vec::new();
            for set in &sets {
                match articles.get(&set.doc_id) {
                    Some(a) => records.extend(assemble_forecasts(set, a, options)),
                    None => warn!("article {} is not in the store; skipped", set.doc_id),
                }
            }
            let w = create(&out)?;
            if out.extension().is_some_and(|x| x.eq_ignore_ascii_case("csv")) {
                write_forecasts_csv(&records, w)?;
            } else {
                write_forecasts_jsonl(&records, w)?;
            }
            info!("{} forecast records", records.len());
        }
        Command::Eval(EvalCommand::Relevance { predicted, gold, universe }) => {
            let gold = load_gold(&gold)?;
            let predicted: BTreeSet<String> = read_ids(&predicted)?.into_iter().collect();
            let universe: BTreeSet<String> = match universe {
                Some(u) => read_ids(&u)?.into_iter().collect(),
                None => gold.iter().map(|g| g.item_id.clone()).collect(),
            };
            print_report(&evaluate_binary(&predicted, &gold, &universe)?)?;
        }
        Command::Eval(EvalCommand::Relations { relations, related, gold }) => {
            let triplets: Vec<RelationTriplet> = read_jsonl(&relations)?;
            let sets: Vec<RelatedEntitySet> = read_jsonl(&related)?;
            let gold = load_gold_triplets(&gold)?;
            let annotated: BTreeSet<&str> = gold.iter().map(|g| g.doc_id.as_str()).collect();
            let by_doc: BTreeMap<&str, &RelatedEntitySet> = sets.iter().map(|s| (s.doc_id.as_str(), s)).collect();
            let empty = RelatedEntitySet::default();
            let mut grouped: BTreeMap<&str, Vec<RelationTriplet>> = BTreeMap::new();
            for t in triplets.iter().filter(|t| annotated.contains(t.doc_id.as_str())) {
                grouped.entry(t.doc_id.as_str()).or_default().push(t.clone());
            }
            let predicted: Vec<_> = grouped
                .iter()
                .flat_map(|(id, ts)| judge_triplets(ts, by_doc.get(id).copied().unwrap_or(&empty)))
                .collect();
            print_report(&evaluate_relations(&predicted, &gold)?)?;
        }
        Command::Run { config, overrides, check } => {
            let mut cfg = match &config {
                Some(p) => PipelineConfig::load(p).map_err(|e| match e {
                    Error::Io { path, source } => Error::InvalidConfig(format!("{}: {source}", path.display())),
                    other => other,
                })?,
                None => PipelineConfig::default(),
            };
            for kv in &overrides {
                cfg.apply_override(kv)?;
            }
            if check {
                let problems = validate_config(&cfg);
                for p in &problems {
                    println!("{p}");
                }
                if !problems.is_empty() {
                    return Err(Error::InvalidConfig(format!("{} problem(s)", problems.len())));
                }
                println!("ok");
                return Ok(());
            }
            let report = run_pipeline(&cfg)?;
            for s in &report.stages {
                println!("{:<18} {:>7} {:<10} {:>6} ms", s.stage, s.count, s.unit, s.elapsed_ms);
            }
            println!("report: {}", cfg.out_dir.join(unrest_core::pipeline::REPORT_FILE).display());
        }
        Command::NormalizeDate { surface, anchor, month_first } => {
            let m = normalize(&surface, anchor, NormalizeOptions { day_first: !month_first });
            match m.resolved {
                Some(r) => println!("{r}\t{}", m.direction),
                None => println!("-\t{}", m.direction),
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            let mut source = std::error::Error::source(&e);
            while let Some(s) = source {
                eprintln!("  caused by: {s}");
                source = s.source();
            }
            let _ = io::stderr().flush();
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
