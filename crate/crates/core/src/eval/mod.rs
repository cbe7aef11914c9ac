//! Forecast assembly and evaluation against gold annotations.

mod forecast;
mod metrics;

pub use forecast::{assemble_forecasts, write_forecasts_csv, write_forecasts_jsonl, Evidence, ForecastRecord};
pub use metrics::{
    aggregate_gold, evaluate_binary, evaluate_relations, judge_triplets, load_gold, load_gold_triplets, parse_gold_triplet, EvalReport, GoldLabel, GoldRecord, JudgedEntity, JudgedTriplet,
};
