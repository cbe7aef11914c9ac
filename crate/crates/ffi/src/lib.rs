//! C ABI over `unrest-core`.
//!
//! Every fallible function returns an [`UnrestStatus`]; on failure the message
//! is kept per thread and can be fetched with [`unrest_last_error_message`].
//! Strings handed out by this library must be released with
//! [`unrest_string_free`], handles with their matching `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use chrono::{NaiveDate, NaiveTime};
use serde::Deserialize;
use unrest_core::corpus::Article;
use unrest_core::eval::assemble_forecasts;
use unrest_core::pipeline::{related_by_doc, run_pipeline, tag_article, tagged_relations, PipelineConfig, Resources};
use unrest_core::related::{load_patterns, RelatedEntitySet, DEFAULT_WINDOW};
use unrest_core::temporal::{normalize, Direction, NormalizeOptions};
use unrest_core::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnrestStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidArgument = 3,
    InvalidConfig = 4,
    Io = 5,
    StageFailed = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnrestDirection {
    Future = 0,
    Past = 1,
    SameDay = 2,
    Ambiguous = 3,
}

impl From<Direction> for UnrestDirection {
    fn from(d: Direction) -> Self {
        match d {
            Direction::Future => UnrestDirection::Future,
            Direction::Past => UnrestDirection::Past,
            Direction::SameDay => UnrestDirection::SameDay,
            Direction::Ambiguous => UnrestDirection::Ambiguous,
        }
    }
}

/// Tagging resources, trigger patterns and extraction settings for single-article forecasting.
pub struct UnrestExtractor {
    resources: Resources,
    window: usize,
    day_first: bool,
}

/// A pipeline configuration ready to run.
pub struct UnrestPipeline {
    config: PipelineConfig,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(UnrestStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::InvalidConfig(_) | Error::Parse { .. } => UnrestStatus::InvalidConfig,
            Error::Io { .. } => UnrestStatus::Io,
            Error::Stage { .. } => UnrestStatus::StageFailed,
            _ => UnrestStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

fn set_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> UnrestStatus {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => UnrestStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_error(&message);
            status
        }
        Err(_) => {
            set_error("internal panic");
            UnrestStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, name: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(UnrestStatus::NullPointer, format!("{name} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(UnrestStatus::InvalidUtf8, format!("{name} is not valid UTF-8")))
}

/// # Safety
/// `p` must be null or point to writable storage that outlives `'a`.
unsafe fn out_arg<'a, T>(p: *mut T, name: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| Failure(UnrestStatus::NullPointer, format!("{name} is null")))
}

/// # Safety
/// `p` must be null or a live handle from this library.
unsafe fn handle<'a, T>(p: *const T, name: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| Failure(UnrestStatus::NullPointer, format!("{name} is null")))
}

fn to_c(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).map_or(ptr::null_mut(), CString::into_raw)
}

fn invalid(message: impl Into<String>) -> Failure {
    Failure(UnrestStatus::InvalidArgument, message.into())
}

/// Library version as a static string; do not free.
#[no_mangle]
pub extern "C" fn unrest_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread, or null. Free with `unrest_string_free`.
#[no_mangle]
pub extern "C" fn unrest_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null_mut(), |c| c.clone().into_raw()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn unrest_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Resolves a date expression against an ISO anchor date. Writes the ISO date
/// (or `start/end`) to `out_iso`, or null when the surface does not resolve.
///
/// # Safety
/// `surface` and `anchor` must be NUL-terminated strings; the out pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn unrest_normalize_date(
    surface: *const c_char,
    anchor: *const c_char,
    day_first: bool,
    out_iso: *mut *mut c_char,
    out_direction: *mut UnrestDirection,
) -> UnrestStatus {
    guard(|| {
        let surface = str_arg(surface, "surface")?;
        let anchor = str_arg(anchor, "anchor")?;
        let out_iso = out_arg(out_iso, "out_iso")?;
        let out_direction = out_arg(out_direction, "out_direction")?;
        let anchor = NaiveDate::parse_from_str(anchor, "%Y-%m-%d").map_err(|e| invalid(format!("anchor {anchor:?}: {e}")))?;
        let mention = normalize(surface, anchor, NormalizeOptions { day_first });
        *out_iso = mention.resolved.map_or(ptr::null_mut(), |r| to_c(r.to_string()));
        *out_direction = mention.direction.into();
        Ok(())
    })
}

/// Creates an extractor with the bundled resources and trigger patterns.
/// `window` is the related-entity window; 0 keeps only the firing triplet.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn unrest_extractor_new(window: usize, day_first: bool, out: *mut *mut UnrestExtractor) -> UnrestStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        *out = Box::into_raw(Box::new(UnrestExtractor { resources: Resources::bundled(), window, day_first }));
        Ok(())
    })
}

/// Replaces the extractor's trigger patterns with those in `path`.
///
/// # Safety
/// `extractor` must come from `unrest_extractor_new`; `path` must be NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn unrest_extractor_load_patterns(extractor: *mut UnrestExtractor, path: *const c_char) -> UnrestStatus {
    guard(|| {
        let path = str_arg(path, "path")?;
        let ex = out_arg(extractor, "extractor")?;
        ex.resources.patterns = load_patterns(Path::new(path))?;
        Ok(())
    })
}

#[derive(Deserialize)]
struct ArticleInput {
    #[serde(default)]
    id: Option<String>,
    url: String,
    #[serde(default)]
    source: String,
    #[serde(default)]
    title: String,
    body: String,
    published_at: NaiveDate,
}

/// Forecast records for one article as a JSON array. The article is a JSON
/// object with `url`, `body`, `published_at` (ISO date) and optionally `id`,
/// `title` and `source`. No relevance filtering is applied.
///
/// # Safety
/// `extractor` must come from `unrest_extractor_new`; `article_json` must be
/// NUL-terminated; `out_json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn unrest_extractor_forecast_json(
    extractor: *const UnrestExtractor,
    article_json: *const c_char,
    out_json: *mut *mut c_char,
) -> UnrestStatus {
    guard(|| {
        let ex = handle(extractor, "extractor")?;
        let text = str_arg(article_json, "article_json")?;
        let out = out_arg(out_json, "out_json")?;
        let input: ArticleInput = serde_json::from_str(text).map_err(|e| invalid(format!("article: {e}")))?;
        let fetched = input.published_at.and_time(NaiveTime::MIN).and_utc();
        let mut article = Article::new(input.url, input.source, input.title, input.body, input.published_at, fetched);
        if let Some(id) = input.id {
            article.id = id;
        }
        article.validate().map_err(invalid)?;
        let tagged = tag_article(&article, &ex.resources);
        let triplets = tagged_relations(&tagged, &ex.resources);
        let related = related_by_doc(&triplets, &ex.resources.patterns, ex.window)
            .into_iter()
            .next()
            .unwrap_or_else(|| RelatedEntitySet { doc_id: article.id.clone(), ..Default::default() });
        let records = assemble_forecasts(&related, &article, NormalizeOptions { day_first: ex.day_first });
        let json = serde_json::to_string(&records).map_err(|e| invalid(e.to_string()))?;
        *out = to_c(json);
        Ok(())
    })
}

/// Releases an extractor. Null is ignored.
///
/// # Safety
/// `extractor` must come from `unrest_extractor_new` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn unrest_extractor_free(extractor: *mut UnrestExtractor) {
    if !extractor.is_null() {
        drop(Box::from_raw(extractor));
    }
}

/// Loads a pipeline configuration file. Null `path` starts from the defaults.
///
/// # Safety
/// `path` must be null or NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn unrest_pipeline_new(path: *const c_char, out: *mut *mut UnrestPipeline) -> UnrestStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let config = if path.is_null() {
            PipelineConfig::default()
        } else {
            PipelineConfig::load(Path::new(str_arg(path, "path")?))?
        };
        *out = Box::into_raw(Box::new(UnrestPipeline { config }));
        Ok(())
    })
}

/// Applies one `key=value` override.
///
/// # Safety
/// `pipeline` must come from `unrest_pipeline_new`; `assignment` must be NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn unrest_pipeline_set(pipeline: *mut UnrestPipeline, assignment: *const c_char) -> UnrestStatus {
    guard(|| {
        let assignment = str_arg(assignment, "assignment")?;
        out_arg(pipeline, "pipeline")?.config.apply_override(assignment)?;
        Ok(())
    })
}

/// Runs every stage and writes the report JSON to `out_report` (may be null).
///
/// # Safety
/// `pipeline` must come from `unrest_pipeline_new`; `out_report` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn unrest_pipeline_run(pipeline: *const UnrestPipeline, out_report: *mut *mut c_char) -> UnrestStatus {
    guard(|| {
        let p = handle(pipeline, "pipeline")?;
        let report = run_pipeline(&p.config)?;
        if let Some(out) = out_report.as_mut() {
            *out = to_c(serde_json::to_string(&report).map_err(|e| invalid(e.to_string()))?);
        }
        Ok(())
    })
}

/// Releases a pipeline. Null is ignored.
///
/// # Safety
/// `pipeline` must come from `unrest_pipeline_new` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn unrest_pipeline_free(pipeline: *mut UnrestPipeline) {
    if !pipeline.is_null() {
        drop(Box::from_raw(pipeline));
    }
}

/// Default related-entity window.
#[no_mangle]
pub extern "C" fn unrest_default_window() -> usize {
    DEFAULT_WINDOW
}
