#ifndef UNREST_FFI_H
#define UNREST_FFI_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum UnrestDirection {
  UNREST_DIRECTION_FUTURE = 0,
  UNREST_DIRECTION_PAST = 1,
  UNREST_DIRECTION_SAME_DAY = 2,
  UNREST_DIRECTION_AMBIGUOUS = 3,
} UnrestDirection;

typedef enum UnrestStatus {
  UNREST_STATUS_OK = 0,
  UNREST_STATUS_NULL_POINTER = 1,
  UNREST_STATUS_INVALID_UTF8 = 2,
  UNREST_STATUS_INVALID_ARGUMENT = 3,
  UNREST_STATUS_INVALID_CONFIG = 4,
  UNREST_STATUS_IO = 5,
  UNREST_STATUS_STAGE_FAILED = 6,
  UNREST_STATUS_PANIC = 7,
} UnrestStatus;

// Tagging resources, trigger patterns and extraction settings for single-article forecasting.
typedef struct UnrestExtractor UnrestExtractor;

// A pipeline configuration ready to run.
typedef struct UnrestPipeline UnrestPipeline;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static string; do not free.
const char *unrest_version(void);

// Message of the last failed call on this thread, or null. Free with `unrest_string_free`.
char *unrest_last_error_message(void);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not have been freed already.
void unrest_string_free(char *s);

// Resolves a date expression against an ISO anchor date. Writes the ISO date
// (or `start/end`) to `out_iso`, or null when the surface does not resolve.
//
// # Safety
// `surface` and `anchor` must be NUL-terminated strings; the out pointers must be writable.
enum UnrestStatus unrest_normalize_date(const char *surface,
                                        const char *anchor,
                                        bool day_first,
                                        char **out_iso,
                                        enum UnrestDirection *out_direction);

// Creates an extractor with the bundled resources and trigger patterns.
// `window` is the related-entity window; 0 keeps only the firing triplet.
//
// # Safety
// `out` must be writable.
enum UnrestStatus unrest_extractor_new(uintptr_t window,
                                       bool day_first,
                                       struct UnrestExtractor **out);

// Replaces the extractor's trigger patterns with those in `path`.
//
// # Safety
// `extractor` must come from `unrest_extractor_new`; `path` must be NUL-terminated.
enum UnrestStatus unrest_extractor_load_patterns(struct UnrestExtractor *extractor,
                                                 const char *path);

// Forecast records for one article as a JSON array. The article is a JSON
// object with `url`, `body`, `published_at` (ISO date) and optionally `id`,
// `title` and `source`. No relevance filtering is applied.
//
// # Safety
// `extractor` must come from `unrest_extractor_new`; `article_json` must be
// NUL-terminated; `out_json` must be writable.
enum UnrestStatus unrest_extractor_forecast_json(const struct UnrestExtractor *extractor,
                                                 const char *article_json,
                                                 char **out_json);

// Releases an extractor. Null is ignored.
//
// # Safety
// `extractor` must come from `unrest_extractor_new` and not be used afterwards.
void unrest_extractor_free(struct UnrestExtractor *extractor);

// Loads a pipeline configuration file. Null `path` starts from the defaults.
//
// # Safety
// `path` must be null or NUL-terminated; `out` must be writable.
enum UnrestStatus unrest_pipeline_new(const char *path, struct UnrestPipeline **out);

// Applies one `key=value` override.
//
// # Safety
// `pipeline` must come from `unrest_pipeline_new`; `assignment` must be NUL-terminated.
enum UnrestStatus unrest_pipeline_set(struct UnrestPipeline *pipeline, const char *assignment);

// Runs every stage and writes the report JSON to `out_report` (may be null).
//
// # Safety
// `pipeline` must come from `unrest_pipeline_new`; `out_report` must be null or writable.
enum UnrestStatus unrest_pipeline_run(const struct UnrestPipeline *pipeline, char **out_report);

// Releases a pipeline. Null is ignored.
//
// # Safety
// `pipeline` must come from `unrest_pipeline_new` and not be used afterwards.
void unrest_pipeline_free(struct UnrestPipeline *pipeline);

// Default related-entity window.
uintptr_t unrest_default_window(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* UNREST_FFI_H */
