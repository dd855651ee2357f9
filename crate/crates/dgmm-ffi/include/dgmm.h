#ifndef DGMM_H
#define DGMM_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code of a C API call.
 */
typedef enum {
  DGMM_STATUS_OK = 0,
  DGMM_STATUS_NULL_ARGUMENT = 1,
  DGMM_STATUS_INVALID_UTF8 = 2,
  DGMM_STATUS_PARSE_ERROR = 3,
  DGMM_STATUS_VALIDATION_ERROR = 4,
  DGMM_STATUS_COMPUTATION_ERROR = 5,
} DgmmStatus;

/**
 * Aggregation policy for panel ratings.
 */
typedef enum {
  DGMM_AGGREGATION_MEDIAN_LOW = 0,
  DGMM_AGGREGATION_MEAN = 1,
} DgmmAggregation;

/**
 * Opaque handle to a validated maturity model.
 */
typedef struct DgmmModel DgmmModel;

/**
 * Opaque handle to a coverage-checked response set.
 */
typedef struct DgmmResponses DgmmResponses;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static string; do not free.
 */
const char *dgmm_version(void);

/**
 * Message for the most recent failure on this thread, or null. The pointer
 * is valid until the next API call on the same thread; do not free.
 */
const char *dgmm_last_error_message(void);

/**
 * Creates a handle to the bundled model.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
DgmmStatus dgmm_model_builtin(DgmmModel **out);

/**
 * Parses and validates a model document.
 *
 * # Safety
 * `json` must be a valid NUL-terminated string; `out` a valid pointer.
 */
DgmmStatus dgmm_model_from_json(const char *json, DgmmModel **out);

/**
 * Serializes the model; release the string with [`dgmm_string_free`].
 *
 * # Safety
 * `model` must be a live handle from this library; `out` a valid pointer.
 */
DgmmStatus dgmm_model_to_json(const DgmmModel *model, char **out);

/**
 * Number of statements in the model; 0 for a null handle.
 *
 * # Safety
 * `model` must be null or a live handle.
 */
uint32_t dgmm_model_statement_count(const DgmmModel *model);

/**
 * Number of maturity levels in the model; 0 for a null handle.
 *
 * # Safety
 * `model` must be null or a live handle.
 */
uint32_t dgmm_model_level_count(const DgmmModel *model);

/**
 * Releases a model handle. Null is a no-op.
 *
 * # Safety
 * `model` must be null or a handle from this library, not yet freed.
 */
void dgmm_model_free(DgmmModel *model);

/**
 * Parses tabular CSV responses (`respondent,statement_id,rating[,percent]`).
 * `max_level` 0 means all levels of the model.
 *
 * # Safety
 * `model` must be a live handle; `csv` and `organization` valid
 * NUL-terminated strings; `out` a valid pointer.
 */
DgmmStatus dgmm_responses_from_csv(const DgmmModel *model,
                                   const char *csv,
                                   const char *organization,
                                   uint8_t max_level,
                                   DgmmResponses **out);

/**
 * Parses structured JSON responses.
 *
 * # Safety
 * `model` must be a live handle; `json` a valid NUL-terminated string;
 * `out` a valid pointer.
 */
DgmmStatus dgmm_responses_from_json(const DgmmModel *model, const char *json, DgmmResponses **out);

/**
 * Number of respondents; 0 for a null handle.
 *
 * # Safety
 * `responses` must be null or a live handle.
 */
uint32_t dgmm_responses_respondent_count(const DgmmResponses *responses);

/**
 * Releases a response-set handle. Null is a no-op.
 *
 * # Safety
 * `responses` must be null or a handle from this library, not yet freed.
 */
void dgmm_responses_free(DgmmResponses *responses);

/**
 * Determines the achieved maturity level (0 when no level passed).
 *
 * # Safety
 * `model` and `responses` must be live handles; `out_level` a valid pointer.
 */
DgmmStatus dgmm_maturity_level(const DgmmModel *model,
                               const DgmmResponses *responses,
                               DgmmAggregation aggregation,
                               uint8_t *out_level);

/**
 * Runs the full assessment and returns the report bundle as JSON; release
 * with [`dgmm_string_free`].
 *
 * # Safety
 * `model` and `responses` must be live handles; `out` a valid pointer.
 */
DgmmStatus dgmm_assess_json(const DgmmModel *model,
                            const DgmmResponses *responses,
                            DgmmAggregation aggregation,
                            char **out);

/**
 * Runs the full assessment and returns the human-readable markdown report;
 * release with [`dgmm_string_free`].
 *
 * # Safety
 * `model` and `responses` must be live handles; `out` a valid pointer.
 */
DgmmStatus dgmm_assess_markdown(const DgmmModel *model,
                                const DgmmResponses *responses,
                                DgmmAggregation aggregation,
                                char **out);

/**
 * Per-level inter-rater agreement as JSON; needs at least two respondents.
 * Release with [`dgmm_string_free`].
 *
 * # Safety
 * `model` and `responses` must be live handles; `out` a valid pointer.
 */
DgmmStatus dgmm_agreement_json(const DgmmModel *model, const DgmmResponses *responses, char **out);

/**
 * Radar-chart SVG of the dimension profile at `level`; release with
 * [`dgmm_string_free`].
 *
 * # Safety
 * `model` and `responses` must be live handles; `out` a valid pointer.
 */
DgmmStatus dgmm_dimension_chart_svg(const DgmmModel *model,
                                    const DgmmResponses *responses,
                                    uint8_t level,
                                    char **out);

/**
 * Radar-chart SVG of one dimension's activities across all assessed
 * levels; release with [`dgmm_string_free`].
 *
 * # Safety
 * `model` and `responses` must be live handles; `out` a valid pointer.
 */
DgmmStatus dgmm_activity_chart_svg(const DgmmModel *model,
                                   const DgmmResponses *responses,
                                   uint8_t dimension_id,
                                   char **out);

/**
 * Releases a string returned by this library. Null is a no-op.
 *
 * # Safety
 * `s` must be null or a string pointer returned by this library, not yet
 * freed.
 */
void dgmm_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DGMM_H */
