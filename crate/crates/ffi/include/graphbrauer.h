#ifndef GRAPHBRAUER_H
#define GRAPHBRAUER_H

#include <stdbool.h>
#include <stdint.h>

typedef enum GbStatus {
  GB_STATUS_OK = 0,
  GB_STATUS_NULL_POINTER = -1,
  GB_STATUS_INVALID_UTF8 = -2,
  GB_STATUS_INVALID_GRAPH = -3,
  GB_STATUS_UNKNOWN_NAME = -4,
  GB_STATUS_INVALID_CONFIG = -5,
  GB_STATUS_NO_BOUND = -6,
  GB_STATUS_INTERNAL = -7,
} GbStatus;

/**
 * Opaque graph handle.
 */
typedef struct GbGraph GbGraph;

/**
 * Opaque report handle.
 */
typedef struct GbReport GbReport;

typedef struct GbConfig {
  uint64_t enum_cap;
  uint64_t bar_cap;
  uint64_t union_cap;
  uint32_t subgraph_depth;
  uint64_t seed;
} GbConfig;

typedef struct GbInterval {
  uint64_t lower;
  uint64_t upper;
  bool resolved;
} GbInterval;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *gb_last_error_message(void);

/**
 * Default caps.
 *
 * # Safety
 * `out` must be null or point to writable memory for a `GbConfig`.
 */
enum GbStatus gb_config_default(struct GbConfig *out);

/**
 * Parses a graph document.
 *
 * # Safety
 * `json` must be a nul-terminated string; `out` must be writable.
 */
enum GbStatus gb_graph_from_json(const char *json, struct GbGraph **out);

/**
 * One of the built-in graphs by name.
 *
 * # Safety
 * `name` must be a nul-terminated string; `out` must be writable.
 */
enum GbStatus gb_graph_builtin(const char *name, struct GbGraph **out);

/**
 * # Safety
 * `graph` must be a live handle; `out` must be writable.
 */
enum GbStatus gb_graph_genus(const struct GbGraph *graph, uint64_t *out);

/**
 * # Safety
 * `graph` must be null or a handle not yet freed.
 */
void gb_graph_free(struct GbGraph *graph);

/**
 * Runs the full analysis. `config` may be null for the defaults.
 *
 * # Safety
 * `graph` must be a live handle, `config` null or valid, `out` writable.
 */
enum GbStatus gb_analyze(const struct GbGraph *graph,
                         const struct GbConfig *config,
                         struct GbReport **out);

/**
 * # Safety
 * `report` must be a live handle; `out` must be writable.
 */
enum GbStatus gb_report_period(const struct GbReport *report, struct GbInterval *out);

/**
 * # Safety
 * `report` must be a live handle; `out` must be writable.
 */
enum GbStatus gb_report_index(const struct GbReport *report, struct GbInterval *out);

/**
 * The report as JSON. Release the string with [`gb_string_free`].
 *
 * # Safety
 * `report` must be a live handle; `out` must be writable.
 */
enum GbStatus gb_report_to_json(const struct GbReport *report, char **out);

/**
 * # Safety
 * `report` must be null or a handle not yet freed.
 */
void gb_report_free(struct GbReport *report);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void gb_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GRAPHBRAUER_H */
