// Copyright 2026 The dvbp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/*
 * C interface to the dvbp library: dynamic vector bin packing instances,
 * time compression, (1+eps)-approximate reduction with solution lifting,
 * bounds, exact and heuristic solvers, ILP export and trace ingestion.
 *
 * Objects are opaque handles released with the matching *_free function.
 * Every fallible call returns a dvbp_status; on failure a description is
 * available from dvbp_last_error() on the calling thread. Strings returned
 * through char** out-parameters are owned by the caller and released with
 * dvbp_string_free().
 */

#ifndef DVBP_DVBP_H_
#define DVBP_DVBP_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(DVBP_BUILDING_LIBRARY)
#define DVBP_API __declspec(dllexport)
#else
#define DVBP_API __declspec(dllimport)
#endif
#else
#define DVBP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dvbp_status {
  DVBP_OK = 0,
  DVBP_ERR_INVALID_ARGUMENT = 1,
  DVBP_ERR_PARSE = 2,
  DVBP_ERR_VALIDATION = 3,
  DVBP_ERR_INFEASIBLE = 4,
  DVBP_ERR_REFUSED = 5,
  DVBP_ERR_IO = 6,
  DVBP_ERR_OVERFLOW = 7,
  DVBP_ERR_INTERNAL = 8
} dvbp_status;

typedef enum dvbp_format {
  DVBP_FORMAT_TEXT = 0,
  DVBP_FORMAT_JSON = 1
} dvbp_format;

typedef enum dvbp_priority_mode {
  DVBP_PRIORITY_ALPHA = 0,
  DVBP_PRIORITY_F1 = 1,
  DVBP_PRIORITY_F2 = 2
} dvbp_priority_mode;

typedef enum dvbp_upper_bound_variant {
  DVBP_UPPER_BOUND_AS_WRITTEN = 0,
  DVBP_UPPER_BOUND_SCALED = 1
} dvbp_upper_bound_variant;

typedef enum dvbp_solver {
  DVBP_SOLVER_HEURISTIC = 0,
  DVBP_SOLVER_BRUTE = 1,
  DVBP_SOLVER_DP = 2
} dvbp_solver;

/* Flags for loading instances. */
#define DVBP_DROP_EMPTY 0x1

typedef struct dvbp_instance dvbp_instance;
typedef struct dvbp_packing dvbp_packing;
typedef struct dvbp_certificate dvbp_certificate;

/* Exact fraction; den > 0. */
typedef struct dvbp_rational {
  int64_t num;
  int64_t den;
} dvbp_rational;

typedef struct dvbp_stats {
  int64_t n;
  int64_t d;
  int64_t horizon; /* T: largest end time */
  int64_t height;  /* h: most requests active at once */
  int64_t flavors; /* phi */
  int64_t types;   /* tau */
  dvbp_rational lower_bound;
} dvbp_stats;

typedef struct dvbp_metrics {
  dvbp_rational epsilon;
  dvbp_rational lower_bound;
  int64_t deletion_budget; /* floor(epsilon * L) */
  int64_t deletion_bins;   /* nonempty bins actually deleted */
  int64_t n;
  int64_t n_prime;
  int64_t upper_bound; /* U */
  int has_removed_utilization;
  dvbp_rational removed_utilization; /* R */
  int has_remaining_utilization;
  dvbp_rational remaining_utilization; /* K */
} dvbp_metrics;

typedef struct dvbp_reduce_options {
  int recompress; /* nonzero: recompress time after every deleted bin */
  dvbp_upper_bound_variant upper_bound_variant;
} dvbp_reduce_options;

typedef struct dvbp_solve_options {
  dvbp_priority_mode mode; /* heuristic */
  int64_t brute_force_limit; /* brute: max n, 0 = default 12 */
  int64_t dp_max_height;     /* dp: 0 = default 10 */
  int64_t dp_max_bins;       /* dp: 0 = default 4 */
} dvbp_solve_options;

DVBP_API const char* dvbp_version(void);
DVBP_API const char* dvbp_last_error(void);
DVBP_API const char* dvbp_status_string(dvbp_status status);
DVBP_API void dvbp_string_free(char* text);

DVBP_API void dvbp_reduce_options_init(dvbp_reduce_options* options);
DVBP_API void dvbp_solve_options_init(dvbp_solve_options* options);

/* Instances. Text or JSON is detected from the content. */
DVBP_API dvbp_status dvbp_instance_load(const char* path, int flags,
                                        dvbp_instance** out);
DVBP_API dvbp_status dvbp_instance_parse(const char* text, size_t length,
                                         int flags, dvbp_instance** out);
DVBP_API dvbp_status dvbp_instance_serialize(const dvbp_instance* instance,
                                             dvbp_format format, char** out);
DVBP_API dvbp_status dvbp_instance_save(const dvbp_instance* instance,
                                        const char* path, dvbp_format format);
DVBP_API void dvbp_instance_free(dvbp_instance* instance);
DVBP_API size_t dvbp_instance_size(const dvbp_instance* instance);
DVBP_API size_t dvbp_instance_dimension(const dvbp_instance* instance);
/* Number of requests removed by DVBP_DROP_EMPTY while loading. */
DVBP_API size_t dvbp_instance_dropped_empty(const dvbp_instance* instance);

DVBP_API dvbp_status dvbp_instance_stats(const dvbp_instance* instance,
                                         dvbp_stats* out);

/* Time compression; *horizon receives the compressed horizon T'. */
DVBP_API dvbp_status dvbp_compress_time(const dvbp_instance* instance,
                                        dvbp_instance** out, int64_t* horizon);

DVBP_API dvbp_status dvbp_lower_bound(const dvbp_instance* instance,
                                      dvbp_rational* out);
DVBP_API dvbp_status dvbp_upper_bound_removable(
    const dvbp_instance* instance, int64_t bins,
    dvbp_upper_bound_variant variant, int64_t* out);

/* Reduction. epsilon is a decimal ("0.05") or fraction ("1/20") string.
 * options may be NULL for the defaults. */
DVBP_API dvbp_status dvbp_reduce(const dvbp_instance* instance,
                                 const char* epsilon, dvbp_priority_mode mode,
                                 const dvbp_reduce_options* options,
                                 dvbp_instance** reduced,
                                 dvbp_certificate** certificate);
DVBP_API dvbp_status dvbp_reduce_metrics_csv(
    const dvbp_instance* reduced, const dvbp_certificate* certificate,
    char** out);

DVBP_API dvbp_status dvbp_certificate_load(const char* path,
                                           dvbp_certificate** out);
DVBP_API dvbp_status dvbp_certificate_parse(const char* json, size_t length,
                                            dvbp_certificate** out);
DVBP_API dvbp_status dvbp_certificate_serialize(
    const dvbp_certificate* certificate, char** out);
DVBP_API dvbp_status dvbp_certificate_metrics(
    const dvbp_certificate* certificate, dvbp_metrics* out);
DVBP_API void dvbp_certificate_free(dvbp_certificate* certificate);

/* Lifts a packing of the reduced instance (using original request ids) to
 * a packing of the original instance. */
DVBP_API dvbp_status dvbp_lift(const dvbp_certificate* certificate,
                               const dvbp_packing* reduced_packing,
                               const dvbp_instance* original,
                               dvbp_packing** out);

/* Packings: CSV "request_id,bin" or the JSON variant. */
DVBP_API dvbp_status dvbp_packing_load(const char* path, dvbp_packing** out);
DVBP_API dvbp_status dvbp_packing_parse(const char* text, size_t length,
                                        dvbp_packing** out);
DVBP_API dvbp_status dvbp_packing_serialize(const dvbp_packing* packing,
                                            dvbp_format format, char** out);
DVBP_API int64_t dvbp_packing_bins(const dvbp_packing* packing);
DVBP_API size_t dvbp_packing_size(const dvbp_packing* packing);
/* Bin of request `id`, or 0 when unassigned. */
DVBP_API int64_t dvbp_packing_bin_of(const dvbp_packing* packing, int64_t id);
DVBP_API void dvbp_packing_free(dvbp_packing* packing);

/* *feasible receives 1 or 0; report (optional) a human-readable listing of
 * violations. Unknown ids or bins out of range fail with
 * DVBP_ERR_INVALID_ARGUMENT. */
DVBP_API dvbp_status dvbp_verify(const dvbp_instance* instance,
                                 const dvbp_packing* packing, int* feasible,
                                 char** report);

/* Greedy single-bin packing over `candidates` (all requests when
 * candidates is NULL). packed must hold candidate_count (or n) ids;
 * *packed_count receives how many were written, ascending. */
DVBP_API dvbp_status dvbp_greedy_pack_bin(const dvbp_instance* instance,
                                          const int64_t* candidates,
                                          size_t candidate_count,
                                          dvbp_priority_mode mode,
                                          int64_t* packed,
                                          size_t* packed_count);

/* options may be NULL. */
DVBP_API dvbp_status dvbp_solve(const dvbp_instance* instance,
                                dvbp_solver solver,
                                const dvbp_solve_options* options,
                                dvbp_packing** out);
DVBP_API dvbp_status dvbp_dp_feasible(const dvbp_instance* instance,
                                      int64_t bins,
                                      const dvbp_solve_options* options,
                                      int* feasible, dvbp_packing** witness);

DVBP_API dvbp_status dvbp_export_ilp(const dvbp_instance* instance,
                                     int64_t bins, char** lp, char** sidecar);

/* Trace ingestion with a JSON schema file; report (optional) receives a
 * JSON summary of kept, dropped and rejected rows. */
DVBP_API dvbp_status dvbp_ingest_trace(const char* trace_path,
                                       const char* schema_path,
                                       dvbp_instance** out, char** report);

/* Epsilon sweep as CSV. threads == 0 uses DVBP_THREADS or all cores; when
 * timing is zero the seconds column is written as 0. */
DVBP_API dvbp_status dvbp_sweep(const dvbp_instance* instance,
                                const char* from, const char* to,
                                const char* step, dvbp_priority_mode mode,
                                const dvbp_reduce_options* options,
                                unsigned threads, int timing, char** csv);

#ifdef __cplusplus
}
#endif

#endif /* DVBP_DVBP_H_ */
