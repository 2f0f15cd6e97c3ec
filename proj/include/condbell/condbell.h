// Copyright 2026 The condbell Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/* C interface to condbell.
 *
 * All functions returning cb_status report failures through the status code;
 * cb_last_error() then returns a message for the calling thread. Objects are
 * opaque handles released with the matching *_free function. Strings returned
 * through `char** out` are heap-allocated and released with cb_string_free.
 */
#ifndef CONDBELL_H
#define CONDBELL_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(CONDBELL_BUILDING)
#    define CB_API __declspec(dllexport)
#  else
#    define CB_API __declspec(dllimport)
#  endif
#else
#  define CB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cb_status {
  CB_OK = 0,
  CB_ERR_INVALID_ARGUMENT = 1,
  CB_ERR_INVALID_PMF = 2,
  CB_ERR_SAME_OBSERVABLE = 3,
  CB_ERR_ZERO_CONDITIONING_EVENT = 4,
  CB_ERR_ASYMMETRIC_MARGINALS = 5,
  CB_ERR_INVALID_STATE = 6,
  CB_ERR_INVALID_GRID_STEP = 7,
  CB_ERR_ODD_POPULATION = 8,
  CB_ERR_ZERO_BRANCH = 9,
  CB_ERR_INVALID_TARGET = 10,
  CB_ERR_MALFORMED_ROW = 11,
  CB_ERR_DUPLICATE_SUBJECT = 12,
  CB_ERR_SCHEMA_VIOLATION = 13,
  CB_ERR_IO_FAILURE = 14,
  CB_ERR_INTERNAL = 15
} cb_status;

typedef enum cb_format { CB_FORMAT_TEXT = 0, CB_FORMAT_JSON = 1 } cb_format;

typedef enum cb_method { CB_METHOD_Z_TEST = 0, CB_METHOD_CHI2_FIT = 1 } cb_method;

typedef enum cb_verdict {
  CB_VERDICT_CLASSICAL_CONSISTENT = 0,
  CB_VERDICT_QUANTUM_LIKE = 1,
  CB_VERDICT_INCONCLUSIVE = 2
} cb_verdict;

typedef struct cb_triple {
  double p_a_given_b_plus;
  double p_c_given_b_minus;
  double p_a_given_c_plus;
} cb_triple;

typedef struct cb_test_config {
  double delta_threshold;
  double alpha;
  double confidence;
  cb_method method;
} cb_test_config;

typedef struct cb_counts {
  uint64_t n_total;
  uint64_t n_u;
  uint64_t n_v;
  uint64_t u_b_plus;
  uint64_t u_b_minus;
  uint64_t v_c_plus;
  uint64_t v_c_minus;
  uint64_t a_plus_given_b_plus;
  uint64_t c_plus_given_b_minus;
  uint64_t a_plus_given_c_plus;
  int has_seed;
  uint64_t seed;
} cb_counts;

typedef struct cb_realizability {
  int feasible;
  double witness[8]; /* zero when infeasible */
  double max_violation;
} cb_realizability;

typedef struct cb_exact_summary {
  cb_triple triple;
  double delta;
  int violated;
  double marginals[3];
  int premise_holds;
  cb_realizability realizability;
} cb_exact_summary;

typedef struct cb_maximum {
  double theta_a;
  double theta_b;
  double theta_c;
  double delta_max;
} cb_maximum;

typedef struct cb_sample_size {
  uint64_t per_branch;
  double exact;
  cb_triple triple;
  int boundary;
  int degenerate;
} cb_sample_size;

typedef struct cb_report_summary {
  double delta_hat;
  double std_error;
  double statistic;
  double p_value;
  double lower_bound;
  int exceeds_threshold;
  int boundary;
  int homogeneity_pass;
  int realizable;
  cb_verdict verdict;
} cb_report_summary;

typedef struct cb_model cb_model;
typedef struct cb_run cb_run;
typedef struct cb_report cb_report;

CB_API const char* cb_version(void);
CB_API const char* cb_status_name(cb_status status);
/* Message of the last failure on this thread; empty after success. */
CB_API const char* cb_last_error(void);
CB_API void cb_string_free(char* s);
/* delta 0.01, alpha 0.05, confidence 0.95, z-test. */
CB_API void cb_default_config(cb_test_config* out);

/* Agent models (classical / quantum / table JSON). */
CB_API cb_status cb_model_from_json(const char* json, cb_model** out);
CB_API void cb_model_free(cb_model* model);
CB_API cb_status cb_model_exact(const cb_model* model, cb_exact_summary* out);
CB_API cb_status cb_model_render_exact(const cb_model* model, cb_format format, char** out);

/* Protocol runs: simulated, or ingested from JSON counts or response CSV. */
CB_API cb_status cb_simulate(const cb_model* model, uint64_t n_total, uint64_t seed,
                             cb_run** out);
CB_API cb_status cb_run_from_json(const char* json, cb_run** out);
CB_API cb_status cb_run_from_csv(const char* data, size_t size, cb_run** out);
CB_API void cb_run_free(cb_run* run);
CB_API cb_status cb_run_counts(const cb_run* run, cb_counts* out);
CB_API cb_status cb_run_to_json(const cb_run* run, char** out);
/* CB_ERR_INVALID_STATE for runs loaded from JSON (no per-subject rows). */
CB_API cb_status cb_run_to_csv(const cb_run* run, char** out);
CB_API cb_status cb_run_render(const cb_run* run, cb_format format, char** out);

/* Analysis. `config` may be NULL for the defaults. */
CB_API cb_status cb_analyze(const cb_run* run, const cb_test_config* config, cb_report** out);
CB_API void cb_report_free(cb_report* report);
CB_API cb_status cb_report_get_summary(const cb_report* report, cb_report_summary* out);
/* manifest_json: {"command": s, "config": {...}, "seed": n|null,
 * "inputs": {role: {...}}, "created_at": s|null}; all keys but "command"
 * optional. The tool version is filled in by the library. */
CB_API cb_status cb_report_write(const cb_report* report, const char* manifest_json,
                                 cb_format format, char** out);

CB_API cb_status cb_triple_from_json(const char* json, cb_triple* out);
CB_API cb_status cb_realize(const cb_triple* triple, cb_realizability* out);
CB_API cb_status cb_render_realizability(const cb_triple* triple, cb_format format, char** out);

CB_API cb_status cb_maximize(double grid_step, int refine_iterations, cb_maximum* out);
CB_API cb_status cb_render_maximum(const cb_maximum* maximum, cb_format format, char** out);

CB_API cb_status cb_required_sample_size(double target_delta, const cb_test_config* config,
                                         double power, cb_sample_size* out);
CB_API cb_status cb_render_sample_size(double target_delta, const cb_test_config* config,
                                       double power, cb_format format, char** out);

/* Writes 64 hex digits plus a terminating NUL into out. */
CB_API cb_status cb_sha256_hex(const void* data, size_t size, char out[65]);

#ifdef __cplusplus
}
#endif

#endif /* CONDBELL_H */
