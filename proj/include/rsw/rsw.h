// Copyright 2026 The rsw Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RSW_RSW_H
#define RSW_RSW_H

#include <stddef.h>
#include <stdint.h>

#if defined(RSW_BUILDING_LIBRARY)
#define RSW_API __attribute__((visibility("default")))
#else
#define RSW_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rsw_status {
  RSW_OK = 0,
  RSW_ERR_INVALID_ARGUMENT = 1,
  RSW_ERR_DIMENSION_MISMATCH = 2,
  RSW_ERR_IO = 3,
  RSW_ERR_PARSE = 4,
  RSW_ERR_NUMERICAL = 5,
  RSW_ERR_BUDGET_EXCEEDED = 6,
  RSW_ERR_CONSTRUCTION_FAILED = 7,
  RSW_ERR_NULL_POINTER = 8,
  RSW_ERR_OUT_OF_MEMORY = 9,
  RSW_ERR_INTERNAL = 99
} rsw_status;

typedef struct rsw_measure rsw_measure;
typedef struct rsw_config rsw_config;
typedef struct rsw_report rsw_report;
typedef struct rsw_profile rsw_profile;

typedef struct rsw_estimate {
  double value;     /* SW_p^p */
  double sw_value;  /* SW_p */
  long long evaluations;
  double wall_seconds;
  int clipped;
  int controls;
} rsw_estimate;

typedef struct rsw_prediction {
  double variance;  /* Var f */
  double crude_per_frame;
  double per_frame;
  double full;
  double tail_bound;
  int tail_warning;
} rsw_prediction;

RSW_API const char* rsw_version(void);
/* Message of the last failed call on this thread, "" if none. */
RSW_API const char* rsw_last_error(void);
RSW_API const char* rsw_status_string(rsw_status status);

/* atoms is column-major d x m; weights may be NULL for uniform weights. */
RSW_API rsw_status rsw_measure_create(int d, int m, const double* atoms, const double* weights, rsw_measure** out);
RSW_API rsw_status rsw_measure_load(const char* path, rsw_measure** out);
RSW_API rsw_status rsw_measure_save(const rsw_measure* m, const char* path);
RSW_API int rsw_measure_dim(const rsw_measure* m);
RSW_API int rsw_measure_size(const rsw_measure* m);
/* Copies atoms (column-major) and weights; either output may be NULL. */
RSW_API rsw_status rsw_measure_data(const rsw_measure* m, double* atoms, double* weights);
RSW_API size_t rsw_measure_warning_count(const rsw_measure* m);
RSW_API const char* rsw_measure_warning(const rsw_measure* m, size_t i);
RSW_API void rsw_measure_free(rsw_measure* m);

RSW_API rsw_status rsw_gen_gaussian_pair(int d, int m, uint64_t seed, rsw_measure** mu, rsw_measure** nu);
RSW_API rsw_status rsw_gen_banana(int d, int m, uint64_t seed, rsw_measure** out);

/* method: node method with optional estimator, e.g. "iid", "unifortho+shcv:4". */
RSW_API rsw_status rsw_estimate_sw(const rsw_measure* mu, const rsw_measure* nu, double p, const char* method,
                                   int n, uint64_t seed, rsw_estimate* out);

RSW_API rsw_status rsw_config_create(rsw_config** out);
RSW_API rsw_status rsw_config_load(const char* path, rsw_config** out);
RSW_API rsw_status rsw_config_set(rsw_config* c, const char* key, const char* value);
/* Writes the text value of key into buf (NUL terminated, truncated to len). */
RSW_API rsw_status rsw_config_get(const rsw_config* c, const char* key, char* buf, size_t len);
RSW_API void rsw_config_free(rsw_config* c);

RSW_API rsw_status rsw_bench_run(const rsw_config* c, rsw_report** out);
RSW_API rsw_status rsw_sweep_eps(const rsw_config* c, rsw_report** out);
RSW_API rsw_status rsw_report_write_csv(const rsw_report* r, const char* path);
RSW_API rsw_status rsw_report_write_json(const rsw_report* r, const char* path);
RSW_API size_t rsw_report_row_count(const rsw_report* r);
RSW_API rsw_status rsw_report_row(const rsw_report* r, size_t i, const char** method, long long* n,
                                  const char** statistic, double* value);
RSW_API size_t rsw_report_failed_count(const rsw_report* r);
RSW_API rsw_status rsw_report_failure(const rsw_report* r, size_t i, const char** method, long long* n,
                                      const char** message);
RSW_API size_t rsw_report_warning_count(const rsw_report* r);
RSW_API const char* rsw_report_warning(const rsw_report* r, size_t i);
RSW_API double rsw_report_reference(const rsw_report* r);
RSW_API void rsw_report_free(rsw_report* r);

/* Spectral profile of the configured integrand up to max_degree. */
RSW_API rsw_status rsw_spectrum(const rsw_config* c, int max_degree, long long integration_nodes, int predict_n,
                                rsw_profile** out);
RSW_API int rsw_profile_max_degree(const rsw_profile* p);
RSW_API double rsw_profile_energy(const rsw_profile* p, int degree);
RSW_API rsw_status rsw_profile_prediction(const rsw_profile* p, rsw_prediction* out);
RSW_API rsw_status rsw_profile_write_csv(const rsw_profile* p, const char* path);
RSW_API void rsw_profile_free(rsw_profile* p);

#ifdef __cplusplus
}
#endif

#endif
