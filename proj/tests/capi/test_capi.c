/*
 * Copyright 2026 The rsw Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "rsw/rsw.h"

static int failures = 0;

#define EXPECT(cond)                                              \
  do {                                                            \
    if (!(cond)) {                                                \
      fprintf(stderr, "%s:%d: failed: %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                 \
    }                                                             \
  } while (0)

static void test_errors(void) {
  rsw_measure* m = NULL;
  EXPECT(rsw_measure_load("/nonexistent/cloud.csv", &m) == RSW_ERR_IO);
  EXPECT(m == NULL);
  EXPECT(strlen(rsw_last_error()) > 0);
  EXPECT(rsw_measure_load(NULL, &m) == RSW_ERR_NULL_POINTER);
  EXPECT(strcmp(rsw_status_string(RSW_ERR_PARSE), "parse error") == 0);
  double atoms[2] = {0.0, 1.0};
  double bad[2] = {0.9, 0.9};
  EXPECT(rsw_measure_create(1, 2, atoms, bad, &m) == RSW_ERR_INVALID_ARGUMENT);
  EXPECT(rsw_measure_create(1, 2, atoms, NULL, &m) == RSW_OK);
  EXPECT(strlen(rsw_last_error()) == 0);
  rsw_measure_free(m);
  rsw_measure_free(NULL);
}

static void test_dirac(void) {
  /* SW_2^2 between two Diracs is |a - b|^2 / d. */
  double a[3] = {1.0, 0.0, 0.0};
  double b[3] = {0.0, 2.0, 0.0};
  rsw_measure *mu = NULL, *nu = NULL;
  EXPECT(rsw_measure_create(3, 1, a, NULL, &mu) == RSW_OK);
  EXPECT(rsw_measure_create(3, 1, b, NULL, &nu) == RSW_OK);
  rsw_estimate r;
  EXPECT(rsw_estimate_sw(mu, nu, 2.0, "spiral3d", 20000, 1, &r) == RSW_OK);
  EXPECT(fabs(r.value - 5.0 / 3.0) < 1e-3);
  EXPECT(fabs(r.sw_value - sqrt(r.value)) < 1e-12);
  EXPECT(r.evaluations == 20000);
  EXPECT(rsw_estimate_sw(mu, nu, 2.0, "bogus", 10, 1, &r) == RSW_ERR_PARSE);
  EXPECT(rsw_estimate_sw(mu, nu, 2.0, "iid+shcv:2", 30, 1, &r) == RSW_OK);
  EXPECT(r.controls == 8);
  rsw_measure_free(mu);
  rsw_measure_free(nu);
}

static void test_generation_and_files(void) {
  rsw_measure *mu = NULL, *nu = NULL, *back = NULL;
  EXPECT(rsw_gen_gaussian_pair(3, 50, 7, &mu, &nu) == RSW_OK);
  EXPECT(rsw_measure_dim(mu) == 3);
  EXPECT(rsw_measure_size(nu) == 50);
  const char* path = "capi_cloud.csv";
  EXPECT(rsw_measure_save(mu, path) == RSW_OK);
  EXPECT(rsw_measure_load(path, &back) == RSW_OK);
  double x[150], y[150], w[50];
  EXPECT(rsw_measure_data(mu, x, NULL) == RSW_OK);
  EXPECT(rsw_measure_data(back, y, w) == RSW_OK);
  EXPECT(memcmp(x, y, sizeof x) == 0);
  EXPECT(w[0] == 1.0 / 50);
  EXPECT(rsw_measure_warning_count(back) == 0);
  remove(path);
  rsw_measure *banana = NULL;
  EXPECT(rsw_gen_banana(3, 10, 1, &banana) == RSW_ERR_INVALID_ARGUMENT);
  EXPECT(rsw_gen_banana(4, 10, 1, &banana) == RSW_OK);
  rsw_measure_free(banana);
  rsw_measure_free(mu);
  rsw_measure_free(nu);
  rsw_measure_free(back);
}

static void test_bench(void) {
  rsw_config* c = NULL;
  EXPECT(rsw_config_create(&c) == RSW_OK);
  EXPECT(rsw_config_set(c, "M", "30") == RSW_OK);
  EXPECT(rsw_config_set(c, "methods", "iid,grid2d") == RSW_OK);
  EXPECT(rsw_config_set(c, "nodes", "10") == RSW_OK);
  EXPECT(rsw_config_set(c, "replications", "4") == RSW_OK);
  EXPECT(rsw_config_set(c, "reference_nodes", "1000") == RSW_OK);
  EXPECT(rsw_config_set(c, "nope", "1") == RSW_ERR_PARSE);
  char buf[32];
  EXPECT(rsw_config_get(c, "methods", buf, sizeof buf) == RSW_OK);
  EXPECT(strcmp(buf, "iid,grid2d") == 0);
  EXPECT(rsw_config_get(c, "methods", buf, 4) == RSW_OK);
  EXPECT(strcmp(buf, "iid") == 0);

  rsw_report* r = NULL;
  EXPECT(rsw_bench_run(c, &r) == RSW_OK);
  EXPECT(rsw_report_failed_count(r) == 1);
  const char* method = NULL;
  const char* message = NULL;
  long long n = 0;
  EXPECT(rsw_report_failure(r, 0, &method, &n, &message) == RSW_OK);
  EXPECT(strcmp(method, "grid2d") == 0);
  EXPECT(n == 10);
  EXPECT(rsw_report_row_count(r) > 5);
  const char* stat = NULL;
  double value = 0.0;
  EXPECT(rsw_report_row(r, 0, &method, &n, &stat, &value) == RSW_OK);
  EXPECT(strcmp(method, "reference") == 0);
  EXPECT(value == rsw_report_reference(r));
  EXPECT(rsw_report_row(r, 100000, &method, &n, &stat, &value) == RSW_ERR_INVALID_ARGUMENT);
  EXPECT(rsw_report_write_csv(r, "capi_report.csv") == RSW_OK);
  EXPECT(rsw_report_write_json(r, "capi_report.json") == RSW_OK);
  remove("capi_report.csv");
  remove("capi_report.json");
  rsw_report_free(r);

  rsw_profile* p = NULL;
  EXPECT(rsw_spectrum(c, 4, 5000, 3, &p) == RSW_OK);
  EXPECT(rsw_profile_max_degree(p) == 4);
  EXPECT(rsw_profile_energy(p, 2) > 0.0);
  rsw_prediction pred;
  EXPECT(rsw_profile_prediction(p, &pred) == RSW_OK);
  EXPECT(pred.crude_per_frame > 0.0);
  rsw_profile_free(p);

  EXPECT(rsw_sweep_eps(c, &r) == RSW_ERR_INVALID_ARGUMENT);
  rsw_config_free(c);
}

int main(void) {
  EXPECT(strcmp(rsw_version(), "0.1.0") == 0);
  test_errors();
  test_dirac();
  test_generation_and_files();
  test_bench();
  if (failures) {
    fprintf(stderr, "%d failure(s)\n", failures);
    return 1;
  }
  printf("capi: all checks passed\n");
  return 0;
}
