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

#include "rsw/rsw.h"

#include <cstring>
#include <fstream>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "rsw/bench.hpp"
#include "rsw/error.hpp"
#include "rsw/problems.hpp"

struct rsw_measure {
  std::shared_ptr<const rsw::DiscreteMeasure> m;
  std::vector<std::string> warnings;
};

struct rsw_config {
  rsw::ExperimentConfig c;
};

struct rsw_report {
  rsw::Report r;
};

struct rsw_profile {
  rsw::SpectrumResult s;
};

namespace {

thread_local std::string last_error;

rsw_status from_code(rsw::ErrorCode c) {
  switch (c) {
    case rsw::ErrorCode::invalid_argument: return RSW_ERR_INVALID_ARGUMENT;
    case rsw::ErrorCode::dimension_mismatch: return RSW_ERR_DIMENSION_MISMATCH;
    case rsw::ErrorCode::io: return RSW_ERR_IO;
    case rsw::ErrorCode::parse: return RSW_ERR_PARSE;
    case rsw::ErrorCode::numerical: return RSW_ERR_NUMERICAL;
    case rsw::ErrorCode::budget_exceeded: return RSW_ERR_BUDGET_EXCEEDED;
    case rsw::ErrorCode::construction_failed: return RSW_ERR_CONSTRUCTION_FAILED;
    default: return RSW_ERR_INTERNAL;
  }
}

template <class F>
rsw_status guarded(F body) {
  try {
    body();
    last_error.clear();
    return RSW_OK;
  } catch (const rsw::Error& e) {
    last_error = e.what();
    return from_code(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return RSW_ERR_OUT_OF_MEMORY;
  } catch (const std::exception& e) {
    last_error = e.what();
    return RSW_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown error";
    return RSW_ERR_INTERNAL;
  }
}

}  // namespace

extern "C" {

const char* rsw_version(void) { return "0.1.0"; }

const char* rsw_last_error(void) { return last_error.c_str(); }

const char* rsw_status_string(rsw_status status) {
  switch (status) {
    case RSW_OK: return "ok";
    case RSW_ERR_INVALID_ARGUMENT: return "invalid argument";
    case RSW_ERR_DIMENSION_MISMATCH: return "dimension mismatch";
    case RSW_ERR_IO: return "i/o error";
    case RSW_ERR_PARSE: return "parse error";
    case RSW_ERR_NUMERICAL: return "numerical failure";
    case RSW_ERR_BUDGET_EXCEEDED: return "budget exceeded";
    case RSW_ERR_CONSTRUCTION_FAILED: return "construction failed";
    case RSW_ERR_NULL_POINTER: return "null pointer";
    case RSW_ERR_OUT_OF_MEMORY: return "out of memory";
    default: return "internal error";
  }
}

rsw_status rsw_measure_create(int d, int m, const double* atoms, const double* weights, rsw_measure** out) {
  if (!atoms || !out) {
    last_error = "null pointer argument";
    return RSW_ERR_NULL_POINTER;
  }
  return guarded([&] {
    rsw::require(d >= 1 && m >= 1, rsw::ErrorCode::invalid_argument, "measure needs d >= 1 and m >= 1");
    rsw::Matrix a = Eigen::Map<const rsw::Matrix>(atoms, d, m);
    auto h = std::make_unique<rsw_measure>();
    if (weights) {
      h->m = std::make_shared<const rsw::DiscreteMeasure>(std::move(a), Eigen::Map<const rsw::Vector>(weights, m));
    } else {
      h->m = std::make_shared<const rsw::DiscreteMeasure>(rsw::DiscreteMeasure::uniform(std::move(a)));
    }
    *out = h.release();
  });
}

rsw_status rsw_measure_load(const char* path, rsw_measure** out) {
  if (!path || !out) {
    last_error = "null pointer argument";
    return RSW_ERR_NULL_POINTER;
  }
  return guarded([&] {
    auto h = std::make_unique<rsw_measure>();
    h->m = std::make_shared<const rsw::DiscreteMeasure>(rsw::load_point_cloud(path, &h->warnings));
    *out = h.release();
  });
}

rsw_status rsw_measure_save(const rsw_measure* m, const char* path) {
  if (!m || !path) {
    last_error = "null pointer argument";
    return RSW_ERR_NULL_POINTER;
  }
  return guarded([&] { rsw::save_point_cloud(*m->m, path); });
}

int rsw_measure_dim(const rsw_measure* m) { return m ? m->m->dim() : 0; }

int rsw_measure_size(const rsw_measure* m) { return m ? m->m->size() : 0; }

rsw_status rsw_measure_data(const rsw_measure* m, double* atoms, double* weights) {
  if (!m) {
    last_error = "null pointer argument";
    return RSW_ERR_NULL_POINTER;
  }
  const auto& a = m->m->atoms();
  if (atoms) std::memcpy(atoms, a.data(), sizeof(double) * a.size());
  if (weights) std::memcpy(weights, m->m->weights().data(), sizeof(double) * m->m->size());
  return RSW_OK;
}

size_t rsw_measure_warning_count(const rsw_measure* m) { return m ? m->warnings.size() : 0; }

const char* rsw_measure_warning(const rsw_measure* m, size_t i) {
  return m && i < m->warnings.size() ? m->warnings[i].c_str() : nullptr;
}

void rsw_measure_free(rsw_measure* m) { delete m; }

rsw_status rsw_gen_gaussian_pair(int d, int m, uint64_t seed, rsw_measure** mu, rsw_measure** nu) {
  if (!mu || !nu) {
    last_error = "null pointer argument";
    return RSW_ERR_NULL_POINTER;
  }
  return guarded([&] {
    rsw::GaussianPair pair = rsw::gen_gaussian_pair(d, m, rsw::Seed(seed));
    auto a = std::make_unique<rsw_measure>();
    auto b = std::make_unique<rsw_measure>();
    a->m = std::make_shared<const rsw::DiscreteMeasure>(std::move(pair.mu));
    b->m = std::make_shared<const rsw::DiscreteMeasure>(std::move(pair.nu));
    *mu = a.release();
    *nu = b.release();
  });
}

rsw_status rsw_gen_banana(int d, int m, uint64_t seed, rsw_measure** out) {
  if (!out) {
    last_error = "null pointer argument";
    return RSW_ERR_NULL_POINTER;
  }
  return guarded([&] {
    auto h = std::make_unique<rsw_measure>();
    h->m = std::make_shared<const rsw::DiscreteMeasure>(rsw::gen_banana_sample(d, m, rsw::Seed(seed)));
    *out = h.release();
  });
}

rsw_status rsw_estimate_sw(const rsw_measure* mu, const rsw_measure* nu, double p, const char* method, int n,
                           uint64_t seed, rsw_estimate* out) {
  if (!mu || !nu || !method || !out) {
    last_error = "null pointer argument";
    return RSW_ERR_NULL_POINTER;
  }
  return guarded([&] {
    rsw::require(mu->m->dim() == nu->m->dim(), rsw::ErrorCode::dimension_mismatch, "measures differ in dimension");
    rsw::require(p >= 1.0, rsw::ErrorCode::invalid_argument, "p must be >= 1");
    rsw::Problem problem;
    problem.mu = mu->m;
    problem.nu = nu->m;
    problem.d = mu->m->dim();
    problem.p = p;
    problem.f = rsw::sw_integrand(mu->m, nu->m, p);
    const auto spec = rsw::EstimatorSpec::parse(method, problem.d);
    const rsw::Seed s(seed);
    const rsw::EstimatorResult r =
        rsw::run_estimator(problem, spec, n, s.child(rsw::phase::nodes), s.child(rsw::phase::basis).value());
    out->value = r.value;
    out->sw_value = r.sw_value;
    out->evaluations = r.evaluations;
    out->wall_seconds = r.wall_seconds;
    out->clipped = r.clipped ? 1 : 0;
    out->controls = r.diagnostics.controls;
  });
}

rsw_status rsw_config_create(rsw_config** out) {
  if (!out) {
    last_error = "null pointer argument";
    return RSW_ERR_NULL_POINTER;
  }
  return guarded([&] { *out = new rsw_config(); });
}

rsw_status rsw_config_load(const char* path, rsw_config** out) {
  if (!path || !out) {
    last_error = "null pointer argument";
    return RSW_ERR_NULL_POINTER;
  }
  return guarded([&] { *out = new rsw_config{rsw::ExperimentConfig::load(path)}; });
}

rsw_status rsw_config_set(rsw_config* c, const char* key, const char* value) {
  if (!c || !key || !value) {
    last_error = "null pointer argument";
    return RSW_ERR_NULL_POINTER;
  }
  return guarded([&] { c->c.set(key, value); });
}

rsw_status rsw_config_get(const rsw_config* c, const char* key, char* buf, size_t len) {
  if (!c || !key || !buf) {
    last_error = "null pointer argument";
    return RSW_ERR_NULL_POINTER;
  }
  return guarded([&] {
    for (const auto& [k, v] : c->c.entries()) {
      if (k == key || (std::string(key) == "atoms" && k == "M")) {
        if (len == 0) return;
        const size_t count = std::min(len - 1, v.size());
        std::memcpy(buf, v.data(), count);
        buf[count] = '\0';
        return;
      }
    }
    throw rsw::Error(rsw::ErrorCode::invalid_argument, std::string("unknown config key '") + key + "'");
  });
}

void rsw_config_free(rsw_config* c) { delete c; }

rsw_status rsw_bench_run(const rsw_config* c, rsw_report** out) {
  if (!c || !out) {
    last_error = "null pointer argument";
    return RSW_ERR_NULL_POINTER;
  }
  return guarded([&] { *out = new rsw_report{rsw::run_experiment(c->c)}; });
}

rsw_status rsw_sweep_eps(const rsw_config* c, rsw_report** out) {
  if (!c || !out) {
    last_error = "null pointer argument";
    return RSW_ERR_NULL_POINTER;
  }
  return guarded([&] { *out = new rsw_report{rsw::epsilon_sweep(c->c)}; });
}

rsw_status rsw_report_write_csv(const rsw_report* r, const char* path) {
  if (!r || !path) {
    last_error = "null pointer argument";
    return RSW_ERR_NULL_POINTER;
  }
  return guarded([&] {
    std::ofstream out(path);
    rsw::require(out.good(), rsw::ErrorCode::io, std::string("cannot write '") + path + "'");
    rsw::write_report_csv(out, r->r);
    rsw::require(out.good(), rsw::ErrorCode::io, std::string("write failed for '") + path + "'");
  });
}

rsw_status rsw_report_write_json(const rsw_report* r, const char* path) {
  if (!r || !path) {
    last_error = "null pointer argument";
    return RSW_ERR_NULL_POINTER;
  }
  return guarded([&] {
    std::ofstream out(path);
    rsw::require(out.good(), rsw::ErrorCode::io, std::string("cannot write '") + path + "'");
    rsw::write_report_json(out, r->r);
    rsw::require(out.good(), rsw::ErrorCode::io, std::string("write failed for '") + path + "'");
  });
}

size_t rsw_report_row_count(const rsw_report* r) { return r ? r->r.rows.size() : 0; }

rsw_status rsw_report_row(const rsw_report* r, size_t i, const char** method, long long* n, const char** statistic,
                          double* value) {
  if (!r) {
    last_error = "null pointer argument";
    return RSW_ERR_NULL_POINTER;
  }
  if (i >= r->r.rows.size()) {
    last_error = "row index out of range";
    return RSW_ERR_INVALID_ARGUMENT;
  }
  const auto& row = r->r.rows[i];
  if (method) *method = row.method.c_str();
  if (n) *n = row.n;
  if (statistic) *statistic = row.statistic.c_str();
  if (value) *value = row.value;
  return RSW_OK;
}

size_t rsw_report_failed_count(const rsw_report* r) { return r ? r->r.failures.size() : 0; }

rsw_status rsw_report_failure(const rsw_report* r, size_t i, const char** method, long long* n,
                              const char** message) {
  if (!r) {
    last_error = "null pointer argument";
    return RSW_ERR_NULL_POINTER;
  }
  if (i >= r->r.failures.size()) {
    last_error = "failure index out of range";
    return RSW_ERR_INVALID_ARGUMENT;
  }
  const auto& f = r->r.failures[i];
  if (method) *method = f.method.c_str();
  if (n) *n = f.n;
  if (message) *message = f.message.c_str();
  return RSW_OK;
}

size_t rsw_report_warning_count(const rsw_report* r) { return r ? r->r.warnings.size() : 0; }

const char* rsw_report_warning(const rsw_report* r, size_t i) {
  return r && i < r->r.warnings.size() ? r->r.warnings[i].c_str() : nullptr;
}

double rsw_report_reference(const rsw_report* r) { return r ? r->r.reference : 0.0; }

void rsw_report_free(rsw_report* r) { delete r; }

rsw_status rsw_spectrum(const rsw_config* c, int max_degree, long long integration_nodes, int predict_n,
                        rsw_profile** out) {
  if (!c || !out) {
    last_error = "null pointer argument";
    return RSW_ERR_NULL_POINTER;
  }
  return guarded([&] { *out = new rsw_profile{rsw::run_spectrum(c->c, max_degree, integration_nodes, predict_n)}; });
}

int rsw_profile_max_degree(const rsw_profile* p) { return p ? p->s.profile.max_degree : -1; }

double rsw_profile_energy(const rsw_profile* p, int degree) { return p ? p->s.profile.energy(degree) : 0.0; }

rsw_status rsw_profile_prediction(const rsw_profile* p, rsw_prediction* out) {
  if (!p || !out) {
    last_error = "null pointer argument";
    return RSW_ERR_NULL_POINTER;
  }
  const auto& v = p->s.prediction;
  out->variance = p->s.profile.variance;
  out->crude_per_frame = v.crude_per_frame;
  out->per_frame = v.per_frame;
  out->full = v.full;
  out->tail_bound = v.tail_bound;
  out->tail_warning = v.tail_warning ? 1 : 0;
  return RSW_OK;
}

rsw_status rsw_profile_write_csv(const rsw_profile* p, const char* path) {
  if (!p || !path) {
    last_error = "null pointer argument";
    return RSW_ERR_NULL_POINTER;
  }
  return guarded([&] {
    std::ofstream out(path);
    rsw::require(out.good(), rsw::ErrorCode::io, std::string("cannot write '") + path + "'");
    rsw::write_profile_csv(out, p->s.profile);
  });
}

void rsw_profile_free(rsw_profile* p) { delete p; }

}  // extern "C"
