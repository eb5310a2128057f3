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

#include "rsw/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "rsw/error.hpp"
#include "rsw/stats.hpp"

namespace rsw {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

int worker_count(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs body(i) for i in [0, count); the first exception is rethrown.
template <class F>
void parallel_for(long long count, int threads, F body) {
  threads = static_cast<int>(std::min<long long>(threads, count));
  if (threads <= 1) {
    for (long long i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<long long> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (long long i; (i = next.fetch_add(1)) < count;) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          next = count;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

std::string number_text(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

struct Cell {
  EstimatorSpec spec;
  int n = 0;
  std::optional<double> epsilon;
};

struct CellResult {
  std::vector<double> values;
  std::vector<double> wall;
  std::vector<double> generation;
  int clipped = 0;
  std::string failure;
};

EstimatorSpec configured_spec(const std::string& text, const ExperimentConfig& c) {
  EstimatorSpec spec = EstimatorSpec::parse(text, c.d);
  if (spec.nodes.name == "isvmf" && text.find("@r=") == std::string::npos) spec.nodes.budget_fraction = c.isvmf_r;
  if (spec.nodes.name == "repelled" && !spec.nodes.exponent && c.repel_s > 0.0) spec.nodes.exponent = c.repel_s;
  return spec;
}

std::vector<CellResult> run_cells(const Problem& problem, const std::vector<Cell>& cells,
                                  const ExperimentConfig& config) {
  const int reps = config.replications;
  const std::uint64_t basis_seed = Seed(config.seed).child(phase::basis).value();
  std::vector<CellResult> out(cells.size());
  std::vector<std::string> errors(cells.size() * reps);
  for (auto& r : out) {
    r.values.assign(reps, 0.0);
    r.wall.assign(reps, 0.0);
    r.generation.assign(reps, 0.0);
  }
  std::vector<char> clipped(cells.size() * reps, 0);
  const Seed root(config.seed);
  parallel_for(static_cast<long long>(cells.size()) * reps, worker_count(config.threads), [&](long long task) {
    const auto c = static_cast<std::size_t>(task / reps);
    const int rep = static_cast<int>(task % reps);
    // The replication seed ignores the method so that methods are paired.
    const Seed seed = root.substream(static_cast<std::uint64_t>(rep), phase::nodes);
    try {
      const EstimatorResult r = run_estimator(problem, cells[c].spec, cells[c].n, seed, basis_seed);
      out[c].values[rep] = r.value;
      out[c].wall[rep] = r.wall_seconds;
      out[c].generation[rep] = r.generation_seconds;
      clipped[task] = r.clipped ? 1 : 0;
    } catch (const std::exception& e) {
      errors[task] = e.what();
    }
  });
  for (std::size_t c = 0; c < cells.size(); ++c) {
    for (int rep = 0; rep < reps; ++rep) {
      const auto task = c * reps + rep;
      out[c].clipped += clipped[task];
      if (out[c].failure.empty() && !errors[task].empty())
        out[c].failure = "replication " + std::to_string(rep) + ": " + errors[task];
    }
  }
  return out;
}

void append_cell_rows(Report& report, const Cell& cell, const CellResult& res, double level) {
  const std::string& m = cell.spec.label;
  auto add = [&](const std::string& stat, double v) { report.rows.push_back({m, cell.n, stat, v}); };
  if (cell.epsilon) add("epsilon", *cell.epsilon);
  if (!res.failure.empty()) {
    add("failed", 1.0);
    report.failures.push_back({m, cell.n, res.failure});
    return;
  }
  const auto& x = res.values;
  const double mean = sample_mean(x);
  double mse = 0.0;
  for (double v : x) mse += (v - report.reference) * (v - report.reference);
  mse /= x.size();
  const double var = population_variance(x);
  const double svar = sample_variance(x);
  const Interval mci = ci_mean_gaussian(x, level);
  const Interval vci = ci_variance_chi2(x, level);
  add("failed", 0.0);
  add("replications", static_cast<double>(x.size()));
  add("mean", mean);
  add("bias", mean - report.reference);
  add("mse", mse);
  add("variance", var);
  add("sample_variance", svar);
  add("std_error", std::sqrt(svar / x.size()));
  add("mean_ci_lower", mci.lower);
  add("mean_ci_upper", mci.upper);
  add("variance_ci_lower", vci.lower);
  add("variance_ci_upper", vci.upper);
  add("ci_level", level);
  add("clipped", res.clipped);
  add("mean_wall_seconds", sample_mean(res.wall));
  add("mean_generation_seconds", sample_mean(res.generation));
}

Report assemble(const ExperimentConfig& config, const std::string& kind, const std::vector<Cell>& cells,
                int interval_groups) {
  const auto start = Clock::now();
  const Problem problem = build_problem(config);
  Report report;
  report.kind = kind;
  report.config = config.entries();
  report.warnings = problem.warnings;
  report.level = config.level;
  report.per_test_level = bonferroni(config.level, std::max(1, interval_groups));

  const ReferenceValue ref = compute_reference(problem, config);
  report.reference = ref.value;
  report.reference_method = ref.method;
  report.reference_nodes = ref.nodes;
  report.reference_seconds = ref.seconds;
  report.rows.push_back({"reference", ref.nodes, "value", ref.value});

  const auto results = run_cells(problem, cells, config);
  for (std::size_t c = 0; c < cells.size(); ++c) append_cell_rows(report, cells[c], results[c], report.per_test_level);
  report.rows.push_back({"total", 0, "wall_seconds", seconds_since(start)});
  return report;
}

}  // namespace

EstimatorSpec EstimatorSpec::parse(const std::string& text, int d) {
  EstimatorSpec spec;
  spec.label = text;
  const auto plus = text.find('+');
  spec.nodes = MethodSpec::parse(text.substr(0, plus));
  if (plus == std::string::npos) return spec;
  const std::string est = text.substr(plus + 1);
  if (est == "cv_low") {
    spec.control = "low";
  } else if (est == "cv_up") {
    spec.control = "up";
  } else if (est == "shcv" || est.rfind("shcv:", 0) == 0) {
    spec.control = "sh";
    spec.shcv_degree = shcv_default_degree(d);
    if (est.size() > 5) {
      try {
        spec.shcv_degree = std::stoi(est.substr(5));
      } catch (const std::exception&) {
        fail(ErrorCode::parse, "invalid SHCV degree in '" + text + "'");
      }
    }
    require(spec.shcv_degree >= 1, ErrorCode::parse, "SHCV degree must be >= 1");
  } else {
    fail(ErrorCode::parse, "unknown estimator '" + est + "' (expected cv_low, cv_up or shcv[:L])");
  }
  return spec;
}

Problem build_problem(const ExperimentConfig& config) {
  config.validate();
  Problem pb;
  pb.d = config.d;
  pb.p = config.p;
  const Seed seed(config.seed);
  if (config.integrand == "halfsphere") {
    pb.f = [](DirectionRef x) { return x[0] > 0.0 ? 1.0 : 0.0; };
    pb.exact = 0.5;
    return pb;
  }
  if (config.problem == "gaussian") {
    GaussianPair pair = gen_gaussian_pair(config.d, config.atoms, seed);
    pb.mu = std::make_shared<const DiscreteMeasure>(std::move(pair.mu));
    pb.nu = std::make_shared<const DiscreteMeasure>(std::move(pair.nu));
  } else if (config.problem == "banana") {
    pb.mu = std::make_shared<const DiscreteMeasure>(gen_banana_sample(config.d, config.atoms, seed));
    pb.nu = std::make_shared<const DiscreteMeasure>(gen_banana_sample(config.d, config.atoms, seed.child(2)));
  } else {
    pb.mu = std::make_shared<const DiscreteMeasure>(load_point_cloud(config.mu_path, &pb.warnings));
    pb.nu = std::make_shared<const DiscreteMeasure>(load_point_cloud(config.nu_path, &pb.warnings));
    require(pb.mu->dim() == pb.nu->dim(), ErrorCode::dimension_mismatch, "point clouds differ in dimension");
    require(pb.mu->dim() == config.d, ErrorCode::dimension_mismatch,
            "point clouds have dimension " + std::to_string(pb.mu->dim()) + " but d = " + std::to_string(config.d));
  }
  pb.f = sw_integrand(pb.mu, pb.nu, config.p);
  return pb;
}

EstimatorResult run_estimator(const Problem& problem, const EstimatorSpec& spec, int n, Seed seed,
                              std::uint64_t basis_seed) {
  const auto start = Clock::now();
  const QuadratureNodes q = generate_nodes(spec.nodes, problem.d, n, seed, &problem.f);
  const double generation = seconds_since(start);
  EstimatorResult r;
  if (spec.control.empty()) {
    if (spec.nodes.name == "repelled") {
      r = repelled_estimate(problem.f, q);
    } else if (q.uniform_weights) {
      r = mc_mean(problem.f, q);
    } else {
      r = weighted_estimate(problem.f, q);
    }
  } else {
    ControlFamily family;
    if (spec.control == "sh") {
      family = shcv_controls(cached_harmonic_basis(problem.d, spec.shcv_degree, basis_seed), spec.shcv_degree);
    } else {
      require(problem.mu && problem.nu, ErrorCode::invalid_argument,
              "moment control variates need the SW integrand");
      family = spec.control == "low" ? cv_low(*problem.mu, *problem.nu) : cv_up(*problem.mu, *problem.nu);
    }
    r = ols_cv_estimate(problem.f, q, family);
  }
  if (problem.mu) finalize_sw(r, problem.p);
  r.generation_seconds = generation;
  r.wall_seconds = seconds_since(start);
  return r;
}

ReferenceValue compute_reference(const Problem& problem, const ExperimentConfig& config) {
  const auto start = Clock::now();
  ReferenceValue ref;
  if (problem.exact && (config.reference_method == "auto" || config.reference_method == "exact")) {
    ref.value = *problem.exact;
    ref.method = "exact";
    return ref;
  }
  require(config.reference_method != "exact", ErrorCode::invalid_argument, "no exact value for this integrand");
  const int d = problem.d;
  ref.method = config.reference_method;
  if (ref.method == "auto") ref.method = d == 2 ? "grid2d" : d == 3 ? "spiral3d" : "iid";
  ref.nodes = config.effective_reference_nodes();
  const Seed seed = Seed(config.seed).child(phase::reference);
  const int threads = worker_count(config.threads);
  if (ref.method == "iid") {
    // Streamed in chunks so the node matrix never holds all directions.
    const long long chunk = 100000;
    const long long chunks = (ref.nodes + chunk - 1) / chunk;
    std::vector<double> partial(chunks, 0.0);
    parallel_for(chunks, threads, [&](long long c) {
      const int size = static_cast<int>(std::min(chunk, ref.nodes - c * chunk));
      const Matrix x = sample_uniform_sphere(d, size, seed.substream(static_cast<std::uint64_t>(c), phase::reference));
      double s = 0.0;
      for (int i = 0; i < size; ++i) s += problem.f(x.col(i));
      partial[c] = s;
    });
    for (double s : partial) ref.value += s;
    ref.value /= static_cast<double>(ref.nodes);
  } else {
    const QuadratureNodes q =
        generate_nodes(MethodSpec::parse(ref.method), d, static_cast<int>(ref.nodes), seed, &problem.f);
    Vector values(q.size());
    parallel_for(q.size(), threads, [&](long long i) { values[i] = problem.f(q.nodes.col(i)); });
    ref.value = q.weights.dot(values);
  }
  ref.seconds = seconds_since(start);
  return ref;
}

std::optional<double> Report::find(const std::string& method, long long n, const std::string& statistic) const {
  for (const auto& r : rows)
    if (r.method == method && r.n == n && r.statistic == statistic) return r.value;
  return std::nullopt;
}

Report run_experiment(const ExperimentConfig& config) {
  config.validate();
  std::vector<Cell> cells;
  for (const auto& m : config.methods)
    for (int n : config.nodes) cells.push_back({configured_spec(m, config), n, std::nullopt});
  Report report = assemble(config, "bench", cells, static_cast<int>(cells.size()));
  for (const auto& cell : cells) {
    if (2 * (cell.spec.control == "sh" ? harmonic_cumulative_dim(config.d, cell.spec.shcv_degree) - 1 : 1) > cell.n &&
        !cell.spec.control.empty())
      report.warnings.push_back(cell.spec.label + " at N=" + std::to_string(cell.n) +
                                ": more than N/2 controls, the fit may degrade");
  }
  return report;
}

Report epsilon_sweep(const ExperimentConfig& config) {
  config.validate();
  require(!config.epsilons.empty(), ErrorCode::invalid_argument, "sweep-eps needs a nonempty epsilons grid");
  require(config.replications >= 30, ErrorCode::invalid_argument, "sweep-eps needs replications >= 30");
  for (double e : config.epsilons) require(e >= 0.0, ErrorCode::invalid_argument, "epsilons must be >= 0");
  const MethodSpec base = MethodSpec::parse(config.base_method);
  require(base.name != "repelled", ErrorCode::invalid_argument, "base_method must not itself be repelled");
  std::vector<double> grid{0.0};
  for (double e : config.epsilons)
    if (e != 0.0) grid.push_back(e);
  std::vector<Cell> cells;
  for (int n : config.nodes) {
    for (double e : grid) {
      std::string label = "repelled:" + base.to_string() + "@eps=" + number_text(e);
      if (config.repel_s > 0.0) label += "@s=" + number_text(config.repel_s);
      cells.push_back({configured_spec(label, config), n, e});
    }
  }
  return assemble(config, "sweep-eps", cells, static_cast<int>(grid.size()));
}

void write_report_csv(std::ostream& os, const Report& report) {
  os << "method,n,statistic,value\n";
  for (const auto& r : report.rows) os << r.method << ',' << r.n << ',' << r.statistic << ',' << number_text(r.value) << '\n';
}

void write_report_json(std::ostream& os, const Report& report) {
  nlohmann::ordered_json j;
  j["kind"] = report.kind;
  nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
  for (const auto& [k, v] : report.config) cfg[k] = v;
  j["config"] = cfg;
  j["reference"] = {{"method", report.reference_method},
                    {"nodes", report.reference_nodes},
                    {"value", report.reference},
                    {"seconds", report.reference_seconds}};
  j["level"] = report.level;
  j["per_test_level"] = report.per_test_level;
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& r : report.rows)
    j["rows"].push_back({{"method", r.method}, {"n", r.n}, {"statistic", r.statistic}, {"value", r.value}});
  j["failures"] = nlohmann::ordered_json::array();
  for (const auto& f : report.failures)
    j["failures"].push_back({{"method", f.method}, {"n", f.n}, {"message", f.message}});
  j["warnings"] = report.warnings;
  os << j.dump(2) << '\n';
}

SpectrumResult run_spectrum(const ExperimentConfig& config, int max_degree, long long integration_nodes,
                            int predict_n) {
  const Problem problem = build_problem(config);
  const int d = problem.d;
  require(max_degree >= 0, ErrorCode::invalid_argument, "profile degree must be >= 0");
  require(harmonic_cumulative_dim(d, max_degree) <= 20000, ErrorCode::invalid_argument,
          "profile degree too high for this dimension");
  require(integration_nodes >= 1, ErrorCode::invalid_argument, "need integration nodes");
  const Seed seed = Seed(config.seed).child(phase::reference);
  const std::string method = d == 2 ? "grid2d" : d == 3 ? "spiral3d" : "iid";
  const QuadratureNodes q =
      generate_nodes(MethodSpec::parse(method), d, static_cast<int>(integration_nodes), seed, &problem.f);
  const auto basis = cached_harmonic_basis(d, max_degree, Seed(config.seed).child(phase::basis).value());
  SpectrumResult out;
  out.profile = spectral_profile(problem.f, *basis, max_degree, q);
  out.prediction = unifortho_variance_predict(out.profile, predict_n);
  return out;
}

}  // namespace rsw
