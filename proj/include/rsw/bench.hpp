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

#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rsw/config.hpp"
#include "rsw/estimators.hpp"
#include "rsw/problems.hpp"
#include "rsw/quadratures.hpp"
#include "rsw/spectral.hpp"
#include "rsw/transport.hpp"

namespace rsw {

/// "<node method>[+cv_low|+cv_up|+shcv[:L]]".
struct EstimatorSpec {
  MethodSpec nodes;
  std::string control;  // "", "low", "up", "sh"
  int shcv_degree = 0;  // max harmonic degree for "sh"
  std::string label;

  static EstimatorSpec parse(const std::string& text, int d);
};

struct Problem {
  std::shared_ptr<const DiscreteMeasure> mu;
  std::shared_ptr<const DiscreteMeasure> nu;
  Integrand f;
  std::optional<double> exact;
  int d = 0;
  double p = 2.0;
  std::vector<std::string> warnings;
};

Problem build_problem(const ExperimentConfig& config);

/// One estimate with the given method; basis_seed fixes SHCV harmonics.
EstimatorResult run_estimator(const Problem& problem, const EstimatorSpec& spec, int n, Seed seed,
                              std::uint64_t basis_seed);

struct ReportRow {
  std::string method;
  long long n = 0;
  std::string statistic;
  double value = 0.0;
};

struct CellFailure {
  std::string method;
  long long n = 0;
  std::string message;
};

struct Report {
  std::vector<std::pair<std::string, std::string>> config;
  std::string kind;  // bench | sweep-eps
  std::string reference_method;
  long long reference_nodes = 0;
  double reference = 0.0;
  double reference_seconds = 0.0;
  double level = 0.95;
  double per_test_level = 0.95;
  std::vector<ReportRow> rows;
  std::vector<CellFailure> failures;
  std::vector<std::string> warnings;

  /// Statistic value for (method, n), if present.
  std::optional<double> find(const std::string& method, long long n, const std::string& statistic) const;
};

struct ReferenceValue {
  double value = 0.0;
  std::string method;
  long long nodes = 0;
  double seconds = 0.0;
};

ReferenceValue compute_reference(const Problem& problem, const ExperimentConfig& config);

Report run_experiment(const ExperimentConfig& config);
Report epsilon_sweep(const ExperimentConfig& config);

/// Long format: method,n,statistic,value.
void write_report_csv(std::ostream& os, const Report& report);
/// JSON mirror with the config echo, reference, rows, failures and warnings.
void write_report_json(std::ostream& os, const Report& report);

struct SpectrumResult {
  SpectralProfile profile;
  VariancePrediction prediction;
};

SpectrumResult run_spectrum(const ExperimentConfig& config, int max_degree, long long integration_nodes,
                            int predict_n);

}  // namespace rsw
