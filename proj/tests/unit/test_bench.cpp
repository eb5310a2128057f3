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

#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <boost/math/distributions/chi_squared.hpp>

#include "rsw/bench.hpp"
#include "rsw/error.hpp"
#include "rsw/stats.hpp"

using namespace rsw;

namespace {

std::filesystem::path temp_file(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "rsw_bench_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

ExperimentConfig small_config() {
  ExperimentConfig c;
  c.d = 3;
  c.atoms = 40;
  c.methods = {"iid", "unifortho"};
  c.nodes = {20, 40};
  c.replications = 12;
  c.seed = 5;
  c.reference_nodes = 4000;
  c.threads = 2;
  return c;
}

}  // namespace

TEST_CASE("confidence intervals") {
  CHECK(bonferroni(0.95, 20) == doctest::Approx(0.9975).epsilon(1e-14));
  CHECK(bonferroni(0.969, 10) == doctest::Approx(1 - 0.031 / 10).epsilon(1e-14));
  const std::vector<double> constant(10, 2.5);
  const Interval m = ci_mean_gaussian(constant, 0.95);
  CHECK(m.lower == 2.5);
  CHECK(m.upper == 2.5);
  const std::vector<double> x = {0.3, -1.2, 2.2, 0.7, 0.1, -0.4, 1.9, 0.0};
  const Interval v = ci_variance_chi2(x, 0.9);
  CHECK(v.contains(sample_variance(x)));
  // Quantiles against the defining probabilities.
  const boost::math::chi_squared chi(7);
  CHECK(boost::math::cdf(chi, 7 * sample_variance(x) / v.lower) == doctest::Approx(0.95).epsilon(1e-10));
  const Interval mi = ci_mean_gaussian(x, 0.95);
  const double se = std::sqrt(sample_variance(x) / 8);
  CHECK((mi.upper - mi.lower) / (2 * se) == doctest::Approx(1.959963984540054).epsilon(1e-12));
  CHECK_THROWS_AS(ci_mean_gaussian({1.0}, 0.95), Error);
  CHECK_THROWS_AS(bonferroni(1.0, 3), Error);
  CHECK(population_variance(x) * 8 == doctest::Approx(sample_variance(x) * 7));
}

TEST_CASE("gaussian pair generation") {
  const GaussianPair a = gen_gaussian_pair(3, 100000, Seed(1));
  const GaussianPair b = gen_gaussian_pair(3, 100000, Seed(1));
  CHECK(a.mu.atoms() == b.mu.atoms());
  CHECK(a.mu.weights()[7] == 1.0 / 100000);
  const MeasureMoments m = a.mu.moments();
  CHECK((m.covariance - a.cov_mu).norm() < 0.05 * a.cov_mu.norm());
  CHECK((m.mean - a.mean_mu).norm() < 0.05 * std::sqrt(a.cov_mu.trace()));
}

TEST_CASE("banana map and sample") {
  const Vector y = banana_map(Vector::Zero(4));
  CHECK(y[0] == 0.0);
  CHECK(y[1] == 25.0);
  CHECK(y[3] == 25.0);
  const DiscreteMeasure s = gen_banana_sample(4, 50000, Seed(2));
  const MeasureMoments m = s.moments();
  CHECK(std::abs(m.mean[0]) < 4.0 / std::sqrt(50000.0));
  CHECK(std::abs(m.covariance(2, 2) - 1.0) < 4.0 * std::sqrt(2.0 / 50000));
  CHECK(m.mean[1] == doctest::Approx(26.0).epsilon(0.01));
  CHECK(gen_banana_sample(4, 10, Seed(3)).atoms() == gen_banana_sample(4, 10, Seed(3)).atoms());
  CHECK_THROWS_AS(gen_banana_sample(3, 10, Seed(3)), Error);
}

TEST_CASE("point cloud files") {
  Matrix a(2, 2);
  a << 0.1, 1.0 / 3.0, -2.0, 1e-300;
  Vector w(2);
  w << 0.25, 0.75;
  const DiscreteMeasure m(a, w);
  const auto path = temp_file("cloud.csv").string();
  save_point_cloud(m, path);
  const DiscreteMeasure back = load_point_cloud(path);
  CHECK(back.atoms() == m.atoms());
  CHECK(back.weights() == m.weights());

  const auto plain = temp_file("plain.csv");
  write_text(plain, "1,2,3\n4,5,6\n");
  const DiscreteMeasure u = load_point_cloud(plain.string());
  CHECK(u.dim() == 3);
  CHECK(u.weights()[1] == 0.5);

  const auto off = temp_file("off.csv");
  write_text(off, "x,y,weight\n0,0,1\n1,1,1\n");
  std::vector<std::string> warnings;
  const DiscreteMeasure r = load_point_cloud(off.string(), &warnings);
  CHECK(r.weights()[0] == 0.5);
  CHECK(warnings.size() == 1);

  const auto ragged = temp_file("ragged.csv");
  write_text(ragged, "1,2\n3\n");
  CHECK_THROWS_AS(load_point_cloud(ragged.string()), Error);
  const auto negative = temp_file("neg.csv");
  write_text(negative, "x,weight\n1,-0.5\n2,1.5\n");
  CHECK_THROWS_AS(load_point_cloud(negative.string()), Error);
  const auto empty = temp_file("empty.csv");
  write_text(empty, "");
  CHECK_THROWS_AS(load_point_cloud(empty.string()), Error);
  CHECK_THROWS_AS(load_point_cloud("/nonexistent/file.csv"), Error);
}

TEST_CASE("config parsing") {
  std::istringstream in(
      "# toy\nproblem = gaussian\nd = 4\nM = 100\nmethods = iid, unifortho+shcv:2\nnodes = 10,20\n"
      "replications=5\nseed = 9  # trailing comment\nepsilons = 0.001, 0.01\n");
  ExperimentConfig c = ExperimentConfig::parse(in);
  CHECK(c.d == 4);
  CHECK(c.atoms == 100);
  CHECK(c.methods.size() == 2);
  CHECK(c.methods[1] == "unifortho+shcv:2");
  CHECK(c.nodes == std::vector<int>{10, 20});
  CHECK(c.seed == 9);
  CHECK(c.epsilons.size() == 2);
  c.apply_override("p=1.5");
  CHECK(c.p == 1.5);
  CHECK_THROWS_AS(c.apply_override("unknown=1"), Error);
  CHECK_THROWS_AS(c.apply_override("d=abc"), Error);
  CHECK(c.effective_reference_nodes() == 1000000);
  c.reference_nodes = 100;
  CHECK_THROWS_AS(c.validate(), Error);
  std::istringstream bad("d 3\n");
  CHECK_THROWS_AS(ExperimentConfig::parse(bad), Error);
}

TEST_CASE("estimator string parsing") {
  const EstimatorSpec a = EstimatorSpec::parse("unifortho+shcv", 3);
  CHECK(a.control == "sh");
  CHECK(a.shcv_degree == 4);
  CHECK(EstimatorSpec::parse("iid+shcv:2", 20).shcv_degree == 2);
  CHECK(EstimatorSpec::parse("iid+shcv", 20).shcv_degree == 2);
  CHECK(EstimatorSpec::parse("iid+cv_up", 3).control == "up");
  CHECK_THROWS_AS(EstimatorSpec::parse("iid+foo", 3), Error);
}

TEST_CASE("experiment report statistics") {
  const ExperimentConfig c = small_config();
  const Report r = run_experiment(c);
  CHECK(r.failures.empty());
  for (const auto& m : c.methods) {
    for (int n : c.nodes) {
      const double mse = *r.find(m, n, "mse");
      const double var = *r.find(m, n, "variance");
      const double bias = *r.find(m, n, "bias");
      CHECK(std::abs(mse - var - bias * bias) <= 1e-12 * std::max(1.0, mse));
      CHECK(*r.find(m, n, "mean_ci_lower") <= *r.find(m, n, "mean_ci_upper"));
      CHECK(*r.find(m, n, "variance_ci_lower") <= *r.find(m, n, "variance_ci_upper"));
      CHECK(*r.find(m, n, "ci_level") == doctest::Approx(1 - 0.05 / 4));
    }
  }
  // Reproducible up to timing rows.
  auto strip = [](const Report& rep) {
    std::ostringstream os;
    for (const auto& row : rep.rows)
      if (row.statistic.find("seconds") == std::string::npos)
        os << row.method << ',' << row.n << ',' << row.statistic << ',' << row.value << '\n';
    return os.str();
  };
  ExperimentConfig single = c;
  single.threads = 1;
  CHECK(strip(run_experiment(single)) == strip(r));
  std::ostringstream json;
  write_report_json(json, r);
  CHECK(json.str().find("\"config\"") != std::string::npos);
}

TEST_CASE("identical measures give zero estimates") {
  const auto path = temp_file("same.csv").string();
  save_point_cloud(gen_gaussian_pair(3, 30, Seed(4)).mu, path);
  ExperimentConfig c = small_config();
  c.problem = "files";
  c.mu_path = path;
  c.nu_path = path;
  c.methods = {"iid", "iid+cv_up"};
  const Report r = run_experiment(c);
  CHECK(r.reference == 0.0);
  for (const auto& m : c.methods) {
    CHECK(*r.find(m, 20, "mean") == 0.0);
    CHECK(*r.find(m, 20, "mse") == 0.0);
  }
}

TEST_CASE("methods see the same problem and seeds") {
  ExperimentConfig c = small_config();
  c.methods = {"iid", "iid+cv_low"};
  const Problem p = build_problem(c);
  const Problem q = build_problem(c);
  CHECK(p.mu->atoms() == q.mu->atoms());
  // Same replication seed: the uncontrolled parts are the same nodes.
  const EstimatorResult a = run_estimator(p, EstimatorSpec::parse("iid", 3), 30, Seed(1), 0);
  const EstimatorResult b = run_estimator(q, EstimatorSpec::parse("iid", 3), 30, Seed(1), 0);
  CHECK(a.value == b.value);
}

TEST_CASE("failures are recorded per row") {
  ExperimentConfig c = small_config();
  c.methods = {"iid", "grid2d"};
  const Report r = run_experiment(c);
  CHECK(r.failures.size() == 2);
  CHECK(*r.find("grid2d", 20, "failed") == 1.0);
  CHECK(*r.find("iid", 20, "failed") == 0.0);
}

TEST_CASE("epsilon sweep") {
  ExperimentConfig c = small_config();
  c.integrand = "halfsphere";
  c.replications = 30;
  c.nodes = {50};
  c.epsilons = {0.01, 0.02};
  const Report r = epsilon_sweep(c);
  CHECK(r.reference == 0.5);
  CHECK(r.per_test_level == doctest::Approx(1 - 0.05 / 3));
  // eps = 0 reproduces the base process.
  ExperimentConfig base = c;
  base.methods = {"iid"};
  const Report b = run_experiment(base);
  CHECK(*r.find("repelled:iid@eps=0", 50, "mean") == *b.find("iid", 50, "mean"));
  CHECK(r.find("repelled:iid@eps=0.01", 50, "variance_ci_upper").has_value());
  ExperimentConfig few = c;
  few.replications = 10;
  CHECK_THROWS_AS(epsilon_sweep(few), Error);
}

TEST_CASE("spectrum run") {
  ExperimentConfig c = small_config();
  const SpectrumResult s = run_spectrum(c, 4, 20000, 3);
  for (int l : {1, 3}) CHECK(s.profile.energy(l) < 1e-3 * s.profile.variance);
  CHECK(s.prediction.frames == 1);
}
