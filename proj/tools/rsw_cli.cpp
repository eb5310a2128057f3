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

#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rsw/rsw.h"

namespace {

// Exit codes: 0 success, 1 some report rows failed, 2 usage or runtime error.
int report_error(rsw_status s) {
  std::fprintf(stderr, "rsw: %s: %s\n", rsw_status_string(s), rsw_last_error());
  return 2;
}

struct ConfigOptions {
  std::string path;
  std::vector<std::string> overrides;
  std::string output;
  std::string cache_dir;
};

void add_config_options(CLI::App* cmd, ConfigOptions& o) {
  cmd->add_option("-c,--config", o.path, "key = value config file");
  cmd->add_option("-s,--set", o.overrides, "override, key=value (repeatable)");
  cmd->add_option("-o,--output", o.output, "output prefix (writes PREFIX.csv and PREFIX.json)");
  cmd->add_option("--cache-dir", o.cache_dir, "harmonic basis cache directory (sets RSW_CACHE_DIR)");
}

rsw_status make_config(const ConfigOptions& o, rsw_config** cfg) {
  if (!o.cache_dir.empty()) setenv("RSW_CACHE_DIR", o.cache_dir.c_str(), 1);
  rsw_status s = o.path.empty() ? rsw_config_create(cfg) : rsw_config_load(o.path.c_str(), cfg);
  if (s != RSW_OK) return s;
  for (const auto& kv : o.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      std::fprintf(stderr, "rsw: override must be key=value: %s\n", kv.c_str());
      return RSW_ERR_PARSE;
    }
    s = rsw_config_set(*cfg, kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str());
    if (s != RSW_OK) return s;
  }
  if (!o.output.empty()) s = rsw_config_set(*cfg, "output", o.output.c_str());
  return s;
}

int finish_report(rsw_config* cfg, rsw_report* rep) {
  char prefix[4096];
  rsw_config_get(cfg, "output", prefix, sizeof prefix);
  const std::string csv = std::string(prefix) + ".csv";
  const std::string json = std::string(prefix) + ".json";
  rsw_status s = rsw_report_write_csv(rep, csv.c_str());
  if (s == RSW_OK) s = rsw_report_write_json(rep, json.c_str());
  if (s != RSW_OK) return report_error(s);
  for (size_t i = 0; i < rsw_report_warning_count(rep); ++i)
    std::fprintf(stderr, "rsw: warning: %s\n", rsw_report_warning(rep, i));
  const size_t failed = rsw_report_failed_count(rep);
  for (size_t i = 0; i < failed; ++i) {
    const char* method = nullptr;
    const char* message = nullptr;
    long long n = 0;
    rsw_report_failure(rep, i, &method, &n, &message);
    std::fprintf(stderr, "rsw: failed: %s N=%lld: %s\n", method, n, message);
  }
  std::printf("reference %.17g\nwrote %s\nwrote %s\n", rsw_report_reference(rep), csv.c_str(), json.c_str());
  return failed > 0 ? 1 : 0;
}

int run_report(const ConfigOptions& o, bool sweep) {
  rsw_config* cfg = nullptr;
  rsw_status s = make_config(o, &cfg);
  if (s != RSW_OK) {
    rsw_config_free(cfg);
    return report_error(s);
  }
  rsw_report* rep = nullptr;
  s = sweep ? rsw_sweep_eps(cfg, &rep) : rsw_bench_run(cfg, &rep);
  int code = s == RSW_OK ? finish_report(cfg, rep) : report_error(s);
  rsw_report_free(rep);
  rsw_config_free(cfg);
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sliced Wasserstein estimation on the sphere"};
  app.require_subcommand(1);
  app.set_version_flag("--version", rsw_version());

  auto* est = app.add_subcommand("estimate", "one-shot SW_p between two point clouds");
  std::string mu_path, nu_path, method = "iid";
  double p = 2.0;
  int n = 1000;
  unsigned long long seed = 0;
  std::string cache_dir;
  est->add_option("--mu", mu_path, "first point cloud (CSV)")->required();
  est->add_option("--nu", nu_path, "second point cloud (CSV)")->required();
  est->add_option("-p,--p", p, "order p >= 1");
  est->add_option("-m,--method", method, "node method[+estimator], e.g. unifortho+shcv:4");
  est->add_option("-n,--nodes", n, "number of directions");
  est->add_option("--seed", seed, "seed");
  est->add_option("--cache-dir", cache_dir, "harmonic basis cache directory");

  ConfigOptions bench_opts, sweep_opts, spec_opts;
  auto* bench = app.add_subcommand("bench", "replicated comparison of methods");
  add_config_options(bench, bench_opts);
  auto* sweep = app.add_subcommand("sweep-eps", "variance of repelled estimators over an epsilon grid");
  add_config_options(sweep, sweep_opts);

  auto* spectrum = app.add_subcommand("spectrum", "spectral profile of the configured integrand");
  add_config_options(spectrum, spec_opts);
  int degree = 12;
  long long integration_nodes = 100000;
  int predict_n = 0;
  spectrum->add_option("-L,--degree", degree, "maximal harmonic degree");
  spectrum->add_option("--integration-nodes", integration_nodes, "nodes of the integration rule");
  spectrum->add_option("--predict-n", predict_n, "node count for the UnifOrtho variance prediction (default d)");

  auto* gen = app.add_subcommand("gen", "generate toy measures");
  std::string kind = "gaussian", out_mu = "mu.csv", out_nu = "nu.csv";
  int d = 3, m = 500;
  unsigned long long gen_seed = 0;
  gen->add_option("kind", kind, "gaussian | banana")->check(CLI::IsMember({"gaussian", "banana"}));
  gen->add_option("-d,--dim", d, "dimension");
  gen->add_option("-M,--atoms", m, "atoms per measure");
  gen->add_option("--seed", gen_seed, "seed");
  gen->add_option("--out-mu", out_mu, "output for the first measure");
  gen->add_option("--out-nu", out_nu, "output for the second measure (gaussian only)");

  CLI11_PARSE(app, argc, argv);

  if (*est) {
    if (!cache_dir.empty()) setenv("RSW_CACHE_DIR", cache_dir.c_str(), 1);
    rsw_measure* mu = nullptr;
    rsw_measure* nu = nullptr;
    rsw_status s = rsw_measure_load(mu_path.c_str(), &mu);
    if (s == RSW_OK) s = rsw_measure_load(nu_path.c_str(), &nu);
    rsw_estimate r{};
    if (s == RSW_OK) {
      for (const rsw_measure* h : {mu, nu})
        for (size_t i = 0; i < rsw_measure_warning_count(h); ++i)
          std::fprintf(stderr, "rsw: warning: %s\n", rsw_measure_warning(h, i));
      s = rsw_estimate_sw(mu, nu, p, method.c_str(), n, seed, &r);
    }
    rsw_measure_free(mu);
    rsw_measure_free(nu);
    if (s != RSW_OK) return report_error(s);
    std::printf("method %s\nnodes %d\nsw_pp %.17g\nsw %.17g\nclipped %d\nseconds %.6f\n", method.c_str(), n, r.value,
                r.sw_value, r.clipped, r.wall_seconds);
    return 0;
  }
  if (*bench) return run_report(bench_opts, false);
  if (*sweep) return run_report(sweep_opts, true);
  if (*spectrum) {
    rsw_config* cfg = nullptr;
    rsw_status s = make_config(spec_opts, &cfg);
    rsw_profile* prof = nullptr;
    if (s == RSW_OK) {
      if (predict_n <= 0) {
        char buf[64];
        rsw_config_get(cfg, "d", buf, sizeof buf);
        predict_n = std::atoi(buf);
      }
      s = rsw_spectrum(cfg, degree, integration_nodes, predict_n, &prof);
    }
    char prefix[4096] = "profile";
    if (s == RSW_OK && !spec_opts.output.empty()) rsw_config_get(cfg, "output", prefix, sizeof prefix);
    const std::string path = std::string(prefix) + ".csv";
    if (s == RSW_OK) s = rsw_profile_write_csv(prof, path.c_str());
    rsw_prediction pred{};
    if (s == RSW_OK) s = rsw_profile_prediction(prof, &pred);
    rsw_profile_free(prof);
    rsw_config_free(cfg);
    if (s != RSW_OK) return report_error(s);
    std::printf("variance %.17g\ncrude_variance %.17g\nunifortho_variance %.17g\ntail_bound %.3g\nwrote %s\n",
                pred.variance, pred.variance / predict_n, pred.full, pred.tail_bound,
                path.c_str());
    if (pred.tail_warning) std::fprintf(stderr, "rsw: warning: profile truncation tail %.3g\n", pred.tail_bound);
    return 0;
  }
  if (*gen) {
    rsw_measure* a = nullptr;
    rsw_measure* b = nullptr;
    rsw_status s = kind == "gaussian" ? rsw_gen_gaussian_pair(d, m, gen_seed, &a, &b) : rsw_gen_banana(d, m, gen_seed, &a);
    if (s == RSW_OK) s = rsw_measure_save(a, out_mu.c_str());
    if (s == RSW_OK && b) s = rsw_measure_save(b, out_nu.c_str());
    const bool pair = b != nullptr;
    rsw_measure_free(a);
    rsw_measure_free(b);
    if (s != RSW_OK) return report_error(s);
    std::printf("wrote %s%s%s\n", out_mu.c_str(), pair ? " " : "", pair ? out_nu.c_str() : "");
    return 0;
  }
  return 2;
}
