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

#include "rsw/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "rsw/error.hpp"

namespace rsw {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  require(used == v.size() && used > 0, ErrorCode::parse, "config key '" + key + "': not a number: '" + v + "'");
  return x;
}

long long to_integer(const std::string& key, const std::string& v) {
  const double x = to_double(key, v);
  require(x == static_cast<double>(static_cast<long long>(x)), ErrorCode::parse,
          "config key '" + key + "': not an integer: '" + v + "'");
  return static_cast<long long>(x);
}

std::string number_text(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

template <class T, class F>
std::string join(const std::vector<T>& v, F fmt) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + fmt(v[i]);
  return out;
}

}  // namespace

void ExperimentConfig::set(const std::string& key, const std::string& raw) {
  const std::string v = trim(raw);
  if (key == "problem") {
    problem = v;
  } else if (key == "d") {
    d = static_cast<int>(to_integer(key, v));
  } else if (key == "M" || key == "atoms") {
    atoms = static_cast<int>(to_integer(key, v));
  } else if (key == "mu_path") {
    mu_path = v;
  } else if (key == "nu_path") {
    nu_path = v;
  } else if (key == "p") {
    p = to_double(key, v);
  } else if (key == "methods") {
    methods = split_list(v);
  } else if (key == "nodes") {
    nodes.clear();
    for (const auto& item : split_list(v)) nodes.push_back(static_cast<int>(to_integer(key, item)));
  } else if (key == "replications") {
    replications = static_cast<int>(to_integer(key, v));
  } else if (key == "seed") {
    seed = static_cast<std::uint64_t>(to_integer(key, v));
  } else if (key == "reference_method") {
    reference_method = v;
  } else if (key == "reference_nodes") {
    reference_nodes = to_integer(key, v);
  } else if (key == "output") {
    output = v;
  } else if (key == "epsilons") {
    epsilons.clear();
    for (const auto& item : split_list(v)) epsilons.push_back(to_double(key, item));
  } else if (key == "integrand") {
    integrand = v;
  } else if (key == "level") {
    level = to_double(key, v);
  } else if (key == "threads") {
    threads = static_cast<int>(to_integer(key, v));
  } else if (key == "base_method") {
    base_method = v;
  } else if (key == "repel_s") {
    repel_s = to_double(key, v);
  } else if (key == "isvmf_r") {
    isvmf_r = to_double(key, v);
  } else {
    fail(ErrorCode::parse, "unknown config key '" + key + "'");
  }
}

void ExperimentConfig::apply_override(const std::string& assignment) {
  const auto eq = assignment.find('=');
  require(eq != std::string::npos, ErrorCode::parse, "override must be key=value: '" + assignment + "'");
  set(trim(assignment.substr(0, eq)), assignment.substr(eq + 1));
}

ExperimentConfig ExperimentConfig::parse(std::istream& in) {
  ExperimentConfig c;
  int lineno = 0;
  for (std::string line; std::getline(in, line);) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    require(eq != std::string::npos, ErrorCode::parse,
            "config line " + std::to_string(lineno) + ": expected key = value");
    c.set(trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::io, "cannot open config '" + path + "'");
  return parse(in);
}

std::vector<std::pair<std::string, std::string>> ExperimentConfig::entries() const {
  const auto str = [](const std::string& s) { return s; };
  const auto num = [](double x) { return number_text(x); };
  const auto integer = [](int x) { return std::to_string(x); };
  return {
      {"problem", problem},
      {"d", std::to_string(d)},
      {"M", std::to_string(atoms)},
      {"mu_path", mu_path},
      {"nu_path", nu_path},
      {"p", number_text(p)},
      {"methods", join(methods, str)},
      {"nodes", join(nodes, integer)},
      {"replications", std::to_string(replications)},
      {"seed", std::to_string(seed)},
      {"reference_method", reference_method},
      {"reference_nodes", std::to_string(effective_reference_nodes())},
      {"output", output},
      {"epsilons", join(epsilons, num)},
      {"integrand", integrand},
      {"level", number_text(level)},
      {"threads", std::to_string(threads)},
      {"base_method", base_method},
      {"repel_s", number_text(repel_s)},
      {"isvmf_r", number_text(isvmf_r)},
  };
}

long long ExperimentConfig::effective_reference_nodes() const {
  if (reference_nodes > 0) return reference_nodes;
  return d <= 3 ? 100000 : 1000000;
}

void ExperimentConfig::validate() const {
  require(problem == "gaussian" || problem == "banana" || problem == "files", ErrorCode::invalid_argument,
          "problem must be gaussian, banana or files");
  require(integrand == "sw" || integrand == "halfsphere", ErrorCode::invalid_argument,
          "integrand must be sw or halfsphere");
  if (problem == "files" && integrand == "sw")
    require(!mu_path.empty() && !nu_path.empty(), ErrorCode::invalid_argument,
            "problem=files needs mu_path and nu_path");
  require(d >= 2, ErrorCode::invalid_argument, "d must be >= 2");
  require(atoms >= 1, ErrorCode::invalid_argument, "M must be >= 1");
  require(p >= 1.0, ErrorCode::invalid_argument, "p must be >= 1");
  require(!methods.empty(), ErrorCode::invalid_argument, "no methods");
  require(!nodes.empty(), ErrorCode::invalid_argument, "no node counts");
  for (int n : nodes) require(n >= 1, ErrorCode::invalid_argument, "node counts must be positive");
  require(replications >= 2, ErrorCode::invalid_argument, "replications must be >= 2 for variance statistics");
  require(level > 0.0 && level < 1.0, ErrorCode::invalid_argument, "level must lie in (0, 1)");
  require(isvmf_r > 0.0 && isvmf_r < 1.0, ErrorCode::invalid_argument, "isvmf_r must lie in (0, 1)");
  require(repel_s >= 0.0, ErrorCode::invalid_argument, "repel_s must be >= 0");
  require(threads >= 0, ErrorCode::invalid_argument, "threads must be >= 0");
  const int max_n = *std::max_element(nodes.begin(), nodes.end());
  if (reference_method != "exact")
    require(effective_reference_nodes() >= 10LL * max_n, ErrorCode::invalid_argument,
            "reference_nodes must be at least 10x the largest node count");
}

}  // namespace rsw
