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

#include <sstream>

#include "rsw/error.hpp"
#include "rsw/quadratures.hpp"

namespace rsw {

namespace {

double parse_number(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  fail(ErrorCode::parse, "invalid " + what + ": '" + text + "'");
}

}  // namespace

MethodSpec MethodSpec::parse(const std::string& text) {
  require(!text.empty(), ErrorCode::parse, "empty method name");
  // Options follow '@': "repelled:iid@eps=0.001@s=3", "isvmf@r=0.3".
  std::string head = text;
  std::vector<std::string> options;
  if (const auto at = text.find('@'); at != std::string::npos) {
    head = text.substr(0, at);
    std::stringstream rest(text.substr(at + 1));
    for (std::string item; std::getline(rest, item, '@');) options.push_back(item);
  }

  MethodSpec spec;
  const auto colon = head.find(':');
  spec.name = head.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : head.substr(colon + 1);

  static const char* known[] = {"iid", "grid2d", "spiral3d", "unifortho", "repelled",
                                "isvmf", "spherical", "cue", "harmonic", "ope"};
  bool found = false;
  for (const char* k : known) found |= spec.name == k;
  require(found, ErrorCode::parse, "unknown method '" + spec.name + "'");

  if (spec.name == "repelled") {
    require(!arg.empty(), ErrorCode::parse, "repelled needs a base method, e.g. repelled:iid");
    require(MethodSpec::parse(arg).name != "repelled", ErrorCode::parse, "nested repulsion is not supported");
    spec.base = arg;
  } else if (spec.name == "harmonic") {
    if (!arg.empty()) spec.degree = static_cast<int>(parse_number(arg, "harmonic degree"));
  } else {
    require(arg.empty(), ErrorCode::parse, "method '" + spec.name + "' takes no ':' argument");
  }

  for (const auto& opt : options) {
    const auto eq = opt.find('=');
    require(eq != std::string::npos, ErrorCode::parse, "method option must be key=value: '" + opt + "'");
    const std::string key = opt.substr(0, eq);
    const double value = parse_number(opt.substr(eq + 1), "method option " + key);
    if (key == "eps" && spec.name == "repelled") {
      spec.epsilon = value;
    } else if (key == "s" && spec.name == "repelled") {
      spec.exponent = value;
    } else if (key == "r" && spec.name == "isvmf") {
      spec.budget_fraction = value;
    } else {
      fail(ErrorCode::parse, "option '" + key + "' does not apply to method '" + spec.name + "'");
    }
  }
  return spec;
}

std::string MethodSpec::to_string() const {
  std::ostringstream os;
  os << name;
  if (name == "repelled") os << ':' << base;
  if (name == "harmonic" && degree) os << ':' << *degree;
  if (epsilon) os << "@eps=" << *epsilon;
  if (exponent) os << "@s=" << *exponent;
  if (name == "isvmf" && budget_fraction != 0.2) os << "@r=" << budget_fraction;
  return os.str();
}

bool MethodSpec::uniform_target() const {
  if (name == "repelled") return MethodSpec::parse(base).uniform_target();
  return name != "isvmf" && name != "ope";
}

QuadratureNodes generate_nodes(const MethodSpec& spec, int d, int n, Seed seed, const Integrand* f) {
  const auto& m = spec.name;
  if (m == "iid") return nodes_iid(d, n, seed);
  if (m == "grid2d") {
    require(d == 2, ErrorCode::invalid_argument, "grid2d requires d = 2");
    return nodes_grid_circle(n, seed);
  }
  if (m == "spiral3d") {
    require(d == 3, ErrorCode::invalid_argument, "spiral3d requires d = 3");
    return nodes_spiral_sphere(n, seed);
  }
  if (m == "unifortho") return nodes_unifortho(d, n, seed);
  if (m == "repelled") {
    const QuadratureNodes base = generate_nodes(MethodSpec::parse(spec.base), d, n, seed, f);
    const double eps = spec.epsilon.value_or(1.0 / base.size());
    const double s = spec.exponent.value_or(static_cast<double>(d));
    QuadratureNodes out = repel(base, eps, s);
    if (!base.uniform_weights) out.diagnostics["experimental_weighted_repulsion"] = 1.0;
    return out;
  }
  if (m == "isvmf") {
    require(f != nullptr, ErrorCode::invalid_argument, "isvmf needs the integrand");
    return nodes_isvmf(*f, d, n, spec.budget_fraction, seed);
  }
  if (m == "spherical") {
    require(d == 3, ErrorCode::invalid_argument, "the spherical ensemble requires d = 3");
    return sample_spherical_ensemble(n, seed);
  }
  if (m == "cue") {
    require(d == 2, ErrorCode::invalid_argument, "CUE requires d = 2");
    return sample_cue_circle(n, seed);
  }
  if (m == "harmonic") return nodes_harmonic(d, spec.degree.value_or(harmonic_degree_for_size(d, n)), seed);
  if (m == "ope") return nodes_ope(d, n, seed);
  fail(ErrorCode::invalid_argument, "unknown method '" + m + "'");
}

}  // namespace rsw
