// Copyright 2026 The Bugsol Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "bugsol/config.h"

#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>
#include <vector>

#include "bugsol/error.h"
#include "bugsol/jsonl.h"

namespace bugsol {
namespace {

std::string Trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double ToDouble(const std::string& v) {
  std::size_t used = 0;
  double out = 0;
  try {
    out = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size()) {
    throw ValidationError("expected a number, got '" + v + "'");
  }
  return out;
}

template <class Int>
Int ToInt(const std::string& v) {
  Int out{};
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ValidationError("expected an integer, got '" + v + "'");
  }
  return out;
}

std::vector<double> NumberList(const std::string& v) {
  std::vector<double> out;
  std::stringstream in(v);
  std::string part;
  while (std::getline(in, part, ',')) out.push_back(ToDouble(Trim(part)));
  return out;
}

}  // namespace

std::optional<ClassWeights> ParseClassWeights(const std::string& value) {
  if (value == "balanced") return std::nullopt;
  if (value == "preset") return kPresetClassWeights;
  const std::vector<double> w = NumberList(value);
  if (w.size() != 2 || !(w[0] > 0) || !(w[1] > 0)) {
    throw ValidationError(
        "class_weights must be 'balanced', 'preset' or '<pos>,<neg>' > 0");
  }
  return ClassWeights{w[0], w[1]};
}

SplitFractions ParseSplitFractions(const std::string& value) {
  const std::vector<double> f = NumberList(value);
  if (f.size() != 3) {
    throw ValidationError("split_fractions needs three comma-separated values");
  }
  return {f[0], f[1], f[2]};
}

void ToolConfig::Validate() const {
  auto unit = [](double v, const char* name) {
    if (!(v >= 0 && v <= 1)) {
      throw ValidationError(std::string(name) + " must lie in [0, 1]");
    }
  };
  unit(niwf_threshold, "niwf_threshold");
  unit(overlap_threshold, "overlap_threshold");
  unit(lexrank_threshold, "lexrank_threshold");
  unit(lexrank_damping, "lexrank_damping");
  const double sum = split_fractions.train + split_fractions.valid +
                     split_fractions.test;
  if (!(split_fractions.train > 0 && split_fractions.valid > 0 &&
        split_fractions.test > 0) ||
      std::abs(sum - 1.0) > 1e-9) {
    throw ValidationError("split_fractions must be > 0 and sum to 1");
  }
  if (rf_trees < 1) throw ValidationError("rf.trees must be >= 1");
  if (!(rf_threshold >= 0)) throw ValidationError("rf.threshold must be >= 0");
  if (bootstrap_samples < 1 || bootstrap_size < 1) {
    throw ValidationError("bootstrap.samples and bootstrap.size must be >= 1");
  }
  if (!(alpha > 0 && alpha < 1)) throw ValidationError("alpha must lie in (0, 1)");
  if (!(aug_weight > 0)) throw ValidationError("aug_weight must be > 0");
}

ToolConfig ParseConfig(std::string_view text) {
  ToolConfig cfg;
  using Setter = std::function<void(const std::string&)>;
  const std::map<std::string, Setter> setters = {
      {"niwf_threshold", [&](const std::string& v) { cfg.niwf_threshold = ToDouble(v); }},
      {"overlap_threshold", [&](const std::string& v) { cfg.overlap_threshold = ToDouble(v); }},
      {"split_fractions", [&](const std::string& v) { cfg.split_fractions = ParseSplitFractions(v); }},
      {"lexrank_threshold", [&](const std::string& v) { cfg.lexrank_threshold = ToDouble(v); }},
      {"lexrank_damping", [&](const std::string& v) { cfg.lexrank_damping = ToDouble(v); }},
      {"rf.trees", [&](const std::string& v) { cfg.rf_trees = ToInt<int>(v); }},
      {"rf.seed", [&](const std::string& v) { cfg.rf_seed = ToInt<std::uint64_t>(v); }},
      {"rf.threshold", [&](const std::string& v) { cfg.rf_threshold = ToDouble(v); }},
      {"bootstrap.samples", [&](const std::string& v) { cfg.bootstrap_samples = ToInt<int>(v); }},
      {"bootstrap.size", [&](const std::string& v) { cfg.bootstrap_size = ToInt<int>(v); }},
      {"alpha", [&](const std::string& v) { cfg.alpha = ToDouble(v); }},
      {"aug_weight", [&](const std::string& v) { cfg.aug_weight = ToDouble(v); }},
      {"class_weights", [&](const std::string& v) { cfg.class_weights = ParseClassWeights(v); }},
  };

  std::istringstream in{std::string(text)};
  std::string line;
  long number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    const std::string content = Trim(line);
    if (content.empty()) continue;
    const auto eq = content.find('=');
    if (eq == std::string::npos) {
      throw ParseError("expected 'key = value'", number);
    }
    const std::string key = Trim(content.substr(0, eq));
    const std::string value = Trim(content.substr(eq + 1));
    auto it = setters.find(key);
    if (it == setters.end()) {
      throw ParseError("unknown config key '" + key + "'", number);
    }
    try {
      it->second(value);
    } catch (const ParseError&) {
      throw;
    } catch (const ValidationError& e) {
      throw ParseError(key + ": " + e.what(), number);
    }
  }
  cfg.Validate();
  return cfg;
}

ToolConfig LoadConfig(const std::string& path) {
  return ParseConfig(ReadFile(path));
}

}  // namespace bugsol
