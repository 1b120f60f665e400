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

#ifndef BUGSOL_CONFIG_H_
#define BUGSOL_CONFIG_H_

// Tool configuration file: one `key = value` per line, `#` starts a comment.
//
//   niwf_threshold     = 0.116
//   overlap_threshold  = 0.5
//   split_fractions    = 0.8,0.1,0.1
//   lexrank_threshold  = 0.1
//   lexrank_damping    = 0.85
//   rf.trees           = 100
//   rf.seed            = 0
//   rf.threshold       = 0.5
//   bootstrap.samples  = 10000
//   bootstrap.size     = 5000
//   alpha              = 0.05
//   aug_weight         = 0.7
//   class_weights      = balanced      # or "preset", or "<pos>,<neg>"
//
// Command-line flags override file values.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "bugsol/filters.h"
#include "bugsol/when.h"

namespace bugsol {

struct ToolConfig {
  double niwf_threshold = kDefaultNiwfThreshold;
  double overlap_threshold = kDefaultOverlapThreshold;
  SplitFractions split_fractions;
  double lexrank_threshold = 0.1;
  double lexrank_damping = 0.85;
  int rf_trees = 100;
  std::uint64_t rf_seed = 0;
  double rf_threshold = 0.5;
  int bootstrap_samples = 10000;
  int bootstrap_size = 5000;
  double alpha = 0.05;
  double aug_weight = 0.7;
  std::optional<ClassWeights> class_weights;  // unset: balanced

  // Throws ValidationError on out-of-range values.
  void Validate() const;
};

// Throws ParseError (with line number) on syntax errors, unknown keys or
// malformed values.
ToolConfig ParseConfig(std::string_view text);
ToolConfig LoadConfig(const std::string& path);

// "balanced" -> nullopt, "preset" -> 1.543/0.740, "<pos>,<neg>" -> values.
std::optional<ClassWeights> ParseClassWeights(const std::string& value);
SplitFractions ParseSplitFractions(const std::string& value);

}  // namespace bugsol

#endif  // BUGSOL_CONFIG_H_
