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

#ifndef BUGSOL_PIPELINE_H_
#define BUGSOL_PIPELINE_H_

// The combined system: a classifier picks t_p, then a generator describes
// the solution from the context truncated at t_p.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bugsol/analysis.h"
#include "bugsol/generators.h"
#include "bugsol/metrics.h"
#include "bugsol/when.h"

namespace bugsol {

enum class ClassifierKind {
  kForest,
  kFirst,
  kSecond,
  kRandUniform,
  kRandDist,
  kGoldOracle,
};
// "forest", "first", "second", "rand_uniform", "rand_dist", "gold_oracle".
ClassifierKind ParseClassifierKind(const std::string& name);
std::string ToString(ClassifierKind kind);

enum class StepCap { kTg, kT };  // evaluation cap t_g, deployment cap T
StepCap ParseStepCap(const std::string& name);

struct PipelineConfig {
  ClassifierKind classifier = ClassifierKind::kForest;
  GeneratorSpec generator;
  double threshold = 0.5;
  std::uint64_t seed = 0;
  StepCap cap = StepCap::kTg;
};

// Chooses t_p for an example. Resources are checked at construction.
class Classifier {
 public:
  // `model` is required for the forest and ignored otherwise. The gold
  // oracle is evaluation-only and rejects the deployment cap.
  Classifier(const PipelineConfig& cfg, const WhenModel* model);

  WhenPrediction Predict(const Example& example) const;

 private:
  PipelineConfig cfg_;
  const WhenModel* model_;
};

struct PipelineRecord {
  WhenPrediction prediction;
  GeneratorOutput output;  // empty tokens and at_step 0 when t_p is None
};

// The generator sees only the title and U_1..U_tp. The reference
// description is handed to the generator only when it asks for one.
PipelineRecord RunPipeline(const Example& example, const Classifier& classifier,
                           const Generator& generator);

// Generator output at the gold step.
GeneratorOutput RunAtGold(const Example& example, const Generator& generator);

// Scores outputs against the corpus descriptions. Every corpus id must have
// an output.
MetricReport ScoreOutputs(const std::vector<Example>& corpus,
                          const std::vector<GeneratorOutput>& outputs,
                          int threads = 1);

struct PipelineEvaluation {
  std::vector<PipelineRecord> records;     // corpus order
  std::vector<GeneratorOutput> at_gold;    // corpus order
  MetricReport at_tp;
  MetricReport at_tg;
  std::map<std::string, BootstrapResult> significance;  // per metric
  WhenAccuracyTable when;
};

PipelineEvaluation EvaluatePipeline(const std::vector<Example>& corpus,
                                    const Classifier& classifier,
                                    const Generator& generator,
                                    const BootstrapConfig& bootstrap,
                                    int threads = 1);

// Aligned text rendering of an evaluation: metrics at t_p and t_g, the
// significance line per metric and the when-accuracy table.
std::string FormatPipelineReport(const PipelineEvaluation& eval,
                                 const std::string& generator_name);
OrderedJson PipelineReportJson(const PipelineEvaluation& eval,
                               const std::vector<Example>& corpus);

}  // namespace bugsol

#endif  // BUGSOL_PIPELINE_H_
