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

#include "bugsol/pipeline.h"

#include <sstream>

#include "bugsol/error.h"
#include "bugsol/parallel.h"

namespace bugsol {
namespace {

std::vector<std::string> AllMetrics() {
  return std::vector<std::string>(std::begin(kMetricNames),
                                  std::end(kMetricNames));
}

}  // namespace

ClassifierKind ParseClassifierKind(const std::string& name) {
  static const std::map<std::string, ClassifierKind> kinds = {
      {"forest", ClassifierKind::kForest},
      {"first", ClassifierKind::kFirst},
      {"second", ClassifierKind::kSecond},
      {"rand_uniform", ClassifierKind::kRandUniform},
      {"rand_dist", ClassifierKind::kRandDist},
      {"gold_oracle", ClassifierKind::kGoldOracle},
  };
  auto it = kinds.find(name);
  if (it == kinds.end()) throw ValidationError("unknown classifier '" + name + "'");
  return it->second;
}

std::string ToString(ClassifierKind kind) {
  switch (kind) {
    case ClassifierKind::kForest: return "forest";
    case ClassifierKind::kFirst: return "first";
    case ClassifierKind::kSecond: return "second";
    case ClassifierKind::kRandUniform: return "rand_uniform";
    case ClassifierKind::kRandDist: return "rand_dist";
    case ClassifierKind::kGoldOracle: return "gold_oracle";
  }
  return "unknown";
}

StepCap ParseStepCap(const std::string& name) {
  if (name == "tg") return StepCap::kTg;
  if (name == "T") return StepCap::kT;
  throw ValidationError("unknown cap '" + name + "' (expected tg or T)");
}

Classifier::Classifier(const PipelineConfig& cfg, const WhenModel* model)
    : cfg_(cfg), model_(model) {
  if (cfg.classifier == ClassifierKind::kForest && model == nullptr) {
    throw ValidationError("forest classifier needs a trained model");
  }
  if (cfg.classifier == ClassifierKind::kGoldOracle && cfg.cap == StepCap::kT) {
    throw ValidationError("gold_oracle classifier is evaluation-only (cap tg)");
  }
}

WhenPrediction Classifier::Predict(const Example& example) const {
  const std::optional<int> cap =
      cfg_.cap == StepCap::kT ? std::optional<int>(example.T()) : std::nullopt;
  switch (cfg_.classifier) {
    case ClassifierKind::kForest:
      return InferTp(*model_, example, cfg_.threshold, cap);
    case ClassifierKind::kFirst:
      return BaselineFirst(example);
    case ClassifierKind::kSecond:
      return BaselineSecond(example);
    case ClassifierKind::kRandUniform:
      return BaselineRandom(example, DefaultPositiveRate(RandomMode::kUniform),
                            cfg_.seed, cap);
    case ClassifierKind::kRandDist:
      return BaselineRandom(example, DefaultPositiveRate(RandomMode::kDist),
                            cfg_.seed, cap);
    case ClassifierKind::kGoldOracle: {
      WhenPrediction p{example->id, example->t_g,
                       std::vector<double>(example->t_g, 0.0)};
      p.probs.back() = 1.0;
      return p;
    }
  }
  throw ValidationError("unhandled classifier kind");
}

PipelineRecord RunPipeline(const Example& example, const Classifier& classifier,
                           const Generator& generator) {
  PipelineRecord r;
  r.prediction = classifier.Predict(example);
  if (!r.prediction.t_p) {
    r.output = {example->id, generator.spec().Name(), {}, 0};
    return r;
  }
  const Context ctx = TruncateAt(example, *r.prediction.t_p);
  r.output = generator.Run(ctx, generator.spec().NeedsReference()
                                    ? &example->description_tokens
                                    : nullptr);
  return r;
}

GeneratorOutput RunAtGold(const Example& example, const Generator& generator) {
  return generator.Run(TruncateAt(example, example->t_g),
                       generator.spec().NeedsReference()
                           ? &example->description_tokens
                           : nullptr);
}

MetricReport ScoreOutputs(const std::vector<Example>& corpus,
                          const std::vector<GeneratorOutput>& outputs,
                          int threads) {
  std::map<std::string, const GeneratorOutput*> by_id;
  for (const GeneratorOutput& o : outputs) by_id[o.example_id] = &o;
  std::vector<const GeneratorOutput*> matched(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    auto it = by_id.find(corpus[i]->id);
    if (it == by_id.end()) {
      throw ValidationError("no output for example '" + corpus[i]->id + "'");
    }
    matched[i] = it->second;
  }
  std::vector<MetricScores> scores(corpus.size());
  ParallelFor(corpus.size(), threads, [&](std::size_t i) {
    scores[i] = ScoreAll(matched[i]->tokens, corpus[i]->description_tokens);
  });
  std::map<std::string, MetricScores> per_example;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    per_example[corpus[i]->id] = scores[i];
  }
  return MetricReport(std::move(per_example));
}

PipelineEvaluation EvaluatePipeline(const std::vector<Example>& corpus,
                                    const Classifier& classifier,
                                    const Generator& generator,
                                    const BootstrapConfig& bootstrap,
                                    int threads) {
  PipelineEvaluation eval;
  eval.records.resize(corpus.size());
  eval.at_gold.resize(corpus.size());
  ParallelFor(corpus.size(), threads, [&](std::size_t i) {
    eval.records[i] = RunPipeline(corpus[i], classifier, generator);
    eval.at_gold[i] = RunAtGold(corpus[i], generator);
  });
  std::vector<GeneratorOutput> at_tp;
  std::vector<WhenPrediction> preds;
  for (const PipelineRecord& r : eval.records) {
    at_tp.push_back(r.output);
    preds.push_back(r.prediction);
  }
  eval.at_tp = ScoreOutputs(corpus, at_tp, threads);
  eval.at_tg = ScoreOutputs(corpus, eval.at_gold, threads);
  BootstrapConfig b = bootstrap;
  b.threads = threads;
  for (const std::string& m : AllMetrics()) {
    eval.significance[m] =
        BootstrapCompare(eval.at_tp.Column(m), eval.at_tg.Column(m), b);
  }
  eval.when = WhenAccuracy(preds, GoldSteps(corpus));
  return eval;
}

std::string FormatPipelineReport(const PipelineEvaluation& eval,
                                 const std::string& generator_name) {
  std::ostringstream out;
  out << FormatMetricTable({{generator_name + " @t_p", eval.at_tp},
                            {generator_name + " @t_g", eval.at_tg}},
                           AllMetrics());
  out << '\n';
  for (const auto& [metric, r] : eval.significance) {
    out << metric << ": p=" << FormatPct(r.p_value, 4)
        << (r.significant ? " significant" : " not significant") << '\n';
  }
  out << '\n' << FormatWhenTable({{"pipeline", eval.when}});
  return out.str();
}

OrderedJson PipelineReportJson(const PipelineEvaluation& eval,
                               const std::vector<Example>& corpus) {
  const std::vector<std::string> metrics = AllMetrics();
  const auto golds = GoldSteps(corpus);
  OrderedJson by_tg = OrderedJson::object();
  const auto tp = MetricsByTg(eval.at_tp, golds);
  const auto tg = MetricsByTg(eval.at_tg, golds);
  for (const char* b : kTgBuckets) {
    if (!tp.count(b)) continue;
    by_tg[b] = {{"at_tp", MetricScoresJson(tp.at(b), metrics)},
                {"at_tg", MetricScoresJson(tg.at(b), metrics)}};
  }
  OrderedJson sig = OrderedJson::object();
  for (const auto& [m, r] : eval.significance) sig[m] = BootstrapJson(r);
  OrderedJson when = WhenReportJson(eval.when);
  return {{"aggregate",
           {{"n", eval.at_tp.n()},
            {"at_tp", MetricScoresJson(eval.at_tp.aggregate(), metrics)},
            {"at_tg", MetricScoresJson(eval.at_tg.aggregate(), metrics)},
            {"when", when["aggregate"]}}},
          {"by_tg", std::move(by_tg)},
          {"significance", std::move(sig)}};
}

}  // namespace bugsol
