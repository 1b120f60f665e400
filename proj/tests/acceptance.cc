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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bugsol/analysis.h"
#include "bugsol/filters.h"
#include "bugsol/forest.h"
#include "bugsol/ingest.h"
#include "bugsol/jsonl.h"
#include "bugsol/metrics.h"
#include "bugsol/pipeline.h"
#include "bugsol/when.h"
#include "cli_fixture.h"
#include "filter_fixture.h"
#include "oracles.h"
#include "pipeline_fixture.h"
#include "table_fixture.h"

namespace bugsol {
namespace {

// Collects the first few failed expectations of one criterion.
class Check {
 public:
  void Expect(bool ok, const std::string& what) {
    if (ok) return;
    if (failures_.size() < 5) failures_.push_back(what);
    ++failed_;
  }
  bool ok() const { return failed_ == 0; }
  std::string Summary() const {
    std::ostringstream s;
    s << failed_ << " failed";
    for (const std::string& f : failures_) s << "; " << f;
    return s.str();
  }

 private:
  std::vector<std::string> failures_;
  int failed_ = 0;
};

using Clock = std::chrono::steady_clock;

std::string Golden(const std::string& name) {
  return testing::Slurp(std::string(BUGSOL_TEST_DATA) + "/../golden/" + name);
}

BootstrapConfig SmallBootstrap() {
  BootstrapConfig b;
  b.samples = 200;
  b.sample_size = 100;
  return b;
}

// ------------------------------------------------------------------------

void Metrics(Check& c) {
  std::map<std::string, int> per_metric;
  for (const auto& m : testing::MetricOracleCases()) {
    const Tokens h = testing::Split(m.hyp), r = testing::Split(m.ref);
    double got = 0.0;
    if (m.metric == "bleu4") got = Bleu4(h, r);
    else if (m.metric == "meteor") got = MeteorLite(h, r);
    else if (m.metric == "rouge1") got = RougeN(h, r, 1).f;
    else if (m.metric == "rouge2") got = RougeN(h, r, 2).f;
    else got = RougeL(h, r).f;
    c.Expect(std::abs(got - m.expected) <= 1e-9,
             m.metric + "('" + m.hyp + "', '" + m.ref + "')");
    ++per_metric[m.metric];
  }
  for (const char* m : kMetricNames) {
    c.Expect(per_metric[m] >= 10, std::string("fewer than 10 cases for ") + m);
  }

  const Tokens x = testing::Split("the cache is flushed on exit");
  const Tokens y = testing::Split("socket leak under heavy load");
  const MetricScores same = ScoreAll(x, x);
  const MetricScores disjoint = ScoreAll(x, y);
  c.Expect(std::abs(same.bleu4 - 1.0) <= 1e-12 && same.rouge1_f == 1.0 &&
               same.rouge2_f == 1.0 && same.rougeL_f == 1.0,
           "identity scores");
  c.Expect(same.meteor > 0.9 && same.meteor <= 1.0, "identity meteor");
  c.Expect(disjoint == MetricScores{}, "disjoint scores");

  std::mt19937_64 rng(7);
  for (int i = 0; i < 100; ++i) {
    const Tokens a = testing::RandomTokens(rng, 8, 4);
    const Tokens b = testing::RandomTokens(rng, 8, 4);
    c.Expect(LcsLength(a, b) == testing::BruteForceLcs(a, b), "LCS case");
  }
}

void GreedyOracle(Check& c) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = std::uniform_int_distribution<int>(0, 8)(rng);
    std::vector<Tokens> sentences;
    for (int i = 0; i < n; ++i) {
      sentences.push_back(testing::RandomTokens(rng, 7, 20));
    }
    Tokens ref = testing::RandomTokens(rng, 8, 20);
    if (ref.empty()) ref = {"w0"};
    c.Expect(GreedyExtractiveOracle(sentences, ref) ==
                 testing::NaiveGreedyOracle(sentences, ref),
             "corpus " + std::to_string(trial));
  }
}

void FilterProcedure(Check& c) {
  const auto corpus = testing::FilterFixture();
  std::vector<Tokens> descs;
  for (const Example& e : corpus) descs.push_back(e->description_tokens);
  const FilterResult result =
      ApplyFilters(corpus, BuildIwfTable(descs), FilterThresholds{});
  const auto expected = testing::FilterFixtureExpectations();
  c.Expect(result.reports.size() == expected.size(), "report count");
  for (std::size_t i = 0; i < expected.size() && i < result.reports.size(); ++i) {
    const FilterReport& r = result.reports[i];
    c.Expect(r.example_id == expected[i].id &&
                 r.verdict_generic == expected[i].generic &&
                 r.verdict_uninformative == expected[i].uninformative &&
                 r.verdict_insufficient == expected[i].insufficient &&
                 r.Attribution() == expected[i].attribution,
             "verdicts of " + expected[i].id);
  }
  c.Expect(result.kept.size() == 5, "kept count");

  std::vector<double> grid;
  for (int k = 1; k <= 100; ++k) grid.push_back(k / 100.0);
  c.Expect(NiwfThreshold(grid, 0.10) == 0.10, "10th percentile of the grid");
  c.Expect(NiwfThreshold(grid, 0.25) == 0.25, "25th percentile of the grid");
  c.Expect(NiwfThreshold(grid, 0.999) == 1.0, "top of the grid");
}

void TgExtraction(Check& c) {
  const auto timelines =
      ReadJsonl<RawTimeline>(testing::DataPath("tg_timelines.jsonl"));
  c.Expect(timelines.size() == 3, "three timelines");
  if (timelines.size() != 3) return;
  const ExtractResult mid = ExtractExample(timelines[0], IngestConfig{});
  const auto* e1 = std::get_if<Example>(&mid);
  c.Expect(e1 && (*e1)->t_g == 2, "commit mid-discussion gives t_g = 2");

  const ExtractResult first = ExtractExample(timelines[1], IngestConfig{});
  const auto* reject = std::get_if<RejectReason>(&first);
  c.Expect(reject && reject->code == RejectCode::kTgOutOfRange,
           "commit-first is rejected");

  // Equal timestamps keep listed order: the comment before the change counts.
  const ExtractResult tie = ExtractExample(timelines[2], IngestConfig{});
  const auto* e3 = std::get_if<Example>(&tie);
  c.Expect(e3 && (*e3)->t_g == 3 && e3->T() == 4, "tie gives t_g = 3");
}

void ClassifierContracts(Check& c) {
  // Two informative features (label x0 + x1 > 1) and two noise features.
  // The bar applies to the training set; held-out data is a sanity guard.
  for (unsigned seed : {1u, 2u, 3u}) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto draw = [&](int n, Eigen::MatrixXd& x, std::vector<int>& y) {
      x.resize(n, 4);
      y.clear();
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < 4; ++j) x(i, j) = u(rng);
        y.push_back(x(i, 0) + x(i, 1) > 1.0 ? 1 : 0);
      }
    };
    auto accuracy = [](const RandomForest& f, const Eigen::MatrixXd& x,
                       const std::vector<int>& y) {
      int ok = 0;
      for (int i = 0; i < x.rows(); ++i) {
        ok += (f.PredictProba(x.row(i)) >= 0.5) == (y[i] == 1);
      }
      return static_cast<double>(ok) / static_cast<double>(x.rows());
    };
    Eigen::MatrixXd xtr, xte;
    std::vector<int> ytr, yte;
    draw(200, xtr, ytr);
    draw(1000, xte, yte);
    ForestConfig cfg;
    cfg.seed = seed;
    const RandomForest f =
        TrainRandomForest(xtr, ytr, std::vector<double>(ytr.size(), 1.0), cfg);
    const double train_acc = accuracy(f, xtr, ytr);
    const double test_acc = accuracy(f, xte, yte);
    c.Expect(train_acc >= 0.95 && test_acc >= 0.90,
             "accuracy " + std::to_string(train_acc) + " train, " +
                 std::to_string(test_acc) + " held out, seed " +
                 std::to_string(seed));
  }

  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const int T = std::uniform_int_distribution<int>(1, 6)(rng);
    std::vector<testing::Turn> turns;
    std::vector<double> trace;
    for (int t = 0; t < T; ++t) {
      turns.push_back({"a" + std::to_string(t % 2), "step " + std::to_string(t)});
      trace.push_back(u(rng));
    }
    const int t_g = std::uniform_int_distribution<int>(1, T)(rng);
    const Example e = testing::MakeExample("p/q", trial + 1, "title", turns, t_g, "d");
    const double thr = u(rng);
    const WhenPrediction p =
        InferTp([&](const Context& ctx) { return trace[ctx.at_step - 1]; }, e, thr);
    std::optional<int> expected;
    for (int t = 1; t <= t_g && !expected; ++t) {
      if (trace[t - 1] >= thr) expected = t;
    }
    const int scored = expected ? *expected : t_g;
    c.Expect(p.t_p == expected &&
                 p.probs == std::vector<double>(trace.begin(), trace.begin() + scored),
             "trace " + std::to_string(trial));
  }

  const auto ex = [](int t_g) {
    return testing::MakeExample("a/b", 1, "t", {{"x", "one"}, {"y", "two"}, {"x", "three"}},
                                t_g, "d");
  };
  c.Expect(BaselineFirst(ex(3)) == WhenPrediction{"a/b#1", 1, {1.0}}, "First");
  c.Expect(BaselineSecond(ex(3)) == WhenPrediction{"a/b#1", 2, {0.0, 1.0}},
           "Second");
  c.Expect(BaselineSecond(ex(1)) == WhenPrediction{"a/b#1", std::nullopt, {0.0}},
           "Second with t_g = 1");
  c.Expect(DefaultPositiveRate(RandomMode::kUniform) == 0.5, "Rand(uniform) rate");
  c.Expect(DefaultPositiveRate(RandomMode::kDist) == 0.549, "Rand(dist) rate");
  int hits = 0;
  for (int i = 0; i < 10000; ++i) {
    const Example e = testing::MakeExample("r/s", i + 1, "t", {{"a", "x"}}, 1, "d");
    hits += BaselineRandom(e, 0.549, 5).t_p.has_value();
  }
  c.Expect(hits >= 5340 && hits <= 5640,
           "Rand(dist) hit rate " + std::to_string(hits) + "/10000");
}

void PipelineIdentity(Check& c) {
  const auto corpus = testing::SentinelCorpus(50, 1);
  PipelineConfig cfg;
  cfg.classifier = ClassifierKind::kGoldOracle;
  const Classifier oracle(cfg, nullptr);
  for (GeneratorMethod m : {GeneratorMethod::kCopyTitle, GeneratorMethod::kLead,
                            GeneratorMethod::kLexRank,
                            GeneratorMethod::kOracleExtractive}) {
    GeneratorSpec spec;
    spec.method = m;
    const Generator gen(spec, nullptr);
    const PipelineEvaluation eval =
        EvaluatePipeline(corpus, oracle, gen, SmallBootstrap());
    c.Expect(eval.at_tp == eval.at_tg, spec.Name() + " reports differ");
    const std::vector<std::string> names(std::begin(kMetricNames),
                                         std::end(kMetricNames));
    c.Expect(MetricScoresJson(eval.at_tp.aggregate(), names).dump() ==
                 MetricScoresJson(eval.at_tg.aggregate(), names).dump(),
             spec.Name() + " aggregates differ");
  }

  const auto train = testing::SyntheticExamples(40, 2);
  WhenTrainConfig tc;
  tc.forest.n_trees = 10;
  const WhenModel model = TrainWhenModel(train, {}, tc);
  PipelineConfig never_cfg;
  never_cfg.threshold = 2.0;
  const Classifier never(never_cfg, &model);
  const PipelineEvaluation eval = EvaluatePipeline(
      train, never, Generator(GeneratorSpec{}, nullptr), SmallBootstrap());
  c.Expect(eval.at_tp.aggregate().bleu4 == 0.0, "always-None BLEU-4 at t_p");
  c.Expect(eval.when.pct_tp_none == 100.0, "always-None predicts None");
}

void TruncationSafety(Check& c) {
  const auto corpus = testing::SentinelCorpus(200, 5);
  const std::vector<Example> train(corpus.begin(), corpus.begin() + 40);
  std::map<std::pair<IndexField, IndexScope>, TfidfIndex> indexes;
  for (IndexField f : {IndexField::kTitle, IndexField::kDescription}) {
    for (IndexScope s : {IndexScope::kGlobal, IndexScope::kProject}) {
      indexes.emplace(std::make_pair(f, s), BuildTfidfIndex(train, f, s));
    }
  }
  WhenTrainConfig tc;
  tc.forest.n_trees = 10;
  const WhenModel model = TrainWhenModel(testing::SyntheticExamples(40, 2), {}, tc);

  std::vector<GeneratorSpec> specs;
  for (GeneratorMethod m :
       {GeneratorMethod::kCopyTitle, GeneratorMethod::kLead, GeneratorMethod::kLast,
        GeneratorMethod::kFullUtterance, GeneratorMethod::kLexRank,
        GeneratorMethod::kRetrieval, GeneratorMethod::kOracleExtractive}) {
    for (SpanSource s : {SpanSource::kFirst, SpanSource::kLast}) {
      for (int k : {1, 2}) {
        GeneratorSpec spec;
        spec.method = m;
        spec.source = s;
        spec.k = k;
        specs.push_back(spec);
      }
    }
  }
  GeneratorSpec by_desc;
  by_desc.method = GeneratorMethod::kRetrieval;
  by_desc.retrieval_field = IndexField::kDescription;
  by_desc.retrieval_scope = IndexScope::kProject;
  specs.push_back(by_desc);

  for (ClassifierKind kind :
       {ClassifierKind::kForest, ClassifierKind::kFirst, ClassifierKind::kSecond,
        ClassifierKind::kRandUniform, ClassifierKind::kRandDist,
        ClassifierKind::kGoldOracle}) {
    for (StepCap cap : {StepCap::kTg, StepCap::kT}) {
      if (kind == ClassifierKind::kGoldOracle && cap == StepCap::kT) continue;
      PipelineConfig cfg;
      cfg.classifier = kind;
      cfg.cap = cap;
      cfg.seed = 21;
      const Classifier classifier(cfg, &model);
      for (const GeneratorSpec& spec : specs) {
        const TfidfIndex* index =
            spec.NeedsIndex()
                ? &indexes.at({spec.retrieval_field, spec.retrieval_scope})
                : nullptr;
        const Generator gen(spec, index);
        for (std::size_t i = 0; i < corpus.size(); ++i) {
          const Example& e = corpus[i];
          const PipelineRecord r = RunPipeline(e, classifier, gen);
          const int visible = r.prediction.t_p.value_or(0);
          const std::string where = ToString(kind) + "/" + spec.Name() + " on " +
                                    e->id;
          if (visible > 0) {
            c.Expect(!testing::HasLaterSentinel(Render(TruncateAt(e, visible)),
                                                static_cast<int>(i), visible, e.T()),
                     "input leak: " + where);
          }
          c.Expect(!testing::HasLaterSentinel(r.output.tokens, static_cast<int>(i),
                                              visible, e.T()),
                   "output leak: " + where);
        }
      }
    }
  }
}

void Determinism(Check& c) {
  std::string failure;
  testing::TempDir a("accept_a"), b("accept_b"), d("accept_d");
  const std::string first = testing::RunFullPipeline(a, 1, &failure);
  c.Expect(!first.empty(), "pipeline run failed: " + failure);
  const std::string again = testing::RunFullPipeline(b, 1, &failure);
  const std::string threaded = testing::RunFullPipeline(d, 8, &failure);
  c.Expect(first == again, "two runs differ");
  c.Expect(first == threaded, "1 and 8 threads differ");
}

void Bootstrap(Check& c) {
  const BootstrapConfig defaults;
  c.Expect(defaults.samples == 10000, "default resample count");
  c.Expect(defaults.sample_size == 5000, "default resample size");
  const std::vector<double> x = {0.1, 0.4, 0.7, 0.2, 0.9};
  const BootstrapResult same = BootstrapCompare(x, x, defaults);
  c.Expect(!same.significant, "identical vectors are not significant");
  BootstrapConfig small;
  small.samples = 1000;
  small.sample_size = 200;
  const BootstrapResult sep =
      BootstrapCompare({0.9, 0.8, 0.95, 0.85}, {0.1, 0.2, 0.05, 0.15}, small);
  c.Expect(sep.p_value == 0.0 && sep.significant, "separated vectors give p = 0");
}

void TableShapes(Check& c) {
  const auto corpus = testing::TableFixture();
  c.Expect(FormatStatsTable(CorpusStatsBySplit(corpus, testing::TableFixtureSplit())) ==
               Golden("stats_table.txt"),
           "stats table");
  c.Expect(FormatWhenTable(
               {{"First", WhenAccuracy(testing::TallyFirst(), testing::TallyGolds())},
                {"Model",
                 WhenAccuracy(testing::TallyPredictions(), testing::TallyGolds())}}) ==
               Golden("when_table.txt"),
           "when accuracy table");
  std::map<std::string, Tokens> titles;
  for (const Example& e : corpus) titles[e->id] = e->title_tokens;
  c.Expect(FormatOverlapTable({ComputeReferenceOverlapRow(corpus),
                               ComputeOverlapRow("Copy Title", corpus, titles)}) ==
               Golden("overlap_table.txt"),
           "overlap table");

  for (const auto& fixture :
       {corpus, testing::SyntheticExamples(60, 3), testing::SentinelCorpus(60, 9)}) {
    std::map<std::string, Tokens> out;
    for (const Example& e : fixture) out[e->id] = e->title_tokens;
    const OverlapRow row = ComputeOverlapRow("Copy Title", fixture, out);
    c.Expect(*row.in_title[0] == 100.0 && *row.in_title[1] == 100.0 &&
                 *row.in_utterances_only[0] == 0.0 &&
                 *row.in_utterances_only[1] == 0.0,
             "Copy Title overlap is (100, 0)");
  }
}

struct Criterion {
  const char* name;
  std::function<void(Check&)> run;
  double limit_s;  // 0 means no runtime bound
};

}  // namespace
}  // namespace bugsol

int main() {
  using bugsol::Check;
  const std::vector<bugsol::Criterion> criteria = {
      {"metric oracle suite", bugsol::Metrics, 5},
      {"greedy oracle equivalence", bugsol::GreedyOracle, 10},
      {"filter procedure", bugsol::FilterProcedure, 0},
      {"t_g extraction", bugsol::TgExtraction, 0},
      {"classifier contracts", bugsol::ClassifierContracts, 0},
      {"pipeline identity", bugsol::PipelineIdentity, 10},
      {"truncation safety", bugsol::TruncationSafety, 0},
      {"determinism", bugsol::Determinism, 60},
      {"bootstrap sanity", bugsol::Bootstrap, 0},
      {"table shapes", bugsol::TableShapes, 0},
  };
  int failed = 0;
  for (const auto& criterion : criteria) {
    Check c;
    const auto start = bugsol::Clock::now();
    try {
      criterion.run(c);
    } catch (const std::exception& e) {
      c.Expect(false, std::string("exception: ") + e.what());
    }
    const double secs =
        std::chrono::duration<double>(bugsol::Clock::now() - start).count();
    if (criterion.limit_s > 0) {
      std::ostringstream s;
      s.precision(2);
      s << std::fixed << "runtime " << secs << " s exceeds " << criterion.limit_s
        << " s";
      c.Expect(secs < criterion.limit_s, s.str());
    }
    std::ostringstream line;
    line.precision(2);
    line << std::fixed << (c.ok() ? "PASS " : "FAIL ") << criterion.name << " ("
         << secs << " s)";
    if (!c.ok()) line << ": " << c.Summary();
    std::cout << line.str() << std::endl;
    failed += !c.ok();
  }
  return failed == 0 ? 0 : 1;
}
