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

#ifndef BUGSOL_ANALYSIS_H_
#define BUGSOL_ANALYSIS_H_

// Corpus analyses and report tables: n-gram novelty and overlap, decile
// buckets, when-task accuracy and paired bootstrap significance.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bugsol/jsonl.h"
#include "bugsol/metrics.h"
#include "bugsol/types.h"
#include "bugsol/when.h"

namespace bugsol {

// Context n-grams never span segment boundaries (title, utterances).
using Segments = std::vector<Tokens>;

// Percent of the reference's n-gram occurrences absent from every segment.
// nullopt when the reference has fewer than n tokens.
std::optional<double> NovelNgrams(const Tokens& reference,
                                  const Segments& context, int n);

struct OverlapPct {
  double in_title = 0;
  double in_utterances_only = 0;
  bool operator==(const OverlapPct&) const = default;
};

// Percent of the n-gram occurrences of `tokens` found in the title, and
// found in the utterances but not in the title. nullopt when |tokens| < n.
std::optional<OverlapPct> OverlapReport(const Tokens& tokens,
                                        const Tokens& title,
                                        const Segments& utterances, int n);

// Utterance token lists U_1..U_upto_t.
Segments UtteranceSegments(const Example& example, int upto_t);

// Novel n-gram percentages (n = 1..4) averaged over examples, against the
// title, U_1..U_tg, and both. Examples shorter than n are skipped.
struct NovelNgramTable {
  std::array<std::optional<double>, 4> title;
  std::array<std::optional<double>, 4> utterances;
  std::array<std::optional<double>, 4> both;
};
NovelNgramTable ComputeNovelNgramTable(const std::vector<Example>& corpus);
std::string FormatNovelNgramTable(const NovelNgramTable& table);

// One row of the overlap table: unigram and bigram overlap averaged over
// the examples with enough tokens.
struct OverlapRow {
  std::string model;
  std::array<std::optional<double>, 2> in_title;
  std::array<std::optional<double>, 2> in_utterances_only;
};
// `outputs` maps example id to predicted tokens; examples without an entry
// are skipped. The title and U_1..U_tg of each example form the context.
OverlapRow ComputeOverlapRow(const std::string& model,
                             const std::vector<Example>& corpus,
                             const std::map<std::string, Tokens>& outputs);
// Reference descriptions scored as if they were a model's outputs.
OverlapRow ComputeReferenceOverlapRow(const std::vector<Example>& corpus);
std::string FormatOverlapTable(const std::vector<OverlapRow>& rows);

// Decile of a percentage: [0,10) -> 10, ..., [90,100] -> 100.
int DecileBucket(double pct);

struct BucketStats {
  std::size_t n = 0;
  MetricScores mean;
};
// Groups examples by the decile of `pct[id]` and averages their metrics.
// Ids missing from `pct` are an error.
std::map<int, BucketStats> BucketReport(
    const MetricReport& report, const std::map<std::string, double>& pct);
// Percent of reference unigram occurrences found in U_1..U_tg.
double ReferenceInContextPct(const Example& example);

inline constexpr std::array<const char*, 5> kTgBuckets = {"1", "2", "3", "4",
                                                          ">=5"};
std::string TgBucket(int t_g);

struct WhenAccuracyTable {
  std::size_t n = 0;
  double pct_tp_lt_tg = 0;
  double pct_tp_none = 0;
  double pct_tp_eq_tg = 0;
  // Per t_g bucket accuracy (t_p = t_g); nullopt for an empty bucket.
  std::map<std::string, std::optional<double>> by_tg;
  std::map<std::string, std::size_t> by_tg_n;
  // Mean of t_g - t_p over predictions with t_p <= t_g.
  std::optional<double> avg_lead;
};

// t_p > t_g (possible only with an uncapped run) counts as not predicted.
// Throws ValidationError when a gold id has no prediction.
WhenAccuracyTable WhenAccuracy(const std::vector<WhenPrediction>& preds,
                               const std::map<std::string, int>& golds);
std::map<std::string, int> GoldSteps(const std::vector<Example>& corpus);

// Columns are the labelled runs, rows follow the accuracy breakdown.
std::string FormatWhenTable(
    const std::vector<std::pair<std::string, WhenAccuracyTable>>& columns);

struct BootstrapConfig {
  int samples = 10000;
  int sample_size = 5000;
  double alpha = 0.05;
  std::uint64_t seed = 0;
  int threads = 1;
};

struct BootstrapResult {
  double p_value = 1.0;
  bool significant = false;
  int winner = 0;  // +1: a, -1: b, 0: tie
  double mean_a = 0;
  double mean_b = 0;
};

// Paired bootstrap over per-example scores. p is the fraction of resamples
// in which the observed winner does not have the larger sum.
BootstrapResult BootstrapCompare(const std::vector<double>& a,
                                 const std::vector<double>& b,
                                 const BootstrapConfig& cfg = {});

// Metric means per t_g bucket.
std::map<std::string, MetricScores> MetricsByTg(
    const MetricReport& report, const std::map<std::string, int>& golds);

// Plain-text metric table: one row per labelled report.
std::string FormatMetricTable(
    const std::vector<std::pair<std::string, MetricReport>>& rows,
    const std::vector<std::string>& metrics);

// JSON report documents: {"aggregate", "by_tg", "significance"}.
OrderedJson MetricScoresJson(const MetricScores& s,
                             const std::vector<std::string>& metrics);
OrderedJson BootstrapJson(const BootstrapResult& r);
OrderedJson WhenReportJson(const WhenAccuracyTable& table);

// Fixed-point rendering used by every table ("-" for nullopt).
std::string FormatPct(std::optional<double> v, int decimals = 1);

}  // namespace bugsol

#endif  // BUGSOL_ANALYSIS_H_
