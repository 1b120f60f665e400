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

#ifndef BUGSOL_METRICS_H_
#define BUGSOL_METRICS_H_

// Sentence-level text generation metrics over token lists.
//
//   BLEU-4   geometric mean of clipped n-gram precisions (n = 1..4), add-one
//            smoothing on zero match counts for n >= 2, brevity penalty.
//   METEOR   exact-match unigram alignment (max matches, then min chunks),
//            F = 10PR / (R + 9P), penalty 0.5 * (chunks / matches)^3.
//   ROUGE-N  clipped n-gram overlap; ROUGE-L  longest common subsequence.
//
// All functions throw ValidationError on an empty reference.

#include <map>
#include <string>
#include <vector>

#include "bugsol/types.h"

namespace bugsol {

// N-gram occurrence counts keyed by the tokens joined with '\x1f'.
using NgramCounts = std::map<std::string, int>;
NgramCounts CountNgrams(const Tokens& tokens, int n);
std::string NgramKey(const Tokens& tokens, std::size_t begin, int n);

struct Prf {
  double p = 0;
  double r = 0;
  double f = 0;
};

double Bleu4(const Tokens& hypothesis, const Tokens& reference);

struct MeteorAlignment {
  int matches = 0;
  int chunks = 0;
  // ref position aligned to each hypothesis position, or -1.
  std::vector<int> hyp_to_ref;
};

// Exact-match alignment maximizing matches, then minimizing chunks. The
// search is exhaustive up to `search_budget` expanded states; beyond that the
// best alignment found so far (seeded greedily) is returned.
MeteorAlignment AlignMeteor(const Tokens& hypothesis, const Tokens& reference,
                            long search_budget = 2'000'000);

double MeteorFromAlignment(int matches, int chunks, std::size_t hyp_len,
                           std::size_t ref_len);
double MeteorLite(const Tokens& hypothesis, const Tokens& reference);

Prf RougeN(const Tokens& hypothesis, const Tokens& reference, int n);
int LcsLength(const Tokens& a, const Tokens& b);
Prf RougeL(const Tokens& hypothesis, const Tokens& reference);

struct MetricScores {
  double bleu4 = 0;
  double meteor = 0;
  double rouge1_f = 0;
  double rouge2_f = 0;
  double rougeL_f = 0;
  bool operator==(const MetricScores&) const = default;
};

MetricScores ScoreAll(const Tokens& hypothesis, const Tokens& reference);

inline constexpr const char* kMetricNames[] = {"bleu4", "meteor", "rouge1",
                                               "rouge2", "rougel"};
double MetricByName(const MetricScores& s, const std::string& name);

class MetricReport {
 public:
  MetricReport() = default;
  // Aggregate is the arithmetic mean over the entries.
  explicit MetricReport(std::map<std::string, MetricScores> per_example);

  const std::map<std::string, MetricScores>& per_example() const {
    return per_example_;
  }
  const MetricScores& aggregate() const { return aggregate_; }
  std::size_t n() const { return per_example_.size(); }

  // Per-example values of one metric in id order.
  std::vector<double> Column(const std::string& metric) const;

  bool operator==(const MetricReport&) const = default;

 private:
  std::map<std::string, MetricScores> per_example_;
  MetricScores aggregate_;
};

}  // namespace bugsol

#endif  // BUGSOL_METRICS_H_
