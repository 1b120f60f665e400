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

#ifndef BUGSOL_FILTERS_H_
#define BUGSOL_FILTERS_H_

// Noise filters for mined examples (generic, uninformative and
// context-insufficient descriptions), time-ordered partitioning and corpus
// statistics.

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "bugsol/jsonl.h"
#include "bugsol/types.h"

namespace bugsol {

// Document frequencies over training descriptions plus the min/max IWF seen,
// where IWF(w) = ln(1 + N) / (1 + df(w)).
class IwfTable {
 public:
  IwfTable(long doc_count, std::map<std::string, long> doc_freq);

  long doc_count() const { return doc_count_; }
  const std::map<std::string, long>& doc_freq() const { return doc_freq_; }
  double min_iwf() const { return min_iwf_; }
  double max_iwf() const { return max_iwf_; }

  long DocFreq(const std::string& word) const;  // 0 when unseen
  double Iwf(const std::string& word) const;
  // Min-max normalized IWF clamped to [0, 1]; unseen words map to 1.
  double NormalizedIwf(const std::string& word) const;

 private:
  long doc_count_;
  std::map<std::string, long> doc_freq_;
  double min_iwf_ = 0;
  double max_iwf_ = 0;
};

IwfTable BuildIwfTable(const std::vector<Tokens>& train_descriptions);

// Max over the description's words of the normalized IWF.
double Niwf(const Tokens& description, const IwfTable& table);

// Nearest-rank percentile: element ceil(p * n) (1-based) of the sorted scores.
double NiwfThreshold(std::vector<double> train_scores, double percentile = 0.10);

inline constexpr double kDefaultNiwfThreshold = 0.116;
inline constexpr double kDefaultOverlapThreshold = 0.5;

// Fraction of unique non-stopword description tokens that appear in the
// (unfiltered) title.
double TitleOverlap(const Tokens& description, const Tokens& title,
                    const std::set<std::string>& stopwords);

// mean(ROUGE-1 F1, ROUGE-2 F1) of a set of sentences against a reference.
// N-grams are counted within sentences and summed, so the score depends on
// which sentences are chosen but not on their order.
double OracleScore(const std::vector<Tokens>& selected, const Tokens& reference);

// Greedy sentence selection: repeatedly adds the sentence with the largest
// strictly positive score gain; ties go to the earliest sentence. Returns
// indices into `sentences` in selection order.
std::vector<int> GreedyExtractiveOracle(const std::vector<Tokens>& sentences,
                                        const Tokens& reference);

struct SentenceRef {
  int u = 0;  // utterance index t, 1-based
  int s = 0;  // sentence index within the utterance, 0-based
  bool operator==(const SentenceRef&) const = default;
};

// Sentences of U_1..U_upto_t flattened in discussion order.
struct ContextSentences {
  std::vector<Tokens> sentences;
  std::vector<SentenceRef> refs;
};
ContextSentences CollectSentences(const std::vector<Utterance>& utterances,
                                  int upto_t);

enum class FilterVerdict { kKept, kGeneric, kUninformative, kInsufficient };
std::string_view ToString(FilterVerdict v);

struct FilterReport {
  std::string example_id;
  double niwf_score = 0;
  double title_overlap = 0;
  std::vector<SentenceRef> oracle_sentences;
  bool verdict_generic = false;
  bool verdict_uninformative = false;
  bool verdict_insufficient = false;
  bool kept = true;

  // First failing filter in order generic -> uninformative -> insufficient.
  FilterVerdict Attribution() const;
};

OrderedJson ToJson(const FilterReport& r);
template <>
FilterReport FromJson<FilterReport>(const Json& j);

struct FilterThresholds {
  double niwf = kDefaultNiwfThreshold;
  double overlap = kDefaultOverlapThreshold;
};

FilterReport ScoreExample(const Example& example, const IwfTable& table,
                          const FilterThresholds& thresholds,
                          const std::set<std::string>& stopwords);

struct FilterResult {
  std::vector<FilterReport> reports;  // sorted by id
  std::vector<Example> kept;          // sorted by id
};

// The oracle runs over the sentences of U_1..U_{t_g}, the context available
// at the gold step.
FilterResult ApplyFilters(const std::vector<Example>& corpus,
                          const IwfTable& table,
                          const FilterThresholds& thresholds,
                          int threads = 1);

struct SplitFractions {
  double train = 0.8;
  double valid = 0.1;
  double test = 0.1;
};

struct SplitResult {
  CorpusSplit split;
  std::vector<std::string> warnings;
};

// Sort by (resolution_ts, id); contiguous prefix/middle/suffix with
// floor(train * n), floor(valid * n) and the remainder.
SplitResult SplitByTime(const std::vector<Example>& corpus,
                        const SplitFractions& fractions = {});

CorpusStats ComputeStats(const std::vector<const Example*>& examples);

struct StatsTable {
  CorpusStats train, valid, test, total;
};
StatsTable CorpusStatsBySplit(const std::vector<Example>& corpus,
                              const CorpusSplit& split);

// Train / Valid / Test / Total table with the row structure of the data
// statistics table.
std::string FormatStatsTable(const StatsTable& table);

}  // namespace bugsol

#endif  // BUGSOL_FILTERS_H_
