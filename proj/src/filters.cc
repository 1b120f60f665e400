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

#include "bugsol/filters.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <sstream>

#include "bugsol/error.h"
#include "bugsol/metrics.h"
#include "bugsol/parallel.h"
#include "bugsol/text.h"

namespace bugsol {
namespace {

// Exact rational, used so that greedy tie-breaking does not depend on
// floating point rounding.
struct Fraction {
  __int128 num = 0;
  __int128 den = 1;
};

bool Less(const Fraction& a, const Fraction& b) {
  return a.num * b.den < b.num * a.den;
}

// 2 * overlap / (hyp_total + ref_total) == F1 of clipped n-gram overlap.
Fraction FScore(long overlap, long hyp_total, long ref_total) {
  if (overlap == 0) return {0, 1};
  return {2 * static_cast<__int128>(overlap),
          static_cast<__int128>(hyp_total + ref_total)};
}

// (F1_uni + F1_bi) / 2, kept as a fraction.
Fraction MeanScore(const Fraction& f1, const Fraction& f2) {
  return {f1.num * f2.den + f2.num * f1.den, 2 * f1.den * f2.den};
}

struct OracleState {
  NgramCounts uni, bi;
  long uni_total = 0, bi_total = 0;
  long uni_overlap = 0, bi_overlap = 0;
};

long GainedOverlap(const NgramCounts& selected, const NgramCounts& candidate,
                   const NgramCounts& reference) {
  long gain = 0;
  for (const auto& [gram, count] : candidate) {
    auto ref = reference.find(gram);
    if (ref == reference.end()) continue;
    auto sel = selected.find(gram);
    const int before = sel == selected.end() ? 0 : sel->second;
    gain += std::min(before + count, ref->second) - std::min(before, ref->second);
  }
  return gain;
}

long Total(const NgramCounts& counts) {
  long total = 0;
  for (const auto& [gram, count] : counts) total += count;
  return total;
}

std::string Fixed(double v, int digits = 1) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(digits) << v;
  return out.str();
}

}  // namespace

IwfTable::IwfTable(long doc_count, std::map<std::string, long> doc_freq)
    : doc_count_(doc_count), doc_freq_(std::move(doc_freq)) {
  if (doc_count_ < 1) throw ValidationError("IWF table needs >= 1 document");
  bool first = true;
  for (const auto& [word, df] : doc_freq_) {
    if (df < 1 || df > doc_count_) {
      throw ValidationError("document frequency of '" + word +
                            "' outside [1, N]");
    }
    const double iwf = Iwf(word);
    min_iwf_ = first ? iwf : std::min(min_iwf_, iwf);
    max_iwf_ = first ? iwf : std::max(max_iwf_, iwf);
    first = false;
  }
}

long IwfTable::DocFreq(const std::string& word) const {
  auto it = doc_freq_.find(word);
  return it == doc_freq_.end() ? 0 : it->second;
}

double IwfTable::Iwf(const std::string& word) const {
  return std::log(1.0 + static_cast<double>(doc_count_)) /
         (1.0 + static_cast<double>(DocFreq(word)));
}

double IwfTable::NormalizedIwf(const std::string& word) const {
  if (DocFreq(word) == 0) return 1.0;
  const double range = max_iwf_ - min_iwf_;
  if (range <= 0) return 0.0;
  return std::clamp((Iwf(word) - min_iwf_) / range, 0.0, 1.0);
}

IwfTable BuildIwfTable(const std::vector<Tokens>& train_descriptions) {
  if (train_descriptions.empty()) {
    throw ValidationError("build_iwf_table: empty training set");
  }
  std::map<std::string, long> df;
  for (const Tokens& d : train_descriptions) {
    std::set<std::string> unique(d.begin(), d.end());
    for (const std::string& w : unique) ++df[w];
  }
  return IwfTable(static_cast<long>(train_descriptions.size()), std::move(df));
}

double Niwf(const Tokens& description, const IwfTable& table) {
  if (description.empty()) throw ValidationError("niwf: empty description");
  double best = 0.0;
  for (const std::string& w : description) {
    best = std::max(best, table.NormalizedIwf(w));
  }
  return best;
}

double NiwfThreshold(std::vector<double> train_scores, double percentile) {
  if (train_scores.empty()) throw ValidationError("niwf_threshold: no scores");
  if (!(percentile > 0.0 && percentile < 1.0)) {
    throw ValidationError("niwf_threshold: percentile must be in (0, 1)");
  }
  std::sort(train_scores.begin(), train_scores.end());
  const double n = static_cast<double>(train_scores.size());
  // Nudge down before ceil so that p * n landing on an integer in exact
  // arithmetic (0.1 * 100) is not pushed up by representation error.
  long rank = static_cast<long>(std::ceil(percentile * n - 1e-9));
  rank = std::clamp<long>(rank, 1, static_cast<long>(train_scores.size()));
  return train_scores[rank - 1];
}

double TitleOverlap(const Tokens& description, const Tokens& title,
                    const std::set<std::string>& stopwords) {
  std::set<std::string> content;
  for (const std::string& w : description) {
    if (!stopwords.count(w)) content.insert(w);
  }
  if (content.empty()) {
    throw ValidationError("title_overlap: description has only stopwords");
  }
  const std::set<std::string> title_set(title.begin(), title.end());
  long shared = 0;
  for (const std::string& w : content) shared += title_set.count(w);
  return static_cast<double>(shared) / static_cast<double>(content.size());
}

double OracleScore(const std::vector<Tokens>& selected, const Tokens& reference) {
  NgramCounts uni, bi;
  for (const Tokens& s : selected) {
    for (auto& [g, c] : CountNgrams(s, 1)) uni[g] += c;
    for (auto& [g, c] : CountNgrams(s, 2)) bi[g] += c;
  }
  const NgramCounts ref_uni = CountNgrams(reference, 1);
  const NgramCounts ref_bi = CountNgrams(reference, 2);
  const Fraction f = MeanScore(
      FScore(GainedOverlap({}, uni, ref_uni), Total(uni), Total(ref_uni)),
      FScore(GainedOverlap({}, bi, ref_bi), Total(bi), Total(ref_bi)));
  return static_cast<double>(f.num) / static_cast<double>(f.den);
}

std::vector<int> GreedyExtractiveOracle(const std::vector<Tokens>& sentences,
                                        const Tokens& reference) {
  const NgramCounts ref_uni = CountNgrams(reference, 1);
  const NgramCounts ref_bi = CountNgrams(reference, 2);
  const long ref_uni_total = Total(ref_uni);
  const long ref_bi_total = Total(ref_bi);

  std::vector<NgramCounts> cand_uni, cand_bi;
  std::vector<long> cand_uni_total, cand_bi_total;
  for (const Tokens& s : sentences) {
    cand_uni.push_back(CountNgrams(s, 1));
    cand_bi.push_back(CountNgrams(s, 2));
    cand_uni_total.push_back(Total(cand_uni.back()));
    cand_bi_total.push_back(Total(cand_bi.back()));
  }

  OracleState state;
  Fraction current{0, 1};
  std::vector<bool> chosen(sentences.size(), false);
  std::vector<int> selection;
  while (true) {
    int best = -1;
    Fraction best_score = current;
    long best_uni = 0, best_bi = 0;
    for (std::size_t i = 0; i < sentences.size(); ++i) {
      if (chosen[i]) continue;
      const long uni =
          state.uni_overlap + GainedOverlap(state.uni, cand_uni[i], ref_uni);
      const long bi =
          state.bi_overlap + GainedOverlap(state.bi, cand_bi[i], ref_bi);
      const Fraction score = MeanScore(
          FScore(uni, state.uni_total + cand_uni_total[i], ref_uni_total),
          FScore(bi, state.bi_total + cand_bi_total[i], ref_bi_total));
      // Strictly better only: earlier sentences win ties.
      if (Less(best_score, score)) {
        best = static_cast<int>(i);
        best_score = score;
        best_uni = uni;
        best_bi = bi;
      }
    }
    if (best < 0) break;
    chosen[best] = true;
    selection.push_back(best);
    for (const auto& [g, c] : cand_uni[best]) state.uni[g] += c;
    for (const auto& [g, c] : cand_bi[best]) state.bi[g] += c;
    state.uni_total += cand_uni_total[best];
    state.bi_total += cand_bi_total[best];
    state.uni_overlap = best_uni;
    state.bi_overlap = best_bi;
    current = best_score;
  }
  return selection;
}

ContextSentences CollectSentences(const std::vector<Utterance>& utterances,
                                  int upto_t) {
  ContextSentences out;
  for (const Utterance& u : utterances) {
    if (u.t > upto_t) break;
    for (std::size_t s = 0; s < u.sentences.size(); ++s) {
      out.sentences.push_back(u.Sentence(s));
      out.refs.push_back({u.t, static_cast<int>(s)});
    }
  }
  return out;
}

std::string_view ToString(FilterVerdict v) {
  switch (v) {
    case FilterVerdict::kKept:
      return "kept";
    case FilterVerdict::kGeneric:
      return "generic";
    case FilterVerdict::kUninformative:
      return "uninformative";
    case FilterVerdict::kInsufficient:
      return "insufficient";
  }
  return "kept";
}

FilterVerdict FilterReport::Attribution() const {
  if (verdict_generic) return FilterVerdict::kGeneric;
  if (verdict_uninformative) return FilterVerdict::kUninformative;
  if (verdict_insufficient) return FilterVerdict::kInsufficient;
  return FilterVerdict::kKept;
}

OrderedJson ToJson(const FilterReport& r) {
  OrderedJson oracle = OrderedJson::array();
  for (const SentenceRef& s : r.oracle_sentences) {
    oracle.push_back({{"u", s.u}, {"s", s.s}});
  }
  return {{"id", r.example_id},
          {"niwf", r.niwf_score},
          {"overlap", r.title_overlap},
          {"oracle", std::move(oracle)},
          {"generic", r.verdict_generic},
          {"uninformative", r.verdict_uninformative},
          {"insufficient", r.verdict_insufficient},
          {"kept", r.kept}};
}

template <>
FilterReport FromJson<FilterReport>(const Json& j) {
  FilterReport r;
  r.example_id = GetField<std::string>(j, "id");
  r.niwf_score = GetField<double>(j, "niwf");
  r.title_overlap = GetField<double>(j, "overlap");
  for (const Json& o : GetField<Json>(j, "oracle")) {
    r.oracle_sentences.push_back(
        {GetField<int>(o, "u"), GetField<int>(o, "s")});
  }
  r.verdict_generic = GetField<bool>(j, "generic");
  r.verdict_uninformative = GetField<bool>(j, "uninformative");
  r.verdict_insufficient = GetField<bool>(j, "insufficient");
  r.kept = GetField<bool>(j, "kept");
  if (r.kept != !(r.verdict_generic || r.verdict_uninformative ||
                  r.verdict_insufficient)) {
    throw ValidationError("kept must equal no failing verdict");
  }
  if (r.verdict_insufficient != r.oracle_sentences.empty()) {
    throw ValidationError("insufficient must equal an empty oracle selection");
  }
  return r;
}

FilterReport ScoreExample(const Example& example, const IwfTable& table,
                          const FilterThresholds& thresholds,
                          const std::set<std::string>& stopwords) {
  FilterReport r;
  r.example_id = example->id;
  r.niwf_score = Niwf(example->description_tokens, table);
  // An all-stopword description carries no content that the title could
  // restate; it is scored 0 overlap and left to the other filters.
  try {
    r.title_overlap = TitleOverlap(example->description_tokens,
                                   example->title_tokens, stopwords);
  } catch (const ValidationError&) {
    r.title_overlap = 0.0;
  }
  const ContextSentences ctx = CollectSentences(example->utterances,
                                                example->t_g);
  for (int i : GreedyExtractiveOracle(ctx.sentences,
                                      example->description_tokens)) {
    r.oracle_sentences.push_back(ctx.refs[i]);
  }
  r.verdict_generic = r.niwf_score < thresholds.niwf;
  r.verdict_uninformative = r.title_overlap >= thresholds.overlap;
  r.verdict_insufficient = r.oracle_sentences.empty();
  r.kept = !(r.verdict_generic || r.verdict_uninformative ||
             r.verdict_insufficient);
  return r;
}

FilterResult ApplyFilters(const std::vector<Example>& corpus,
                          const IwfTable& table,
                          const FilterThresholds& thresholds, int threads) {
  std::vector<const Example*> order;
  for (const Example& e : corpus) order.push_back(&e);
  std::sort(order.begin(), order.end(), [](const Example* a, const Example* b) {
    return (*a)->id < (*b)->id;
  });
  FilterResult out;
  out.reports.resize(order.size());
  const std::set<std::string>& stop = StopwordSet();
  ParallelFor(order.size(), threads, [&](std::size_t i) {
    out.reports[i] = ScoreExample(*order[i], table, thresholds, stop);
  });
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (out.reports[i].kept) out.kept.push_back(*order[i]);
  }
  return out;
}

SplitResult SplitByTime(const std::vector<Example>& corpus,
                        const SplitFractions& fractions) {
  if (corpus.size() < 3) {
    throw ValidationError("split_by_time: need at least 3 examples");
  }
  if (!(fractions.train > 0 && fractions.valid > 0 && fractions.test > 0) ||
      std::abs(fractions.train + fractions.valid + fractions.test - 1.0) >
          1e-9) {
    throw ValidationError("split fractions must be positive and sum to 1");
  }
  std::vector<const Example*> order;
  for (const Example& e : corpus) order.push_back(&e);
  std::sort(order.begin(), order.end(), [](const Example* a, const Example* b) {
    const auto& fa = **a;
    const auto& fb = **b;
    if (fa.resolution_ts != fb.resolution_ts) {
      return fa.resolution_ts < fb.resolution_ts;
    }
    return fa.id < fb.id;
  });
  const std::size_t n = order.size();
  const auto floor_count = [n](double frac) {
    return static_cast<std::size_t>(std::floor(frac * n + 1e-9));
  };
  const std::size_t n_train = floor_count(fractions.train);
  const std::size_t n_valid = floor_count(fractions.valid);

  CorpusSplit::Fields f;
  for (std::size_t i = 0; i < n; ++i) {
    auto& part = i < n_train ? f.train : i < n_train + n_valid ? f.valid : f.test;
    part.push_back((*order[i])->id);
  }

  SplitResult result{CorpusSplit(f), {}};
  auto boundary = [&](std::size_t last_of_prev, const char* name) {
    if (last_of_prev + 1 >= n || last_of_prev == static_cast<std::size_t>(-1)) {
      return;
    }
    if ((*order[last_of_prev])->resolution_ts ==
        (*order[last_of_prev + 1])->resolution_ts) {
      result.warnings.push_back(std::string("equal timestamps across the ") +
                                name +
                                " boundary; ordering is non-strict there");
    }
  };
  if (n_train > 0) boundary(n_train - 1, "train/valid");
  if (n_train + n_valid > 0 && n_valid > 0) {
    boundary(n_train + n_valid - 1, "valid/test");
  }
  return result;
}

CorpusStats ComputeStats(const std::vector<const Example*>& examples) {
  CorpusStats s;
  std::set<std::string> projects;
  double sum_T = 0, sum_tg = 0, sum_title = 0, sum_desc = 0;
  double sum_utt_len = 0;
  long n_utts = 0;
  for (const Example* e : examples) {
    const auto& f = **e;
    projects.insert(f.project);
    ++s.n_examples;
    if (f.description_source == DescriptionSource::kCommitMessage) {
      ++s.n_commit_messages;
    } else {
      ++s.n_pr_titles;
    }
    sum_T += e->T();
    sum_tg += f.t_g;
    sum_title += static_cast<double>(f.title_tokens.size());
    sum_desc += static_cast<double>(f.description_tokens.size());
    for (const Utterance& u : f.utterances) {
      sum_utt_len += static_cast<double>(u.tokens.size());
      ++n_utts;
    }
  }
  s.n_projects = static_cast<long>(projects.size());
  if (s.n_examples > 0) {
    const double n = static_cast<double>(s.n_examples);
    s.avg_T = sum_T / n;
    s.avg_t_g = sum_tg / n;
    s.avg_title_len = sum_title / n;
    s.avg_description_len = sum_desc / n;
  }
  if (n_utts > 0) s.avg_utterance_len = sum_utt_len / n_utts;
  return s;
}

StatsTable CorpusStatsBySplit(const std::vector<Example>& corpus,
                              const CorpusSplit& split) {
  std::map<std::string, const Example*> by_id;
  for (const Example& e : corpus) by_id[e->id] = &e;
  auto gather = [&](const std::vector<std::string>& ids) {
    std::vector<const Example*> out;
    for (const std::string& id : ids) {
      auto it = by_id.find(id);
      if (it == by_id.end()) {
        throw ValidationError("split references unknown example '" + id + "'");
      }
      out.push_back(it->second);
    }
    return out;
  };
  StatsTable table;
  table.train = ComputeStats(gather(split->train));
  table.valid = ComputeStats(gather(split->valid));
  table.test = ComputeStats(gather(split->test));
  std::vector<const Example*> all;
  for (const Example& e : corpus) all.push_back(&e);
  if (split->train.size() + split->valid.size() + split->test.size() !=
      corpus.size()) {
    throw ValidationError("split does not cover the corpus");
  }
  table.total = ComputeStats(all);
  return table;
}

std::string FormatStatsTable(const StatsTable& table) {
  const CorpusStats* cols[] = {&table.train, &table.valid, &table.test,
                               &table.total};
  struct Row {
    std::string label;
    std::function<std::string(const CorpusStats&)> cell;
  };
  const std::vector<Row> rows = {
      {"Projects", [](const CorpusStats& s) { return std::to_string(s.n_projects); }},
      {"Examples", [](const CorpusStats& s) { return std::to_string(s.n_examples); }},
      {"  # Commit messages",
       [](const CorpusStats& s) { return std::to_string(s.n_commit_messages); }},
      {"  # PR titles",
       [](const CorpusStats& s) { return std::to_string(s.n_pr_titles); }},
      {"Avg T", [](const CorpusStats& s) { return Fixed(s.avg_T); }},
      {"Avg t_g", [](const CorpusStats& s) { return Fixed(s.avg_t_g); }},
      {"Avg utterance length (#tokens)",
       [](const CorpusStats& s) { return Fixed(s.avg_utterance_len); }},
      {"Avg title length (#tokens)",
       [](const CorpusStats& s) { return Fixed(s.avg_title_len); }},
      {"Avg description length (#tokens)",
       [](const CorpusStats& s) { return Fixed(s.avg_description_len); }},
  };
  std::ostringstream out;
  out << std::left << std::setw(34) << "" << std::right;
  for (const char* h : {"Train", "Valid", "Test", "Total"}) {
    out << std::setw(10) << h;
  }
  out << '\n';
  for (const Row& row : rows) {
    out << std::left << std::setw(34) << row.label << std::right;
    for (const CorpusStats* c : cols) out << std::setw(10) << row.cell(*c);
    out << '\n';
  }
  return out.str();
}

}  // namespace bugsol
