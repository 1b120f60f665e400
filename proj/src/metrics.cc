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

#include "bugsol/metrics.h"

#include <algorithm>
#include <cmath>
#include <functional>

#include "bugsol/error.h"

namespace bugsol {
namespace {

void RequireReference(const Tokens& reference, const char* metric) {
  if (reference.empty()) {
    throw ValidationError(std::string(metric) + ": empty reference");
  }
}

double F1(double p, double r) { return p + r > 0 ? 2 * p * r / (p + r) : 0.0; }

int ClippedOverlap(const NgramCounts& hyp, const NgramCounts& ref) {
  int overlap = 0;
  for (const auto& [gram, count] : hyp) {
    auto it = ref.find(gram);
    if (it != ref.end()) overlap += std::min(count, it->second);
  }
  return overlap;
}

int NgramTotal(std::size_t len, int n) {
  return len >= static_cast<std::size_t>(n) ? static_cast<int>(len) - n + 1
                                            : 0;
}

int ChunkCount(const std::vector<int>& hyp_to_ref) {
  int chunks = 0;
  for (std::size_t i = 0; i < hyp_to_ref.size(); ++i) {
    if (hyp_to_ref[i] < 0) continue;
    const bool continues = i > 0 && hyp_to_ref[i - 1] >= 0 &&
                           hyp_to_ref[i - 1] + 1 == hyp_to_ref[i];
    if (!continues) ++chunks;
  }
  return chunks;
}

// Branch-and-bound over hypothesis positions. Every word w must reach its
// quota min(count_hyp(w), count_ref(w)) for the alignment to have the maximal
// number of matches, so positions are aligned or skipped against per-word
// quotas; chunk counts only grow along a path and prune against the best.
class MeteorSearch {
 public:
  MeteorSearch(const Tokens& hyp, const Tokens& ref, long budget)
      : hyp_(hyp), ref_(ref), budget_(budget) {
    std::map<std::string, int> word_id;
    auto id_of = [&](const std::string& w) {
      auto [it, inserted] =
          word_id.emplace(w, static_cast<int>(word_id.size()));
      return it->second;
    };
    hyp_ids_.reserve(hyp.size());
    for (const std::string& w : hyp) hyp_ids_.push_back(id_of(w));
    ref_ids_.reserve(ref.size());
    for (const std::string& w : ref) ref_ids_.push_back(id_of(w));
    const std::size_t v = word_id.size();
    std::vector<int> hyp_count(v, 0), ref_count(v, 0);
    for (int w : hyp_ids_) ++hyp_count[w];
    for (int w : ref_ids_) ++ref_count[w];
    quota_.resize(v);
    for (std::size_t w = 0; w < v; ++w) {
      quota_[w] = std::min(hyp_count[w], ref_count[w]);
    }
    ref_positions_.resize(v);
    for (std::size_t j = 0; j < ref.size(); ++j) {
      ref_positions_[ref_ids_[j]].push_back(static_cast<int>(j));
    }
  }

  MeteorAlignment Run() {
    const std::size_t h = hyp_.size();
    // Occurrences of each word at or after the current position.
    remaining_.assign(quota_.size(), 0);
    for (int w : hyp_ids_) ++remaining_[w];
    matched_.assign(quota_.size(), 0);
    used_.assign(ref_.size(), false);
    current_.assign(h, -1);

    best_ = Greedy();
    best_chunks_ = ChunkCount(best_);
    // Restore state mutated by Greedy().
    remaining_.assign(quota_.size(), 0);
    for (int w : hyp_ids_) ++remaining_[w];
    std::fill(matched_.begin(), matched_.end(), 0);
    std::fill(used_.begin(), used_.end(), false);

    Dfs(0, 0);

    MeteorAlignment out;
    out.hyp_to_ref = best_;
    for (int j : best_) out.matches += j >= 0 ? 1 : 0;
    out.chunks = best_chunks_;
    return out;
  }

 private:
  std::vector<int> Greedy() {
    std::vector<int> align(hyp_.size(), -1);
    std::vector<bool> used(ref_.size(), false);
    std::vector<int> matched(quota_.size(), 0);
    for (std::size_t i = 0; i < hyp_.size(); ++i) {
      const int w = hyp_ids_[i];
      if (matched[w] >= quota_[w]) continue;
      int pick = -1;
      if (i > 0 && align[i - 1] >= 0) {
        const int next = align[i - 1] + 1;
        if (next < static_cast<int>(ref_.size()) && ref_ids_[next] == w &&
            !used[next]) {
          pick = next;
        }
      }
      if (pick < 0) {
        for (int j : ref_positions_[w]) {
          if (!used[j]) {
            pick = j;
            break;
          }
        }
      }
      align[i] = pick;
      used[pick] = true;
      ++matched[w];
    }
    return align;
  }

  void Dfs(std::size_t i, int chunks) {
    if (chunks >= best_chunks_ || expanded_ >= budget_) return;
    ++expanded_;
    if (i == hyp_.size()) {
      best_chunks_ = chunks;
      best_ = current_;
      return;
    }
    const int w = hyp_ids_[i];
    --remaining_[w];
    const int prev = i > 0 ? current_[i - 1] : -1;
    if (matched_[w] < quota_[w]) {
      // Continuation of the previous chunk first: it never adds a chunk.
      auto try_align = [&](int j) {
        used_[j] = true;
        ++matched_[w];
        current_[i] = j;
        const bool continues = prev >= 0 && prev + 1 == j;
        Dfs(i + 1, chunks + (continues ? 0 : 1));
        current_[i] = -1;
        --matched_[w];
        used_[j] = false;
      };
      const int next = prev >= 0 ? prev + 1 : -1;
      if (next >= 0 && next < static_cast<int>(ref_.size()) &&
          ref_ids_[next] == w && !used_[next]) {
        try_align(next);
      }
      for (int j : ref_positions_[w]) {
        if (j == next || used_[j]) continue;
        try_align(j);
      }
    }
    // Skipping is only feasible if the remaining occurrences can still fill
    // the quota.
    if (matched_[w] + remaining_[w] >= quota_[w]) {
      current_[i] = -1;
      Dfs(i + 1, chunks);
    }
    ++remaining_[w];
  }

  const Tokens& hyp_;
  const Tokens& ref_;
  long budget_;
  long expanded_ = 0;
  std::vector<int> hyp_ids_, ref_ids_;
  std::vector<int> quota_;
  std::vector<std::vector<int>> ref_positions_;
  std::vector<int> remaining_, matched_;
  std::vector<bool> used_;
  std::vector<int> current_, best_;
  int best_chunks_ = 0;
};

}  // namespace

std::string NgramKey(const Tokens& tokens, std::size_t begin, int n) {
  std::string key;
  for (int k = 0; k < n; ++k) {
    if (k > 0) key.push_back('\x1f');
    key += tokens[begin + k];
  }
  return key;
}

NgramCounts CountNgrams(const Tokens& tokens, int n) {
  NgramCounts counts;
  const int total = NgramTotal(tokens.size(), n);
  for (int i = 0; i < total; ++i) ++counts[NgramKey(tokens, i, n)];
  return counts;
}

double Bleu4(const Tokens& hypothesis, const Tokens& reference) {
  RequireReference(reference, "bleu4");
  if (hypothesis.empty()) return 0.0;
  double log_sum = 0;
  for (int n = 1; n <= 4; ++n) {
    const int total = NgramTotal(hypothesis.size(), n);
    const int matches =
        ClippedOverlap(CountNgrams(hypothesis, n), CountNgrams(reference, n));
    double precision;
    if (n == 1) {
      if (matches == 0) return 0.0;
      precision = static_cast<double>(matches) / total;
    } else if (matches == 0) {
      precision = 1.0 / (total + 1);
    } else {
      precision = static_cast<double>(matches) / total;
    }
    log_sum += std::log(precision);
  }
  const double h = static_cast<double>(hypothesis.size());
  const double r = static_cast<double>(reference.size());
  const double bp = h < r ? std::exp(1.0 - r / h) : 1.0;
  return bp * std::exp(log_sum / 4.0);
}

MeteorAlignment AlignMeteor(const Tokens& hypothesis, const Tokens& reference,
                            long search_budget) {
  if (hypothesis.empty() || reference.empty()) {
    return MeteorAlignment{0, 0, std::vector<int>(hypothesis.size(), -1)};
  }
  return MeteorSearch(hypothesis, reference, search_budget).Run();
}

double MeteorFromAlignment(int matches, int chunks, std::size_t hyp_len,
                           std::size_t ref_len) {
  if (matches == 0) return 0.0;
  const double p = static_cast<double>(matches) / hyp_len;
  const double r = static_cast<double>(matches) / ref_len;
  const double f = 10 * p * r / (r + 9 * p);
  const double frag = static_cast<double>(chunks) / matches;
  const double penalty = 0.5 * frag * frag * frag;
  return f * (1 - penalty);
}

double MeteorLite(const Tokens& hypothesis, const Tokens& reference) {
  RequireReference(reference, "meteor");
  const MeteorAlignment a = AlignMeteor(hypothesis, reference);
  return MeteorFromAlignment(a.matches, a.chunks, hypothesis.size(),
                             reference.size());
}

Prf RougeN(const Tokens& hypothesis, const Tokens& reference, int n) {
  RequireReference(reference, "rouge_n");
  if (n < 1) throw ValidationError("rouge_n: n must be >= 1");
  const int hyp_total = NgramTotal(hypothesis.size(), n);
  const int ref_total = NgramTotal(reference.size(), n);
  if (hyp_total == 0 && ref_total == 0) {
    // Both sequences are shorter than n: no n-grams to compare, so the
    // sequences themselves are compared.
    const double same = hypothesis == reference ? 1.0 : 0.0;
    return {same, same, same};
  }
  const int overlap =
      ClippedOverlap(CountNgrams(hypothesis, n), CountNgrams(reference, n));
  Prf out;
  out.p = hyp_total > 0 ? static_cast<double>(overlap) / hyp_total : 0.0;
  out.r = ref_total > 0 ? static_cast<double>(overlap) / ref_total : 0.0;
  out.f = F1(out.p, out.r);
  return out;
}

int LcsLength(const Tokens& a, const Tokens& b) {
  std::vector<int> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1
                                    : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

Prf RougeL(const Tokens& hypothesis, const Tokens& reference) {
  RequireReference(reference, "rouge_l");
  if (hypothesis.empty()) return {};
  const int lcs = LcsLength(hypothesis, reference);
  Prf out;
  out.p = static_cast<double>(lcs) / hypothesis.size();
  out.r = static_cast<double>(lcs) / reference.size();
  out.f = F1(out.p, out.r);
  return out;
}

MetricScores ScoreAll(const Tokens& hypothesis, const Tokens& reference) {
  MetricScores s;
  s.bleu4 = Bleu4(hypothesis, reference);
  s.meteor = MeteorLite(hypothesis, reference);
  s.rouge1_f = RougeN(hypothesis, reference, 1).f;
  s.rouge2_f = RougeN(hypothesis, reference, 2).f;
  s.rougeL_f = RougeL(hypothesis, reference).f;
  return s;
}

double MetricByName(const MetricScores& s, const std::string& name) {
  if (name == "bleu4") return s.bleu4;
  if (name == "meteor") return s.meteor;
  if (name == "rouge1") return s.rouge1_f;
  if (name == "rouge2") return s.rouge2_f;
  if (name == "rougel") return s.rougeL_f;
  throw ValidationError("unknown metric '" + name + "'");
}

MetricReport::MetricReport(std::map<std::string, MetricScores> per_example)
    : per_example_(std::move(per_example)) {
  if (per_example_.empty()) return;
  MetricScores sum;
  for (const auto& [id, s] : per_example_) {
    sum.bleu4 += s.bleu4;
    sum.meteor += s.meteor;
    sum.rouge1_f += s.rouge1_f;
    sum.rouge2_f += s.rouge2_f;
    sum.rougeL_f += s.rougeL_f;
  }
  const double n = static_cast<double>(per_example_.size());
  aggregate_ = {sum.bleu4 / n, sum.meteor / n, sum.rouge1_f / n,
                sum.rouge2_f / n, sum.rougeL_f / n};
}

std::vector<double> MetricReport::Column(const std::string& metric) const {
  std::vector<double> out;
  out.reserve(per_example_.size());
  for (const auto& [id, s] : per_example_) {
    out.push_back(MetricByName(s, metric));
  }
  return out;
}

}  // namespace bugsol
