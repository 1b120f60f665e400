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

#ifndef BUGSOL_TESTS_ORACLES_H_
#define BUGSOL_TESTS_ORACLES_H_

// Independent reference computations used to check the library: metric
// values worked out by hand, a brute-force LCS and a naive exact-arithmetic
// greedy sentence oracle.

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bugsol/types.h"

namespace bugsol::testing {

inline Tokens Split(const std::string& s) {
  std::istringstream in(s);
  Tokens out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

struct MetricCase {
  std::string metric;  // bleu4, meteor, rouge1, rouge2, rougel
  std::string hyp;
  std::string ref;
  double expected;
};

// Each expected value is the frozen formula evaluated by hand.
inline std::vector<MetricCase> MetricOracleCases() {
  using std::exp;
  using std::pow;
  return {
      // BLEU-4: (p1 p2 p3 p4)^(1/4) * BP; zero counts for n >= 2 become
      // 1 / (total + 1).
      {"bleu4", "the cat sat", "the cat sat down", exp(1.0 - 4.0 / 3.0)},
      {"bleu4", "a b c d", "a b c d", 1.0},
      {"bleu4", "a b", "c d", 0.0},
      {"bleu4", "", "a b", 0.0},
      {"bleu4", "a b c d e", "a b c d f", pow(1.0 / 5, 0.25)},
      {"bleu4", "a x b y", "a b", pow(1.0 / 48, 0.25)},
      {"bleu4", "the the the the", "the cat", pow(1.0 / 96, 0.25)},
      {"bleu4", "a b", "a b c d e f", exp(-2.0)},
      {"bleu4", "a b c d", "d c b a", pow(1.0 / 24, 0.25)},
      {"bleu4", "a b c d e f", "a b c x e f", pow(1.0 / 32, 0.25)},
      {"bleu4", "a b a b", "a b", pow(1.0 / 36, 0.25)},
      // METEOR: F = 10PR / (R + 9P), score = F (1 - 0.5 (chunks/matches)^3).
      {"meteor", "a b c d", "a b c d", 1.0 - 1.0 / 128},
      {"meteor", "a b", "c d", 0.0},
      {"meteor", "a b c d", "d c b a", 0.5},
      {"meteor", "the cat sat", "the cat sat down",
       10.0 / 13 * (1.0 - 1.0 / 54)},
      {"meteor", "a b x c", "a b c", 30.0 / 31 * 23.0 / 27},
      {"meteor", "a a b", "a b a", 23.0 / 27},
      {"meteor", "", "a", 0.0},
      {"meteor", "x y a", "a", 5.0 / 12},
      {"meteor", "a b c d e f", "a b c x e f", 5.0 / 6 * 121.0 / 125},
      {"meteor", "b a", "a b", 0.5},
      {"meteor", "a b c", "c a b", 23.0 / 27},
      // ROUGE-1 F.
      {"rouge1", "the cat sat", "the cat sat down", 6.0 / 7},
      {"rouge1", "a b c", "a b c", 1.0},
      {"rouge1", "a b", "c d", 0.0},
      {"rouge1", "", "a b", 0.0},
      {"rouge1", "the the the", "the cat", 2.0 / 5},
      {"rouge1", "a b c d", "d c b a", 1.0},
      {"rouge1", "a b x", "a y", 2.0 / 5},
      {"rouge1", "a b c d e f", "a b c x e f", 5.0 / 6},
      {"rouge1", "a", "a b c d", 2.0 / 5},
      {"rouge1", "a a b", "a b b", 2.0 / 3},
      // ROUGE-2 F.
      {"rouge2", "the cat sat", "the cat sat down", 4.0 / 5},
      {"rouge2", "a b", "a b", 1.0},
      {"rouge2", "a b c d", "d c b a", 0.0},
      {"rouge2", "a", "a", 1.0},
      {"rouge2", "a", "b", 0.0},
      {"rouge2", "a", "a b", 0.0},
      {"rouge2", "a b c d e f", "a b c x e f", 3.0 / 5},
      {"rouge2", "a b a b", "a b", 1.0 / 2},
      {"rouge2", "x a b y", "a b", 1.0 / 2},
      {"rouge2", "a b c", "a b d b c", 2.0 / 3},
      // ROUGE-L F.
      {"rougel", "the cat sat", "the cat sat down", 6.0 / 7},
      {"rougel", "a b c d", "d c b a", 1.0 / 4},
      {"rougel", "a x b y c", "a b c", 3.0 / 4},
      {"rougel", "a b c", "a b c", 1.0},
      {"rougel", "a b", "c d", 0.0},
      {"rougel", "", "a", 0.0},
      {"rougel", "a b c d e f", "a b c x e f", 5.0 / 6},
      {"rougel", "b a", "a b", 1.0 / 2},
      {"rougel", "a b c", "c a b", 2.0 / 3},
      {"rougel", "a a a", "a", 1.0 / 2},
  };
}

// Longest common subsequence by enumerating every subsequence of `a` and
// testing it against `b`.
inline int BruteForceLcs(const Tokens& a, const Tokens& b) {
  int best = 0;
  const unsigned n = static_cast<unsigned>(a.size());
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    std::size_t j = 0;
    int len = 0;
    bool ok = true;
    for (unsigned i = 0; i < n && ok; ++i) {
      if (!(mask & (1u << i))) continue;
      while (j < b.size() && b[j] != a[i]) ++j;
      if (j == b.size()) {
        ok = false;
      } else {
        ++j;
        ++len;
      }
    }
    if (ok) best = std::max(best, len);
  }
  return best;
}

inline Tokens RandomTokens(std::mt19937_64& rng, int max_len, int vocab) {
  const int len = std::uniform_int_distribution<int>(0, max_len)(rng);
  Tokens out;
  for (int i = 0; i < len; ++i) {
    out.push_back("w" + std::to_string(
                            std::uniform_int_distribution<int>(0, vocab - 1)(rng)));
  }
  return out;
}

using Rational = boost::multiprecision::cpp_rational;

// mean of 2 * overlap / (|selected n-grams| + |reference n-grams|) for
// n = 1, 2, with n-grams counted sentence by sentence.
inline Rational NaiveOracleScore(const std::vector<Tokens>& sentences,
                                 const std::vector<int>& chosen,
                                 const Tokens& reference) {
  Rational sum = 0;
  for (int n = 1; n <= 2; ++n) {
    std::map<Tokens, long> hyp, ref;
    long hyp_total = 0, ref_total = 0;
    for (int idx : chosen) {
      const Tokens& s = sentences[static_cast<std::size_t>(idx)];
      for (std::size_t i = 0; i + n <= s.size(); ++i) {
        ++hyp[Tokens(s.begin() + i, s.begin() + i + n)];
        ++hyp_total;
      }
    }
    for (std::size_t i = 0; i + n <= reference.size(); ++i) {
      ++ref[Tokens(reference.begin() + i, reference.begin() + i + n)];
      ++ref_total;
    }
    long overlap = 0;
    for (const auto& [gram, c] : hyp) {
      auto it = ref.find(gram);
      if (it != ref.end()) overlap += std::min(c, it->second);
    }
    if (hyp_total + ref_total > 0) {
      sum += Rational(2 * overlap, hyp_total + ref_total);
    }
  }
  return sum / 2;
}

// Recomputes every candidate's score from scratch each round.
inline std::vector<int> NaiveGreedyOracle(const std::vector<Tokens>& sentences,
                                          const Tokens& reference) {
  std::vector<int> chosen;
  Rational current = 0;
  while (true) {
    int best = -1;
    Rational best_score = current;
    for (int i = 0; i < static_cast<int>(sentences.size()); ++i) {
      if (std::find(chosen.begin(), chosen.end(), i) != chosen.end()) continue;
      std::vector<int> trial = chosen;
      trial.push_back(i);
      const Rational s = NaiveOracleScore(sentences, trial, reference);
      if (s > best_score) {
        best = i;
        best_score = s;
      }
    }
    if (best < 0) return chosen;
    chosen.push_back(best);
    current = best_score;
  }
}

}  // namespace bugsol::testing

#endif  // BUGSOL_TESTS_ORACLES_H_
