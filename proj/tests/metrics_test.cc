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

#include <doctest.h>

#include <random>

#include "bugsol/error.h"
#include "bugsol/metrics.h"
#include "oracles.h"

namespace bugsol {
namespace {

using testing::Split;

double Score(const std::string& metric, const Tokens& h, const Tokens& r) {
  if (metric == "bleu4") return Bleu4(h, r);
  if (metric == "meteor") return MeteorLite(h, r);
  if (metric == "rouge1") return RougeN(h, r, 1).f;
  if (metric == "rouge2") return RougeN(h, r, 2).f;
  return RougeL(h, r).f;
}

TEST_CASE("metrics match hand-computed values") {
  std::map<std::string, int> per_metric;
  for (const auto& c : testing::MetricOracleCases()) {
    CAPTURE(c.metric);
    CAPTURE(c.hyp);
    CAPTURE(c.ref);
    CHECK(std::abs(Score(c.metric, Split(c.hyp), Split(c.ref)) - c.expected) <=
          1e-9);
    ++per_metric[c.metric];
  }
  for (const auto& [metric, n] : per_metric) CHECK(n >= 10);
}

TEST_CASE("LCS agrees with brute-force enumeration") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    const Tokens a = testing::RandomTokens(rng, 8, 4);
    const Tokens b = testing::RandomTokens(rng, 8, 4);
    CHECK(LcsLength(a, b) == testing::BruteForceLcs(a, b));
  }
}

TEST_CASE("scores are bounded and extreme on identity and disjoint input") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    Tokens h = testing::RandomTokens(rng, 10, 6);
    Tokens r = testing::RandomTokens(rng, 10, 6);
    if (r.empty()) r = {"w0"};
    const MetricScores s = ScoreAll(h, r);
    for (double v : {s.bleu4, s.meteor, s.rouge1_f, s.rouge2_f, s.rougeL_f}) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
    CHECK(LcsLength(h, r) <= static_cast<int>(std::min(h.size(), r.size())));
  }
  const Tokens x = Split("one two three four five");
  const MetricScores same = ScoreAll(x, x);
  CHECK(same.bleu4 == doctest::Approx(1.0));
  CHECK(same.rouge1_f == 1.0);
  CHECK(same.rouge2_f == 1.0);
  CHECK(same.rougeL_f == 1.0);
  const MetricScores none = ScoreAll(Split("p q r"), x);
  CHECK(none == MetricScores{});
}

TEST_CASE("empty references are rejected") {
  const Tokens h = Split("a");
  CHECK_THROWS_AS(Bleu4(h, {}), ValidationError);
  CHECK_THROWS_AS(MeteorLite(h, {}), ValidationError);
  CHECK_THROWS_AS(RougeN(h, {}, 1), ValidationError);
  CHECK_THROWS_AS(RougeL(h, {}), ValidationError);
  CHECK_THROWS_AS(RougeN(h, h, 0), ValidationError);
}

TEST_CASE("meteor alignment prefers fewer chunks at equal matches") {
  const MeteorAlignment a = AlignMeteor(Split("a a b"), Split("a b a"));
  CHECK(a.matches == 3);
  CHECK(a.chunks == 2);
  CHECK(a.hyp_to_ref == std::vector<int>{2, 0, 1});
}

TEST_CASE("rouge-n clips by reference counts") {
  const Prf p = RougeN(Split("a a a a"), Split("a b"), 1);
  CHECK(p.p == 0.25);
  CHECK(p.r == 0.5);
}

TEST_CASE("reports average per-example scores") {
  const MetricReport rep({{"x", {1, 1, 1, 1, 1}}, {"y", {0, 0.5, 0, 0, 0}}});
  CHECK(rep.n() == 2);
  CHECK(rep.aggregate().bleu4 == 0.5);
  CHECK(rep.aggregate().meteor == 0.75);
  CHECK(rep.Column("meteor") == std::vector<double>{1, 0.5});
  CHECK_THROWS_AS(rep.Column("cider"), ValidationError);
}

}  // namespace
}  // namespace bugsol
