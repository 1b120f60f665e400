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

#ifndef BUGSOL_TESTS_TABLE_FIXTURE_H_
#define BUGSOL_TESTS_TABLE_FIXTURE_H_

// Small corpora whose report tables are checked against tests/golden.

#include <map>
#include <string>
#include <vector>

#include "bugsol/when.h"
#include "fixtures.h"

namespace bugsol::testing {

inline Example WithSource(const Example& e, DescriptionSource source) {
  Example::Fields f = *e;
  f.description_source = source;
  return Example(std::move(f));
}

// Four examples over three projects; split train {1, 2}, valid {3}, test {4}.
inline std::vector<Example> TableFixture() {
  return {
      MakeExample("p/a", 1, "Crash on save",
                  {{"ann", "Saving fails."}, {"bob", "Writer bug."}}, 2,
                  "flush writer"),
      MakeExample("p/a", 2, "Slow start", {{"cat", "Start takes ages."}}, 1,
                  "cache config"),
      WithSource(MakeExample("p/b", 3, "Bad icon",
                             {{"dan", "Icon is blurry."},
                              {"eve", "Use svg."},
                              {"dan", "Done."}},
                             3, "use svg icon"),
                 DescriptionSource::kPrTitle),
      WithSource(MakeExample("p/c", 4, "Typo",
                             {{"fay", "Typo in docs."}, {"gus", "Fixed."}}, 1,
                             "fix typo in docs"),
                 DescriptionSource::kPrTitle),
  };
}

inline CorpusSplit TableFixtureSplit() {
  return CorpusSplit({{"p/a#1", "p/a#2"}, {"p/b#3"}, {"p/c#4"}});
}

// Ten gold steps and hand-tallied predictions: 4 exact, 3 early, 3 missing
// (one of them beyond t_g).
inline std::map<std::string, int> TallyGolds() {
  return {{"a", 1}, {"b", 1}, {"c", 2}, {"d", 2}, {"e", 3},
          {"f", 3}, {"g", 4}, {"h", 5}, {"i", 6}, {"j", 2}};
}

inline std::vector<WhenPrediction> TallyPredictions() {
  const std::map<std::string, std::optional<int>> t_p = {
      {"a", 1}, {"b", std::nullopt}, {"c", 1}, {"d", 2}, {"e", 3},
      {"f", std::nullopt}, {"g", 2}, {"h", 5}, {"i", 7}, {"j", 1}};
  std::vector<WhenPrediction> out;
  for (const auto& [id, tp] : t_p) out.push_back({id, tp, {}});
  return out;
}

inline std::vector<WhenPrediction> TallyFirst() {
  std::vector<WhenPrediction> out;
  for (const auto& [id, tg] : TallyGolds()) out.push_back({id, 1, {1.0}});
  return out;
}

}  // namespace bugsol::testing

#endif  // BUGSOL_TESTS_TABLE_FIXTURE_H_
