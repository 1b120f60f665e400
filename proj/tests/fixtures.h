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

#ifndef BUGSOL_TESTS_FIXTURES_H_
#define BUGSOL_TESTS_FIXTURES_H_

// Builders shared by the unit and acceptance tests.

#include <unistd.h>

#include <filesystem>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "bugsol/ingest.h"
#include "bugsol/text.h"
#include "bugsol/types.h"

namespace bugsol::testing {

inline std::string DataPath(const std::string& name) {
  return std::string(BUGSOL_TEST_DATA) + "/" + name;
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("bugsol_" + tag + "_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  std::string File(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

inline Utterance MakeUtterance(int t, const std::string& author, Timestamp ts,
                               const std::string& text) {
  TokenizedText tt = TokenizeUtterance(text);
  return {t, author, ts, std::move(tt.tokens), std::move(tt.sentences)};
}

struct Turn {
  std::string author;
  std::string text;
};

inline Example MakeExample(const std::string& project, long number,
                           const std::string& title,
                           const std::vector<Turn>& turns, int t_g,
                           const std::string& description,
                           Timestamp base_ts = 1'600'000'000) {
  Example::Fields f;
  f.id = MakeExampleId(project, number);
  f.project = project;
  f.title_tokens = Tokenize(title);
  for (std::size_t i = 0; i < turns.size(); ++i) {
    f.utterances.push_back(MakeUtterance(static_cast<int>(i) + 1,
                                         turns[i].author,
                                         base_ts + 60 * static_cast<long>(i),
                                         turns[i].text));
  }
  f.t_g = t_g;
  f.description_tokens = Tokenize(description);
  f.resolution_ts = base_ts + 60 * static_cast<long>(turns.size());
  return Example(std::move(f));
}

inline Discussion MakeDiscussion(const std::string& project, long number,
                                 const std::string& title,
                                 const std::vector<Turn>& turns) {
  Discussion::Fields f;
  f.id = MakeExampleId(project, number);
  f.project = project;
  f.title_tokens = Tokenize(title);
  for (std::size_t i = 0; i < turns.size(); ++i) {
    f.utterances.push_back(MakeUtterance(static_cast<int>(i) + 1,
                                         turns[i].author,
                                         1'600'000'000 + 60 * static_cast<long>(i),
                                         turns[i].text));
  }
  return Discussion(std::move(f));
}

inline Event MakeEvent(EventKind kind, const std::string& actor, Timestamp ts,
                       const std::string& text,
                       std::vector<std::string> links = {}) {
  return {kind, actor, ts, text, std::move(links)};
}

// Deterministic synthetic issue archive. Bug timelines carry a bug label, a
// closed state, 2-7 comments from up to four actors and exactly one linked
// fixing commit or PR somewhere after the first comment; every fifth
// timeline is an unlabeled question without a change (augmentation source).
inline std::vector<RawTimeline> SyntheticTimelines(int n, unsigned seed) {
  static const std::vector<std::string> kComponents = {
      "parser",   "scheduler", "cache",   "encoder", "router",
      "renderer", "indexer",   "planner", "lexer",   "loader"};
  static const std::vector<std::string> kSymptoms = {
      "crash", "hang", "leak", "timeout", "overflow", "deadlock"};
  static const std::vector<std::string> kCauses = {
      "null pointer", "stale handle", "missing lock", "off by one index",
      "wrong encoding", "unbounded buffer"};
  static const std::vector<std::string> kChatter = {
      "Thanks for the report.",
      "I can reproduce this on the latest release.",
      "Could you share the stack trace?",
      "Here is the full log from my machine.",
      "Any update on this?",
      "I will open a PR soon."};
  static const std::vector<std::string> kProjects = {"acme/widgets",
                                                     "acme/gadgets",
                                                     "zeta/engine"};
  std::mt19937_64 rng(seed);
  auto pick = [&rng](const std::vector<std::string>& v) -> const std::string& {
    return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
  };
  auto uniform = [&rng](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  };

  std::vector<RawTimeline> out;
  for (int i = 0; i < n; ++i) {
    RawTimeline::Fields f;
    f.project = kProjects[static_cast<std::size_t>(i) % kProjects.size()];
    f.issue_number = 100 + i;
    const std::string comp = pick(kComponents);
    const std::string symptom = pick(kSymptoms);
    const std::string cause = pick(kCauses);
    f.title = "The " + comp + " shows a " + symptom + " under load";
    Timestamp ts = 1'500'000'000 + 86'400L * i;
    const std::vector<std::string> actors = {
        "user" + std::to_string(i % 7), "dev" + std::to_string(i % 3),
        "maint" + std::to_string(i % 2), "bot"};
    const bool question = i % 5 == 4;
    const int comments = uniform(2, 7);
    const int change_after = question ? 0 : uniform(1, comments);
    for (int c = 1; c <= comments; ++c) {
      std::string text;
      if (c == 1) {
        text = "When I run the " + comp + " it fails with a " + symptom +
               ". Steps: start the service and send requests.";
      } else if (c == change_after) {
        text = "The root cause is a " + cause + " in the " + comp +
               ". I will fix the " + cause + " handling.";
      } else {
        text = pick(kChatter);
      }
      f.events.push_back(MakeEvent(EventKind::kComment,
                                   actors[static_cast<std::size_t>(
                                       c == 1 ? 0 : uniform(0, 3))],
                                   ts, text));
      ts += uniform(60, 3600);
      if (c == change_after) {
        const bool pr = uniform(0, 1) == 1;
        f.events.push_back(MakeEvent(
            pr ? EventKind::kPullRequest : EventKind::kCommit, actors[1], ts,
            "Fix " + cause + " in " + comp + " request path (#" +
                std::to_string(f.issue_number) + ")",
            {"#" + std::to_string(f.issue_number)}));
        ts += uniform(60, 600);
      }
    }
    if (!question) f.labels = {"bug"};
    f.state = IssueState::kClosed;
    out.emplace_back(std::move(f));
  }
  return out;
}

// Examples extracted from SyntheticTimelines with the default ingest config.
inline std::vector<Example> SyntheticExamples(int n_timelines, unsigned seed) {
  std::vector<Example> out;
  for (const RawTimeline& tl : SyntheticTimelines(n_timelines, seed)) {
    ExtractResult r = ExtractExample(tl, IngestConfig{});
    if (auto* e = std::get_if<Example>(&r)) out.push_back(std::move(*e));
  }
  return out;
}

inline std::vector<Discussion> SyntheticDiscussions(int n_timelines,
                                                    unsigned seed) {
  std::vector<Discussion> out;
  for (const RawTimeline& tl : SyntheticTimelines(n_timelines, seed)) {
    if (IsBugReport(tl, IngestConfig{})) continue;
    if (auto d = ExtractDiscussion(tl)) out.push_back(std::move(*d));
  }
  return out;
}

}  // namespace bugsol::testing

#endif  // BUGSOL_TESTS_FIXTURES_H_
