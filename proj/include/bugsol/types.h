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

#ifndef BUGSOL_TYPES_H_
#define BUGSOL_TYPES_H_

// Canonical domain values shared by every stage of the toolkit. Each
// validated type wraps a plain Fields aggregate; the wrapper's constructor
// enforces the invariants, so a live value is always a valid one.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace bugsol {

using Tokens = std::vector<std::string>;
using Timestamp = std::int64_t;  // UTC seconds since epoch

// "owner/name#42"
std::string MakeExampleId(std::string_view project, long issue_number);

enum class EventKind { kComment, kCommit, kPullRequest, kOther };
enum class IssueState { kOpen, kClosed };
enum class DescriptionSource { kCommitMessage, kPrTitle };

std::string_view ToString(EventKind kind);
std::string_view ToString(IssueState state);
std::string_view ToString(DescriptionSource source);
EventKind ParseEventKind(std::string_view s);
IssueState ParseIssueState(std::string_view s);
DescriptionSource ParseDescriptionSource(std::string_view s);

struct Event {
  EventKind kind = EventKind::kOther;
  std::string actor;
  Timestamp ts = 0;
  std::string text;
  // "owner/name#N" or "#N" (same repository).
  std::vector<std::string> linked_issues;

  bool operator==(const Event&) const = default;
};

class RawTimeline {
 public:
  struct Fields {
    std::string project;
    long issue_number = 0;
    std::string title;
    std::vector<std::string> labels;
    IssueState state = IssueState::kOpen;
    std::vector<Event> events;

    bool operator==(const Fields&) const = default;
  };

  // Throws ValidationError on a non-positive issue number, a non-positive
  // timestamp or events out of timestamp order.
  explicit RawTimeline(Fields fields);

  const Fields& operator*() const { return f_; }
  const Fields* operator->() const { return &f_; }
  std::string id() const { return MakeExampleId(f_.project, f_.issue_number); }

  bool operator==(const RawTimeline&) const = default;

 private:
  Fields f_;
};

// Half-open token range [begin, end) inside Utterance::tokens.
struct SentenceSpan {
  int begin = 0;
  int end = 0;
  bool operator==(const SentenceSpan&) const = default;
};

struct Utterance {
  int t = 0;  // 1-based position
  std::string author;
  Timestamp ts = 0;
  Tokens tokens;
  std::vector<SentenceSpan> sentences;

  Tokens Sentence(std::size_t i) const;
  bool operator==(const Utterance&) const = default;
};

// A discussion without a resolving change. Used for negative-only
// augmentation of the when-classifier.
class Discussion {
 public:
  struct Fields {
    std::string id;
    std::string project;
    Tokens title_tokens;
    std::vector<Utterance> utterances;
    bool operator==(const Fields&) const = default;
  };
  explicit Discussion(Fields fields);

  const Fields& operator*() const { return f_; }
  const Fields* operator->() const { return &f_; }
  int T() const { return static_cast<int>(f_.utterances.size()); }
  bool operator==(const Discussion&) const = default;

 private:
  Fields f_;
};

class Example {
 public:
  struct Fields {
    std::string id;
    std::string project;
    Tokens title_tokens;
    std::vector<Utterance> utterances;
    int t_g = 0;
    Tokens description_tokens;
    DescriptionSource description_source = DescriptionSource::kCommitMessage;
    Timestamp resolution_ts = 0;

    bool operator==(const Fields&) const = default;
  };

  // Enforces 1 <= t_g <= T, non-empty title/description/utterance tokens,
  // consecutive utterance indices from 1, well-formed sentence spans and
  // resolution_ts >= ts(U_{t_g}).
  explicit Example(Fields fields);

  const Fields& operator*() const { return f_; }
  const Fields* operator->() const { return &f_; }
  int T() const { return static_cast<int>(f_.utterances.size()); }
  const Utterance& U(int t) const;  // 1-based, throws BoundsError

  bool operator==(const Example&) const = default;

 private:
  Fields f_;
};

class CorpusSplit {
 public:
  struct Fields {
    std::vector<std::string> train;
    std::vector<std::string> valid;
    std::vector<std::string> test;
    bool operator==(const Fields&) const = default;
  };
  // Enforces pairwise disjointness.
  explicit CorpusSplit(Fields fields);

  const Fields& operator*() const { return f_; }
  const Fields* operator->() const { return &f_; }
  bool operator==(const CorpusSplit&) const = default;

 private:
  Fields f_;
};

struct CorpusStats {
  long n_projects = 0;
  long n_examples = 0;
  long n_commit_messages = 0;
  long n_pr_titles = 0;
  double avg_T = 0;
  double avg_t_g = 0;
  double avg_utterance_len = 0;
  double avg_title_len = 0;
  double avg_description_len = 0;
};

}  // namespace bugsol

#endif  // BUGSOL_TYPES_H_
