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

#include "bugsol/types.h"

#include <set>
#include <utility>

#include "bugsol/error.h"

namespace bugsol {
namespace {

void Require(bool ok, const std::string& what) {
  if (!ok) throw ValidationError(what);
}

void ValidateUtterances(const std::vector<Utterance>& utterances,
                        const std::string& id) {
  for (std::size_t i = 0; i < utterances.size(); ++i) {
    const Utterance& u = utterances[i];
    Require(u.t == static_cast<int>(i) + 1,
            id + ": utterance indices must be consecutive from 1");
    Require(!u.tokens.empty(), id + ": utterance tokens non-empty");
    int prev_end = 0;
    for (const SentenceSpan& s : u.sentences) {
      Require(s.begin >= prev_end && s.begin < s.end &&
                  s.end <= static_cast<int>(u.tokens.size()),
              id + ": sentence spans must be ordered, non-empty and in range");
      prev_end = s.end;
    }
  }
}

}  // namespace

std::string MakeExampleId(std::string_view project, long issue_number) {
  return std::string(project) + "#" + std::to_string(issue_number);
}

std::string_view ToString(EventKind kind) {
  switch (kind) {
    case EventKind::kComment:
      return "comment";
    case EventKind::kCommit:
      return "commit";
    case EventKind::kPullRequest:
      return "pull_request";
    case EventKind::kOther:
      return "other";
  }
  return "other";
}

std::string_view ToString(IssueState state) {
  return state == IssueState::kClosed ? "closed" : "open";
}

std::string_view ToString(DescriptionSource source) {
  return source == DescriptionSource::kPrTitle ? "pr_title" : "commit_message";
}

EventKind ParseEventKind(std::string_view s) {
  if (s == "comment") return EventKind::kComment;
  if (s == "commit") return EventKind::kCommit;
  if (s == "pull_request") return EventKind::kPullRequest;
  if (s == "other") return EventKind::kOther;
  throw ValidationError("unknown event kind '" + std::string(s) + "'");
}

IssueState ParseIssueState(std::string_view s) {
  if (s == "open") return IssueState::kOpen;
  if (s == "closed") return IssueState::kClosed;
  throw ValidationError("unknown issue state '" + std::string(s) + "'");
}

DescriptionSource ParseDescriptionSource(std::string_view s) {
  if (s == "commit_message") return DescriptionSource::kCommitMessage;
  if (s == "pr_title") return DescriptionSource::kPrTitle;
  throw ValidationError("unknown description source '" + std::string(s) + "'");
}

RawTimeline::RawTimeline(Fields fields) : f_(std::move(fields)) {
  Require(f_.issue_number > 0, "issue_number must be positive");
  Timestamp prev = 0;
  for (const Event& e : f_.events) {
    Require(e.ts > 0, id() + ": event timestamp must be > 0");
    Require(e.ts >= prev, id() + ": events must be sorted by timestamp");
    prev = e.ts;
  }
}

Tokens Utterance::Sentence(std::size_t i) const {
  if (i >= sentences.size()) throw BoundsError("sentence index out of range");
  const SentenceSpan& s = sentences[i];
  return Tokens(tokens.begin() + s.begin, tokens.begin() + s.end);
}

Discussion::Discussion(Fields fields) : f_(std::move(fields)) {
  Require(!f_.id.empty(), "discussion id must be non-empty");
  Require(!f_.utterances.empty(), f_.id + ": discussion has no utterances");
  ValidateUtterances(f_.utterances, f_.id);
}

Example::Example(Fields fields) : f_(std::move(fields)) {
  Require(!f_.id.empty(), "example id must be non-empty");
  ValidateUtterances(f_.utterances, f_.id);
  Require(f_.t_g >= 1, f_.id + ": t_g >= 1");
  Require(f_.t_g <= T(), f_.id + ": t_g <= T");
  Require(!f_.title_tokens.empty(), f_.id + ": title_tokens non-empty");
  Require(!f_.description_tokens.empty(),
          f_.id + ": description_tokens non-empty");
  Require(f_.resolution_ts >= f_.utterances[f_.t_g - 1].ts,
          f_.id + ": resolution_ts >= ts(U_t_g)");
}

const Utterance& Example::U(int t) const {
  if (t < 1 || t > T()) {
    throw BoundsError(f_.id + ": utterance " + std::to_string(t) +
                      " out of range [1, " + std::to_string(T()) + "]");
  }
  return f_.utterances[t - 1];
}

CorpusSplit::CorpusSplit(Fields fields) : f_(std::move(fields)) {
  std::set<std::string> seen;
  for (const auto* part : {&f_.train, &f_.valid, &f_.test}) {
    for (const std::string& id : *part) {
      Require(seen.insert(id).second,
              "split parts must be pairwise disjoint (duplicate '" + id + "')");
    }
  }
}

}  // namespace bugsol
