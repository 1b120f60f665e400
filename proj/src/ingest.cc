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

#include "bugsol/ingest.h"

#include <algorithm>
#include <map>
#include <set>

#include "bugsol/error.h"

namespace bugsol {
namespace {

std::string LowerAscii(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c + 32);
  }
  return out;
}

bool IsChange(const Event& e) {
  return e.kind == EventKind::kCommit || e.kind == EventKind::kPullRequest;
}

std::multiset<std::string> ContentMultiset(const Tokens& tokens,
                                           const std::set<std::string>& stop) {
  std::multiset<std::string> out;
  for (const std::string& t : tokens) {
    if (!stop.count(t)) out.insert(t);
  }
  return out;
}

RejectReason Reject(RejectCode code, std::string detail) {
  return RejectReason{code, std::move(detail)};
}

}  // namespace

void IngestConfig::Validate() const {
  if (min_actors < 1) throw ValidationError("min_actors must be >= 1");
  if (bug_commit_keywords.empty()) {
    throw ValidationError("bug_commit_keywords must be non-empty");
  }
}

std::string_view ToString(RejectCode code) {
  switch (code) {
    case RejectCode::kNotBug:
      return "not_bug";
    case RejectCode::kNotClosed:
      return "not_closed";
    case RejectCode::kTooFewActors:
      return "too_few_actors";
    case RejectCode::kNoLinkedChange:
      return "no_linked_change";
    case RejectCode::kMultipleDescriptions:
      return "multiple_descriptions";
    case RejectCode::kMultiIssueChange:
      return "multi_issue_change";
    case RejectCode::kDescriptionEqualsTitle:
      return "description_equals_title";
    case RejectCode::kEmptyDiscussion:
      return "empty_discussion";
    case RejectCode::kTgOutOfRange:
      return "t_g_out_of_range";
  }
  return "unknown";
}

bool RefersToIssue(std::string_view ref, std::string_view project,
                   long issue_number) {
  const std::size_t hash = ref.rfind('#');
  if (hash == std::string_view::npos) return false;
  const std::string_view repo = ref.substr(0, hash);
  const std::string_view number = ref.substr(hash + 1);
  if (number.empty() ||
      !std::all_of(number.begin(), number.end(),
                   [](char c) { return c >= '0' && c <= '9'; })) {
    return false;
  }
  if (!repo.empty() && LowerAscii(repo) != LowerAscii(project)) return false;
  return std::string(number) == std::to_string(issue_number);
}

bool IsBugReport(const RawTimeline& timeline, const IngestConfig& cfg) {
  for (const std::string& label : timeline->labels) {
    if (LowerAscii(label).find("bug") != std::string::npos) return true;
  }
  const std::set<std::string> keywords(cfg.bug_commit_keywords.begin(),
                                       cfg.bug_commit_keywords.end());
  for (const Event& e : timeline->events) {
    if (!IsChange(e)) continue;
    if (std::none_of(e.linked_issues.begin(), e.linked_issues.end(),
                     [&](const std::string& ref) {
                       return RefersToIssue(ref, timeline->project,
                                            timeline->issue_number);
                     })) {
      continue;
    }
    TokenizerConfig tc;
    for (const std::string& token : Tokenize(e.text, tc)) {
      if (keywords.count(token)) return true;
    }
  }
  return false;
}

ExtractResult ExtractExample(const RawTimeline& timeline,
                             const IngestConfig& cfg) {
  cfg.Validate();
  const auto& tl = *timeline;

  if (cfg.require_bug_label && !IsBugReport(timeline, cfg)) {
    return Reject(RejectCode::kNotBug, "no bug label or bug-fix change");
  }
  if (cfg.require_closed && tl.state != IssueState::kClosed) {
    return Reject(RejectCode::kNotClosed, "issue is open");
  }

  std::vector<std::size_t> changes;
  for (std::size_t i = 0; i < tl.events.size(); ++i) {
    const Event& e = tl.events[i];
    if (!IsChange(e)) continue;
    if (std::any_of(e.linked_issues.begin(), e.linked_issues.end(),
                    [&](const std::string& ref) {
                      return RefersToIssue(ref, tl.project, tl.issue_number);
                    })) {
      changes.push_back(i);
    }
  }
  if (changes.empty()) {
    return Reject(RejectCode::kNoLinkedChange,
                  "no commit or pull request linked to this issue");
  }
  if (changes.size() > 1) {
    return Reject(RejectCode::kMultipleDescriptions,
                  std::to_string(changes.size()) + " linked changes");
  }
  const std::size_t change_pos = changes.front();
  const Event& change = tl.events[change_pos];
  for (const std::string& ref : change.linked_issues) {
    if (!RefersToIssue(ref, tl.project, tl.issue_number)) {
      return Reject(RejectCode::kMultiIssueChange,
                    "change also references " + ref);
    }
  }

  // Utterances: comment events that survive preprocessing, re-indexed.
  Example::Fields f;
  f.id = timeline.id();
  f.project = tl.project;
  f.title_tokens = Tokenize(StripMarkup(tl.title, cfg.tokenizer), cfg.tokenizer);
  int t_g = 0;
  for (std::size_t i = 0; i < tl.events.size(); ++i) {
    const Event& e = tl.events[i];
    if (e.kind != EventKind::kComment) continue;
    TokenizedText text = TokenizeUtterance(e.text, cfg.tokenizer);
    if (text.tokens.empty()) continue;
    Utterance u;
    u.t = static_cast<int>(f.utterances.size()) + 1;
    u.author = e.actor;
    u.ts = e.ts;
    u.tokens = std::move(text.tokens);
    u.sentences = std::move(text.sentences);
    f.utterances.push_back(std::move(u));
    if (e.ts < change.ts || (e.ts == change.ts && i < change_pos)) ++t_g;
  }
  if (f.utterances.empty() || f.title_tokens.empty()) {
    return Reject(RejectCode::kEmptyDiscussion,
                  f.utterances.empty() ? "no non-empty utterances"
                                       : "empty title");
  }

  std::set<std::string> actors;
  for (const Utterance& u : f.utterances) actors.insert(u.author);
  actors.insert(change.actor);
  if (static_cast<int>(actors.size()) < cfg.min_actors) {
    return Reject(RejectCode::kTooFewActors,
                  std::to_string(actors.size()) + " distinct actors");
  }

  f.description_tokens = CleanDescription(change.text, cfg.tokenizer);
  if (f.description_tokens.empty()) {
    return Reject(RejectCode::kNoLinkedChange,
                  "change description empty after cleaning");
  }
  const std::set<std::string> stop(cfg.stopword_list.begin(),
                                   cfg.stopword_list.end());
  if (ContentMultiset(f.description_tokens, stop) ==
      ContentMultiset(f.title_tokens, stop)) {
    return Reject(RejectCode::kDescriptionEqualsTitle,
                  "description repeats the title");
  }
  if (t_g < 1) {
    return Reject(RejectCode::kTgOutOfRange,
                  "no utterance precedes the change");
  }

  f.t_g = t_g;
  f.description_source = change.kind == EventKind::kPullRequest
                             ? DescriptionSource::kPrTitle
                             : DescriptionSource::kCommitMessage;
  f.resolution_ts = change.ts;
  return Example(std::move(f));
}

std::optional<Discussion> ExtractDiscussion(const RawTimeline& timeline,
                                            const TokenizerConfig& cfg) {
  Discussion::Fields f;
  f.id = timeline.id();
  f.project = timeline->project;
  f.title_tokens = Tokenize(StripMarkup(timeline->title, cfg), cfg);
  for (const Event& e : timeline->events) {
    if (e.kind != EventKind::kComment) continue;
    TokenizedText text = TokenizeUtterance(e.text, cfg);
    if (text.tokens.empty()) continue;
    Utterance u;
    u.t = static_cast<int>(f.utterances.size()) + 1;
    u.author = e.actor;
    u.ts = e.ts;
    u.tokens = std::move(text.tokens);
    u.sentences = std::move(text.sentences);
    f.utterances.push_back(std::move(u));
  }
  if (f.utterances.empty()) return std::nullopt;
  return Discussion(std::move(f));
}

}  // namespace bugsol
