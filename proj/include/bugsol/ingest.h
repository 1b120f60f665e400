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

#ifndef BUGSOL_INGEST_H_
#define BUGSOL_INGEST_H_

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "bugsol/text.h"
#include "bugsol/types.h"

namespace bugsol {

struct IngestConfig {
  bool require_bug_label = true;
  std::vector<std::string> bug_commit_keywords = {
      "fix", "bug", "error", "fail", "repair", "defect", "patch"};
  int min_actors = 2;
  bool require_closed = true;
  std::vector<std::string> stopword_list = Stopwords();
  TokenizerConfig tokenizer;

  // Throws ValidationError when min_actors < 1 or the keyword list is empty
  // while bug detection is enabled.
  void Validate() const;
};

enum class RejectCode {
  kNotBug,
  kNotClosed,
  kTooFewActors,
  kNoLinkedChange,
  kMultipleDescriptions,
  kMultiIssueChange,
  kDescriptionEqualsTitle,
  kEmptyDiscussion,
  kTgOutOfRange,
};

std::string_view ToString(RejectCode code);

struct RejectReason {
  RejectCode code;
  std::string detail;
  bool operator==(const RejectReason&) const = default;
};

using ExtractResult = std::variant<Example, RejectReason>;

// A label containing "bug" (any case), or a commit / PR whose text contains
// one of the configured keywords as a whole lowercase token.
bool IsBugReport(const RawTimeline& timeline, const IngestConfig& cfg);

// Builds one Example from an issue timeline, or the single reason it was
// rejected. Checks run in a fixed order and the first failure wins:
// not_bug, not_closed, no_linked_change, multiple_descriptions,
// multi_issue_change, empty_discussion, too_few_actors, (empty description ->
// no_linked_change), description_equals_title, t_g_out_of_range.
//
// t_g counts the surviving utterances that precede the change event in the
// timeline: earlier timestamps always precede; an utterance sharing the
// change's timestamp precedes it only if it is listed before the change.
ExtractResult ExtractExample(const RawTimeline& timeline,
                             const IngestConfig& cfg);

// Extracts a comment-only discussion (for classifier augmentation).
// Returns nullopt when every comment is empty after preprocessing.
std::optional<Discussion> ExtractDiscussion(const RawTimeline& timeline,
                                            const TokenizerConfig& cfg = {});

// True iff `ref` ("#N" or "owner/name#N") points at the given issue.
bool RefersToIssue(std::string_view ref, std::string_view project,
                   long issue_number);

}  // namespace bugsol

#endif  // BUGSOL_INGEST_H_
