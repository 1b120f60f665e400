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

#ifndef BUGSOL_TEXT_H_
#define BUGSOL_TEXT_H_

// Text normalization for issue discussions: markup stripping, tokenization
// with identifier subtokenization, sentence splitting, commit/PR description
// cleaning and rendering of model inputs with special tokens.

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "bugsol/types.h"

namespace bugsol {

inline constexpr std::string_view kTitleStart = "<TITLE_START>";
inline constexpr std::string_view kUtteranceStart = "<UTTERANCE_START>";

struct TokenizerConfig {
  bool lowercase = true;
  bool keep_inline_code = true;
  std::set<char> sentence_terminators = {'.', '!', '?'};
};

// The frozen 127-word English stopword list.
const std::vector<std::string>& Stopwords();
const std::set<std::string>& StopwordSet();

// Removes fenced and indented code blocks, URLs and @mentions; unwraps inline
// code spans (or drops them when keep_inline_code is false); collapses
// horizontal whitespace and trims every line. Single newlines survive so
// sentence splitting can see line ends. Idempotent.
std::string StripMarkup(std::string_view text, const TokenizerConfig& cfg = {});

// Splits an identifier on underscores, lower->upper and digit->upper
// transitions, before the last capital of an acronym that precedes a
// lowercase letter, and at letter/digit boundaries.
Tokens Subtokenize(std::string_view token, bool lowercase = true);

// Whitespace split, punctuation split into single-character tokens (dots
// between digits are kept, so "1.8.2" is one token), identifier
// subtokenization, lowercasing.
Tokens Tokenize(std::string_view text, const TokenizerConfig& cfg = {});

// Byte ranges [begin, end) that partition `text` into sentences. Each range
// includes its trailing whitespace.
struct TextSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
};
std::vector<TextSpan> SplitSentenceSpans(std::string_view text,
                                         const TokenizerConfig& cfg = {});

// Sentence strings, trimmed, empty ones dropped.
std::vector<std::string> SplitSentences(std::string_view text,
                                        const TokenizerConfig& cfg = {});

// Removes issue / PR references ("#12", "GH-12", "(#12)", "fixes #12") and
// markup, then tokenizes. An empty result means the description is unusable.
Tokens CleanDescription(std::string_view text, const TokenizerConfig& cfg = {});

// Tokens plus sentence spans for one utterance body.
struct TokenizedText {
  Tokens tokens;
  std::vector<SentenceSpan> sentences;
};
TokenizedText TokenizeUtterance(std::string_view raw_text,
                                const TokenizerConfig& cfg = {});

// <TITLE_START> title <UTTERANCE_START> U_1 ... <UTTERANCE_START> U_upto_t.
Tokens RenderInput(const Example& example, int upto_t);

std::string Join(const Tokens& tokens, std::string_view sep = " ");

}  // namespace bugsol

#endif  // BUGSOL_TEXT_H_
