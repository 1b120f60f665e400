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

#include "bugsol/text.h"

#include <regex>  // NOLINT
#include <sstream>

#include "bugsol/error.h"

namespace bugsol {
namespace {

bool IsSpace(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}
bool IsUpper(char c) { return c >= 'A' && c <= 'Z'; }
bool IsLower(char c) { return c >= 'a' && c <= 'z'; }
bool IsDigit(char c) { return c >= '0' && c <= '9'; }
bool IsHighByte(char c) { return static_cast<unsigned char>(c) >= 0x80; }
bool IsWordChar(char c) {
  return IsUpper(c) || IsLower(c) || IsDigit(c) || c == '_' || IsHighByte(c);
}

char ToLowerAscii(char c) { return IsUpper(c) ? static_cast<char>(c + 32) : c; }

std::string Lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = ToLowerAscii(c);
  return out;
}

// Character class for identifier splitting; non-ASCII bytes behave as
// lowercase letters so multi-byte sequences stay intact.
enum class CharClass { kUpper, kLower, kDigit, kSep };

CharClass Classify(char c) {
  if (IsUpper(c)) return CharClass::kUpper;
  if (IsDigit(c)) return CharClass::kDigit;
  if (c == '_') return CharClass::kSep;
  return CharClass::kLower;
}

bool IsLetter(CharClass k) {
  return k == CharClass::kUpper || k == CharClass::kLower;
}

// Removes ``` fenced blocks (unterminated fences run to the end of text).
std::string RemoveFences(const std::string& text) {
  std::string out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t open = text.find("```", pos);
    if (open == std::string::npos) {
      out.append(text, pos, std::string::npos);
      break;
    }
    out.append(text, pos, open - pos);
    out.push_back(' ');
    std::size_t close = text.find("```", open + 3);
    if (close == std::string::npos) break;
    pos = close + 3;
  }
  return out;
}

std::vector<std::string> Lines(const std::string& text) {
  std::vector<std::string> lines;
  std::string line;
  std::istringstream in(text);
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

bool IsBlank(const std::string& line) {
  for (char c : line) {
    if (!IsSpace(c)) return false;
  }
  return true;
}

bool IsIndented(const std::string& line) {
  return (line.rfind("    ", 0) == 0 || (!line.empty() && line[0] == '\t')) &&
         !IsBlank(line);
}

std::string RemoveIndentedBlocks(const std::string& text) {
  std::string out;
  bool prev_blank = true;  // start of text opens a block context
  bool in_block = false;
  for (const std::string& line : Lines(text)) {
    if (IsIndented(line) && (prev_blank || in_block)) {
      in_block = true;
      prev_blank = false;
      continue;
    }
    in_block = false;
    prev_blank = IsBlank(line);
    out += line;
    out += '\n';
  }
  return out;
}

std::string CollapseWhitespace(const std::string& text) {
  std::string out;
  for (const std::string& line : Lines(text)) {
    std::string collapsed;
    bool pending_space = false;
    for (char c : line) {
      if (IsSpace(c)) {
        pending_space = !collapsed.empty();
        continue;
      }
      if (pending_space) collapsed.push_back(' ');
      pending_space = false;
      collapsed.push_back(c);
    }
    if (collapsed.empty()) continue;
    if (!out.empty()) out.push_back('\n');
    out += collapsed;
  }
  return out;
}

std::string StripOnce(const std::string& text, const TokenizerConfig& cfg) {
  static const std::regex kInlineCode("`([^`\n]*)`");
  static const std::regex kUrl(R"([A-Za-z][A-Za-z0-9+.\-]*://[^\s]*)");
  static const std::regex kMention(R"((^|[^A-Za-z0-9_.@])@[A-Za-z0-9][A-Za-z0-9\-]*)");

  std::string s = RemoveFences(text);
  s = RemoveIndentedBlocks(s);
  s = std::regex_replace(s, kInlineCode, cfg.keep_inline_code ? "$1" : " ");
  s = std::regex_replace(s, kUrl, " ");
  s = std::regex_replace(s, kMention, "$1 ");
  return CollapseWhitespace(s);
}

}  // namespace

const std::vector<std::string>& Stopwords() {
  static const std::vector<std::string> kWords = {
      "i",          "me",      "my",      "myself",     "we",
      "our",        "ours",    "ourselves", "you",      "your",
      "yours",      "yourself", "yourselves", "he",     "him",
      "his",        "himself", "she",     "her",        "hers",
      "herself",    "it",      "its",     "itself",     "they",
      "them",       "their",   "theirs",  "themselves", "what",
      "which",      "who",     "whom",    "this",       "that",
      "these",      "those",   "am",      "is",         "are",
      "was",        "were",    "be",      "been",       "being",
      "have",       "has",     "had",     "having",     "do",
      "does",       "did",     "doing",   "a",          "an",
      "the",        "and",     "but",     "if",         "or",
      "because",    "as",      "until",   "while",      "of",
      "at",         "by",      "for",     "with",       "about",
      "against",    "between", "into",    "through",    "during",
      "before",     "after",   "above",   "below",      "to",
      "from",       "up",      "down",    "in",         "out",
      "on",         "off",     "over",    "under",      "again",
      "further",    "then",    "once",    "here",       "there",
      "when",       "where",   "why",     "how",        "all",
      "any",        "both",    "each",    "few",        "more",
      "most",       "other",   "some",    "such",       "no",
      "nor",        "not",     "only",    "own",        "same",
      "so",         "than",    "too",     "very",       "s",
      "t",          "can",     "will",    "just",       "don",
      "should",     "now"};
  return kWords;
}

const std::set<std::string>& StopwordSet() {
  static const std::set<std::string> kSet(Stopwords().begin(),
                                          Stopwords().end());
  return kSet;
}

std::string StripMarkup(std::string_view text, const TokenizerConfig& cfg) {
  // Iterating to a fixed point makes the function idempotent even when a
  // removal exposes new markup (e.g. stray backticks becoming adjacent).
  // Every pass only deletes characters, so this terminates.
  std::string current(text);
  while (true) {
    std::string next = StripOnce(current, cfg);
    if (next == current) return next;
    current = std::move(next);
  }
}

Tokens Subtokenize(std::string_view token, bool lowercase) {
  Tokens out;
  std::string piece;
  auto flush = [&] {
    if (!piece.empty()) out.push_back(lowercase ? Lower(piece) : piece);
    piece.clear();
  };
  const std::size_t n = token.size();
  for (std::size_t i = 0; i < n; ++i) {
    const CharClass cur = Classify(token[i]);
    if (cur == CharClass::kSep) {
      flush();
      continue;
    }
    if (!piece.empty()) {
      const CharClass prev = Classify(token[i - 1]);
      bool split = false;
      if (cur == CharClass::kUpper &&
          (prev == CharClass::kLower || prev == CharClass::kDigit)) {
        split = true;
      } else if (cur == CharClass::kUpper && prev == CharClass::kUpper &&
                 i + 1 < n && Classify(token[i + 1]) == CharClass::kLower) {
        split = true;
      } else if ((IsLetter(cur) && prev == CharClass::kDigit) ||
                 (cur == CharClass::kDigit && IsLetter(prev))) {
        split = true;
      }
      if (split) flush();
    }
    piece.push_back(token[i]);
  }
  flush();
  return out;
}

Tokens Tokenize(std::string_view text, const TokenizerConfig& cfg) {
  Tokens out;
  const std::size_t n = text.size();
  std::size_t i = 0;
  while (i < n) {
    const char c = text[i];
    if (IsSpace(c)) {
      ++i;
      continue;
    }
    if (!IsWordChar(c)) {
      out.emplace_back(1, c);
      ++i;
      continue;
    }
    std::size_t j = i;
    bool has_dot = false;
    while (j < n) {
      if (IsWordChar(text[j])) {
        ++j;
      } else if (text[j] == '.' && j > i && IsDigit(text[j - 1]) &&
                 j + 1 < n && IsDigit(text[j + 1])) {
        has_dot = true;
        ++j;
      } else {
        break;
      }
    }
    std::string_view word = text.substr(i, j - i);
    if (has_dot) {
      out.push_back(cfg.lowercase ? Lower(word) : std::string(word));
    } else {
      for (std::string& piece : Subtokenize(word, cfg.lowercase)) {
        out.push_back(std::move(piece));
      }
    }
    i = j;
  }
  return out;
}

std::vector<TextSpan> SplitSentenceSpans(std::string_view text,
                                         const TokenizerConfig& cfg) {
  std::vector<TextSpan> spans;
  const std::size_t n = text.size();
  std::size_t begin = 0;
  // Whether the current line has a non-space character and whether the last
  // one was a terminator.
  bool line_has_text = false;
  bool line_ends_with_terminator = false;
  auto absorb_whitespace = [&](std::size_t pos) {
    while (pos < n && IsSpace(text[pos])) ++pos;
    return pos;
  };
  std::size_t i = 0;
  while (i < n) {
    const char c = text[i];
    if (c == '\n') {
      if (line_has_text && !line_ends_with_terminator) {
        std::size_t end = absorb_whitespace(i + 1);
        spans.push_back({begin, end});
        begin = end;
        line_has_text = false;
        line_ends_with_terminator = false;
        i = end;
        continue;
      }
      line_has_text = false;
      line_ends_with_terminator = false;
      ++i;
      continue;
    }
    if (IsSpace(c)) {
      ++i;
      continue;
    }
    line_has_text = true;
    line_ends_with_terminator = cfg.sentence_terminators.count(c) > 0;
    if (line_ends_with_terminator) {
      const bool at_end = i + 1 == n;
      bool split = at_end;
      if (!at_end && IsSpace(text[i + 1])) {
        std::size_t next = absorb_whitespace(i + 1);
        split = next == n || IsUpper(text[next]);
      }
      if (split) {
        std::size_t end = absorb_whitespace(i + 1);
        spans.push_back({begin, end});
        begin = end;
        line_has_text = false;
        line_ends_with_terminator = false;
        i = end;
        continue;
      }
    }
    ++i;
  }
  if (begin < n) spans.push_back({begin, n});
  return spans;
}

std::vector<std::string> SplitSentences(std::string_view text,
                                        const TokenizerConfig& cfg) {
  std::vector<std::string> out;
  for (const TextSpan& span : SplitSentenceSpans(text, cfg)) {
    std::string_view s = text.substr(span.begin, span.end - span.begin);
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && IsSpace(s[b])) ++b;
    while (e > b && IsSpace(s[e - 1])) --e;
    if (e > b) out.emplace_back(s.substr(b, e - b));
  }
  return out;
}

Tokens CleanDescription(std::string_view text, const TokenizerConfig& cfg) {
  static const std::regex kParenRef(R"(\(\s*(GH-|#)\d+\s*\))",
                                    std::regex::icase);
  static const std::regex kClosingRef(
      R"(\b(fix|fixes|fixed|close|closes|closed|resolve|resolves|resolved)\s*:?\s*([\w.\-]+/[\w.\-]+)?#\d+)",
      std::regex::icase);
  static const std::regex kRepoRef(R"([\w.\-]+/[\w.\-]+#\d+)");
  static const std::regex kGhRef(R"(\bGH-\d+)", std::regex::icase);
  static const std::regex kHashRef(R"(#\d+)");

  std::string s(text);
  s = std::regex_replace(s, kParenRef, " ");
  s = std::regex_replace(s, kClosingRef, " ");
  s = std::regex_replace(s, kRepoRef, " ");
  s = std::regex_replace(s, kGhRef, " ");
  s = std::regex_replace(s, kHashRef, " ");
  return Tokenize(StripMarkup(s, cfg), cfg);
}

TokenizedText TokenizeUtterance(std::string_view raw_text,
                                const TokenizerConfig& cfg) {
  TokenizedText out;
  const std::string stripped = StripMarkup(raw_text, cfg);
  for (const std::string& sentence : SplitSentences(stripped, cfg)) {
    Tokens tokens = Tokenize(sentence, cfg);
    if (tokens.empty()) continue;
    const int begin = static_cast<int>(out.tokens.size());
    for (std::string& t : tokens) out.tokens.push_back(std::move(t));
    out.sentences.push_back({begin, static_cast<int>(out.tokens.size())});
  }
  return out;
}

Tokens RenderInput(const Example& example, int upto_t) {
  if (upto_t < 1 || upto_t > example.T()) {
    throw BoundsError("render_input: upto_t=" + std::to_string(upto_t) +
                      " outside [1, " + std::to_string(example.T()) + "]");
  }
  Tokens out;
  out.emplace_back(kTitleStart);
  out.insert(out.end(), example->title_tokens.begin(),
             example->title_tokens.end());
  for (int t = 1; t <= upto_t; ++t) {
    out.emplace_back(kUtteranceStart);
    const Tokens& u = example.U(t).tokens;
    out.insert(out.end(), u.begin(), u.end());
  }
  return out;
}

std::string Join(const Tokens& tokens, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0) out += sep;
    out += tokens[i];
  }
  return out;
}

}  // namespace bugsol
