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

#include "bugsol/error.h"
#include "bugsol/text.h"
#include "fixtures.h"

namespace bugsol {
namespace {

TEST_CASE("identifiers split on case, digit and underscore boundaries") {
  CHECK(Subtokenize("getHTTPResponse") == Tokens{"get", "http", "response"});
  CHECK(Subtokenize("snake_case_name") == Tokens{"snake", "case", "name"});
  CHECK(Subtokenize("utf8Decoder") == Tokens{"utf", "8", "decoder"});
  CHECK(Subtokenize("NullPointerException") ==
        Tokens{"null", "pointer", "exception"});
  CHECK(Subtokenize("HTTP", false) == Tokens{"HTTP"});
}

TEST_CASE("tokenize splits punctuation and keeps dotted versions") {
  CHECK(Tokenize("Fails on v1.8.2, see logs!") ==
        Tokens{"fails", "on", "v1.8.2", ",", "see", "logs", "!"});
  CHECK(Tokenize("") == Tokens{});
}

TEST_CASE("markup stripping removes code, urls and mentions") {
  const std::string text =
      "See https://example.com/x for details @alice\n"
      "```\nint x = 0;\n```\n"
      "Call `flushAll` first.";
  const std::string stripped = StripMarkup(text);
  CHECK(stripped.find("https") == std::string::npos);
  CHECK(stripped.find("@alice") == std::string::npos);
  CHECK(stripped.find("int x") == std::string::npos);
  CHECK(stripped.find("flushAll") != std::string::npos);
  CHECK(StripMarkup(stripped) == stripped);

  TokenizerConfig drop;
  drop.keep_inline_code = false;
  CHECK(StripMarkup("Call `flushAll` first.", drop).find("flushAll") ==
        std::string::npos);
}

TEST_CASE("indented code after a blank line is removed") {
  const std::string text = "Trace:\n\n    at Foo.bar(Foo.java:3)\n\nDone.";
  const std::string stripped = StripMarkup(text);
  CHECK(stripped.find("Foo.java") == std::string::npos);
  CHECK(stripped.find("Done.") != std::string::npos);
}

TEST_CASE("sentence splitting uses terminators and line ends") {
  CHECK(SplitSentences("It fails. Then it works! ok?") ==
        std::vector<std::string>{"It fails.", "Then it works! ok?"});
  CHECK(SplitSentences("first line\nsecond line.") ==
        std::vector<std::string>{"first line", "second line."});
  CHECK(SplitSentences("version 1.2. Next") ==
        std::vector<std::string>{"version 1.2.", "Next"});
}

TEST_CASE("sentence spans partition the text") {
  const std::string text = "A b. C d.  E";
  const auto spans = SplitSentenceSpans(text);
  REQUIRE(!spans.empty());
  CHECK(spans.front().begin == 0);
  CHECK(spans.back().end == text.size());
  for (std::size_t i = 1; i < spans.size(); ++i) {
    CHECK(spans[i].begin == spans[i - 1].end);
  }
}

TEST_CASE("utterance tokenization records sentence spans over tokens") {
  const TokenizedText t = TokenizeUtterance("Saving crashes. Trace attached.");
  CHECK(t.tokens.size() == 6);
  REQUIRE(t.sentences.size() == 2);
  CHECK(t.sentences[0].begin == 0);
  CHECK(t.sentences[0].end == 3);
  CHECK(t.sentences[1].end == 6);
}

TEST_CASE("descriptions lose issue references") {
  CHECK(CleanDescription("Fix NPE in loader (#12)") ==
        Tokens{"fix", "npe", "in", "loader"});
  CHECK(CleanDescription("Fixes #4: reset cursor") ==
        Tokens{":", "reset", "cursor"});
  CHECK(CleanDescription("GH-7 acme/widgets#8 #9") == Tokens{});
}

TEST_CASE("render input uses the special tokens") {
  const Example e = testing::MakeExample(
      "a/b", 1, "Bad title", {{"x", "first"}, {"y", "second"}}, 1, "desc");
  CHECK(RenderInput(e, 1) ==
        Tokens{"<TITLE_START>", "bad", "title", "<UTTERANCE_START>", "first"});
  CHECK(RenderInput(e, 2).size() == 7);
  CHECK_THROWS_AS(RenderInput(e, 0), BoundsError);
  CHECK_THROWS_AS(RenderInput(e, 3), BoundsError);
}

TEST_CASE("stopword list is the frozen 127-word list") {
  CHECK(Stopwords().size() == 127);
  CHECK(StopwordSet().count("the") == 1);
  CHECK(StopwordSet().count("fix") == 0);
}

}  // namespace
}  // namespace bugsol
