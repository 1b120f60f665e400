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

#include "bugsol/jsonl.h"

#include <fstream>
#include <sstream>

namespace bugsol {
namespace {

bool ValidUtf8(const std::string& s) {
  std::size_t i = 0;
  while (i < s.size()) {
    const auto c = static_cast<unsigned char>(s[i]);
    int extra = 0;
    if (c < 0x80) {
      extra = 0;
    } else if ((c & 0xE0) == 0xC0 && c >= 0xC2) {
      extra = 1;
    } else if ((c & 0xF0) == 0xE0) {
      extra = 2;
    } else if ((c & 0xF8) == 0xF0 && c <= 0xF4) {
      extra = 3;
    } else {
      return false;
    }
    if (i + extra >= s.size() + (extra == 0 ? 1 : 0)) return false;
    for (int k = 1; k <= extra; ++k) {
      if ((static_cast<unsigned char>(s[i + k]) & 0xC0) != 0x80) return false;
    }
    i += extra + 1;
  }
  return true;
}

OrderedJson StringList(const char* field, const std::vector<std::string>& v) {
  OrderedJson out = OrderedJson::array();
  for (const std::string& s : v) out.push_back(CheckedString(field, s));
  return out;
}

OrderedJson UtterancesToJson(const std::vector<Utterance>& utterances) {
  OrderedJson out = OrderedJson::array();
  for (const Utterance& u : utterances) {
    OrderedJson sentences = OrderedJson::array();
    for (const SentenceSpan& s : u.sentences) {
      sentences.push_back({s.begin, s.end});
    }
    out.push_back({{"t", u.t},
                   {"author", CheckedString("author", u.author)},
                   {"ts", u.ts},
                   {"tokens", StringList("tokens", u.tokens)},
                   {"sentences", std::move(sentences)}});
  }
  return out;
}

std::vector<Utterance> UtterancesFromJson(const Json& j) {
  std::vector<Utterance> out;
  for (const Json& ju : GetField<Json>(j, "utterances")) {
    Utterance u;
    u.t = GetField<int>(ju, "t");
    u.author = GetField<std::string>(ju, "author");
    u.ts = GetField<Timestamp>(ju, "ts");
    u.tokens = GetField<Tokens>(ju, "tokens");
    for (const Json& js : GetField<Json>(ju, "sentences")) {
      if (!js.is_array() || js.size() != 2) {
        throw ValidationError("field 'sentences' entries must be [begin, end]");
      }
      u.sentences.push_back({js[0].get<int>(), js[1].get<int>()});
    }
    out.push_back(std::move(u));
  }
  return out;
}

}  // namespace

const std::string& CheckedString(const char* field, const std::string& s) {
  if (!ValidUtf8(s)) {
    throw SchemaError(std::string("field '") + field + "' is not valid UTF-8");
  }
  return s;
}

OrderedJson ToJson(const RawTimeline& r) {
  OrderedJson events = OrderedJson::array();
  for (const Event& e : r->events) {
    events.push_back({{"kind", ToString(e.kind)},
                      {"actor", CheckedString("actor", e.actor)},
                      {"ts", e.ts},
                      {"text", CheckedString("text", e.text)},
                      {"linked_issues",
                       StringList("linked_issues", e.linked_issues)}});
  }
  return {{"project", CheckedString("project", r->project)},
          {"issue_number", r->issue_number},
          {"title", CheckedString("title", r->title)},
          {"labels", StringList("labels", r->labels)},
          {"state", ToString(r->state)},
          {"events", std::move(events)}};
}

template <>
RawTimeline FromJson<RawTimeline>(const Json& j) {
  RawTimeline::Fields f;
  f.project = GetField<std::string>(j, "project");
  f.issue_number = GetField<long>(j, "issue_number");
  f.title = GetField<std::string>(j, "title");
  f.labels = GetField<std::vector<std::string>>(j, "labels");
  f.state = ParseIssueState(GetField<std::string>(j, "state"));
  for (const Json& je : GetField<Json>(j, "events")) {
    Event e;
    e.kind = ParseEventKind(GetField<std::string>(je, "kind"));
    e.actor = GetField<std::string>(je, "actor");
    e.ts = GetField<Timestamp>(je, "ts");
    e.text = GetField<std::string>(je, "text");
    e.linked_issues = GetField<std::vector<std::string>>(je, "linked_issues");
    f.events.push_back(std::move(e));
  }
  return RawTimeline(std::move(f));
}

OrderedJson ToJson(const Example& r) {
  return {{"id", CheckedString("id", r->id)},
          {"project", CheckedString("project", r->project)},
          {"title_tokens", StringList("title_tokens", r->title_tokens)},
          {"utterances", UtterancesToJson(r->utterances)},
          {"t_g", r->t_g},
          {"description_tokens",
           StringList("description_tokens", r->description_tokens)},
          {"description_source", ToString(r->description_source)},
          {"resolution_ts", r->resolution_ts}};
}

template <>
Example FromJson<Example>(const Json& j) {
  Example::Fields f;
  f.id = GetField<std::string>(j, "id");
  f.project = GetField<std::string>(j, "project");
  f.title_tokens = GetField<Tokens>(j, "title_tokens");
  f.utterances = UtterancesFromJson(j);
  f.t_g = GetField<int>(j, "t_g");
  f.description_tokens = GetField<Tokens>(j, "description_tokens");
  f.description_source =
      ParseDescriptionSource(GetField<std::string>(j, "description_source"));
  f.resolution_ts = GetField<Timestamp>(j, "resolution_ts");
  return Example(std::move(f));
}

OrderedJson ToJson(const Discussion& r) {
  return {{"id", CheckedString("id", r->id)},
          {"project", CheckedString("project", r->project)},
          {"title_tokens", StringList("title_tokens", r->title_tokens)},
          {"utterances", UtterancesToJson(r->utterances)}};
}

template <>
Discussion FromJson<Discussion>(const Json& j) {
  Discussion::Fields f;
  f.id = GetField<std::string>(j, "id");
  f.project = j.value("project", std::string());
  f.title_tokens = GetField<Tokens>(j, "title_tokens");
  f.utterances = UtterancesFromJson(j);
  return Discussion(std::move(f));
}

OrderedJson ToJson(const CorpusSplit& r) {
  return {{"train", StringList("train", r->train)},
          {"valid", StringList("valid", r->valid)},
          {"test", StringList("test", r->test)}};
}

template <>
CorpusSplit FromJson<CorpusSplit>(const Json& j) {
  CorpusSplit::Fields f;
  f.train = GetField<std::vector<std::string>>(j, "train");
  f.valid = GetField<std::vector<std::string>>(j, "valid");
  f.test = GetField<std::vector<std::string>>(j, "test");
  return CorpusSplit(std::move(f));
}

std::size_t WriteJsonLines(const std::string& path,
                           const std::vector<OrderedJson>& lines) {
  std::ostringstream buf;
  for (const OrderedJson& j : lines) buf << j.dump() << '\n';
  WriteFile(path, buf.str());
  return lines.size();
}

std::vector<std::pair<long, Json>> ReadJsonLines(const std::string& path) {
  std::istringstream in(ReadFile(path));
  std::vector<std::pair<long, Json>> out;
  std::string line;
  long number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.emplace_back(number, Json::parse(line));
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(std::string("malformed JSON: ") + e.what(), number);
    }
  }
  return out;
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void WriteFile(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << contents;
  if (!out.flush()) throw IoError("write to '" + path + "' failed");
}

}  // namespace bugsol
