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

#ifndef BUGSOL_JSONL_H_
#define BUGSOL_JSONL_H_

// Line-delimited JSON persistence. Every record kind provides a ToJson
// overload and a FromJson<T> specialization; the generic reader attaches the
// 1-based line number to any parse or validation failure.

#include <concepts>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "bugsol/error.h"
#include "bugsol/types.h"

namespace bugsol {

using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

// Field access with a ValidationError naming the field on absence/mismatch.
template <class T>
T GetField(const Json& j, const char* field) {
  auto it = j.find(field);
  if (it == j.end()) {
    throw ValidationError(std::string("missing field '") + field + "'");
  }
  try {
    return it->get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ValidationError(std::string("field '") + field +
                          "' has the wrong type");
  }
}

// Throws SchemaError naming `field` unless `s` is valid UTF-8.
const std::string& CheckedString(const char* field, const std::string& s);

OrderedJson ToJson(const RawTimeline& r);
OrderedJson ToJson(const Example& r);
OrderedJson ToJson(const Discussion& r);
OrderedJson ToJson(const CorpusSplit& r);

template <class T>
T FromJson(const Json& j);

template <>
RawTimeline FromJson<RawTimeline>(const Json& j);
template <>
Example FromJson<Example>(const Json& j);
template <>
Discussion FromJson<Discussion>(const Json& j);
template <>
CorpusSplit FromJson<CorpusSplit>(const Json& j);

// Writes one compact JSON document per line. Returns the count written.
std::size_t WriteJsonLines(const std::string& path,
                           const std::vector<OrderedJson>& lines);

// Parses every non-blank line; pairs carry the 1-based line number.
std::vector<std::pair<long, Json>> ReadJsonLines(const std::string& path);

template <class T>
std::size_t WriteJsonl(const std::vector<T>& records, const std::string& path) {
  std::vector<OrderedJson> lines;
  lines.reserve(records.size());
  for (const T& r : records) lines.push_back(ToJson(r));
  return WriteJsonLines(path, lines);
}

template <class T>
concept HasRecordId = requires(const T& r) {
  { r->id } -> std::convertible_to<std::string>;
};

template <class T>
std::vector<T> ReadJsonl(const std::string& path) {
  std::vector<T> out;
  std::set<std::string> ids;
  for (auto& [line, j] : ReadJsonLines(path)) {
    try {
      out.push_back(FromJson<T>(j));
    } catch (const ParseError&) {
      throw;
    } catch (const ValidationError& e) {
      throw ParseError(e.what(), line);
    }
    if constexpr (HasRecordId<T>) {
      if (!ids.insert(out.back()->id).second) {
        throw ParseError("duplicate id '" + out.back()->id + "'", line);
      }
    }
  }
  return out;
}

std::string ReadFile(const std::string& path);
void WriteFile(const std::string& path, const std::string& contents);

}  // namespace bugsol

#endif  // BUGSOL_JSONL_H_
