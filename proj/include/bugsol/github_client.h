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

#ifndef BUGSOL_GITHUB_CLIENT_H_
#define BUGSOL_GITHUB_CLIENT_H_

// Minimal GitHub REST client that assembles a RawTimeline for one issue from
// the issue, comments and timeline endpoints.

#include <string>
#include <string_view>

#include "bugsol/error.h"
#include "bugsol/types.h"

namespace bugsol {

class NotFoundError : public IoError {
 public:
  using IoError::IoError;
};

class RateLimitError : public IoError {
 public:
  RateLimitError(const std::string& what, long retry_after_seconds)
      : IoError(what), retry_after_(retry_after_seconds) {}
  long retry_after_seconds() const { return retry_after_; }

 private:
  long retry_after_;
};

// Network failure or 5xx; the caller may retry.
class TransientError : public IoError {
 public:
  using IoError::IoError;
};

struct GithubClientConfig {
  std::string host = "https://api.github.com";
  std::string token;  // bearer token; empty means anonymous
  int max_retries = 3;
  double backoff_seconds = 1.0;
  double max_backoff_seconds = 60.0;
  int per_page = 100;
};

// Reads GITHUB_TOKEN from the environment into a default config.
GithubClientConfig GithubConfigFromEnv();

RawTimeline FetchIssue(std::string_view project, long issue_number,
                       const GithubClientConfig& cfg);

// "2020-05-01T12:34:56Z" -> UTC seconds. Throws ValidationError.
Timestamp ParseIso8601(std::string_view s);

}  // namespace bugsol

#endif  // BUGSOL_GITHUB_CLIENT_H_
