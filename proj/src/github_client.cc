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

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "bugsol/github_client.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <regex>  // NOLINT
#include <set>
#include <thread>

#include "httplib.h"
#include "json.hpp"

namespace bugsol {
namespace {

using Json = nlohmann::json;

std::string LoginOf(const Json& j, const char* field) {
  if (j.contains(field) && j[field].is_object() && j[field].contains("login") &&
      j[field]["login"].is_string()) {
    return j[field]["login"].get<std::string>();
  }
  return "";
}

std::string StringOr(const Json& j, const char* field) {
  return j.contains(field) && j[field].is_string() ? j[field].get<std::string>()
                                                   : "";
}

// "#N" / "owner/name#N" references mentioned in free text.
std::vector<std::string> RefsInText(const std::string& text,
                                    std::string_view project) {
  static const std::regex kRef(R"(([\w.\-]+/[\w.\-]+)?#(\d+))");
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (auto it = std::sregex_iterator(text.begin(), text.end(), kRef);
       it != std::sregex_iterator(); ++it) {
    std::string repo = (*it)[1].str();
    std::string ref = (repo.empty() || repo == project ? "" : repo) + "#" +
                      (*it)[2].str();
    if (seen.insert(ref).second) out.push_back(ref);
  }
  return out;
}

class Session {
 public:
  explicit Session(const GithubClientConfig& cfg)
      : cfg_(cfg), client_(cfg.host) {
    client_.set_connection_timeout(10);
    client_.set_read_timeout(30);
    client_.set_follow_location(true);
  }

  Json Get(const std::string& path) {
    httplib::Headers headers = {{"Accept", "application/vnd.github+json"},
                                {"User-Agent", "bugsol"}};
    if (!cfg_.token.empty()) {
      headers.emplace("Authorization", "Bearer " + cfg_.token);
    }
    for (int attempt = 0;; ++attempt) {
      auto res = client_.Get(path, headers);
      if (!res) {
        if (attempt < cfg_.max_retries) {
          Sleep(Backoff(attempt));
          continue;
        }
        throw TransientError("GET " + path + " failed: " +
                             httplib::to_string(res.error()));
      }
      const int status = res->status;
      if (status == 404) throw NotFoundError("GET " + path + ": not found");
      if (status == 429 ||
          (status == 403 &&
           (res->get_header_value("x-ratelimit-remaining") == "0" ||
            res->has_header("Retry-After")))) {
        const long retry_after = RetryAfter(*res);
        if (attempt < cfg_.max_retries) {
          Sleep(std::max<double>(retry_after, Backoff(attempt)));
          continue;
        }
        throw RateLimitError("GET " + path + ": rate limited (HTTP " +
                                 std::to_string(status) + ")",
                             retry_after);
      }
      if (status >= 500) {
        if (attempt < cfg_.max_retries) {
          Sleep(Backoff(attempt));
          continue;
        }
        throw TransientError("GET " + path + ": HTTP " +
                             std::to_string(status));
      }
      if (status != 200) {
        throw IoError("GET " + path + ": HTTP " + std::to_string(status));
      }
      try {
        return Json::parse(res->body);
      } catch (const Json::parse_error& e) {
        throw IoError("GET " + path + ": malformed JSON body");
      }
    }
  }

  // Follows ?page=N until a short page.
  Json GetAll(const std::string& path) {
    Json all = Json::array();
    for (int page = 1;; ++page) {
      Json chunk = Get(path + "?per_page=" + std::to_string(cfg_.per_page) +
                       "&page=" + std::to_string(page));
      if (!chunk.is_array()) throw IoError("GET " + path + ": expected array");
      for (Json& item : chunk) all.push_back(std::move(item));
      if (static_cast<int>(chunk.size()) < cfg_.per_page) break;
    }
    return all;
  }

 private:
  double Backoff(int attempt) const {
    return std::min(cfg_.max_backoff_seconds,
                    cfg_.backoff_seconds * std::pow(2.0, attempt));
  }

  void Sleep(double seconds) const {
    seconds = std::min(seconds, cfg_.max_backoff_seconds);
    std::this_thread::sleep_for(std::chrono::duration<double>(seconds));
  }

  static long RetryAfter(const httplib::Response& res) {
    if (res.has_header("Retry-After")) {
      return std::strtol(res.get_header_value("Retry-After").c_str(), nullptr,
                         10);
    }
    if (res.has_header("x-ratelimit-reset")) {
      const long reset = std::strtol(
          res.get_header_value("x-ratelimit-reset").c_str(), nullptr, 10);
      return std::max<long>(0, reset - static_cast<long>(std::time(nullptr)));
    }
    return 60;
  }

  GithubClientConfig cfg_;
  httplib::Client client_;
};

std::string PathPrefix(const std::string& host) {
  // Keeps any path component of a configured host (e.g. an API proxy).
  std::size_t scheme = host.find("://");
  std::size_t slash =
      host.find('/', scheme == std::string::npos ? 0 : scheme + 3);
  if (slash == std::string::npos) return "";
  std::string prefix = host.substr(slash);
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  return prefix;
}

std::string HostOnly(const std::string& host) {
  std::size_t scheme = host.find("://");
  std::size_t slash =
      host.find('/', scheme == std::string::npos ? 0 : scheme + 3);
  return slash == std::string::npos ? host : host.substr(0, slash);
}

}  // namespace

GithubClientConfig GithubConfigFromEnv() {
  GithubClientConfig cfg;
  if (const char* token = std::getenv("GITHUB_TOKEN")) cfg.token = token;
  return cfg;
}

Timestamp ParseIso8601(std::string_view s) {
  std::tm tm{};
  int year = 0, month = 0, day = 0, hour = 0, minute = 0, second = 0;
  const std::string str(s);
  if (std::sscanf(str.c_str(), "%d-%d-%dT%d:%d:%d", &year, &month, &day, &hour,
                  &minute, &second) != 6) {
    throw ValidationError("bad timestamp '" + str + "'");
  }
  tm.tm_year = year - 1900;
  tm.tm_mon = month - 1;
  tm.tm_mday = day;
  tm.tm_hour = hour;
  tm.tm_min = minute;
  tm.tm_sec = second;
  return static_cast<Timestamp>(timegm(&tm));
}

RawTimeline FetchIssue(std::string_view project, long issue_number,
                       const GithubClientConfig& cfg) {
  if (project.find('/') == std::string_view::npos) {
    throw ValidationError("project must be owner/name");
  }
  GithubClientConfig session_cfg = cfg;
  session_cfg.host = HostOnly(cfg.host);
  Session session(session_cfg);
  const std::string base = PathPrefix(cfg.host) + "/repos/" +
                           std::string(project) + "/issues/" +
                           std::to_string(issue_number);

  const Json issue = session.Get(base);
  RawTimeline::Fields f;
  f.project = std::string(project);
  f.issue_number = issue_number;
  f.title = StringOr(issue, "title");
  if (issue.contains("labels")) {
    for (const Json& label : issue["labels"]) {
      if (label.is_string()) {
        f.labels.push_back(label.get<std::string>());
      } else {
        f.labels.push_back(StringOr(label, "name"));
      }
    }
  }
  f.state = StringOr(issue, "state") == "closed" ? IssueState::kClosed
                                                 : IssueState::kOpen;

  // The opening post is the first utterance.
  std::vector<Event> events;
  if (issue.contains("created_at")) {
    events.push_back({EventKind::kComment, LoginOf(issue, "user"),
                      ParseIso8601(StringOr(issue, "created_at")),
                      StringOr(issue, "body"),
                      {}});
  }

  for (const Json& c : session.GetAll(base + "/comments")) {
    events.push_back({EventKind::kComment, LoginOf(c, "user"),
                      ParseIso8601(StringOr(c, "created_at")),
                      StringOr(c, "body"),
                      {}});
  }

  const std::string self_ref = "#" + std::to_string(issue_number);
  for (const Json& ev : session.GetAll(base + "/timeline")) {
    const std::string type = StringOr(ev, "event");
    const std::string created = StringOr(ev, "created_at");
    if (created.empty()) continue;
    const Timestamp ts = ParseIso8601(created);
    if (type == "cross-referenced" && ev.contains("source") &&
        ev["source"].contains("issue")) {
      const Json& src = ev["source"]["issue"];
      if (!src.contains("pull_request")) continue;
      std::string repo;
      if (src.contains("repository") && src["repository"].is_object()) {
        repo = StringOr(src["repository"], "full_name");
      }
      Event e;
      e.actor = LoginOf(ev, "actor");
      if (e.actor.empty()) e.actor = LoginOf(src, "user");
      e.ts = ts;
      e.text = StringOr(src, "title");
      if (!repo.empty() && repo != project) {
        // Foreign-repository pull requests are not treated as the fix.
        e.kind = EventKind::kOther;
      } else {
        e.kind = EventKind::kPullRequest;
        e.linked_issues = {self_ref};
        for (std::string& ref :
             RefsInText(e.text + "\n" + StringOr(src, "body"), project)) {
          if (ref != self_ref) e.linked_issues.push_back(std::move(ref));
        }
      }
      events.push_back(std::move(e));
    } else if (type == "referenced" && ev.contains("commit_id") &&
               ev["commit_id"].is_string()) {
      Event e;
      e.actor = LoginOf(ev, "actor");
      e.ts = ts;
      e.text = StringOr(ev, "message");
      const std::string url = StringOr(ev, "commit_url");
      const bool foreign =
          !url.empty() &&
          url.find("/repos/" + std::string(project) + "/") == std::string::npos;
      if (e.text.empty() && !url.empty() && !foreign) {
        const std::size_t repos = url.find("/repos/");
        const Json commit = session.Get(PathPrefix(cfg.host) + url.substr(repos));
        if (commit.contains("commit")) e.text = StringOr(commit["commit"], "message");
      }
      if (foreign) {
        e.kind = EventKind::kOther;
      } else {
        e.kind = EventKind::kCommit;
        e.linked_issues = {self_ref};
        for (std::string& ref : RefsInText(e.text, project)) {
          if (ref != self_ref) e.linked_issues.push_back(std::move(ref));
        }
      }
      events.push_back(std::move(e));
    } else if (type == "closed" || type == "reopened") {
      events.push_back({EventKind::kOther, LoginOf(ev, "actor"), ts, type, {}});
    }
  }

  std::stable_sort(events.begin(), events.end(),
                   [](const Event& a, const Event& b) { return a.ts < b.ts; });
  f.events = std::move(events);
  return RawTimeline(std::move(f));
}

}  // namespace bugsol
