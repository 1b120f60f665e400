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

#include "bugsol/analysis.h"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <random>
#include <set>
#include <sstream>

#include "bugsol/error.h"
#include "bugsol/parallel.h"

namespace bugsol {
namespace {

std::set<std::string> NgramSet(const Segments& segments, int n) {
  std::set<std::string> out;
  for (const Tokens& seg : segments) {
    for (std::size_t i = 0; i + n <= seg.size(); ++i) {
      out.insert(NgramKey(seg, i, n));
    }
  }
  return out;
}

std::vector<std::string> NgramOccurrences(const Tokens& tokens, int n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    out.push_back(NgramKey(tokens, i, n));
  }
  return out;
}

void CheckOrder(int n) {
  if (n < 1 || n > 4) throw ValidationError("n-gram order must be in 1..4");
}

struct Mean {
  double sum = 0;
  std::size_t n = 0;
  void Add(double v) {
    sum += v;
    ++n;
  }
  void Add(std::optional<double> v) {
    if (v) Add(*v);
  }
  std::optional<double> Get() const {
    if (n == 0) return std::nullopt;
    return sum / static_cast<double>(n);
  }
};

MetricScores MeanScores(const std::vector<const MetricScores*>& scores) {
  MetricScores m;
  if (scores.empty()) return m;
  for (const MetricScores* s : scores) {
    m.bleu4 += s->bleu4;
    m.meteor += s->meteor;
    m.rouge1_f += s->rouge1_f;
    m.rouge2_f += s->rouge2_f;
    m.rougeL_f += s->rougeL_f;
  }
  const double n = static_cast<double>(scores.size());
  m.bleu4 /= n;
  m.meteor /= n;
  m.rouge1_f /= n;
  m.rouge2_f /= n;
  m.rougeL_f /= n;
  return m;
}

OverlapRow OverlapRowFor(const std::string& model,
                         const std::vector<Example>& corpus,
                         const std::map<std::string, Tokens>& outputs) {
  OverlapRow row;
  row.model = model;
  for (int n = 1; n <= 2; ++n) {
    Mean title, utts;
    for (const Example& e : corpus) {
      auto it = outputs.find(e->id);
      if (it == outputs.end()) continue;
      const auto o = OverlapReport(it->second, e->title_tokens,
                                   UtteranceSegments(e, e->t_g), n);
      if (!o) continue;
      title.Add(o->in_title);
      utts.Add(o->in_utterances_only);
    }
    row.in_title[n - 1] = title.Get();
    row.in_utterances_only[n - 1] = utts.Get();
  }
  return row;
}

}  // namespace

std::string FormatPct(std::optional<double> v, int decimals) {
  if (!v) return "-";
  std::ostringstream s;
  s << std::fixed << std::setprecision(decimals) << *v;
  return s.str();
}

std::optional<double> NovelNgrams(const Tokens& reference,
                                  const Segments& context, int n) {
  CheckOrder(n);
  if (reference.size() < static_cast<std::size_t>(n)) return std::nullopt;
  const std::set<std::string> seen = NgramSet(context, n);
  const auto occurrences = NgramOccurrences(reference, n);
  std::size_t novel = 0;
  for (const std::string& g : occurrences) novel += seen.count(g) ? 0 : 1;
  return 100.0 * static_cast<double>(novel) / occurrences.size();
}

std::optional<OverlapPct> OverlapReport(const Tokens& tokens,
                                        const Tokens& title,
                                        const Segments& utterances, int n) {
  CheckOrder(n);
  if (tokens.size() < static_cast<std::size_t>(n)) return std::nullopt;
  const std::set<std::string> in_title = NgramSet({title}, n);
  const std::set<std::string> in_utts = NgramSet(utterances, n);
  const auto occurrences = NgramOccurrences(tokens, n);
  std::size_t t = 0, u = 0;
  for (const std::string& g : occurrences) {
    if (in_title.count(g)) {
      ++t;
    } else if (in_utts.count(g)) {
      ++u;
    }
  }
  const double total = static_cast<double>(occurrences.size());
  return OverlapPct{100.0 * t / total, 100.0 * u / total};
}

Segments UtteranceSegments(const Example& example, int upto_t) {
  Segments out;
  for (int t = 1; t <= upto_t; ++t) out.push_back(example.U(t).tokens);
  return out;
}

NovelNgramTable ComputeNovelNgramTable(const std::vector<Example>& corpus) {
  NovelNgramTable table;
  for (int n = 1; n <= 4; ++n) {
    Mean title, utts, both;
    for (const Example& e : corpus) {
      const Tokens& ref = e->description_tokens;
      Segments u = UtteranceSegments(e, e->t_g);
      title.Add(NovelNgrams(ref, {e->title_tokens}, n));
      utts.Add(NovelNgrams(ref, u, n));
      u.push_back(e->title_tokens);
      both.Add(NovelNgrams(ref, u, n));
    }
    table.title[n - 1] = title.Get();
    table.utterances[n - 1] = utts.Get();
    table.both[n - 1] = both.Get();
  }
  return table;
}

std::string FormatNovelNgramTable(const NovelNgramTable& table) {
  std::ostringstream out;
  out << std::left << std::setw(24) << "" << std::right;
  for (const char* h : {"1", "2", "3", "4"}) out << std::setw(8) << h;
  out << '\n';
  const std::pair<const char*, const std::array<std::optional<double>, 4>*>
      rows[] = {{"Title", &table.title},
                {"U_1..U_tg", &table.utterances},
                {"Title + U_1..U_tg", &table.both}};
  for (const auto& [label, values] : rows) {
    out << std::left << std::setw(24) << label << std::right;
    for (const auto& v : *values) out << std::setw(8) << FormatPct(v);
    out << '\n';
  }
  return out.str();
}

OverlapRow ComputeOverlapRow(const std::string& model,
                             const std::vector<Example>& corpus,
                             const std::map<std::string, Tokens>& outputs) {
  return OverlapRowFor(model, corpus, outputs);
}

OverlapRow ComputeReferenceOverlapRow(const std::vector<Example>& corpus) {
  std::map<std::string, Tokens> refs;
  for (const Example& e : corpus) refs[e->id] = e->description_tokens;
  return OverlapRowFor("Reference", corpus, refs);
}

std::string FormatOverlapTable(const std::vector<OverlapRow>& rows) {
  std::size_t width = 5;
  for (const OverlapRow& r : rows) width = std::max(width, r.model.size());
  width += 2;
  std::ostringstream out;
  out << std::left << std::setw(width) << "" << std::right << std::setw(16)
      << "Title" << "   " << std::setw(16) << "U_1..U_tg only" << '\n';
  out << std::left << std::setw(width) << "Model" << std::right << std::setw(8)
      << "1" << std::setw(8) << "2" << "   " << std::setw(8) << "1"
      << std::setw(8) << "2" << '\n';
  for (const OverlapRow& r : rows) {
    out << std::left << std::setw(width) << r.model << std::right
        << std::setw(8) << FormatPct(r.in_title[0]) << std::setw(8)
        << FormatPct(r.in_title[1]) << "   " << std::setw(8)
        << FormatPct(r.in_utterances_only[0]) << std::setw(8)
        << FormatPct(r.in_utterances_only[1]) << '\n';
  }
  return out.str();
}

int DecileBucket(double pct) {
  if (!(pct >= 0 && pct <= 100)) {
    throw ValidationError("percentage outside [0, 100]");
  }
  const int b = (static_cast<int>(std::floor(pct / 10.0)) + 1) * 10;
  return std::min(b, 100);
}

std::map<int, BucketStats> BucketReport(
    const MetricReport& report, const std::map<std::string, double>& pct) {
  std::map<int, std::vector<const MetricScores*>> groups;
  for (const auto& [id, scores] : report.per_example()) {
    auto it = pct.find(id);
    if (it == pct.end()) {
      throw ValidationError("no overlap percentage for '" + id + "'");
    }
    groups[DecileBucket(it->second)].push_back(&scores);
  }
  std::map<int, BucketStats> out;
  for (const auto& [bucket, members] : groups) {
    out[bucket] = {members.size(), MeanScores(members)};
  }
  return out;
}

double ReferenceInContextPct(const Example& example) {
  return 100.0 - *NovelNgrams(example->description_tokens,
                              UtteranceSegments(example, example->t_g), 1);
}

std::string TgBucket(int t_g) {
  if (t_g < 1) throw ValidationError("t_g must be >= 1");
  return t_g >= 5 ? ">=5" : std::to_string(t_g);
}

WhenAccuracyTable WhenAccuracy(const std::vector<WhenPrediction>& preds,
                               const std::map<std::string, int>& golds) {
  std::map<std::string, const WhenPrediction*> by_id;
  for (const WhenPrediction& p : preds) by_id[p.example_id] = &p;

  WhenAccuracyTable table;
  std::size_t lt = 0, none = 0, eq = 0;
  std::map<std::string, std::size_t> hits;
  for (const char* b : kTgBuckets) {
    table.by_tg_n[b] = 0;
    hits[b] = 0;
  }
  Mean lead;
  for (const auto& [id, t_g] : golds) {
    auto it = by_id.find(id);
    if (it == by_id.end()) {
      throw ValidationError("no prediction for gold example '" + id + "'");
    }
    const std::optional<int>& t_p = it->second->t_p;
    const std::string bucket = TgBucket(t_g);
    ++table.by_tg_n[bucket];
    if (!t_p || *t_p > t_g) {
      ++none;
      continue;
    }
    lead.Add(static_cast<double>(t_g - *t_p));
    if (*t_p < t_g) {
      ++lt;
    } else {
      ++eq;
      ++hits[bucket];
    }
  }
  table.n = golds.size();
  if (table.n > 0) {
    const double n = static_cast<double>(table.n);
    table.pct_tp_lt_tg = 100.0 * lt / n;
    table.pct_tp_none = 100.0 * none / n;
    table.pct_tp_eq_tg = 100.0 * eq / n;
  }
  for (const char* b : kTgBuckets) {
    const std::size_t n = table.by_tg_n[b];
    table.by_tg[b] = n == 0 ? std::nullopt
                            : std::optional<double>(100.0 * hits[b] / n);
  }
  table.avg_lead = lead.Get();
  return table;
}

std::map<std::string, int> GoldSteps(const std::vector<Example>& corpus) {
  std::map<std::string, int> out;
  for (const Example& e : corpus) out[e->id] = e->t_g;
  return out;
}

std::string FormatWhenTable(
    const std::vector<std::pair<std::string, WhenAccuracyTable>>& columns) {
  std::size_t width = 10;
  for (const auto& [label, t] : columns) width = std::max(width, label.size() + 2);
  std::ostringstream out;
  auto row = [&](const std::string& label, auto cell) {
    out << std::left << std::setw(14) << label << std::right;
    for (const auto& [name, t] : columns) out << std::setw(width) << cell(t);
    out << '\n';
  };
  out << std::left << std::setw(14) << "" << std::right;
  for (const auto& [label, t] : columns) out << std::setw(width) << label;
  out << '\n';
  row("t_p < t_g", [](const WhenAccuracyTable& t) { return FormatPct(t.pct_tp_lt_tg); });
  row("t_p = None", [](const WhenAccuracyTable& t) { return FormatPct(t.pct_tp_none); });
  row("t_p = t_g", [](const WhenAccuracyTable& t) { return FormatPct(t.pct_tp_eq_tg); });
  for (const char* b : kTgBuckets) {
    const std::string label =
        std::string("  t_g ") + (b[0] == '>' ? ">= 5" : std::string("= ") + b);
    row(label, [b](const WhenAccuracyTable& t) { return FormatPct(t.by_tg.at(b)); });
  }
  return out.str();
}

BootstrapResult BootstrapCompare(const std::vector<double>& a,
                                 const std::vector<double>& b,
                                 const BootstrapConfig& cfg) {
  if (a.size() != b.size()) {
    throw ValidationError("paired score vectors differ in length");
  }
  if (a.empty()) throw ValidationError("bootstrap needs at least one pair");
  if (cfg.samples < 1 || cfg.sample_size < 1) {
    throw ValidationError("bootstrap samples and size must be >= 1");
  }
  if (!(cfg.alpha > 0 && cfg.alpha < 1)) {
    throw ValidationError("alpha must lie in (0, 1)");
  }
  const std::size_t n = a.size();
  std::vector<double> diff(n);
  double observed = 0, sum_a = 0, sum_b = 0;
  for (std::size_t i = 0; i < n; ++i) {
    diff[i] = a[i] - b[i];
    observed += diff[i];
    sum_a += a[i];
    sum_b += b[i];
  }
  BootstrapResult r;
  r.mean_a = sum_a / n;
  r.mean_b = sum_b / n;
  r.winner = observed > 0 ? 1 : observed < 0 ? -1 : 0;
  if (r.winner == 0) return r;

  std::vector<char> lost(static_cast<std::size_t>(cfg.samples), 0);
  ParallelFor(lost.size(), cfg.threads, [&](std::size_t s) {
    std::mt19937_64 rng(MixSeed(cfg.seed, s));
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    double d = 0;
    for (int k = 0; k < cfg.sample_size; ++k) d += diff[pick(rng)];
    lost[s] = r.winner > 0 ? d <= 0 : d >= 0;
  });
  const auto losses = std::count(lost.begin(), lost.end(), 1);
  r.p_value = static_cast<double>(losses) / cfg.samples;
  r.significant = r.p_value < cfg.alpha;
  return r;
}

std::map<std::string, MetricScores> MetricsByTg(
    const MetricReport& report, const std::map<std::string, int>& golds) {
  std::map<std::string, std::vector<const MetricScores*>> groups;
  for (const auto& [id, scores] : report.per_example()) {
    auto it = golds.find(id);
    if (it == golds.end()) {
      throw ValidationError("no gold t_g for '" + id + "'");
    }
    groups[TgBucket(it->second)].push_back(&scores);
  }
  std::map<std::string, MetricScores> out;
  for (const auto& [bucket, members] : groups) out[bucket] = MeanScores(members);
  return out;
}

std::string FormatMetricTable(
    const std::vector<std::pair<std::string, MetricReport>>& rows,
    const std::vector<std::string>& metrics) {
  std::size_t width = 5;
  for (const auto& [label, r] : rows) width = std::max(width, label.size());
  width += 2;
  std::ostringstream out;
  out << std::left << std::setw(width) << "Model" << std::right;
  for (const std::string& m : metrics) out << std::setw(10) << m;
  out << std::setw(8) << "n" << '\n';
  for (const auto& [label, r] : rows) {
    out << std::left << std::setw(width) << label << std::right;
    for (const std::string& m : metrics) {
      out << std::setw(10) << FormatPct(100.0 * MetricByName(r.aggregate(), m), 2);
    }
    out << std::setw(8) << r.n() << '\n';
  }
  return out.str();
}

OrderedJson MetricScoresJson(const MetricScores& s,
                             const std::vector<std::string>& metrics) {
  OrderedJson j = OrderedJson::object();
  for (const std::string& m : metrics) j[m] = MetricByName(s, m);
  return j;
}

OrderedJson BootstrapJson(const BootstrapResult& r) {
  return {{"p_value", r.p_value},
          {"significant", r.significant},
          {"winner", r.winner > 0 ? "a" : r.winner < 0 ? "b" : "tie"},
          {"mean_a", r.mean_a},
          {"mean_b", r.mean_b}};
}

OrderedJson WhenReportJson(const WhenAccuracyTable& table) {
  auto opt = [](std::optional<double> v) {
    return v ? OrderedJson(*v) : OrderedJson(nullptr);
  };
  OrderedJson by_tg = OrderedJson::object();
  for (const char* b : kTgBuckets) {
    by_tg[b] = {{"pct_tp_eq_tg", opt(table.by_tg.at(b))},
                {"n", table.by_tg_n.at(b)}};
  }
  return {{"aggregate",
           {{"n", table.n},
            {"pct_tp_lt_tg", table.pct_tp_lt_tg},
            {"pct_tp_none", table.pct_tp_none},
            {"pct_tp_eq_tg", table.pct_tp_eq_tg},
            {"avg_lead", opt(table.avg_lead)}}},
          {"by_tg", std::move(by_tg)},
          {"significance", OrderedJson::object()}};
}

}  // namespace bugsol
