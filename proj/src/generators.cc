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

#include "bugsol/generators.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "bugsol/error.h"
#include "bugsol/filters.h"
#include "bugsol/text.h"

namespace bugsol {
namespace {

GeneratorOutput MakeOutput(const Context& ctx, std::string name,
                           Tokens tokens) {
  return {ctx.id, std::move(name), std::move(tokens), ctx.at_step};
}

void Append(Tokens& out, const Tokens& more) {
  out.insert(out.end(), more.begin(), more.end());
}

std::string SourceName(SpanSource source) {
  return source == SpanSource::kFirst ? "u1" : "utg";
}

bool EntryBefore(const TfidfIndex::Entry& a, const TfidfIndex::Entry& b) {
  if (a.ts != b.ts) return a.ts < b.ts;
  return a.id < b.id;
}

TfidfIndex::Partition BuildPartition(std::vector<const Example*> examples,
                                     IndexField field) {
  auto field_of = [field](const Example& e) -> const Tokens& {
    return field == IndexField::kTitle ? e->title_tokens
                                       : e->description_tokens;
  };
  std::vector<Tokens> docs;
  for (const Example* e : examples) docs.push_back(field_of(*e));
  TfidfIndex::Partition p;
  p.idf = InverseDocumentFrequency(docs);
  for (const Example* e : examples) {
    p.entries.push_back({(*e)->id, (*e)->project, (*e)->resolution_ts,
                         (*e)->description_tokens,
                         TfidfVector(field_of(*e), p.idf)});
  }
  std::sort(p.entries.begin(), p.entries.end(), EntryBefore);
  return p;
}

template <class Record>
Context TruncateRecord(const Record& r, int upto_t) {
  if (upto_t < 1 || upto_t > r.T()) {
    throw BoundsError(r->id + ": step " + std::to_string(upto_t) +
                      " outside [1, " + std::to_string(r.T()) + "]");
  }
  Context ctx;
  ctx.id = r->id;
  ctx.project = r->project;
  ctx.title = r->title_tokens;
  ctx.utterances.assign(r->utterances.begin(), r->utterances.begin() + upto_t);
  ctx.at_step = upto_t;
  return ctx;
}

}  // namespace

Context TruncateAt(const Example& example, int upto_t) {
  return TruncateRecord(example, upto_t);
}

Context TruncateAt(const Discussion& discussion, int upto_t) {
  return TruncateRecord(discussion, upto_t);
}

Tokens Render(const Context& context) {
  Tokens out;
  out.emplace_back(kTitleStart);
  Append(out, context.title);
  for (const Utterance& u : context.utterances) {
    out.emplace_back(kUtteranceStart);
    Append(out, u.tokens);
  }
  return out;
}

OrderedJson ToJson(const GeneratorOutput& r) {
  OrderedJson tokens = OrderedJson::array();
  for (const std::string& t : r.tokens) tokens.push_back(CheckedString("tokens", t));
  return {{"id", r.example_id},
          {"generator", r.generator},
          {"tokens", std::move(tokens)},
          {"at_step", r.at_step}};
}

template <>
GeneratorOutput FromJson<GeneratorOutput>(const Json& j) {
  GeneratorOutput r;
  r.example_id = GetField<std::string>(j, "id");
  r.generator = GetField<std::string>(j, "generator");
  r.tokens = GetField<Tokens>(j, "tokens");
  r.at_step = GetField<int>(j, "at_step");
  if (r.at_step < 0) throw ValidationError("at_step must be >= 0");
  return r;
}

GeneratorOutput CopyTitle(const Context& context) {
  return MakeOutput(context, "copy-title", context.title);
}

GeneratorOutput ExtractSpan(const Context& context, SpanSource source,
                            SpanKind span, int k) {
  if (k < 1) throw ValidationError("extract_span: k must be >= 1");
  if (context.utterances.empty()) {
    throw ValidationError("extract_span: context has no utterances");
  }
  const Utterance& u = source == SpanSource::kFirst ? context.utterances.front()
                                                    : context.utterances.back();
  const int n = static_cast<int>(u.sentences.size());
  std::string name;
  Tokens tokens;
  switch (span) {
    case SpanKind::kFull:
      name = "full-utterance(" + SourceName(source) + ")";
      tokens = u.tokens;
      break;
    case SpanKind::kLead:
      name = "lead-" + std::to_string(k) + "(" + SourceName(source) + ")";
      for (int s = 0; s < std::min(k, n); ++s) Append(tokens, u.Sentence(s));
      break;
    case SpanKind::kLast:
      name = "last-" + std::to_string(k) + "(" + SourceName(source) + ")";
      for (int s = std::max(0, n - k); s < n; ++s) {
        Append(tokens, u.Sentence(s));
      }
      break;
  }
  return MakeOutput(context, std::move(name), std::move(tokens));
}

std::map<std::string, double> InverseDocumentFrequency(
    const std::vector<Tokens>& documents) {
  std::map<std::string, long> df;
  for (const Tokens& d : documents) {
    for (const std::string& w : std::set<std::string>(d.begin(), d.end())) {
      ++df[w];
    }
  }
  std::map<std::string, double> idf;
  const double n = static_cast<double>(documents.size());
  for (const auto& [w, count] : df) {
    idf[w] = std::log(n / static_cast<double>(count));
  }
  return idf;
}

SparseVector TfidfVector(const Tokens& tokens,
                         const std::map<std::string, double>& idf) {
  std::map<std::string, int> counts;
  for (const std::string& t : tokens) ++counts[t];
  SparseVector v;
  double norm2 = 0;
  for (const auto& [w, c] : counts) {
    auto it = idf.find(w);
    if (it == idf.end() || it->second == 0.0) continue;
    const double weight = (1.0 + std::log(static_cast<double>(c))) * it->second;
    v[w] = weight;
    norm2 += weight * weight;
  }
  if (norm2 > 0) {
    const double norm = std::sqrt(norm2);
    for (auto& [w, x] : v) x /= norm;
  }
  return v;
}

double Cosine(const SparseVector& a, const SparseVector& b) {
  const SparseVector& small = a.size() <= b.size() ? a : b;
  const SparseVector& large = a.size() <= b.size() ? b : a;
  double dot = 0;
  for (const auto& [w, x] : small) {
    auto it = large.find(w);
    if (it != large.end()) dot += x * it->second;
  }
  return dot;
}

Eigen::MatrixXd LexRankAdjacency(const std::vector<Tokens>& sentences,
                                 double threshold) {
  const auto idf = InverseDocumentFrequency(sentences);
  std::vector<SparseVector> vectors;
  vectors.reserve(sentences.size());
  for (const Tokens& s : sentences) vectors.push_back(TfidfVector(s, idf));
  const Eigen::Index n = static_cast<Eigen::Index>(sentences.size());
  Eigen::MatrixXd adjacency = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (Cosine(vectors[i], vectors[j]) >= threshold &&
          !vectors[i].empty() && !vectors[j].empty()) {
        adjacency(i, j) = adjacency(j, i) = 1.0;
      }
    }
  }
  return adjacency;
}

Eigen::VectorXd LexRankCentrality(const Eigen::MatrixXd& adjacency,
                                  const LexRankConfig& cfg) {
  const Eigen::Index n = adjacency.rows();
  if (n == 0) return Eigen::VectorXd();
  // Row-stochastic transition; empty rows jump uniformly.
  Eigen::MatrixXd transition = adjacency;
  const Eigen::VectorXd degree = adjacency.rowwise().sum();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (degree(i) > 0) {
      transition.row(i) /= degree(i);
    } else {
      transition.row(i).setConstant(1.0 / static_cast<double>(n));
    }
  }
  const Eigen::MatrixXd step = cfg.damping * transition.transpose();
  const double teleport = (1.0 - cfg.damping) / static_cast<double>(n);
  Eigen::VectorXd p = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  for (int it = 0; it < cfg.max_iterations; ++it) {
    Eigen::VectorXd next = (step * p).array() + teleport;
    const double change = (next - p).cwiseAbs().maxCoeff();
    p = std::move(next);
    if (change < cfg.tolerance) break;
  }
  return p / p.sum();
}

GeneratorOutput LexRank(const Context& context, const LexRankConfig& cfg) {
  const ContextSentences ctx =
      CollectSentences(context.utterances, context.at_step);
  if (ctx.sentences.empty()) {
    throw ValidationError("lexrank: context has no sentences");
  }
  const Eigen::VectorXd centrality = LexRankCentrality(
      LexRankAdjacency(ctx.sentences, cfg.threshold), cfg);
  std::vector<int> order(ctx.sentences.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return centrality(a) > centrality(b);
  });
  const int take = std::min<int>(std::max(cfg.n_extract, 1),
                                 static_cast<int>(order.size()));
  std::vector<int> picked(order.begin(), order.begin() + take);
  std::sort(picked.begin(), picked.end());
  Tokens tokens;
  for (int i : picked) Append(tokens, ctx.sentences[i]);
  return MakeOutput(context, "lexrank", std::move(tokens));
}

TfidfIndex::TfidfIndex(IndexField field, IndexScope scope, Partition global,
                       std::map<std::string, Partition> by_project)
    : field_(field),
      scope_(scope),
      global_(std::move(global)),
      by_project_(std::move(by_project)) {
  if (global_.entries.empty()) {
    throw ValidationError("tfidf index needs at least one training example");
  }
}

const TfidfIndex::Partition* TfidfIndex::project(const std::string& name) const {
  auto it = by_project_.find(name);
  return it == by_project_.end() ? nullptr : &it->second;
}

TfidfIndex BuildTfidfIndex(const std::vector<Example>& train, IndexField field,
                           IndexScope scope) {
  if (train.empty()) throw ValidationError("build_tfidf_index: empty train");
  std::vector<const Example*> all;
  std::map<std::string, std::vector<const Example*>> grouped;
  for (const Example& e : train) {
    all.push_back(&e);
    grouped[e->project].push_back(&e);
  }
  std::map<std::string, TfidfIndex::Partition> by_project;
  if (scope == IndexScope::kProject) {
    for (auto& [project, examples] : grouped) {
      by_project.emplace(project, BuildPartition(examples, field));
    }
  }
  return TfidfIndex(field, scope, BuildPartition(all, field),
                    std::move(by_project));
}

GeneratorOutput Retrieve(const Context& context, const TfidfIndex& index) {
  const TfidfIndex::Partition* part = &index.global();
  if (index.scope() == IndexScope::kProject) {
    if (const auto* p = index.project(context.project)) part = p;
  }
  const SparseVector query = TfidfVector(context.title, part->idf);
  const TfidfIndex::Entry* best = nullptr;
  double best_sim = -1;
  // Entries are ordered by (ts, id), so a strict comparison keeps the
  // earliest entry among equals.
  for (const TfidfIndex::Entry& e : part->entries) {
    const double sim = Cosine(query, e.vector);
    if (sim > best_sim) {
      best_sim = sim;
      best = &e;
    }
  }
  std::string name = std::string("retrieval(") +
                     (index.field() == IndexField::kTitle ? "title" : "desc") +
                     "," +
                     (index.scope() == IndexScope::kGlobal ? "global"
                                                           : "project") +
                     ")";
  return MakeOutput(context, std::move(name), best->description);
}

GeneratorOutput OracleExtractive(const Context& context,
                                 const Tokens& reference) {
  const ContextSentences ctx =
      CollectSentences(context.utterances, context.at_step);
  Tokens tokens;
  for (int i : GreedyExtractiveOracle(ctx.sentences, reference)) {
    Append(tokens, ctx.sentences[i]);
  }
  return MakeOutput(context, "oracle-extractive", std::move(tokens));
}

GeneratorMethod ParseGeneratorMethod(const std::string& name) {
  if (name == "copy-title") return GeneratorMethod::kCopyTitle;
  if (name == "lead") return GeneratorMethod::kLead;
  if (name == "last") return GeneratorMethod::kLast;
  if (name == "full-utterance") return GeneratorMethod::kFullUtterance;
  if (name == "lexrank") return GeneratorMethod::kLexRank;
  if (name == "retrieval") return GeneratorMethod::kRetrieval;
  if (name == "oracle-extractive") return GeneratorMethod::kOracleExtractive;
  throw ValidationError("unknown generator method '" + name + "'");
}

std::string GeneratorSpec::Name() const {
  switch (method) {
    case GeneratorMethod::kCopyTitle:
      return "copy-title";
    case GeneratorMethod::kLead:
      return "lead-" + std::to_string(k) + "(" + SourceName(source) + ")";
    case GeneratorMethod::kLast:
      return "last-" + std::to_string(k) + "(" + SourceName(source) + ")";
    case GeneratorMethod::kFullUtterance:
      return "full-utterance(" + SourceName(source) + ")";
    case GeneratorMethod::kLexRank:
      return "lexrank";
    case GeneratorMethod::kRetrieval:
      return std::string("retrieval(") +
             (retrieval_field == IndexField::kTitle ? "title" : "desc") + "," +
             (retrieval_scope == IndexScope::kGlobal ? "global" : "project") +
             ")";
    case GeneratorMethod::kOracleExtractive:
      return "oracle-extractive";
  }
  return "unknown";
}

Generator::Generator(GeneratorSpec spec, const TfidfIndex* index)
    : spec_(std::move(spec)), index_(index) {
  if (spec_.NeedsIndex()) {
    if (index_ == nullptr) {
      throw ValidationError(spec_.Name() + " requires a training index");
    }
    if (index_->field() != spec_.retrieval_field ||
        index_->scope() != spec_.retrieval_scope) {
      throw ValidationError(spec_.Name() +
                            ": index field/scope does not match the spec");
    }
  }
  if (spec_.k < 1) throw ValidationError("generator k must be >= 1");
}

GeneratorOutput Generator::Run(const Context& context,
                               const Tokens* reference) const {
  switch (spec_.method) {
    case GeneratorMethod::kCopyTitle:
      return CopyTitle(context);
    case GeneratorMethod::kLead:
      return ExtractSpan(context, spec_.source, SpanKind::kLead, spec_.k);
    case GeneratorMethod::kLast:
      return ExtractSpan(context, spec_.source, SpanKind::kLast, spec_.k);
    case GeneratorMethod::kFullUtterance:
      return ExtractSpan(context, spec_.source, SpanKind::kFull, spec_.k);
    case GeneratorMethod::kLexRank:
      return LexRank(context, spec_.lexrank);
    case GeneratorMethod::kRetrieval:
      return Retrieve(context, *index_);
    case GeneratorMethod::kOracleExtractive:
      if (reference == nullptr) {
        throw ValidationError("oracle-extractive needs the reference");
      }
      return OracleExtractive(context, *reference);
  }
  throw ValidationError("unknown generator");
}

}  // namespace bugsol
