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

#ifndef BUGSOL_GENERATORS_H_
#define BUGSOL_GENERATORS_H_

// Non-neural description generators: Copy Title, lead/last sentence
// extraction, LexRank, TF-IDF retrieval and the greedy oracle extract.
//
// Generators only ever receive a Context, which holds the title and the
// utterances up to the chosen step. Later utterances are never copied into
// it, so a generator cannot observe them.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bugsol/jsonl.h"
#include "bugsol/types.h"

namespace bugsol {

struct Context {
  std::string id;
  std::string project;
  Tokens title;
  std::vector<Utterance> utterances;  // U_1 .. U_at_step
  int at_step = 0;
};

// Copies the title and U_1..U_upto_t. Throws BoundsError when upto_t is not
// in [1, T].
Context TruncateAt(const Example& example, int upto_t);
Context TruncateAt(const Discussion& discussion, int upto_t);

// Same token sequence as RenderInput(example, at_step).
Tokens Render(const Context& context);

struct GeneratorOutput {
  std::string example_id;
  std::string generator;
  Tokens tokens;
  int at_step = 0;
  bool operator==(const GeneratorOutput&) const = default;
};

OrderedJson ToJson(const GeneratorOutput& r);
template <>
GeneratorOutput FromJson<GeneratorOutput>(const Json& j);

GeneratorOutput CopyTitle(const Context& context);

enum class SpanSource { kFirst, kLast };  // U_1 or the last visible utterance
enum class SpanKind { kFull, kLead, kLast };

GeneratorOutput ExtractSpan(const Context& context, SpanSource source,
                            SpanKind span, int k = 1);

struct LexRankConfig {
  double threshold = 0.1;
  double damping = 0.85;
  double tolerance = 1e-8;
  int max_iterations = 200;
  int n_extract = 1;
};

// Sparse TF-IDF vector: tf = 1 + ln(count), idf = ln(N / df), L2-normalized.
using SparseVector = std::map<std::string, double>;
SparseVector TfidfVector(const Tokens& tokens,
                         const std::map<std::string, double>& idf);
std::map<std::string, double> InverseDocumentFrequency(
    const std::vector<Tokens>& documents);
double Cosine(const SparseVector& a, const SparseVector& b);

// Thresholded cosine graph over the sentences (no self loops).
Eigen::MatrixXd LexRankAdjacency(const std::vector<Tokens>& sentences,
                                 double threshold);

// Stationary distribution of the damped random walk on the row-normalized
// adjacency; rows without edges jump uniformly.
Eigen::VectorXd LexRankCentrality(const Eigen::MatrixXd& adjacency,
                                  const LexRankConfig& cfg);

GeneratorOutput LexRank(const Context& context, const LexRankConfig& cfg = {});

enum class IndexField { kTitle, kDescription };
enum class IndexScope { kGlobal, kProject };

class TfidfIndex {
 public:
  struct Entry {
    std::string id;
    std::string project;
    Timestamp ts = 0;
    Tokens description;
    SparseVector vector;
  };
  struct Partition {
    std::map<std::string, double> idf;
    std::vector<Entry> entries;  // sorted by (ts, id)
  };

  TfidfIndex(IndexField field, IndexScope scope, Partition global,
             std::map<std::string, Partition> by_project);

  IndexField field() const { return field_; }
  IndexScope scope() const { return scope_; }
  const Partition& global() const { return global_; }
  // nullptr when the project has no training examples.
  const Partition* project(const std::string& name) const;

 private:
  IndexField field_;
  IndexScope scope_;
  Partition global_;
  std::map<std::string, Partition> by_project_;
};

TfidfIndex BuildTfidfIndex(const std::vector<Example>& train, IndexField field,
                           IndexScope scope);

// Description of the training example whose field vector has the highest
// cosine with the query title; ties (including all-zero similarity) go to
// the earliest training timestamp. Project scope falls back to the global
// partition for unseen projects.
GeneratorOutput Retrieve(const Context& context, const TfidfIndex& index);

// Oracle-selected sentences of the visible context, in selection order.
// Empty when no sentence overlaps the reference.
GeneratorOutput OracleExtractive(const Context& context,
                                 const Tokens& reference);

enum class GeneratorMethod {
  kCopyTitle,
  kLead,
  kLast,
  kFullUtterance,
  kLexRank,
  kRetrieval,
  kOracleExtractive,
};

struct GeneratorSpec {
  GeneratorMethod method = GeneratorMethod::kCopyTitle;
  SpanSource source = SpanSource::kLast;
  int k = 1;
  IndexField retrieval_field = IndexField::kTitle;
  IndexScope retrieval_scope = IndexScope::kGlobal;
  LexRankConfig lexrank;

  std::string Name() const;
  bool NeedsIndex() const { return method == GeneratorMethod::kRetrieval; }
  bool NeedsReference() const {
    return method == GeneratorMethod::kOracleExtractive;
  }
};

// Parses "copy-title", "lead", "last", "full-utterance", "lexrank",
// "retrieval", "oracle-extractive".
GeneratorMethod ParseGeneratorMethod(const std::string& name);

// Binds a spec to its resources. Missing resources are reported at
// construction, before any example is processed.
class Generator {
 public:
  Generator(GeneratorSpec spec, const TfidfIndex* index);

  const GeneratorSpec& spec() const { return spec_; }
  // `reference` is read only by the oracle extractive generator.
  GeneratorOutput Run(const Context& context,
                      const Tokens* reference = nullptr) const;

 private:
  GeneratorSpec spec_;
  const TfidfIndex* index_;
};

}  // namespace bugsol

#endif  // BUGSOL_GENERATORS_H_
