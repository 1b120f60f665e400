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

#include "bugsol/cli.h"

#include <CLI11.hpp>

#include <algorithm>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "bugsol/analysis.h"
#include "bugsol/config.h"
#include "bugsol/error.h"
#include "bugsol/filters.h"
#include "bugsol/generators.h"
#include "bugsol/github_client.h"
#include "bugsol/ingest.h"
#include "bugsol/jsonl.h"
#include "bugsol/parallel.h"
#include "bugsol/pipeline.h"
#include "bugsol/text.h"
#include "bugsol/when.h"

namespace bugsol {
namespace {

struct Global {
  std::string config_path;
  int threads = 1;
  bool print_stopwords = false;
  ToolConfig config;
};

void WriteReport(const std::string& path, const OrderedJson& report) {
  WriteFile(path, report.dump(2) + "\n");
}

// name=path pairs of the report command.
std::vector<std::pair<std::string, std::string>> NamedPaths(
    const std::vector<std::string>& specs) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const std::string& s : specs) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == s.size()) {
      throw ValidationError("expected NAME=PATH, got '" + s + "'");
    }
    out.emplace_back(s.substr(0, eq), s.substr(eq + 1));
  }
  return out;
}

std::vector<std::string> SplitList(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string part;
  while (std::getline(in, part, ',')) {
    if (!part.empty()) out.push_back(part);
  }
  return out;
}

// ---------------------------------------------------------------- ingest

struct IngestArgs {
  std::string timelines, out, aug_out, rejects;
  int min_actors = 2;
};

void RunIngest(const IngestArgs& a, const Global& g, std::ostream& out) {
  IngestConfig cfg;
  cfg.min_actors = a.min_actors;
  cfg.Validate();
  const auto timelines = ReadJsonl<RawTimeline>(a.timelines);

  std::vector<std::optional<ExtractResult>> results(timelines.size());
  std::vector<std::optional<Discussion>> discussions(timelines.size());
  ParallelFor(timelines.size(), g.threads, [&](std::size_t i) {
    results[i] = ExtractExample(timelines[i], cfg);
    if (!a.aug_out.empty() && !IsBugReport(timelines[i], cfg)) {
      discussions[i] = ExtractDiscussion(timelines[i], cfg.tokenizer);
    }
  });

  std::vector<Example> examples;
  std::vector<OrderedJson> rejects;
  std::map<std::string, long> reject_counts;
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (auto* e = std::get_if<Example>(&*results[i])) {
      examples.push_back(std::move(*e));
    } else {
      const auto& r = std::get<RejectReason>(*results[i]);
      const std::string code(ToString(r.code));
      ++reject_counts[code];
      rejects.push_back({{"id", timelines[i].id()},
                         {"reason", code},
                         {"detail", r.detail}});
    }
  }
  WriteJsonl(examples, a.out);
  if (!a.rejects.empty()) WriteJsonLines(a.rejects, rejects);
  out << "timelines: " << timelines.size() << "\n";
  out << "examples: " << examples.size() << "\n";
  for (const auto& [code, n] : reject_counts) {
    out << "rejected " << code << ": " << n << "\n";
  }
  if (!a.aug_out.empty()) {
    std::vector<Discussion> aug;
    for (auto& d : discussions) {
      if (d) aug.push_back(std::move(*d));
    }
    WriteJsonl(aug, a.aug_out);
    out << "augmentation discussions: " << aug.size() << "\n";
  }
}

// ----------------------------------------------------------------- fetch

struct FetchArgs {
  std::string project, out, host;
  std::vector<long> issues;
};

void RunFetch(const FetchArgs& a, std::ostream& out) {
  GithubClientConfig cfg = GithubConfigFromEnv();
  if (!a.host.empty()) cfg.host = a.host;
  std::vector<RawTimeline> timelines;
  for (long n : a.issues) timelines.push_back(FetchIssue(a.project, n, cfg));
  WriteJsonl(timelines, a.out);
  out << "fetched " << timelines.size() << " timelines\n";
}

// ---------------------------------------------------------------- filter

struct FilterArgs {
  std::string corpus, out, reports, iwf_corpus;
  std::optional<double> niwf_threshold, niwf_percentile, overlap_threshold;
};

void RunFilter(const FilterArgs& a, const Global& g, std::ostream& out) {
  const auto corpus = ReadJsonl<Example>(a.corpus);
  const auto iwf_source =
      a.iwf_corpus.empty() ? corpus : ReadJsonl<Example>(a.iwf_corpus);
  std::vector<Tokens> descriptions;
  for (const Example& e : iwf_source) descriptions.push_back(e->description_tokens);
  const IwfTable table = BuildIwfTable(descriptions);

  FilterThresholds th;
  th.niwf = a.niwf_threshold.value_or(g.config.niwf_threshold);
  th.overlap = a.overlap_threshold.value_or(g.config.overlap_threshold);
  if (a.niwf_percentile) {
    std::vector<double> scores;
    for (const Tokens& d : descriptions) scores.push_back(Niwf(d, table));
    th.niwf = NiwfThreshold(scores, *a.niwf_percentile);
  }
  const FilterResult result = ApplyFilters(corpus, table, th, g.threads);
  WriteJsonl(result.kept, a.out);
  if (!a.reports.empty()) WriteJsonl(result.reports, a.reports);

  std::map<FilterVerdict, long> counts;
  for (const FilterReport& r : result.reports) ++counts[r.Attribution()];
  out << "examples: " << corpus.size() << "\n";
  out << "niwf threshold: " << FormatPct(th.niwf, 6) << "\n";
  for (FilterVerdict v : {FilterVerdict::kGeneric, FilterVerdict::kUninformative,
                          FilterVerdict::kInsufficient}) {
    out << "excluded " << ToString(v) << ": " << counts[v] << "\n";
  }
  out << "kept: " << result.kept.size() << "\n";
}

// ----------------------------------------------------------------- split

struct SplitArgs {
  std::string corpus, out, train_out, valid_out, test_out, fractions;
};

void RunSplit(const SplitArgs& a, const Global& g, std::ostream& out,
              std::ostream& err) {
  const auto corpus = ReadJsonl<Example>(a.corpus);
  const SplitFractions f = a.fractions.empty()
                               ? g.config.split_fractions
                               : ParseSplitFractions(a.fractions);
  const SplitResult result = SplitByTime(corpus, f);
  for (const std::string& w : result.warnings) err << "warning: " << w << "\n";
  WriteFile(a.out, ToJson(result.split).dump() + "\n");

  std::map<std::string, const Example*> by_id;
  for (const Example& e : corpus) by_id[e->id] = &e;
  auto write_part = [&](const std::vector<std::string>& ids,
                        const std::string& path) {
    if (path.empty()) return;
    std::vector<Example> part;
    for (const std::string& id : ids) part.push_back(*by_id.at(id));
    WriteJsonl(part, path);
  };
  write_part(result.split->train, a.train_out);
  write_part(result.split->valid, a.valid_out);
  write_part(result.split->test, a.test_out);
  out << "train: " << result.split->train.size()
      << " valid: " << result.split->valid.size()
      << " test: " << result.split->test.size() << "\n";
}

CorpusSplit LoadSplit(const std::string& path) {
  const auto lines = ReadJsonLines(path);
  if (lines.size() != 1) {
    throw ParseError(path + ": expected exactly one split record");
  }
  try {
    return FromJson<CorpusSplit>(lines.front().second);
  } catch (const ParseError&) {
    throw;
  } catch (const ValidationError& e) {
    throw ParseError(path + ": " + e.what(), lines.front().first);
  }
}

// ----------------------------------------------------------------- stats

struct StatsArgs {
  std::string corpus, split, out;
};

void RunStats(const StatsArgs& a, const Global& g, std::ostream& out) {
  const auto corpus = ReadJsonl<Example>(a.corpus);
  const CorpusSplit split = a.split.empty()
                                ? SplitByTime(corpus, g.config.split_fractions).split
                                : LoadSplit(a.split);
  const std::string table = FormatStatsTable(CorpusStatsBySplit(corpus, split));
  if (!a.out.empty()) WriteFile(a.out, table);
  out << table;
}

// ------------------------------------------------------------------- gen

struct GenOptions {
  std::string method = "copy-title";
  std::string source = "utg";
  int k = 1;
  std::string retrieval_field = "title";
  std::string retrieval_scope = "global";
  std::string train;
};

GeneratorSpec MakeSpec(const GenOptions& o, const ToolConfig& cfg) {
  GeneratorSpec spec;
  spec.method = ParseGeneratorMethod(o.method);
  if (o.source == "u1") {
    spec.source = SpanSource::kFirst;
  } else if (o.source == "utg") {
    spec.source = SpanSource::kLast;
  } else {
    throw ValidationError("--source must be u1 or utg");
  }
  if (o.k < 1) throw ValidationError("--k must be >= 1");
  spec.k = o.k;
  if (o.retrieval_field == "title") {
    spec.retrieval_field = IndexField::kTitle;
  } else if (o.retrieval_field == "desc") {
    spec.retrieval_field = IndexField::kDescription;
  } else {
    throw ValidationError("--retrieval-field must be title or desc");
  }
  if (o.retrieval_scope == "global") {
    spec.retrieval_scope = IndexScope::kGlobal;
  } else if (o.retrieval_scope == "project") {
    spec.retrieval_scope = IndexScope::kProject;
  } else {
    throw ValidationError("--retrieval-scope must be global or project");
  }
  spec.lexrank.threshold = cfg.lexrank_threshold;
  spec.lexrank.damping = cfg.lexrank_damping;
  return spec;
}

std::optional<TfidfIndex> MaybeIndex(const GeneratorSpec& spec,
                                     const std::string& train) {
  if (!spec.NeedsIndex()) return std::nullopt;
  if (train.empty()) {
    throw ValidationError("retrieval needs --train with the training corpus");
  }
  return BuildTfidfIndex(ReadJsonl<Example>(train), spec.retrieval_field,
                         spec.retrieval_scope);
}

void AddGenOptions(CLI::App* cmd, GenOptions& o, const char* method_flag) {
  cmd->add_option(method_flag, o.method,
                  "copy-title|lead|last|full-utterance|lexrank|retrieval|"
                  "oracle-extractive");
  cmd->add_option("--source", o.source, "span source: u1|utg");
  cmd->add_option("--k", o.k, "sentences for lead/last/lexrank");
  cmd->add_option("--retrieval-field", o.retrieval_field, "title|desc");
  cmd->add_option("--retrieval-scope", o.retrieval_scope, "global|project");
  cmd->add_option("--train", o.train, "training corpus (retrieval index)");
}

struct GenArgs {
  std::string corpus, out, at = "tg", pred;
  GenOptions gen;
};

void RunGen(const GenArgs& a, const Global& g, std::ostream& out) {
  const GeneratorSpec spec = MakeSpec(a.gen, g.config);
  const auto index = MaybeIndex(spec, a.gen.train);
  const Generator generator(spec, index ? &*index : nullptr);
  const auto corpus = ReadJsonl<Example>(a.corpus);

  std::map<std::string, std::optional<int>> tp;
  std::optional<int> fixed;
  if (a.at == "tp") {
    if (a.pred.empty()) throw ValidationError("--at tp needs --pred");
    for (const WhenPrediction& p : ReadJsonl<WhenPrediction>(a.pred)) {
      tp[p.example_id] = p.t_p;
    }
  } else if (a.at != "tg") {
    try {
      std::size_t used = 0;
      fixed = std::stoi(a.at, &used);
      if (used != a.at.size() || *fixed < 1) throw std::invalid_argument(a.at);
    } catch (const std::exception&) {
      throw ValidationError("--at must be tg, tp or a positive integer");
    }
  }

  std::vector<GeneratorOutput> outputs(corpus.size());
  ParallelFor(corpus.size(), g.threads, [&](std::size_t i) {
    const Example& e = corpus[i];
    std::optional<int> step = e->t_g;
    if (fixed) step = std::min(*fixed, e.T());
    if (a.at == "tp") {
      auto it = tp.find(e->id);
      if (it == tp.end()) {
        throw ValidationError("no prediction for example '" + e->id + "'");
      }
      step = it->second;
    }
    if (!step) {
      outputs[i] = {e->id, spec.Name(), {}, 0};
      return;
    }
    outputs[i] = generator.Run(TruncateAt(e, std::min(*step, e.T())),
                               spec.NeedsReference() ? &e->description_tokens
                                                     : nullptr);
  });
  WriteJsonl(outputs, a.out);
  out << "generated " << outputs.size() << " descriptions with "
      << spec.Name() << "\n";
}

// ------------------------------------------------------------ train-when

struct TrainWhenArgs {
  std::string train, aug, out, class_weights;
  std::optional<int> trees;
  std::optional<std::uint64_t> seed;
  std::optional<double> aug_weight;
  std::size_t max_vocab = 500;
};

void RunTrainWhen(const TrainWhenArgs& a, const Global& g, std::ostream& out) {
  const auto train = ReadJsonl<Example>(a.train);
  const auto aug = a.aug.empty() ? std::vector<Discussion>{}
                                 : ReadJsonl<Discussion>(a.aug);
  WhenTrainConfig cfg;
  cfg.max_vocab = a.max_vocab;
  cfg.instances.aug_weight = a.aug_weight.value_or(g.config.aug_weight);
  cfg.instances.class_weights = a.class_weights.empty()
                                    ? g.config.class_weights
                                    : ParseClassWeights(a.class_weights);
  cfg.forest.n_trees = a.trees.value_or(g.config.rf_trees);
  cfg.forest.seed = a.seed.value_or(g.config.rf_seed);
  cfg.forest.threads = g.threads;
  const WhenModel model = TrainWhenModel(train, aug, cfg);
  model.Save(a.out);
  out << "trained " << model.forest().trees().size() << " trees on "
      << train.size() << " examples (+" << aug.size()
      << " augmentation discussions), " << model.forest().n_features()
      << " features\n";
}

// ------------------------------------------------------------- eval-when

struct EvalWhenArgs {
  std::string model, baseline, test, out, pred, gold, report, cap = "tg";
  std::optional<double> threshold;
  std::optional<std::uint64_t> seed;
};

void RunEvalWhen(const EvalWhenArgs& a, const Global& g, std::ostream& out) {
  std::vector<WhenPrediction> preds;
  std::vector<Example> gold;
  std::string label;
  if (!a.pred.empty()) {
    if (a.gold.empty()) throw ValidationError("--pred needs --gold");
    preds = ReadJsonl<WhenPrediction>(a.pred);
    gold = ReadJsonl<Example>(a.gold);
    label = "predictions";
  } else {
    if (a.test.empty()) throw ValidationError("eval-when needs --test or --pred");
    if (a.model.empty() == a.baseline.empty()) {
      throw ValidationError("give exactly one of --model and --baseline");
    }
    PipelineConfig pc;
    pc.classifier = a.model.empty() ? ParseClassifierKind(a.baseline)
                                    : ClassifierKind::kForest;
    pc.threshold = a.threshold.value_or(g.config.rf_threshold);
    pc.seed = a.seed.value_or(g.config.rf_seed);
    pc.cap = ParseStepCap(a.cap);
    std::optional<WhenModel> model;
    if (!a.model.empty()) model = WhenModel::Load(a.model);
    const Classifier classifier(pc, model ? &*model : nullptr);
    gold = ReadJsonl<Example>(a.test);
    preds.resize(gold.size());
    ParallelFor(gold.size(), g.threads,
                [&](std::size_t i) { preds[i] = classifier.Predict(gold[i]); });
    if (!a.out.empty()) WriteJsonl(preds, a.out);
    label = ToString(pc.classifier);
  }
  const WhenAccuracyTable table = WhenAccuracy(preds, GoldSteps(gold));
  if (!a.report.empty()) WriteReport(a.report, WhenReportJson(table));
  out << FormatWhenTable({{label, table}});
  if (table.avg_lead) {
    out << "avg lead (t_g - t_p, t_p <= t_g): " << FormatPct(table.avg_lead, 3)
        << "\n";
  }
}

// -------------------------------------------------------------- eval-gen

struct EvalGenArgs {
  std::string hyp, ref, compare, report;
  std::string metrics = "bleu4,meteor,rouge1,rouge2,rougel";
  bool bootstrap = false;
  std::optional<std::uint64_t> seed;
};

void RunEvalGen(const EvalGenArgs& a, const Global& g, std::ostream& out) {
  const std::vector<std::string> metrics = SplitList(a.metrics);
  for (const std::string& m : metrics) MetricByName({}, m);  // validates names
  const auto ref = ReadJsonl<Example>(a.ref);
  const MetricReport hyp =
      ScoreOutputs(ref, ReadJsonl<GeneratorOutput>(a.hyp), g.threads);
  std::vector<std::pair<std::string, MetricReport>> rows = {{a.hyp, hyp}};
  std::optional<MetricReport> other;
  if (!a.compare.empty()) {
    other = ScoreOutputs(ref, ReadJsonl<GeneratorOutput>(a.compare), g.threads);
    rows.emplace_back(a.compare, *other);
  }
  if (a.bootstrap && !other) throw ValidationError("--bootstrap needs --compare");

  const auto golds = GoldSteps(ref);
  OrderedJson by_tg = OrderedJson::object();
  for (const auto& [bucket, scores] : MetricsByTg(hyp, golds)) {
    by_tg[bucket] = MetricScoresJson(scores, metrics);
  }
  OrderedJson sig = OrderedJson::object();
  out << FormatMetricTable(rows, metrics);
  if (a.bootstrap) {
    BootstrapConfig b{g.config.bootstrap_samples, g.config.bootstrap_size,
                      g.config.alpha, a.seed.value_or(g.config.rf_seed),
                      g.threads};
    for (const std::string& m : metrics) {
      const BootstrapResult r = BootstrapCompare(hyp.Column(m), other->Column(m), b);
      sig[m] = BootstrapJson(r);
      out << m << ": p=" << FormatPct(r.p_value, 4)
          << (r.significant ? " significant" : " not significant") << "\n";
    }
  }
  if (!a.report.empty()) {
    WriteReport(a.report, {{"aggregate", MetricScoresJson(hyp.aggregate(), metrics)},
                           {"by_tg", std::move(by_tg)},
                           {"significance", std::move(sig)}});
  }
}

// -------------------------------------------------------------- pipeline

struct PipelineArgs {
  std::string corpus, classifier = "forest", model, out, report, text_report,
                      cap = "tg";
  GenOptions gen;
  std::optional<double> threshold;
  std::optional<std::uint64_t> seed;
};

void RunPipelineCmd(const PipelineArgs& a, const Global& g, std::ostream& out) {
  PipelineConfig pc;
  pc.classifier = ParseClassifierKind(a.classifier);
  pc.generator = MakeSpec(a.gen, g.config);
  pc.threshold = a.threshold.value_or(g.config.rf_threshold);
  pc.seed = a.seed.value_or(g.config.rf_seed);
  pc.cap = ParseStepCap(a.cap);

  // Every resource is resolved before the first example runs.
  std::optional<WhenModel> model;
  if (pc.classifier == ClassifierKind::kForest) {
    if (a.model.empty()) throw ValidationError("forest classifier needs --model");
    model = WhenModel::Load(a.model);
  }
  const Classifier classifier(pc, model ? &*model : nullptr);
  const auto index = MaybeIndex(pc.generator, a.gen.train);
  const Generator generator(pc.generator, index ? &*index : nullptr);
  const auto corpus = ReadJsonl<Example>(a.corpus);
  if (corpus.empty()) throw ValidationError("pipeline corpus is empty");

  BootstrapConfig b{g.config.bootstrap_samples, g.config.bootstrap_size,
                    g.config.alpha, pc.seed, g.threads};
  const PipelineEvaluation eval =
      EvaluatePipeline(corpus, classifier, generator, b, g.threads);
  if (!a.out.empty()) {
    std::vector<GeneratorOutput> outputs;
    for (const PipelineRecord& r : eval.records) outputs.push_back(r.output);
    WriteJsonl(outputs, a.out);
  }
  const std::string text = FormatPipelineReport(eval, pc.generator.Name());
  if (!a.report.empty()) WriteReport(a.report, PipelineReportJson(eval, corpus));
  if (!a.text_report.empty()) WriteFile(a.text_report, text);
  out << text;
}

// ---------------------------------------------------------------- report

struct ReportArgs {
  std::string corpus, out;
  std::vector<std::string> hyps, whens;
};

void RunReport(const ReportArgs& a, const Global& g, std::ostream& out) {
  const auto corpus = ReadJsonl<Example>(a.corpus);
  std::ostringstream text;
  text << "Novel n-grams in the reference description (%)\n"
       << FormatNovelNgramTable(ComputeNovelNgramTable(corpus)) << "\n";

  std::vector<OverlapRow> rows;
  std::vector<std::pair<std::string, MetricReport>> metric_rows;
  for (const auto& [name, path] : NamedPaths(a.hyps)) {
    std::map<std::string, Tokens> outputs;
    const auto hyp = ReadJsonl<GeneratorOutput>(path);
    for (const GeneratorOutput& o : hyp) outputs[o.example_id] = o.tokens;
    rows.push_back(ComputeOverlapRow(name, corpus, outputs));
    metric_rows.emplace_back(name, ScoreOutputs(corpus, hyp, g.threads));
  }
  rows.push_back(ComputeReferenceOverlapRow(corpus));
  text << "N-gram overlap with the title and U_1..U_tg only (%)\n"
       << FormatOverlapTable(rows) << "\n";

  if (!metric_rows.empty()) {
    const std::vector<std::string> metrics(std::begin(kMetricNames),
                                           std::end(kMetricNames));
    text << "Automated metrics (x100)\n"
         << FormatMetricTable(metric_rows, metrics) << "\n";
    std::map<std::string, double> pct;
    for (const Example& e : corpus) pct[e->id] = ReferenceInContextPct(e);
    for (const auto& [name, report] : metric_rows) {
      text << "ROUGE-L by reference-in-context bucket: " << name << "\n";
      for (const auto& [bucket, stats] : BucketReport(report, pct)) {
        text << "  " << bucket << ": n=" << stats.n << " rougeL="
             << FormatPct(100.0 * stats.mean.rougeL_f, 2) << "\n";
      }
    }
    text << "\n";
  }

  if (!a.whens.empty()) {
    const auto golds = GoldSteps(corpus);
    std::vector<std::pair<std::string, WhenAccuracyTable>> columns;
    for (const auto& [name, path] : NamedPaths(a.whens)) {
      columns.emplace_back(name,
                           WhenAccuracy(ReadJsonl<WhenPrediction>(path), golds));
    }
    text << "When-to-generate accuracy (%)\n" << FormatWhenTable(columns) << "\n";
  }
  if (!a.out.empty()) WriteFile(a.out, text.str());
  out << text.str();
}

}  // namespace

int CliMain(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Bug report discussion toolkit: corpus building, noise "
               "filtering, solution description generation and "
               "when-to-generate classification."};
  app.name("bugsol");
  app.require_subcommand(0, 1);
  Global g;
  app.add_option("--config", g.config_path, "key=value configuration file");
  app.add_option("--threads", g.threads, "worker threads")
      ->check(CLI::PositiveNumber);
  app.add_flag("--print-stopwords", g.print_stopwords,
               "print the frozen stopword list and exit");

  IngestArgs ingest;
  auto* c_ingest = app.add_subcommand("ingest", "timelines -> examples");
  c_ingest->add_option("--timelines", ingest.timelines)->required();
  c_ingest->add_option("--out", ingest.out)->required();
  c_ingest->add_option("--aug-out", ingest.aug_out,
                       "write non-bug discussions for augmentation");
  c_ingest->add_option("--rejects", ingest.rejects, "write rejection reasons");
  c_ingest->add_option("--min-actors", ingest.min_actors);

  FetchArgs fetch;
  auto* c_fetch = app.add_subcommand("fetch", "download issue timelines");
  c_fetch->add_option("--project", fetch.project, "owner/name")->required();
  c_fetch->add_option("--issues", fetch.issues, "comma-separated numbers")
      ->required()
      ->delimiter(',');
  c_fetch->add_option("--out", fetch.out)->required();
  c_fetch->add_option("--host", fetch.host, "API base URL");

  FilterArgs filter;
  auto* c_filter = app.add_subcommand("filter", "apply the noise filters");
  c_filter->add_option("--corpus", filter.corpus)->required();
  c_filter->add_option("--out", filter.out, "kept examples")->required();
  c_filter->add_option("--reports", filter.reports, "per-example reports");
  c_filter->add_option("--iwf-corpus", filter.iwf_corpus,
                       "corpus whose descriptions define word frequencies");
  c_filter->add_option("--niwf-threshold", filter.niwf_threshold);
  c_filter->add_option("--niwf-percentile", filter.niwf_percentile,
                       "derive the NIWF threshold as this nearest-rank "
                       "percentile of the IWF corpus");
  c_filter->add_option("--overlap-threshold", filter.overlap_threshold);

  SplitArgs split;
  auto* c_split = app.add_subcommand("split", "time-based train/valid/test");
  c_split->add_option("--corpus", split.corpus)->required();
  c_split->add_option("--out", split.out, "split record")->required();
  c_split->add_option("--fractions", split.fractions, "e.g. 0.8,0.1,0.1");
  c_split->add_option("--train-out", split.train_out);
  c_split->add_option("--valid-out", split.valid_out);
  c_split->add_option("--test-out", split.test_out);

  StatsArgs stats;
  auto* c_stats = app.add_subcommand("stats", "corpus statistics table");
  c_stats->add_option("--corpus", stats.corpus)->required();
  c_stats->add_option("--split", stats.split, "split record (default: time split)");
  c_stats->add_option("--out", stats.out);

  GenArgs gen;
  auto* c_gen = app.add_subcommand("gen", "run a description generator");
  c_gen->add_option("--corpus", gen.corpus)->required();
  c_gen->add_option("--out", gen.out)->required();
  c_gen->add_option("--at", gen.at, "tg | tp | INT");
  c_gen->add_option("--pred", gen.pred, "when predictions for --at tp");
  AddGenOptions(c_gen, gen.gen, "--method");

  TrainWhenArgs tw;
  auto* c_tw = app.add_subcommand("train-when", "train the forest classifier");
  c_tw->add_option("--train", tw.train)->required();
  c_tw->add_option("--aug", tw.aug, "augmentation discussions");
  c_tw->add_option("--out", tw.out)->required();
  c_tw->add_option("--trees", tw.trees);
  c_tw->add_option("--seed", tw.seed);
  c_tw->add_option("--aug-weight", tw.aug_weight);
  c_tw->add_option("--class-weights", tw.class_weights,
                   "balanced | preset | POS,NEG");
  c_tw->add_option("--max-vocab", tw.max_vocab);

  EvalWhenArgs ew;
  auto* c_ew = app.add_subcommand("eval-when", "predict or score t_p");
  c_ew->add_option("--model", ew.model);
  c_ew->add_option("--baseline", ew.baseline,
                   "first | second | rand_uniform | rand_dist | gold_oracle");
  c_ew->add_option("--test", ew.test);
  c_ew->add_option("--out", ew.out, "prediction JSONL");
  c_ew->add_option("--pred", ew.pred);
  c_ew->add_option("--gold", ew.gold);
  c_ew->add_option("--report", ew.report, "JSON report");
  c_ew->add_option("--threshold", ew.threshold);
  c_ew->add_option("--cap", ew.cap, "tg | T");
  c_ew->add_option("--seed", ew.seed);

  EvalGenArgs eg;
  auto* c_eg = app.add_subcommand("eval-gen", "score generated descriptions");
  c_eg->add_option("--hyp", eg.hyp)->required();
  c_eg->add_option("--ref", eg.ref)->required();
  c_eg->add_option("--metrics", eg.metrics);
  c_eg->add_option("--compare", eg.compare);
  c_eg->add_flag("--bootstrap", eg.bootstrap);
  c_eg->add_option("--report", eg.report, "JSON report");
  c_eg->add_option("--seed", eg.seed);

  PipelineArgs pl;
  auto* c_pl = app.add_subcommand("pipeline", "classifier + generator");
  c_pl->add_option("--corpus", pl.corpus)->required();
  c_pl->add_option("--classifier", pl.classifier,
                   "forest | first | second | rand_uniform | rand_dist | "
                   "gold_oracle");
  c_pl->add_option("--model", pl.model);
  c_pl->add_option("--out", pl.out, "outputs at t_p");
  c_pl->add_option("--report", pl.report, "JSON report");
  c_pl->add_option("--text-report", pl.text_report);
  c_pl->add_option("--threshold", pl.threshold);
  c_pl->add_option("--cap", pl.cap, "tg | T");
  c_pl->add_option("--seed", pl.seed);
  AddGenOptions(c_pl, pl.gen, "--generator");

  ReportArgs rp;
  auto* c_rp = app.add_subcommand("report", "analysis tables");
  c_rp->add_option("--corpus", rp.corpus)->required();
  c_rp->add_option("--hyp", rp.hyps, "NAME=outputs.jsonl (repeatable)");
  c_rp->add_option("--when", rp.whens, "NAME=preds.jsonl (repeatable)");
  c_rp->add_option("--out", rp.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (!g.config_path.empty()) g.config = LoadConfig(g.config_path);
    if (g.print_stopwords) {
      for (const std::string& w : Stopwords()) out << w << "\n";
      return kExitOk;
    }
    if (*c_ingest) {
      RunIngest(ingest, g, out);
    } else if (*c_fetch) {
      RunFetch(fetch, out);
    } else if (*c_filter) {
      RunFilter(filter, g, out);
    } else if (*c_split) {
      RunSplit(split, g, out, err);
    } else if (*c_stats) {
      RunStats(stats, g, out);
    } else if (*c_gen) {
      RunGen(gen, g, out);
    } else if (*c_tw) {
      RunTrainWhen(tw, g, out);
    } else if (*c_ew) {
      RunEvalWhen(ew, g, out);
    } else if (*c_eg) {
      RunEvalGen(eg, g, out);
    } else if (*c_pl) {
      RunPipelineCmd(pl, g, out);
    } else if (*c_rp) {
      RunReport(rp, g, out);
    } else {
      err << app.help();
      return kExitValidation;
    }
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitOk;
}

}  // namespace bugsol
