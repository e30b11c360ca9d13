// Copyright 2026 The CTSR Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "commands.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "json.hpp"

#include "ctsr/binary_io.hpp"
#include "ctsr/corpus_io.hpp"
#include "ctsr/dataset.hpp"
#include "ctsr/evaluation.hpp"
#include "ctsr/metrics.hpp"
#include "ctsr/model_io.hpp"
#include "ctsr/scorer.hpp"
#include "ctsr/synthetic.hpp"
#include "ctsr/training.hpp"
#include "options.hpp"

namespace ctsr::cli {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

constexpr const char* kVersion = "0.1.0";

Json ManifestHead(const char* subcommand) {
  Json m;
  m["tool"] = "ctsr";
  m["version"] = kVersion;
  m["subcommand"] = subcommand;
  return m;
}

void WriteManifest(const fs::path& path, const Json& manifest) {
  io::WriteFileAtomic(path, manifest.dump(2) + "\n");
}

fs::path SidecarManifest(const fs::path& file) {
  fs::path p = file;
  p += ".manifest.json";
  return p;
}

Json RatiosJson(const SplitRatios& r) {
  return Json{{"train", r.train}, {"val", r.val}, {"test", r.test}};
}

void Require(bool ok, const std::string& message) {
  if (!ok) throw UsageError(message);
}

std::string ValidMethodList() {
  std::string names;
  for (const char* n : kMethodNames) names += names.empty() ? n : std::string(", ") + n;
  return names;
}

bool IsNeural(std::string_view method) { return method == "rn1d" || method == "rn2d"; }

void CheckMethod(std::string_view method) {
  if (std::find(std::begin(kMethodNames), std::end(kMethodNames), method) ==
      std::end(kMethodNames)) {
    throw UsageError(fmt::format("unknown method '{}'; valid methods: {}", method,
                                 ValidMethodList()));
  }
}

std::unique_ptr<NeuralModel> LoadNeural(const fs::path& checkpoint,
                                   std::string_view method,
                                   const CorpusIndex& corpus) {
  LoadedModel loaded = LoadModel(checkpoint);
  if (loaded.model->kind() != method) {
    throw UsageError(fmt::format("checkpoint '{}' holds a {} model, not {}",
                                 checkpoint.string(), loaded.model->kind(), method));
  }
  if (loaded.common_length != corpus.common_length()) {
    throw UsageError(fmt::format(
        "checkpoint '{}' was trained at length {} but the corpus uses {}",
        checkpoint.string(), loaded.common_length, corpus.common_length()));
  }
  return std::move(loaded.model);
}

std::vector<std::int64_t> SplitIds(const CorpusIndex& corpus,
                                   std::optional<Split> split) {
  if (split) return corpus.Members(*split);
  std::vector<std::int64_t> ids(corpus.size());
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<std::int64_t>(i);
  return ids;
}

std::string SplitLabel(std::optional<Split> split) {
  return split ? std::string(SplitName(*split)) : "all";
}

void PrintCorpusSummary(const CorpusIndex& corpus, std::ostream& out) {
  std::map<std::string, std::size_t> per_dataset;
  for (const TimeSeries& s : corpus.series()) ++per_dataset[s.dataset_id];
  fmt::print(out, "series: {}\n", corpus.size());
  fmt::print(out, "datasets: {}\n", per_dataset.size());
  fmt::print(out, "groups: {}\n", corpus.groups().size());
  fmt::print(out, "length: {}\n", corpus.common_length());
  fmt::print(out, "split train={} val={} test={}\n",
             corpus.Members(Split::kTrain).size(),
             corpus.Members(Split::kVal).size(),
             corpus.Members(Split::kTest).size());
}

}  // namespace

int RunIngest(const IngestOptions& o, std::ostream& out, std::ostream&) {
  Require(!o.out.empty(), "ingest: --out is required");
  Require(o.length >= 2, "ingest: --length must be at least 2");
  if (!fs::is_directory(o.archive)) {
    throw UsageError(
        fmt::format("ingest: archive directory '{}' does not exist", o.archive.string()));
  }
  const SplitRatios ratios = ParseRatios(o.ratios);
  const CorpusIndex corpus = BuildCorpusFromArchive(o.archive, ratios, o.length, o.seed);
  SaveCorpus(o.out, corpus);

  Json m = ManifestHead("ingest");
  m["config"] = {{"archive", o.archive.string()}, {"length", o.length},
                 {"seed", o.seed}, {"ratios", RatiosJson(ratios)}};
  m["outputs"] = {o.out.string()};
  WriteManifest(SidecarManifest(o.out), m);
  PrintCorpusSummary(corpus, out);
  return 0;
}

int RunSynth(const SynthOptions& o, std::ostream& out, std::ostream&) {
  Require(!o.out.empty(), "synth: --out is required");
  Require(o.length >= 2, "synth: --length must be at least 2");
  SynthConfig config;
  config.seed = o.seed;
  config.length = o.length;
  config.n_domains = o.domains;
  config.classes_per_domain = o.classes;
  config.series_per_class = o.per_class;
  config.noise = o.noise;
  config.ratios = ParseRatios(o.ratios);
  const CorpusIndex corpus = SynthMultidomain(config);
  SaveCorpus(o.out, corpus);

  Json m = ManifestHead("synth");
  m["config"] = {{"length", o.length},     {"seed", o.seed},
                 {"domains", o.domains},   {"classes", o.classes},
                 {"per_class", o.per_class}, {"noise", o.noise},
                 {"ratios", RatiosJson(config.ratios)}};
  m["outputs"] = {o.out.string()};
  WriteManifest(SidecarManifest(o.out), m);
  PrintCorpusSummary(corpus, out);
  return 0;
}

int RunTrain(const TrainOptions& o, std::ostream& out, std::ostream&) {
  Require(!o.out.empty(), "train: --out is required");
  Require(IsNeural(o.model), fmt::format("train: --model must be rn1d or rn2d, got '{}'",
                                         o.model));
  Require(o.batch_size > 0 && o.steps > 0 && o.val_queries > 0 && o.k > 0,
          "train: --batch-size, --steps, --val-queries and --k must be positive");
  Require(o.lr >= 0.0, "train: --lr must be non-negative");
  const CorpusIndex corpus = LoadCorpus(o.corpus);

  std::unique_ptr<NeuralModel> model;
  if (o.checkpoint.empty()) {
    model = MakeModel(o.model, o.seed);
  } else {
    model = LoadNeural(o.checkpoint, o.model, corpus);
  }

  TrainConfig config;
  config.batch_size = o.batch_size;
  config.epochs = o.epochs;
  config.steps_per_epoch = o.steps;
  config.learning_rate = o.lr;
  config.seed = o.seed;
  config.validation_queries = o.val_queries;
  config.selection_k = o.k;
  config.threads = ResolveThreads(o.threads);

  const TrainResult result = Train(*model, corpus, config, [&](const EpochRecord& r) {
    fmt::print(out, "epoch {}/{} loss {:.6f} val_ndcg@{} {:.4f} ({:.1f} s)\n", r.epoch,
               config.epochs, r.mean_loss, o.k, r.val_ndcg, r.wall_ms / 1000.0);
    out.flush();
  });
  WriteTrainingArtifacts(o.out, result, o.k);

  Json m = ManifestHead("train");
  m["config"] = {{"corpus", o.corpus.string()},
                 {"model", o.model},
                 {"checkpoint", o.checkpoint.string()},
                 {"epochs", o.epochs},
                 {"batch_size", o.batch_size},
                 {"steps", o.steps},
                 {"lr", o.lr},
                 {"val_queries", o.val_queries},
                 {"k", o.k},
                 {"seed", o.seed},
                 {"threads", config.threads}};
  m["parameters"] = model->ParameterCount();
  m["best_epoch"] = result.best_epoch;
  m["initial_val_ndcg"] =
      result.initial_val_ndcg ? Json(*result.initial_val_ndcg) : Json(nullptr);
  Json outputs = Json::array({"init.ckpt"});
  for (const EpochRecord& r : result.history) {
    outputs.push_back(fmt::format("epoch_{:03d}.ckpt", r.epoch));
  }
  for (const char* f : {"best.ckpt", "train_log.csv", "train_timing.csv"}) {
    outputs.push_back(f);
  }
  m["outputs"] = outputs;
  WriteManifest(o.out / "manifest.json", m);
  if (result.initial_val_ndcg) {
    fmt::print(out, "untrained val_ndcg@{} {:.4f}\n", o.k, *result.initial_val_ndcg);
  }
  fmt::print(out, "best epoch: {}\n", result.best_epoch);
  return 0;
}

int RunEval(const EvalOptions& o, std::ostream& out, std::ostream& err) {
  Require(!o.out.empty(), "eval: --out is required");
  const auto methods = ParseMethodList(o.methods);
  Require(!methods.empty(), "eval: --method lists no methods");
  for (const auto& m : methods) CheckMethod(m);
  const auto ks = ParseKs(o.ks);
  const auto query_split = ParseSplitOrAll(o.queries);
  const auto db_split = ParseSplitOrAll(o.database);
  const CorpusIndex corpus = LoadCorpus(o.corpus);

  // Checkpoints are matched to neural methods by the model kind they store.
  std::map<std::string, fs::path> checkpoint_for;
  for (const fs::path& path : o.checkpoints) {
    const Checkpoint ckpt = LoadCheckpoint(path);
    const auto kind_it = ckpt.metadata.find(std::string(kModelKindKey));
    if (kind_it == ckpt.metadata.end()) {
      throw UsageError(fmt::format("eval: '{}' is not a model checkpoint", path.string()));
    }
    const std::string& kind = kind_it->second;
    if (!checkpoint_for.emplace(kind, path).second) {
      throw UsageError(fmt::format("eval: more than one {} checkpoint given", kind));
    }
    if (std::find(methods.begin(), methods.end(), kind) == methods.end()) {
      fmt::print(err, "warning: checkpoint '{}' ({}) is not used by --method\n",
                 path.string(), kind);
    }
  }
  std::vector<std::unique_ptr<Scorer>> owned;
  for (const auto& m : methods) {
    if (IsNeural(m)) {
      const auto it = checkpoint_for.find(m);
      if (it == checkpoint_for.end()) {
        throw UsageError(fmt::format("eval: method {} needs --checkpoint", m));
      }
      owned.push_back(LoadNeural(it->second, m, corpus));
    } else {
      owned.push_back(MakeDistanceScorer(*ParseDistanceMethod(m)));
    }
  }
  std::vector<Scorer*> scorers;
  for (auto& s : owned) scorers.push_back(s.get());

  const auto query_ids = SplitIds(corpus, query_split);
  const auto db_ids = SplitIds(corpus, db_split);
  Require(!query_ids.empty(), "eval: the query split is empty");
  Require(!db_ids.empty(), "eval: the database split is empty");
  if (query_split == db_split) {
    fmt::print(err, "warning: queries and database share a split; each query "
                    "retrieves itself\n");
  }
  const unsigned threads = ResolveThreads(o.threads);
  const EvalReport report = Evaluate(corpus.EvalItems(query_ids),
                                     corpus.EvalItems(db_ids), scorers, ks, threads);

  fs::create_directories(o.out);
  Json outputs = Json::array({"report.csv"});
  io::WriteFileAtomic(o.out / "report.csv", ReportCsv(report));
  if (o.per_query) {
    io::WriteFileAtomic(o.out / "per_query.csv", PerQueryCsv(report));
    outputs.push_back("per_query.csv");
    if (methods.size() >= 2) {
      io::WriteFileAtomic(o.out / "ttests.csv", TTestCsv(PairwiseTTests(report)));
      outputs.push_back("ttests.csv");
    }
  }
  Json checkpoints = Json::object();
  for (const auto& [kind, path] : checkpoint_for) checkpoints[kind] = path.string();
  Json m = ManifestHead("eval");
  m["config"] = {{"corpus", o.corpus.string()}, {"methods", methods},
                 {"checkpoints", checkpoints},  {"ks", ks},
                 {"queries", SplitLabel(query_split)},
                 {"database", SplitLabel(db_split)},
                 {"per_query", o.per_query},    {"threads", threads}};
  m["outputs"] = outputs;
  WriteManifest(o.out / "manifest.json", m);

  const std::size_t k_show =
      std::find(ks.begin(), ks.end(), 10) != ks.end() ? 10 : ks.front();
  fmt::print(out, "{} queries, {} database series\n", query_ids.size(), db_ids.size());
  fmt::print(out, "{:<6} {:>9} {:>9} {:>9}\n", "method", fmt::format("prec@{}", k_show),
             fmt::format("ap@{}", k_show), fmt::format("ndcg@{}", k_show));
  for (const MethodResult& r : report.methods) {
    const std::size_t ki = report.KIndex(k_show);
    fmt::print(out, "{:<6} {:>9.4f} {:>9.4f} {:>9.4f}\n", r.method,
               r.Mean(Metric::kPrecision, ki), r.Mean(Metric::kAveragePrecision, ki),
               r.Mean(Metric::kNdcg, ki));
  }
  return 0;
}

int RunQuery(const QueryOptions& o, std::ostream& out, std::ostream& err) {
  CheckMethod(o.method);
  Require(o.top_k > 0, "query: --top-k must be positive");
  Require(o.series_id.has_value() != !o.query_file.empty(),
          "query: give exactly one of --query or --series-id");
  const auto db_split = ParseSplitOrAll(o.database);
  const CorpusIndex corpus = LoadCorpus(o.corpus);
  const std::size_t length = corpus.common_length();

  std::unique_ptr<Scorer> scorer;
  if (IsNeural(o.method)) {
    Require(!o.checkpoint.empty(),
            fmt::format("query: method {} needs --checkpoint", o.method));
    scorer = LoadNeural(o.checkpoint, o.method, corpus);
  } else {
    scorer = MakeDistanceScorer(*ParseDistanceMethod(o.method));
  }

  std::vector<double> query;
  std::optional<std::size_t> query_group;
  std::int64_t query_id = -1;
  if (o.series_id) {
    Require(*o.series_id >= 0 &&
                static_cast<std::size_t>(*o.series_id) < corpus.size(),
            fmt::format("query: series id {} is not in the corpus", *o.series_id));
    query_id = *o.series_id;
    const auto& v = corpus.Get(query_id).values;
    query.assign(v.begin(), v.end());
    query_group = corpus.GroupOf(query_id);
  } else {
    std::vector<double> raw = ReadSingleColumn(o.query_file);
    if (raw.size() != length) {
      fmt::print(err, "warning: query has {} values; resampled to {}\n", raw.size(),
                 length);
      raw = ResampleLinear(raw, length);
    }
    ZNormalized z = ZNormalize(raw);
    if (z.constant) fmt::print(err, "warning: query is constant\n");
    query = std::move(z.values);
  }

  const auto db_ids = SplitIds(corpus, db_split);
  Require(!db_ids.empty(), "query: the database split is empty");
  SeriesSpans database;
  database.reserve(db_ids.size());
  for (std::int64_t id : db_ids) database.emplace_back(corpus.Get(id).values);
  scorer->Prepare(database);
  const RankedList ranked = RankByScores(query_id, db_ids,
                                         scorer->ScoreDatabase(query, database));

  std::string table = "rank,series_id,dataset_id,class_label,score,relevant\n";
  const std::size_t n = std::min(o.top_k, ranked.items.size());
  for (std::size_t r = 0; r < n; ++r) {
    const RankedItem& item = ranked.items[r];
    const TimeSeries& s = corpus.Get(item.series_id);
    const std::string relevant =
        query_group ? (corpus.GroupOf(item.series_id) == *query_group ? "1" : "0") : "";
    table += fmt::format("{},{},{},{},{},{}\n", r + 1, item.series_id, s.dataset_id,
                         s.class_label, item.score, relevant);
  }
  out << table;

  if (!o.out.empty()) {
    fs::create_directories(o.out);
    io::WriteFileAtomic(o.out / "query.csv", table);
    Json m = ManifestHead("query");
    m["config"] = {{"corpus", o.corpus.string()},
                   {"method", o.method},
                   {"checkpoint", o.checkpoint.string()},
                   {"query", o.query_file.string()},
                   {"series_id", o.series_id ? Json(*o.series_id) : Json(nullptr)},
                   {"top_k", o.top_k},
                   {"database", SplitLabel(db_split)}};
    m["outputs"] = {"query.csv"};
    WriteManifest(o.out / "manifest.json", m);
  }
  return 0;
}

int RunExport(const ExportOptions& o, std::ostream& out, std::ostream&) {
  Require(!o.out.empty(), "export: --out is required");
  const CorpusIndex corpus = LoadCorpus(o.corpus);
  io::WriteFileAtomic(o.out, CorpusCsv(corpus));
  Json m = ManifestHead("export");
  m["config"] = {{"corpus", o.corpus.string()}};
  m["outputs"] = {o.out.string()};
  WriteManifest(SidecarManifest(o.out), m);
  fmt::print(out, "wrote {} series to {}\n", corpus.size(), o.out.string());
  return 0;
}

}  // namespace ctsr::cli
