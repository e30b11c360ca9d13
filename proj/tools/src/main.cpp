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

#include <exception>
#include <iostream>

#if defined(__GLIBC__)
#include <malloc.h>
#endif

#include "CLI11.hpp"

#include "commands.hpp"

using namespace ctsr::cli;

int main(int argc, char** argv) {
#if defined(__GLIBC__)
  // Training rebuilds megabytes of activations every step. Keep freed blocks
  // in the heap instead of returning them to the kernel and faulting them in
  // again on the next step.
  mallopt(M_MMAP_THRESHOLD, 32 << 20);
  mallopt(M_TRIM_THRESHOLD, 1 << 30);
#endif
  CLI::App app{"Content-based time series retrieval: ED, DTW and learned scorers"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "ctsr 0.1.0");

  IngestOptions ingest;
  auto* c_ingest = app.add_subcommand("ingest", "Build a corpus file from a UCR-style archive");
  c_ingest->add_option("archive", ingest.archive, "Archive root (one folder per dataset)")
      ->required();
  c_ingest->add_option("--out", ingest.out, "Corpus file to write")->required();
  c_ingest->add_option("--length", ingest.length, "Common series length L")
      ->capture_default_str();
  c_ingest->add_option("--seed", ingest.seed, "Split seed")->capture_default_str();
  c_ingest->add_option("--ratios", ingest.ratios, "train,val,test fractions")
      ->capture_default_str();

  SynthOptions synth;
  auto* c_synth = app.add_subcommand("synth", "Generate the synthetic multi-domain corpus");
  c_synth->add_option("--out", synth.out, "Corpus file to write")->required();
  c_synth->add_option("--length", synth.length, "Common series length L")
      ->capture_default_str();
  c_synth->add_option("--seed", synth.seed, "Generator and split seed")
      ->capture_default_str();
  c_synth->add_option("--domains", synth.domains, "Number of domains")
      ->capture_default_str();
  c_synth->add_option("--classes", synth.classes, "Classes per domain")
      ->capture_default_str();
  c_synth->add_option("--per-class", synth.per_class, "Series per class")
      ->capture_default_str();
  c_synth->add_option("--noise", synth.noise, "Additive noise std")->capture_default_str();
  c_synth->add_option("--ratios", synth.ratios, "train,val,test fractions")
      ->capture_default_str();

  TrainOptions train;
  auto* c_train = app.add_subcommand("train", "Train a neural scorer with BPR triplets");
  c_train->add_option("--corpus", train.corpus, "Corpus file")->required();
  c_train->add_option("--model", train.model, "Model kind: rn2d or rn1d")
      ->capture_default_str();
  c_train->add_option("--checkpoint", train.checkpoint, "Start from this checkpoint");
  c_train->add_option("--out", train.out, "Output directory")->required();
  c_train->add_option("--epochs", train.epochs)->capture_default_str();
  c_train->add_option("--batch-size", train.batch_size)->capture_default_str();
  c_train->add_option("--steps", train.steps, "Steps per epoch")->capture_default_str();
  c_train->add_option("--lr", train.lr, "Adam learning rate")->capture_default_str();
  c_train->add_option("--val-queries", train.val_queries,
                      "Cap on validation queries per epoch")
      ->capture_default_str();
  c_train->add_option("--k", train.k, "Cutoff of the NDCG used for selection")
      ->capture_default_str();
  c_train->add_option("--seed", train.seed, "Initialization and sampling seed")
      ->capture_default_str();
  c_train->add_option("--threads", train.threads,
                      "Validation workers (default: CTSR_THREADS or all cores)");

  EvalOptions eval;
  auto* c_eval = app.add_subcommand("eval", "Evaluate scorers on a query split");
  c_eval->add_option("--corpus", eval.corpus, "Corpus file")->required();
  c_eval->add_option("--method", eval.methods, "Comma separated: ed,dtw,rn1d,rn2d")
      ->capture_default_str();
  c_eval->add_option("--checkpoint", eval.checkpoints,
                     "Checkpoint for a neural method (repeatable)");
  c_eval->add_option("--k,--ks", eval.ks, "Cutoffs, e.g. 10 or 5-15 or 5,10")
      ->capture_default_str();
  c_eval->add_option("--queries", eval.queries, "Query split")->capture_default_str();
  c_eval->add_option("--database", eval.database, "Database split or 'all'")
      ->capture_default_str();
  c_eval->add_option("--out", eval.out, "Output directory")->required();
  c_eval->add_flag("--per-query", eval.per_query,
                   "Also write per-query values and pairwise Welch t-tests");
  c_eval->add_option("--threads", eval.threads,
                     "Workers (default: CTSR_THREADS or all cores)");

  QueryOptions query;
  std::int64_t series_id = -1;
  auto* c_query = app.add_subcommand("query", "Rank the database for one query");
  c_query->add_option("--corpus", query.corpus, "Corpus file")->required();
  c_query->add_option("--method", query.method)->capture_default_str();
  c_query->add_option("--checkpoint", query.checkpoint, "Checkpoint for rn1d/rn2d");
  auto* o_file = c_query->add_option("--query", query.query_file,
                                     "Single-column file, one value per line");
  auto* o_id = c_query->add_option("--series-id", series_id, "Corpus series as query");
  o_file->excludes(o_id);
  c_query->add_option("--top-k", query.top_k)->capture_default_str();
  c_query->add_option("--database", query.database, "Database split or 'all'")
      ->capture_default_str();
  c_query->add_option("--out", query.out, "Directory for query.csv and manifest");

  ExportOptions exp;
  auto* c_export = app.add_subcommand("export", "Write a corpus file as CSV");
  c_export->add_option("--corpus", exp.corpus, "Corpus file")->required();
  c_export->add_option("--out", exp.out, "CSV file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*c_ingest) return RunIngest(ingest, std::cout, std::cerr);
    if (*c_synth) return RunSynth(synth, std::cout, std::cerr);
    if (*c_train) return RunTrain(train, std::cout, std::cerr);
    if (*c_eval) return RunEval(eval, std::cout, std::cerr);
    if (*c_query) {
      if (o_id->count() > 0) query.series_id = series_id;
      return RunQuery(query, std::cout, std::cerr);
    }
    if (*c_export) return RunExport(exp, std::cout, std::cerr);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
