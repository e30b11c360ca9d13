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

#include "ctsr/training.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "ctsr/binary_io.hpp"
#include "ctsr/evaluation.hpp"
#include "ctsr/model_io.hpp"
#include "ctsr/optimizer.hpp"

namespace ctsr {

TripletSampler::TripletSampler(const CorpusIndex& corpus, Split split)
    : corpus_(&corpus), group_members_(corpus.groups().size()) {
  for (std::int64_t id : corpus.Members(split)) {
    group_members_[corpus.GroupOf(id)].push_back(id);
  }
  const auto& members = corpus.Members(split);
  pool_.assign(members.begin(), members.end());
  const bool has_anchor = std::any_of(
      group_members_.begin(), group_members_.end(),
      [](const auto& g) { return g.size() >= 2; });
  const std::size_t non_empty = std::count_if(
      group_members_.begin(), group_members_.end(),
      [](const auto& g) { return !g.empty(); });
  if (!has_anchor || non_empty < 2) {
    throw std::invalid_argument(fmt::format(
        "TripletSampler: split '{}' needs a group with >= 2 members and at "
        "least two groups",
        SplitName(split)));
  }
}

Triplet TripletSampler::Sample(std::mt19937_64& rng) const {
  std::uniform_int_distribution<std::size_t> pick_anchor(0, pool_.size() - 1);
  std::int64_t anchor = 0;
  std::size_t group = 0;
  do {
    anchor = pool_[pick_anchor(rng)];
    group = corpus_->GroupOf(anchor);
  } while (group_members_[group].size() < 2);

  const auto& peers = group_members_[group];
  std::uniform_int_distribution<std::size_t> pick_peer(0, peers.size() - 2);
  std::size_t p = pick_peer(rng);
  // Skip over the anchor's own slot.
  const auto self = static_cast<std::size_t>(
      std::find(peers.begin(), peers.end(), anchor) - peers.begin());
  if (p >= self) ++p;
  const std::int64_t positive = peers[p];

  const std::size_t n_others = pool_.size() - peers.size();
  std::uniform_int_distribution<std::size_t> pick_other(0, n_others - 1);
  std::size_t r = pick_other(rng);
  std::int64_t negative = -1;
  for (std::int64_t id : pool_) {
    if (corpus_->GroupOf(id) == group) continue;
    if (r-- == 0) {
      negative = id;
      break;
    }
  }
  return {anchor, positive, negative};
}

Var BprLoss(const Var& positive_scores, const Var& negative_scores) {
  if (positive_scores.shape() != negative_scores.shape()) {
    throw ShapeError("bpr_loss", "batch",
                     ShapeString(positive_scores.shape()) + " vs " +
                         ShapeString(negative_scores.shape()));
  }
  if (positive_scores.value().empty()) {
    throw std::invalid_argument("bpr_loss: empty batch");
  }
  return ops::Mean(ops::Softplus(ops::Sub(negative_scores, positive_scores)));
}

const Checkpoint& TrainResult::best() const {
  return best_epoch == 0 ? initial : history[best_epoch - 1].checkpoint;
}

std::optional<std::size_t> SelectBest(std::span<const EpochRecord> history) {
  if (history.empty()) return std::nullopt;
  std::size_t best = 0;
  for (std::size_t i = 1; i < history.size(); ++i) {
    if (history[i].val_ndcg > history[best].val_ndcg) best = i;
  }
  return best;
}

std::vector<std::int64_t> ValidationQueryIds(const CorpusIndex& corpus,
                                             std::size_t cap, std::uint64_t seed) {
  std::vector<std::int64_t> ids = corpus.Members(Split::kVal);
  if (ids.size() > cap) {
    std::mt19937_64 rng(seed ^ 0x5A17u);
    std::shuffle(ids.begin(), ids.end(), rng);
    ids.resize(cap);
    std::sort(ids.begin(), ids.end());
  }
  return ids;
}

double ValidationNdcg(NeuralModel& model, const CorpusIndex& corpus,
                      std::span<const std::int64_t> query_ids, std::size_t k,
                      unsigned threads) {
  const auto queries = corpus.EvalItems(query_ids);
  const auto database = corpus.EvalItems(Split::kTrain);
  Scorer* scorers[] = {&model};
  const EvalReport report = Evaluate(queries, database, scorers, {k}, threads);
  return report.methods.front().Mean(Metric::kNdcg, 0);
}

void LoadParameters(NeuralModel& model, const Checkpoint& ckpt) {
  const auto params = model.Parameters();
  if (params.size() != ckpt.params.size()) {
    throw std::invalid_argument("LoadParameters: parameter count mismatch");
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (ckpt.params[i].first != params[i]->name() ||
        ckpt.params[i].second.shape() != params[i]->value().shape()) {
      throw std::invalid_argument("LoadParameters: parameter '" +
                                  params[i]->name() + "' does not match");
    }
    params[i]->value() = ckpt.params[i].second;
  }
}

TrainResult Train(NeuralModel& model, const CorpusIndex& corpus,
                  const TrainConfig& config,
                  const std::function<void(const EpochRecord&)>& on_epoch) {
  if (config.batch_size == 0 || config.steps_per_epoch == 0 ||
      config.selection_k == 0 || config.validation_queries == 0 ||
      !(config.learning_rate >= 0.0)) {
    throw std::invalid_argument("Train: invalid configuration");
  }
  const std::size_t length = corpus.common_length();
  TrainResult result;
  result.initial = ModelToCheckpoint(model, length);
  if (config.epochs == 0) return result;

  const TripletSampler sampler(corpus, Split::kTrain);
  if (corpus.Members(Split::kVal).empty()) {
    throw std::invalid_argument("Train: corpus has no validation split");
  }
  const auto val_ids =
      ValidationQueryIds(corpus, config.validation_queries, config.seed);
  std::mt19937_64 rng(config.seed * 0x9E3779B97F4A7C15ull + 1);
  result.initial_val_ndcg =
      ValidationNdcg(model, corpus, val_ids, config.selection_k, config.threads);

  const std::vector<Parameter*> params = model.Parameters();
  OptimizerState state =
      MakeAdamState(params, AdamConfig{.learning_rate = config.learning_rate});

  std::vector<Triplet> batch(config.batch_size);
  std::vector<TripletValues> values(config.batch_size);
  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    const auto start = std::chrono::steady_clock::now();
    double loss_sum = 0.0;
    for (std::size_t step = 0; step < config.steps_per_epoch; ++step) {
      for (std::size_t i = 0; i < config.batch_size; ++i) {
        batch[i] = sampler.Sample(rng);
        values[i] = {corpus.Get(batch[i].anchor_id).values,
                     corpus.Get(batch[i].positive_id).values,
                     corpus.Get(batch[i].negative_id).values};
      }
      double loss_value = 0.0;
      {
        auto [pos, neg] = model.TripletScores(values);
        const Var loss = BprLoss(pos, neg);
        loss_value = loss.value()[0];
        if (!std::isfinite(loss_value)) {
          std::string ids;
          for (const Triplet& t : batch) {
            ids += fmt::format(" ({},{},{})", t.anchor_id, t.positive_id, t.negative_id);
          }
          throw TrainingError(fmt::format("non-finite loss at epoch {} step {}; "
                                          "triplets:{}",
                                          epoch, step, ids),
                              batch);
        }
        Backward(loss);
      }
      AdamStep(params, state);
      model.ZeroGrad();
      loss_sum += loss_value;
    }
    EpochRecord record;
    record.epoch = epoch;
    record.mean_loss = loss_sum / static_cast<double>(config.steps_per_epoch);
    record.val_ndcg =
        ValidationNdcg(model, corpus, val_ids, config.selection_k, config.threads);
    record.checkpoint = ModelToCheckpoint(model, length);
    record.wall_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - start)
                         .count();
    result.history.push_back(std::move(record));
    if (on_epoch) on_epoch(result.history.back());
  }
  result.best_epoch = *SelectBest(result.history) + 1;
  LoadParameters(model, result.best());
  return result;
}

void WriteTrainingArtifacts(const std::filesystem::path& dir,
                            const TrainResult& result, std::size_t selection_k) {
  std::filesystem::create_directories(dir);
  SaveCheckpoint(dir / "init.ckpt", result.initial);
  std::string log = fmt::format("epoch,mean_loss,val_ndcg{}\n", selection_k);
  std::string timing = "epoch,wall_ms\n";
  for (const EpochRecord& r : result.history) {
    SaveCheckpoint(dir / fmt::format("epoch_{:03d}.ckpt", r.epoch), r.checkpoint);
    log += fmt::format("{},{},{}\n", r.epoch, r.mean_loss, r.val_ndcg);
    timing += fmt::format("{},{:.1f}\n", r.epoch, r.wall_ms);
  }
  SaveCheckpoint(dir / "best.ckpt", result.best());
  io::WriteFileAtomic(dir / "train_log.csv", log);
  io::WriteFileAtomic(dir / "train_timing.csv", timing);
}

}  // namespace ctsr
