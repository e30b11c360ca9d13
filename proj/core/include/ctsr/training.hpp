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

#ifndef CTSR_TRAINING_HPP_
#define CTSR_TRAINING_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "ctsr/autograd.hpp"
#include "ctsr/checkpoint.hpp"
#include "ctsr/dataset.hpp"
#include "ctsr/error.hpp"
#include "ctsr/neural_model.hpp"

namespace ctsr {

struct Triplet {
  std::int64_t anchor_id = 0;
  std::int64_t positive_id = 0;
  std::int64_t negative_id = 0;

  friend bool operator==(const Triplet&, const Triplet&) = default;
};

// Draws BPR training triplets from one split of a corpus: anchor uniform over
// series whose group has another member in the split, positive uniform over
// the anchor's other group members, negative uniform over series of other
// groups.
class TripletSampler {
 public:
  // Throws std::invalid_argument when no valid triplet exists.
  explicit TripletSampler(const CorpusIndex& corpus, Split split = Split::kTrain);

  Triplet Sample(std::mt19937_64& rng) const;

  const CorpusIndex& corpus() const { return *corpus_; }

 private:
  const CorpusIndex* corpus_;
  std::vector<std::int64_t> pool_;
  // Members of each group within the split.
  std::vector<std::vector<std::int64_t>> group_members_;
};

// mean_i softplus(neg_i - pos_i) = mean_i -log sigmoid(pos_i - neg_i).
// Throws ShapeError on mismatched shapes and std::invalid_argument on an
// empty batch.
Var BprLoss(const Var& positive_scores, const Var& negative_scores);

struct TrainConfig {
  std::size_t batch_size = 32;
  std::size_t epochs = 30;
  std::size_t steps_per_epoch = 200;
  double learning_rate = 1e-3;
  std::uint64_t seed = 0;
  // Cap on validation queries scored after each epoch.
  std::size_t validation_queries = 500;
  std::size_t selection_k = 10;
  unsigned threads = 1;
};

struct EpochRecord {
  std::size_t epoch = 0;  // 1-based
  double mean_loss = 0.0;
  double val_ndcg = 0.0;
  double wall_ms = 0.0;
  Checkpoint checkpoint;
};

struct TrainResult {
  Checkpoint initial;
  // Validation NDCG of the untrained model; unset when epochs == 0.
  std::optional<double> initial_val_ndcg;
  std::vector<EpochRecord> history;
  // 0 when history is empty (the initial parameters win).
  std::size_t best_epoch = 0;
  const Checkpoint& best() const;
};

// Non-finite loss during training.
class TrainingError : public NumericError {
 public:
  TrainingError(const std::string& what, std::vector<Triplet> batch)
      : NumericError(what), batch_(std::move(batch)) {}
  const std::vector<Triplet>& batch() const { return batch_; }

 private:
  std::vector<Triplet> batch_;
};

// Index into `history` of the highest val_ndcg, earliest epoch on ties;
// nullopt for an empty history.
std::optional<std::size_t> SelectBest(std::span<const EpochRecord> history);

// Validation queries used by Train: the corpus validation split, capped at
// `cap` by a seed-determined subsample, in ascending id order.
std::vector<std::int64_t> ValidationQueryIds(const CorpusIndex& corpus,
                                             std::size_t cap, std::uint64_t seed);

// Mean NDCG@k of `model` for the given queries against the training split.
double ValidationNdcg(NeuralModel& model, const CorpusIndex& corpus,
                      std::span<const std::int64_t> query_ids, std::size_t k,
                      unsigned threads);

// BPR training with Adam. After every epoch the validation NDCG@k is
// recorded with a parameter snapshot; on return `model` holds the selected
// (best) parameters. Deterministic for a given (model init, corpus, config).
TrainResult Train(NeuralModel& model, const CorpusIndex& corpus,
                  const TrainConfig& config,
                  const std::function<void(const EpochRecord&)>& on_epoch = {});

// Writes init.ckpt, epoch_NNN.ckpt per epoch, best.ckpt, train_log.csv
// (epoch,mean_loss,val_ndcg10) and train_timing.csv (epoch,wall_ms).
void WriteTrainingArtifacts(const std::filesystem::path& dir,
                            const TrainResult& result, std::size_t selection_k);

// Copies checkpoint parameters into `model` (names and shapes must match).
void LoadParameters(NeuralModel& model, const Checkpoint& ckpt);

}  // namespace ctsr

#endif  // CTSR_TRAINING_HPP_
