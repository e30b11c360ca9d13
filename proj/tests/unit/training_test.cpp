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

#include <cmath>
#include <filesystem>
#include <limits>
#include <map>
#include <numbers>

#include <boost/math/distributions/chi_squared.hpp>
#include <gtest/gtest.h>

#include "ctsr/binary_io.hpp"
#include "ctsr/model_io.hpp"
#include "ctsr/rn2d.hpp"
#include "ctsr/synthetic.hpp"

namespace ctsr {
namespace {

namespace fs = std::filesystem;

TimeSeries Series(std::int64_t id, std::string dataset, std::string label,
                  Split split = Split::kTrain) {
  TimeSeries s;
  s.series_id = id;
  s.dataset_id = std::move(dataset);
  s.class_label = std::move(label);
  s.split = split;
  s.values = {-1.0, 1.0};
  return s;
}

CorpusIndex SmallSynth(std::uint64_t seed = 1) {
  SynthConfig config;
  config.seed = seed;
  config.series_per_class = 10;
  config.length = 16;
  return SynthMultidomain(config);
}

TEST(TripletSamplerTest, SingletonGroupIsNeverAnAnchor) {
  const CorpusIndex c(2, {Series(0, "d", "A"), Series(1, "d", "A"), Series(2, "d", "B")});
  const TripletSampler sampler(c);
  std::mt19937_64 rng(1);
  for (int i = 0; i < 1000; ++i) {
    const Triplet t = sampler.Sample(rng);
    EXPECT_NE(t.anchor_id, 2);
    EXPECT_EQ(t.positive_id, 1 - t.anchor_id);
    EXPECT_EQ(t.negative_id, 2);
  }
}

TEST(TripletSamplerTest, InvariantsHoldOnLabeledCorpus) {
  const CorpusIndex c = SmallSynth();
  const TripletSampler sampler(c);
  std::mt19937_64 rng(2);
  for (int i = 0; i < 10000; ++i) {
    const Triplet t = sampler.Sample(rng);
    EXPECT_NE(t.anchor_id, t.positive_id);
    EXPECT_TRUE(c.Relevant(t.anchor_id, t.positive_id));
    EXPECT_FALSE(c.Relevant(t.anchor_id, t.negative_id));
    for (auto id : {t.anchor_id, t.positive_id, t.negative_id}) {
      EXPECT_EQ(c.Get(id).split, Split::kTrain);
    }
  }
}

TEST(TripletSamplerTest, SameSeedSameStream) {
  const CorpusIndex c = SmallSynth();
  const TripletSampler sampler(c);
  std::mt19937_64 a(7), b(7);
  for (int i = 0; i < 200; ++i) EXPECT_EQ(sampler.Sample(a), sampler.Sample(b));
}

TEST(TripletSamplerTest, AnchorsAndPositivesAreUniform) {
  const CorpusIndex c = SmallSynth(3);
  const TripletSampler sampler(c);
  const auto& train = c.Members(Split::kTrain);
  std::mt19937_64 rng(4);
  constexpr int kDraws = 10000;
  std::map<std::int64_t, int> anchors;
  for (int i = 0; i < kDraws; ++i) ++anchors[sampler.Sample(rng).anchor_id];

  const double p = 1.0 / double(train.size());
  const double expected = kDraws * p;
  const double sigma = std::sqrt(kDraws * p * (1.0 - p));
  double chi2 = 0.0;
  for (std::int64_t id : train) {
    const double n = anchors[id];
    EXPECT_LT(std::abs(n - expected), 3.0 * sigma) << "series " << id;
    chi2 += (n - expected) * (n - expected) / expected;
  }
  const boost::math::chi_squared dist(double(train.size() - 1));
  EXPECT_LT(chi2, boost::math::quantile(dist, 0.999));
}

TEST(TripletSamplerTest, ThrowsWithoutValidTriplet) {
  const CorpusIndex singletons(2, {Series(0, "d", "A"), Series(1, "d", "B")});
  EXPECT_THROW(TripletSampler{singletons}, std::invalid_argument);
  const CorpusIndex one_group(2, {Series(0, "d", "A"), Series(1, "d", "A")});
  EXPECT_THROW(TripletSampler{one_group}, std::invalid_argument);
}

double Bpr(const std::vector<double>& pos, const std::vector<double>& neg) {
  return BprLoss(Var::Constant(Tensor({pos.size()}, pos)),
                 Var::Constant(Tensor({neg.size()}, neg)))
      .value()[0];
}

TEST(BprLossTest, FixedPoints) {
  for (std::size_t n : {1u, 3u, 32u}) {
    EXPECT_NEAR(Bpr(std::vector<double>(n, 0.4), std::vector<double>(n, 0.4)),
                std::numbers::ln2, 1e-12);
  }
  EXPECT_NEAR(Bpr({1.5}, {0.5}), -std::log(1.0 / (1.0 + std::exp(-1.0))), 1e-12);
  EXPECT_NEAR(Bpr({1.5}, {0.5}), 0.313262, 1e-6);
}

TEST(BprLossTest, DecreasesToZeroWithMargin) {
  double prev = std::numeric_limits<double>::infinity();
  for (double margin = -2.0; margin <= 60.0; margin += 2.0) {
    const double loss = Bpr({margin}, {0.0});
    EXPECT_LT(loss, prev);
    EXPECT_GE(loss, 0.0);
    prev = loss;
  }
  EXPECT_LT(prev, 1e-25);
}

TEST(BprLossTest, GradientMatchesFiniteDifferences) {
  const std::vector<double> pos{0.3, -1.2, 2.0}, neg{0.1, 0.4, -0.5};
  Var p = Var::Leaf(Tensor({3}, pos));
  Var q = Var::Leaf(Tensor({3}, neg));
  Backward(BprLoss(p, q));
  const double h = 1e-5;
  for (std::size_t i = 0; i < 3; ++i) {
    auto up = pos, down = pos;
    up[i] += h;
    down[i] -= h;
    const double numeric = (Bpr(up, neg) - Bpr(down, neg)) / (2 * h);
    EXPECT_NEAR(p.grad()[i], numeric, 1e-8 * std::abs(numeric));
    EXPECT_NEAR(q.grad()[i], -numeric, 1e-8 * std::abs(numeric));
  }
}

TEST(BprLossTest, RejectsBadBatches) {
  EXPECT_THROW(BprLoss(Var::Constant(Tensor({2})), Var::Constant(Tensor({3}))),
               ShapeError);
}

EpochRecord Record(std::size_t epoch, double ndcg) {
  EpochRecord r;
  r.epoch = epoch;
  r.val_ndcg = ndcg;
  return r;
}

TEST(SelectBestTest, Examples) {
  const std::vector<EpochRecord> rising{Record(1, 0.1), Record(2, 0.2), Record(3, 0.3)};
  EXPECT_EQ(SelectBest(rising), 2u);
  const std::vector<EpochRecord> flat{Record(1, 0.5), Record(2, 0.5), Record(3, 0.5)};
  EXPECT_EQ(SelectBest(flat), 0u);
  const std::vector<EpochRecord> peak{Record(1, 0.5), Record(2, 0.9), Record(3, 0.7)};
  EXPECT_EQ(SelectBest(peak), 1u);
  EXPECT_FALSE(SelectBest({}).has_value());
}

TrainConfig TinyConfig() {
  TrainConfig config;
  config.batch_size = 4;
  config.epochs = 3;
  config.steps_per_epoch = 3;
  config.seed = 5;
  config.validation_queries = 6;
  return config;
}

TEST(TrainTest, ZeroLearningRateKeepsParameters) {
  const CorpusIndex c = SmallSynth();
  auto model = MakeModel("rn2d", 1);
  const Checkpoint before = ModelToCheckpoint(*model, 16);
  TrainConfig config = TinyConfig();
  config.learning_rate = 0.0;
  const TrainResult r = Train(*model, c, config);
  ASSERT_EQ(r.history.size(), 3u);
  for (const EpochRecord& e : r.history) {
    EXPECT_EQ(e.val_ndcg, r.history[0].val_ndcg);
    EXPECT_EQ(e.checkpoint, before);
  }
  EXPECT_EQ(r.best_epoch, 1u);
  EXPECT_EQ(r.initial_val_ndcg, r.history[0].val_ndcg);
}

TEST(TrainTest, SameSeedGivesIdenticalCheckpoints) {
  const CorpusIndex c = SmallSynth();
  auto a = MakeModel("rn2d", 2);
  auto b = MakeModel("rn2d", 2);
  const TrainResult ra = Train(*a, c, TinyConfig());
  const TrainResult rb = Train(*b, c, TinyConfig());
  ASSERT_EQ(ra.history.size(), rb.history.size());
  for (std::size_t i = 0; i < ra.history.size(); ++i) {
    EXPECT_EQ(EncodeCheckpoint(ra.history[i].checkpoint),
              EncodeCheckpoint(rb.history[i].checkpoint));
    EXPECT_EQ(ra.history[i].mean_loss, rb.history[i].mean_loss);
    EXPECT_EQ(ra.history[i].val_ndcg, rb.history[i].val_ndcg);
  }
  EXPECT_NE(ra.history[0].checkpoint, ra.initial);
  // The model ends up holding the selected parameters.
  EXPECT_EQ(ModelToCheckpoint(*a, 16), ra.best());
}

TEST(TrainTest, ZeroEpochsKeepsInitialization) {
  const CorpusIndex c = SmallSynth();
  auto model = MakeModel("rn1d", 3);
  TrainConfig config = TinyConfig();
  config.epochs = 0;
  const TrainResult r = Train(*model, c, config);
  EXPECT_TRUE(r.history.empty());
  EXPECT_EQ(r.best_epoch, 0u);
  EXPECT_EQ(r.best(), ModelToCheckpoint(*model, 16));
}

// Scores normally but produces a NaN training score.
class NanTrainingModel : public NeuralModel {
 public:
  std::string kind() const override { return "rn2d"; }
  double Score(std::span<const double> q, std::span<const double> x) const override {
    return inner_.Score(q, x);
  }
  std::vector<Parameter*> Parameters() override { return inner_.Parameters(); }
  std::pair<Var, Var> TripletScores(std::span<const TripletValues> batch) override {
    auto [pos, neg] = inner_.TripletScores(batch);
    std::vector<double> bad(batch.size(), 0.0);
    bad.back() = std::numeric_limits<double>::quiet_NaN();
    return {ops::Add(pos, Var::Constant(Tensor({batch.size()}, bad))), neg};
  }
  std::unique_ptr<NeuralModel> Clone() const override {
    return std::make_unique<NanTrainingModel>(*this);
  }

 private:
  Rn2dModel inner_ = Rn2dModel::Initialized(4);
};

TEST(TrainTest, NonFiniteLossNamesTheBatch) {
  const CorpusIndex c = SmallSynth();
  NanTrainingModel model;
  try {
    Train(model, c, TinyConfig());
    FAIL() << "expected TrainingError";
  } catch (const TrainingError& e) {
    ASSERT_EQ(e.batch().size(), 4u);
    const Triplet& t = e.batch()[0];
    const std::string ids = "(" + std::to_string(t.anchor_id) + "," +
                            std::to_string(t.positive_id) + "," +
                            std::to_string(t.negative_id) + ")";
    EXPECT_NE(std::string(e.what()).find(ids), std::string::npos) << e.what();
  }
}

TEST(TrainTest, LearnsOnSyntheticCorpus) {
  SynthConfig synth;
  synth.seed = 8;
  synth.series_per_class = 20;
  synth.length = 16;
  const CorpusIndex c = SynthMultidomain(synth);
  auto model = MakeModel("rn2d", 8);
  TrainConfig config;
  config.batch_size = 8;
  config.epochs = 4;
  config.steps_per_epoch = 25;
  config.seed = 8;
  const TrainResult r = Train(*model, c, config);
  ASSERT_TRUE(r.initial_val_ndcg.has_value());
  EXPECT_GT(r.history[r.best_epoch - 1].val_ndcg, *r.initial_val_ndcg);

  // Held-out triplets come from the test split only.
  const TripletSampler held_out(c, Split::kTest);
  std::mt19937_64 rng(9);
  std::vector<Triplet> triplets(300);
  std::vector<TripletValues> values;
  for (Triplet& t : triplets) {
    t = held_out.Sample(rng);
    values.push_back({c.Get(t.anchor_id).values, c.Get(t.positive_id).values,
                      c.Get(t.negative_id).values});
  }
  auto [pos, neg] = model->TripletScores(values);
  EXPECT_LT(BprLoss(pos, neg).value()[0], std::numbers::ln2);
}

TEST(TrainTest, ValidationQueriesAreCappedDeterministically) {
  const CorpusIndex c = SmallSynth();
  const auto all = ValidationQueryIds(c, 1000, 1);
  EXPECT_EQ(all, c.Members(Split::kVal));
  const auto capped = ValidationQueryIds(c, 5, 1);
  EXPECT_EQ(capped.size(), 5u);
  EXPECT_TRUE(std::is_sorted(capped.begin(), capped.end()));
  EXPECT_EQ(capped, ValidationQueryIds(c, 5, 1));
}

TEST(TrainTest, ArtifactsOnDisk) {
  const CorpusIndex c = SmallSynth();
  auto model = MakeModel("rn2d", 6);
  TrainConfig config = TinyConfig();
  config.epochs = 2;
  const TrainResult r = Train(*model, c, config);
  const fs::path dir = fs::temp_directory_path() / "ctsr_train_artifacts";
  fs::remove_all(dir);
  WriteTrainingArtifacts(dir, r, 10);
  for (const char* f : {"init.ckpt", "epoch_001.ckpt", "epoch_002.ckpt", "best.ckpt",
                        "train_log.csv", "train_timing.csv"}) {
    EXPECT_TRUE(fs::exists(dir / f)) << f;
  }
  EXPECT_EQ(LoadCheckpoint(dir / "best.ckpt"), r.best());
  const std::string log = io::ReadFile(dir / "train_log.csv");
  EXPECT_EQ(log.substr(0, log.find('\n')), "epoch,mean_loss,val_ndcg10");
  EXPECT_EQ(std::count(log.begin(), log.end(), '\n'), 3);
  fs::remove_all(dir);
}

}  // namespace
}  // namespace ctsr
