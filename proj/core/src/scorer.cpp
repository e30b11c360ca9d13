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

#include "ctsr/scorer.hpp"

#include "ctsr/distance.hpp"

namespace ctsr {

std::vector<double> Scorer::ScoreDatabase(std::span<const double> query,
                                          const SeriesSpans& database) const {
  std::vector<double> scores;
  scores.reserve(database.size());
  for (const auto& item : database) scores.push_back(Score(query, item));
  return scores;
}

std::string DistanceScorer::name() const {
  return method_ == DistanceMethod::kEuclidean ? "ed" : "dtw";
}

double DistanceScorer::Score(std::span<const double> query,
                             std::span<const double> item) const {
  const double d = method_ == DistanceMethod::kEuclidean
                       ? EuclideanDistance(query, item)
                       : DtwDistance(query, item);
  return -d;
}

std::unique_ptr<Scorer> MakeDistanceScorer(DistanceMethod method) {
  return std::make_unique<DistanceScorer>(method);
}

std::optional<DistanceMethod> ParseDistanceMethod(std::string_view name) {
  if (name == "ed") return DistanceMethod::kEuclidean;
  if (name == "dtw") return DistanceMethod::kDtw;
  return std::nullopt;
}

}  // namespace ctsr
