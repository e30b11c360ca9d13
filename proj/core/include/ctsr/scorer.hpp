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

#ifndef CTSR_SCORER_HPP_
#define CTSR_SCORER_HPP_

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ctsr {

// Database entries as borrowed value spans, in database order.
using SeriesSpans = std::vector<std::span<const double>>;

// A relevance function f(query, item): larger means more relevant. Score and
// ScoreDatabase are const and safe to call concurrently once Prepare (if
// needed) has returned.
class Scorer {
 public:
  virtual ~Scorer() = default;

  virtual std::string name() const = 0;
  virtual double Score(std::span<const double> query,
                       std::span<const double> item) const = 0;

  // Optional precomputation over a database that will be scored repeatedly.
  virtual void Prepare(const SeriesSpans& database) { (void)database; }

  // Scores every database entry against `query`, in database order.
  virtual std::vector<double> ScoreDatabase(std::span<const double> query,
                                            const SeriesSpans& database) const;
};

enum class DistanceMethod { kEuclidean, kDtw };

// f(query, item) = -distance(query, item).
class DistanceScorer final : public Scorer {
 public:
  explicit DistanceScorer(DistanceMethod method) : method_(method) {}

  std::string name() const override;
  double Score(std::span<const double> query,
               std::span<const double> item) const override;

  DistanceMethod method() const { return method_; }

 private:
  DistanceMethod method_;
};

std::unique_ptr<Scorer> MakeDistanceScorer(DistanceMethod method);

// "ed" | "dtw".
std::optional<DistanceMethod> ParseDistanceMethod(std::string_view name);

}  // namespace ctsr

#endif  // CTSR_SCORER_HPP_
