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

#ifndef CTSR_METRICS_HPP_
#define CTSR_METRICS_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "ctsr/scorer.hpp"

namespace ctsr {

struct RankedItem {
  std::int64_t series_id = 0;
  double score = 0.0;

  friend bool operator==(const RankedItem&, const RankedItem&) = default;
};

// Items by descending score; equal scores by ascending series id.
struct RankedList {
  std::int64_t query_id = -1;
  std::vector<RankedItem> items;

  friend bool operator==(const RankedList&, const RankedList&) = default;
};

// Orders `ids` by `scores`. Throws std::invalid_argument on duplicate ids,
// mismatched lengths or NaN scores.
RankedList RankByScores(std::int64_t query_id, std::span<const std::int64_t> ids,
                        std::span<const double> scores);

// Scores every database entry with `scorer` and ranks them.
RankedList Rank(std::int64_t query_id, std::span<const double> query,
                std::span<const std::int64_t> database_ids,
                const SeriesSpans& database, const Scorer& scorer);

// 0/1 relevance of each ranked item, top first.
std::vector<std::uint8_t> RelevanceFlags(
    const RankedList& ranked, const std::function<bool(std::int64_t)>& relevant);

// The metrics below take relevance flags in rank order, the database-wide
// number of relevant items R, and a cutoff k >= 1.

// (# relevant in the top k) / k.
double PrecisionAtK(std::span<const std::uint8_t> hits, std::size_t k);

// (1 / min(k, R)) * sum over relevant ranks i <= k of Prec@i. nullopt when
// R == 0.
std::optional<double> AveragePrecisionAtK(std::span<const std::uint8_t> hits,
                                          std::size_t total_relevant,
                                          std::size_t k);

// Binary-gain DCG with log2(i + 1) discount over the top k, normalised by the
// ideal DCG of min(k, R) hits. nullopt when R == 0.
std::optional<double> NdcgAtK(std::span<const std::uint8_t> hits,
                              std::size_t total_relevant, std::size_t k);

}  // namespace ctsr

#endif  // CTSR_METRICS_HPP_
