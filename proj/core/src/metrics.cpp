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

#include "ctsr/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace ctsr {
namespace {

void ExpectCutoff(std::size_t k) {
  if (k == 0) throw std::invalid_argument("metric cutoff k must be >= 1");
}

}  // namespace

RankedList RankByScores(std::int64_t query_id, std::span<const std::int64_t> ids,
                        std::span<const double> scores) {
  if (ids.size() != scores.size()) {
    throw std::invalid_argument("rank: " + std::to_string(ids.size()) +
                                " ids but " + std::to_string(scores.size()) +
                                " scores");
  }
  RankedList out;
  out.query_id = query_id;
  out.items.reserve(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (std::isnan(scores[i])) {
      throw std::invalid_argument("rank: NaN score for series " +
                                  std::to_string(ids[i]));
    }
    out.items.push_back({ids[i], scores[i]});
  }
  std::sort(out.items.begin(), out.items.end(),
            [](const RankedItem& a, const RankedItem& b) {
              if (a.score != b.score) return a.score > b.score;
              return a.series_id < b.series_id;
            });
  std::vector<std::int64_t> sorted_ids(ids.begin(), ids.end());
  std::sort(sorted_ids.begin(), sorted_ids.end());
  if (std::adjacent_find(sorted_ids.begin(), sorted_ids.end()) != sorted_ids.end()) {
    throw std::invalid_argument("rank: duplicate series ids in database");
  }
  return out;
}

RankedList Rank(std::int64_t query_id, std::span<const double> query,
                std::span<const std::int64_t> database_ids,
                const SeriesSpans& database, const Scorer& scorer) {
  const std::vector<double> scores = scorer.ScoreDatabase(query, database);
  return RankByScores(query_id, database_ids, scores);
}

std::vector<std::uint8_t> RelevanceFlags(
    const RankedList& ranked, const std::function<bool(std::int64_t)>& relevant) {
  std::vector<std::uint8_t> hits;
  hits.reserve(ranked.items.size());
  for (const auto& item : ranked.items) hits.push_back(relevant(item.series_id) ? 1 : 0);
  return hits;
}

double PrecisionAtK(std::span<const std::uint8_t> hits, std::size_t k) {
  ExpectCutoff(k);
  const std::size_t n = std::min(k, hits.size());
  const auto found = std::count_if(hits.begin(), hits.begin() + n,
                                   [](std::uint8_t h) { return h != 0; });
  return static_cast<double>(found) / static_cast<double>(k);
}

std::optional<double> AveragePrecisionAtK(std::span<const std::uint8_t> hits,
                                          std::size_t total_relevant,
                                          std::size_t k) {
  ExpectCutoff(k);
  if (total_relevant == 0) return std::nullopt;
  const std::size_t n = std::min(k, hits.size());
  double sum = 0.0;
  std::size_t found = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!hits[i]) continue;
    ++found;
    sum += static_cast<double>(found) / static_cast<double>(i + 1);
  }
  return sum / static_cast<double>(std::min(k, total_relevant));
}

std::optional<double> NdcgAtK(std::span<const std::uint8_t> hits,
                              std::size_t total_relevant, std::size_t k) {
  ExpectCutoff(k);
  if (total_relevant == 0) return std::nullopt;
  const std::size_t n = std::min(k, hits.size());
  double dcg = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (hits[i]) dcg += 1.0 / std::log2(static_cast<double>(i + 2));
  }
  double ideal = 0.0;
  for (std::size_t i = 0; i < std::min(k, total_relevant); ++i) {
    ideal += 1.0 / std::log2(static_cast<double>(i + 2));
  }
  return dcg / ideal;
}

}  // namespace ctsr
