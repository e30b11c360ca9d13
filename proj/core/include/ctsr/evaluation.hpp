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

#ifndef CTSR_EVALUATION_HPP_
#define CTSR_EVALUATION_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ctsr/scorer.hpp"
#include "ctsr/stats.hpp"

namespace ctsr {

enum class Metric { kPrecision = 0, kAveragePrecision = 1, kNdcg = 2 };
inline constexpr std::array<Metric, 3> kAllMetrics{
    Metric::kPrecision, Metric::kAveragePrecision, Metric::kNdcg};

// "prec" | "ap" | "ndcg".
std::string_view MetricName(Metric m);

// A query or database entry: id, values and relevance group. Two entries are
// relevant to each other iff their groups are equal.
struct EvalItem {
  std::int64_t id = 0;
  std::span<const double> values;
  std::int64_t group = 0;
};

struct MethodResult {
  std::string method;
  // Answerable queries (R > 0) in query order.
  std::vector<std::int64_t> query_ids;
  std::size_t n_unanswerable = 0;
  // per_query[metric][k index][query index].
  std::array<std::vector<std::vector<double>>, 3> per_query;

  const std::vector<double>& Values(Metric m, std::size_t k_index) const {
    return per_query[static_cast<std::size_t>(m)][k_index];
  }
  double Mean(Metric m, std::size_t k_index) const;
};

struct EvalReport {
  std::vector<std::size_t> ks;
  std::vector<MethodResult> methods;

  const MethodResult& Method(std::string_view name) const;
  std::size_t KIndex(std::size_t k) const;
  double Mean(std::string_view method, Metric m, std::size_t k) const;
  const std::vector<double>& Values(std::string_view method, Metric m,
                                    std::size_t k) const;
};

// Ranks `database` for every query with every scorer and records Prec@k,
// AP@k and NDCG@k for each k. Queries are processed on up to `threads`
// workers; results are independent of the thread count. Scorers are
// Prepare()d on the database first.
EvalReport Evaluate(std::span<const EvalItem> queries,
                    std::span<const EvalItem> database,
                    std::span<Scorer* const> scorers,
                    std::vector<std::size_t> ks, unsigned threads = 1);

struct TTestRow {
  std::string method_a;
  std::string method_b;
  Metric metric = Metric::kNdcg;
  std::size_t k = 0;
  double mean_a = 0.0;
  double mean_b = 0.0;
  stats::WelchResult result;
};

// Welch tests for every unordered method pair, metric and k.
std::vector<TTestRow> PairwiseTTests(const EvalReport& report,
                                     double alpha = 0.05);

// CSV exports; every file has a header row and a fixed column order.
// method,metric,k,mean,n_queries,n_unanswerable
std::string ReportCsv(const EvalReport& report);
// method,query_id,metric,k,value
std::string PerQueryCsv(const EvalReport& report);
// method_a,method_b,metric,k,mean_a,mean_b,t,df,p_value,significant
std::string TTestCsv(std::span<const TTestRow> rows);

}  // namespace ctsr

#endif  // CTSR_EVALUATION_HPP_
