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

#include "ctsr/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <unordered_map>

#include <fmt/format.h>

#include "ctsr/metrics.hpp"

namespace ctsr {

std::string_view MetricName(Metric m) {
  switch (m) {
    case Metric::kPrecision: return "prec";
    case Metric::kAveragePrecision: return "ap";
    case Metric::kNdcg: return "ndcg";
  }
  return "?";
}

double MethodResult::Mean(Metric m, std::size_t k_index) const {
  const auto& v = Values(m, k_index);
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

const MethodResult& EvalReport::Method(std::string_view name) const {
  for (const auto& m : methods) {
    if (m.method == name) return m;
  }
  throw std::out_of_range("report has no method '" + std::string(name) + "'");
}

std::size_t EvalReport::KIndex(std::size_t k) const {
  const auto it = std::find(ks.begin(), ks.end(), k);
  if (it == ks.end()) {
    throw std::out_of_range("report has no k = " + std::to_string(k));
  }
  return static_cast<std::size_t>(it - ks.begin());
}

double EvalReport::Mean(std::string_view method, Metric m, std::size_t k) const {
  return Method(method).Mean(m, KIndex(k));
}

const std::vector<double>& EvalReport::Values(std::string_view method, Metric m,
                                              std::size_t k) const {
  return Method(method).Values(m, KIndex(k));
}

namespace {

struct QueryOutcome {
  bool answerable = false;
  // [metric][k index]
  std::array<std::vector<double>, 3> values;
};

QueryOutcome EvaluateQuery(const EvalItem& query,
                           std::span<const std::int64_t> db_ids,
                           std::span<const std::int64_t> db_groups,
                           const std::unordered_map<std::int64_t, std::int64_t>& group_of,
                           const SeriesSpans& db_values, const Scorer& scorer,
                           std::span<const std::size_t> ks) {
  QueryOutcome out;
  const auto total_relevant = static_cast<std::size_t>(
      std::count(db_groups.begin(), db_groups.end(), query.group));
  if (total_relevant == 0) return out;
  out.answerable = true;

  const RankedList ranked = Rank(query.id, query.values, db_ids, db_values, scorer);
  const std::vector<std::uint8_t> hits = RelevanceFlags(
      ranked, [&](std::int64_t id) { return group_of.at(id) == query.group; });

  for (auto& v : out.values) v.reserve(ks.size());
  for (std::size_t k : ks) {
    out.values[0].push_back(PrecisionAtK(hits, k));
    out.values[1].push_back(*AveragePrecisionAtK(hits, total_relevant, k));
    out.values[2].push_back(*NdcgAtK(hits, total_relevant, k));
  }
  return out;
}

}  // namespace

EvalReport Evaluate(std::span<const EvalItem> queries,
                    std::span<const EvalItem> database,
                    std::span<Scorer* const> scorers,
                    std::vector<std::size_t> ks, unsigned threads) {
  if (ks.empty()) throw std::invalid_argument("Evaluate: empty k list");
  for (std::size_t k : ks) {
    if (k == 0) throw std::invalid_argument("Evaluate: k must be >= 1");
  }
  std::vector<std::int64_t> db_ids;
  std::vector<std::int64_t> db_groups;
  SeriesSpans db_values;
  for (const EvalItem& item : database) {
    db_ids.push_back(item.id);
    db_groups.push_back(item.group);
    db_values.push_back(item.values);
  }
  std::unordered_map<std::int64_t, std::int64_t> group_of;
  for (const EvalItem& item : database) group_of.emplace(item.id, item.group);

  EvalReport report;
  report.ks = ks;
  const unsigned workers =
      std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(queries.size())));

  for (Scorer* scorer : scorers) {
    scorer->Prepare(db_values);
    std::vector<QueryOutcome> outcomes(queries.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
      for (std::size_t q = next++; q < queries.size(); q = next++) {
        try {
          outcomes[q] = EvaluateQuery(queries[q], db_ids, db_groups, group_of,
                                      db_values, *scorer, ks);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = queries.size();
        }
      }
    };
    if (workers == 1) {
      work();
    } else {
      std::vector<std::jthread> pool;
      for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    if (failure) std::rethrow_exception(failure);

    MethodResult result;
    result.method = scorer->name();
    for (auto& per_metric : result.per_query) per_metric.assign(ks.size(), {});
    for (std::size_t q = 0; q < queries.size(); ++q) {
      if (!outcomes[q].answerable) {
        ++result.n_unanswerable;
        continue;
      }
      result.query_ids.push_back(queries[q].id);
      for (std::size_t m = 0; m < 3; ++m) {
        for (std::size_t ki = 0; ki < ks.size(); ++ki) {
          result.per_query[m][ki].push_back(outcomes[q].values[m][ki]);
        }
      }
    }
    report.methods.push_back(std::move(result));
  }
  return report;
}

std::vector<TTestRow> PairwiseTTests(const EvalReport& report, double alpha) {
  std::vector<TTestRow> rows;
  for (std::size_t i = 0; i < report.methods.size(); ++i) {
    for (std::size_t j = i + 1; j < report.methods.size(); ++j) {
      const MethodResult& a = report.methods[i];
      const MethodResult& b = report.methods[j];
      for (Metric m : kAllMetrics) {
        for (std::size_t ki = 0; ki < report.ks.size(); ++ki) {
          TTestRow row;
          row.method_a = a.method;
          row.method_b = b.method;
          row.metric = m;
          row.k = report.ks[ki];
          row.mean_a = a.Mean(m, ki);
          row.mean_b = b.Mean(m, ki);
          row.result = stats::WelchTTest(a.Values(m, ki), b.Values(m, ki), alpha);
          rows.push_back(std::move(row));
        }
      }
    }
  }
  return rows;
}

std::string ReportCsv(const EvalReport& report) {
  std::string out = "method,metric,k,mean,n_queries,n_unanswerable\n";
  for (const MethodResult& r : report.methods) {
    for (Metric m : kAllMetrics) {
      for (std::size_t ki = 0; ki < report.ks.size(); ++ki) {
        out += fmt::format("{},{},{},{},{},{}\n", r.method, MetricName(m),
                           report.ks[ki], r.Mean(m, ki), r.query_ids.size(),
                           r.n_unanswerable);
      }
    }
  }
  return out;
}

std::string PerQueryCsv(const EvalReport& report) {
  std::string out = "method,query_id,metric,k,value\n";
  for (const MethodResult& r : report.methods) {
    for (std::size_t q = 0; q < r.query_ids.size(); ++q) {
      for (Metric m : kAllMetrics) {
        for (std::size_t ki = 0; ki < report.ks.size(); ++ki) {
          out += fmt::format("{},{},{},{},{}\n", r.method, r.query_ids[q],
                             MetricName(m), report.ks[ki], r.Values(m, ki)[q]);
        }
      }
    }
  }
  return out;
}

std::string TTestCsv(std::span<const TTestRow> rows) {
  std::string out = "method_a,method_b,metric,k,mean_a,mean_b,t,df,p_value,significant\n";
  for (const TTestRow& r : rows) {
    out += fmt::format("{},{},{},{},{},{},{},{},{},{}\n", r.method_a, r.method_b,
                       MetricName(r.metric), r.k, r.mean_a, r.mean_b, r.result.t,
                       r.result.df, r.result.p_value, r.result.significant ? 1 : 0);
  }
  return out;
}

}  // namespace ctsr
