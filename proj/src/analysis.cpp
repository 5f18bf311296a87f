/*
 * Copyright 2026 The releval Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include "releval/analysis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <unordered_map>

namespace releval {

MetricReport make_report(std::string run_tag, MetricKind metric,
                         std::map<std::string, double> per_query) {
  MetricReport r;
  r.run_tag = std::move(run_tag);
  r.metric = metric;
  r.per_query = std::move(per_query);
  double sum = 0.0;
  for (const auto& [q, v] : r.per_query) sum += v;
  r.aggregate = r.per_query.empty()
                    ? 0.0
                    : sum / static_cast<double>(r.per_query.size());
  return r;
}

std::vector<std::string> system_ordering(
    std::span<const MetricReport> reports) {
  std::vector<const MetricReport*> order;
  for (const auto& r : reports) order.push_back(&r);
  std::sort(order.begin(), order.end(),
            [](const MetricReport* a, const MetricReport* b) {
              if (a->aggregate != b->aggregate) {
                return a->aggregate > b->aggregate;
              }
              return a->run_tag < b->run_tag;
            });
  std::vector<std::string> tags;
  for (const auto* r : order) tags.push_back(r->run_tag);
  return tags;
}

std::string_view to_string(OnlineMetric metric) {
  switch (metric) {
    case OnlineMetric::uctr:
      return "uctr";
    case OnlineMetric::max_rr:
      return "maxrr";
    case OnlineMetric::min_rr:
      return "minrr";
    case OnlineMetric::mean_rr:
      return "meanrr";
  }
  return "?";
}

std::optional<double> value_of(const OnlineMetrics& m, OnlineMetric metric) {
  switch (metric) {
    case OnlineMetric::uctr:
      return m.uctr;
    case OnlineMetric::max_rr:
      return m.max_rr;
    case OnlineMetric::min_rr:
      return m.min_rr;
    case OnlineMetric::mean_rr:
      return m.mean_rr;
  }
  return std::nullopt;
}

std::map<std::string, OnlineMetrics> online_metrics(
    std::span<const Session> sessions) {
  struct Sums {
    std::size_t sessions = 0;
    std::size_t clicked = 0;
    double max_rr = 0.0;
    double min_rr = 0.0;
    double mean_rr = 0.0;
  };
  std::map<std::string, Sums> sums;
  for (const auto& s : sessions) {
    Sums& q = sums[s.query_id];
    ++q.sessions;
    std::size_t first = 0, last = 0, count = 0;
    double rr = 0.0;
    for (std::size_t k = 0; k < s.clicks.size(); ++k) {
      if (!s.clicks[k]) continue;
      const std::size_t rank = k + 1;
      if (count == 0) first = rank;
      last = rank;
      ++count;
      rr += 1.0 / static_cast<double>(rank);
    }
    if (count == 0) continue;
    ++q.clicked;
    q.max_rr += 1.0 / static_cast<double>(first);
    q.min_rr += 1.0 / static_cast<double>(last);
    q.mean_rr += rr / static_cast<double>(count);
  }

  std::map<std::string, OnlineMetrics> out;
  for (const auto& [qid, q] : sums) {
    OnlineMetrics m;
    m.sessions = q.sessions;
    m.uctr = static_cast<double>(q.clicked) / static_cast<double>(q.sessions);
    if (q.clicked > 0) {
      const auto n = static_cast<double>(q.clicked);
      m.max_rr = q.max_rr / n;
      m.min_rr = q.min_rr / n;
      m.mean_rr = q.mean_rr / n;
    }
    out.emplace(qid, m);
  }
  return out;
}

double kendall_tau(std::span<const std::string> ranking_a,
                   std::span<const std::string> ranking_b) {
  if (ranking_a.size() != ranking_b.size()) {
    throw AnalysisError("rankings have different lengths");
  }
  std::unordered_map<std::string_view, double> position_in_b;
  for (std::size_t i = 0; i < ranking_b.size(); ++i) {
    if (!position_in_b.emplace(ranking_b[i], static_cast<double>(i)).second) {
      throw AnalysisError("duplicate item '" + ranking_b[i] + "'");
    }
  }
  std::vector<double> x, y;
  x.reserve(ranking_a.size());
  y.reserve(ranking_a.size());
  std::unordered_map<std::string_view, bool> seen;
  for (std::size_t i = 0; i < ranking_a.size(); ++i) {
    auto it = position_in_b.find(ranking_a[i]);
    if (it == position_in_b.end()) {
      throw AnalysisError("item '" + ranking_a[i] +
                          "' missing from second ranking");
    }
    if (!seen.emplace(ranking_a[i], true).second) {
      throw AnalysisError("duplicate item '" + ranking_a[i] + "'");
    }
    x.push_back(static_cast<double>(i));
    y.push_back(it->second);
  }
  return kendall_tau_b(x, y);
}

namespace {

// Pairs tied on a sorted key: sum over runs of t(t-1)/2.
template <typename Eq>
std::int64_t tied_pairs(std::size_t n, Eq equal) {
  std::int64_t total = 0;
  std::int64_t run = 1;
  for (std::size_t i = 1; i < n; ++i) {
    if (equal(i - 1, i)) {
      ++run;
    } else {
      total += run * (run - 1) / 2;
      run = 1;
    }
  }
  return total + run * (run - 1) / 2;
}

// Merge sort on `v`, returning the number of inversions (strict).
std::int64_t count_swaps(std::vector<double>& v, std::vector<double>& buf,
                         std::size_t lo, std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::int64_t swaps = count_swaps(v, buf, lo, mid) + count_swaps(v, buf, mid, hi);
  std::size_t i = lo, j = mid, k = lo;
  while (i < mid && j < hi) {
    if (v[j] < v[i]) {
      swaps += static_cast<std::int64_t>(mid - i);
      buf[k++] = v[j++];
    } else {
      buf[k++] = v[i++];
    }
  }
  while (i < mid) buf[k++] = v[i++];
  while (j < hi) buf[k++] = v[j++];
  std::copy(buf.begin() + lo, buf.begin() + hi, v.begin() + lo);
  return swaps;
}

}  // namespace

double kendall_tau_b(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw AnalysisError("length mismatch");
  const std::size_t n = x.size();
  if (n < 2) throw AnalysisError("kendall tau needs at least two items");

  // Knight's algorithm: sort by (x, y), count ties, then count the
  // discordant pairs as inversions of y.
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return x[a] != x[b] ? x[a] < x[b] : y[a] < y[b];
  });
  const auto n0 = static_cast<std::int64_t>(n) * (static_cast<std::int64_t>(n) - 1) / 2;
  const std::int64_t tx =
      tied_pairs(n, [&](std::size_t a, std::size_t b) { return x[idx[a]] == x[idx[b]]; });
  const std::int64_t txy = tied_pairs(n, [&](std::size_t a, std::size_t b) {
    return x[idx[a]] == x[idx[b]] && y[idx[a]] == y[idx[b]];
  });
  std::vector<double> ys(n), buf(n);
  for (std::size_t i = 0; i < n; ++i) ys[i] = y[idx[i]];
  const std::int64_t swaps = count_swaps(ys, buf, 0, n);
  const std::int64_t ty =
      tied_pairs(n, [&](std::size_t a, std::size_t b) { return ys[a] == ys[b]; });

  const std::int64_t concordant_minus_discordant = n0 - tx - ty + txy - 2 * swaps;
  const double denom = std::sqrt(static_cast<double>(n0 - tx) *
                                 static_cast<double>(n0 - ty));
  if (denom == 0.0) throw AnalysisError("kendall tau-b undefined for constant input");
  return static_cast<double>(concordant_minus_discordant) / denom;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw AnalysisError("length mismatch");
  // Single pass with running co-moments.
  double mx = 0.0, my = 0.0, sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double n = static_cast<double>(i + 1);
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    mx += dx / n;
    my += dy / n;
    sxx += dx * (x[i] - mx);
    syy += dy * (y[i] - my);
    sxy += dx * (y[i] - my);
  }
  if (!(sxx > 0.0) || !(syy > 0.0)) {
    throw AnalysisError("pearson correlation undefined for constant input");
  }
  return sxy / std::sqrt(sxx * syy);
}

std::optional<CorrelationMethod> parse_correlation_method(
    std::string_view text) {
  if (text == "pearson") return CorrelationMethod::pearson;
  if (text == "kendall") return CorrelationMethod::kendall;
  return std::nullopt;
}

double correlate(const std::map<std::string, double>& metric,
                 const std::map<std::string, std::optional<double>>& online,
                 CorrelationMethod method) {
  std::vector<double> x, y;
  for (const auto& [qid, value] : metric) {
    auto it = online.find(qid);
    if (it == online.end() || !it->second) continue;
    x.push_back(value);
    y.push_back(*it->second);
  }
  if (x.size() < 3) {
    throw InsufficientDataError("correlation needs at least 3 queries, got " +
                                std::to_string(x.size()));
  }
  return method == CorrelationMethod::pearson ? pearson(x, y)
                                              : kendall_tau_b(x, y);
}

std::optional<AggregationRule> parse_rule(std::string_view text) {
  if (text == "majority_low") return AggregationRule::majority_low;
  if (text == "mean_round") return AggregationRule::mean_round;
  return std::nullopt;
}

Grade aggregate_raters(const RaterLabelSet& set, AggregationRule rule) {
  if (set.labels.empty()) {
    throw AnalysisError("no labels for (" + set.query_id + ", " + set.doc_id +
                        ")");
  }
  if (rule == AggregationRule::majority_low) {
    std::array<int, kNumGrades> counts{};
    for (Grade g : set.labels) ++counts[g.value()];
    int best = 0;
    for (int g = 1; g < kNumGrades; ++g) {
      if (counts[g] > counts[best]) best = g;
    }
    return Grade{best};
  }
  int sum = 0;
  for (Grade g : set.labels) sum += g.value();
  const int n = static_cast<int>(set.labels.size());
  const int floor = sum / n;
  const int remainder = sum - floor * n;
  return Grade{2 * remainder > n ? floor + 1 : floor};
}

AgreementStats agreement(std::span<const RaterLabelSet> sets) {
  AgreementStats stats;
  std::array<double, kNumGrades> category_totals{};
  double total_ratings = 0.0;
  double sum_p = 0.0;
  std::size_t unanimous = 0;
  for (const auto& set : sets) {
    if (set.labels.size() < 2) continue;
    std::array<double, kNumGrades> counts{};
    for (Grade g : set.labels) counts[g.value()] += 1.0;
    const double n = static_cast<double>(set.labels.size());
    double agree = 0.0;
    for (int g = 0; g < kNumGrades; ++g) {
      agree += counts[g] * (counts[g] - 1.0);
      category_totals[g] += counts[g];
      if (counts[g] == n) ++unanimous;
    }
    sum_p += agree / (n * (n - 1.0));
    total_ratings += n;
    ++stats.items;
  }
  if (stats.items == 0) {
    throw InsufficientDataError("agreement needs an item with two ratings");
  }
  const double items = static_cast<double>(stats.items);
  stats.percent_agreement = static_cast<double>(unanimous) / items;
  const double observed = sum_p / items;
  double expected = 0.0;
  for (double c : category_totals) {
    const double p = c / total_ratings;
    expected += p * p;
  }
  if (unanimous == stats.items) {
    stats.fleiss_kappa = 1.0;
  } else {
    stats.fleiss_kappa = (observed - expected) / (1.0 - expected);
  }
  return stats;
}

}  // namespace releval
