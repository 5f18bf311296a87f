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
#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "releval/core.hpp"
#include "releval/metrics.hpp"

namespace releval {

struct MetricReport {
  std::string run_tag;
  MetricKind metric = MetricKind::udcm;
  std::map<std::string, double> per_query;
  /// Unweighted mean of per_query (0 when empty).
  double aggregate = 0.0;
};

MetricReport make_report(std::string run_tag, MetricKind metric,
                         std::map<std::string, double> per_query);

/// Run tags ordered by aggregate, best first; ties by tag.
std::vector<std::string> system_ordering(std::span<const MetricReport> reports);

/// Click-log behaviour of one query. Reciprocal-rank metrics are defined
/// only when at least one session clicked.
struct OnlineMetrics {
  std::size_t sessions = 0;
  double uctr = 0.0;
  std::optional<double> max_rr;
  std::optional<double> min_rr;
  std::optional<double> mean_rr;
};

enum class OnlineMetric { uctr, max_rr, min_rr, mean_rr };

std::string_view to_string(OnlineMetric metric);
std::optional<double> value_of(const OnlineMetrics& m, OnlineMetric metric);

std::map<std::string, OnlineMetrics> online_metrics(
    std::span<const Session> sessions);

/// Kendall tau between two orderings of the same items. Throws
/// AnalysisError on duplicates or differing item sets.
double kendall_tau(std::span<const std::string> ranking_a,
                   std::span<const std::string> ranking_b);

/// Tie-aware Kendall tau-b of paired observations, O(n log n).
/// Throws AnalysisError on a length mismatch or when either side is
/// constant (tau-b undefined).
double kendall_tau_b(std::span<const double> x, std::span<const double> y);

/// Pearson correlation. Throws AnalysisError when either side has zero
/// variance.
double pearson(std::span<const double> x, std::span<const double> y);

enum class CorrelationMethod { pearson, kendall };

std::optional<CorrelationMethod> parse_correlation_method(std::string_view);

/// Correlation over the queries present in both maps with a defined online
/// value. Throws InsufficientDataError below 3 such queries.
double correlate(const std::map<std::string, double>& metric,
                 const std::map<std::string, std::optional<double>>& online,
                 CorrelationMethod method);

/// All raters' labels for one (query, document, aspect).
struct RaterLabelSet {
  std::string query_id;
  std::string doc_id;
  Aspect aspect = Aspect::topical;
  std::vector<Grade> labels;
};

enum class AggregationRule {
  majority_low,  ///< modal label, ties toward the lower grade
  mean_round     ///< arithmetic mean, rounded half down
};

std::optional<AggregationRule> parse_rule(std::string_view text);

/// Throws AnalysisError on an empty label list.
Grade aggregate_raters(const RaterLabelSet& set, AggregationRule rule);

struct AgreementStats {
  /// Items with at least two ratings; the others carry no agreement signal.
  std::size_t items = 0;
  /// Fraction of those items on which every rater gave the same label.
  double percent_agreement = 0.0;
  /// Fleiss' kappa over grade categories 0..4, allowing a varying number
  /// of raters per item. 1 whenever every item is unanimous.
  double fleiss_kappa = 0.0;
};

/// Throws InsufficientDataError when no item has two ratings.
AgreementStats agreement(std::span<const RaterLabelSet> sets);

}  // namespace releval
