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

#include <optional>
#include <string_view>

#include "releval/click_models.hpp"
#include "releval/core.hpp"

namespace releval {

enum class MetricKind { u_metric, udcm, udcm_s, udbn, udbn_s, dcg, err };

std::string_view to_string(MetricKind kind);
/// Accepts the CLI spellings: umetric, udcm, udcm-s, udbn, udbn-s, dcg, err.
std::optional<MetricKind> parse_metric(std::string_view text);
bool needs_params(MetricKind kind);

struct MetricSpec {
  MetricKind kind = MetricKind::udcm;
  GainScheme gain_topical;
  GainScheme gain_snippet;
  std::size_t depth = kDefaultDepth;
  /// When set, document-utility metrics report
  /// w * document utility + (1 - w) * snippet utility.
  std::optional<double> combine_weight;
  LabelPolicy missing = LabelPolicy::zero;
};

/// Throws ConfigError for depth 0, a bad gain scheme, or a combine weight
/// outside [0,1].
void validate(const MetricSpec& spec);

/// Sum over ranks of P(C_k = 1) * gain(topical_k).
double u_metric(const ExaminationProfile& profile, const LabeledSerp& serp,
                const MetricSpec& spec);

/// Sum over ranks of P(E_k = 1) * gain(snippet_k).
double u_metric_s(const ExaminationProfile& profile, const LabeledSerp& serp,
                  const MetricSpec& spec);

// Closed forms. Each equals the generic sum over the matching profile
// exactly: the arithmetic is performed in the same order.
double u_dcm(const LabeledSerp& serp, const ClickModelParams& params,
             const MetricSpec& spec);
double u_dcm_s(const LabeledSerp& serp, const ClickModelParams& params,
               const MetricSpec& spec);
double u_dbn(const LabeledSerp& serp, const ClickModelParams& params,
             const MetricSpec& spec);
double u_dbn_s(const LabeledSerp& serp, const ClickModelParams& params,
               const MetricSpec& spec);

/// sum (2^r - 1) / log2(i + 1) over the first `depth` ranks.
double dcg(const LabeledSerp& serp, const MetricSpec& spec);
/// Expected reciprocal rank with exponential gain on gain_topical.max_grade.
double err(const LabeledSerp& serp, const MetricSpec& spec);

/// Value of `spec.kind` on one SERP. `params` may be null for DCG/ERR;
/// otherwise a null pointer raises ConfigError.
double evaluate(const LabeledSerp& serp, const ClickModelParams* params,
                const MetricSpec& spec);

}  // namespace releval
