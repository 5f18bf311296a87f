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

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "releval/click_models.hpp"
#include "releval/core.hpp"

namespace releval {

enum class DcmMethod {
  em,         ///< full EM over the latent stop/examination chain
  last_click  ///< counting estimator: examination ends at the last click
};

std::optional<DcmMethod> parse_dcm_method(std::string_view text);

struct FitConfig {
  int max_iters = 200;
  /// Absolute change in mean per-session log-likelihood.
  double tol = 1e-6;
  /// Beta(smoothing, smoothing) pseudo-counts on every Bernoulli parameter.
  double smoothing = 1.0;
  std::uint64_t seed = 0;
  LabelPolicy missing = LabelPolicy::zero;
  DcmMethod dcm_method = DcmMethod::em;
  /// Length of the fitted DCM stop list; defaults to the longest session.
  std::optional<std::size_t> depth;
};

/// Throws ConfigError unless max_iters >= 1, tol > 0, smoothing >= 0.
void validate(const FitConfig& config);

struct FitResult {
  ClickModelParams params;
  /// Number of M-steps taken (0 for the counting estimator).
  int iterations = 0;
  bool converged = false;
  /// Mean per-session log-likelihood of the initial parameters followed by
  /// the value after each M-step.
  std::vector<double> mean_log_likelihood;
  /// The quantity EM ascends: mean log-likelihood plus the Beta pseudo-count
  /// log-prior divided by the session count. Equal to mean_log_likelihood
  /// when smoothing is 0. Convergence is tested on this sequence.
  std::vector<double> mean_objective;
};

/// Unnormalised log density of the Beta(1 + m, 1 + m) prior implied by
/// pseudo-count m, summed over every Bernoulli parameter the fit estimates.
double log_prior(const ClickModelParams& params, double smoothing);

/// Fits label-keyed DCM parameters. Throws EstimationError when there are
/// no sessions or no session has a click.
FitResult fit_dcm(std::span<const Session> sessions,
                  const JudgmentStore& judgments, const FitConfig& config);

/// The counting estimator on its own:
///   a(A) = (m + clicks on label-A items at ranks <= last click)
///        / (2m + impressions of label-A items at ranks <= last click)
///   s_i  = (m + sessions whose last click is at rank i)
///        / (2m + sessions with a click at rank i)
/// over sessions with at least one click. 0/0 cells are set to 0.5.
ClickModelParams last_click_estimate(std::span<const Session> sessions,
                                     const JudgmentStore& judgments,
                                     const FitConfig& config);

/// EM fit of label-keyed DBN parameters (attractiveness by perceived label,
/// satisfaction by topical label, shared continuation gamma).
FitResult fit_dbn(std::span<const Session> sessions,
                  const JudgmentStore& judgments, const FitConfig& config);

/// Sum of per-session log-likelihoods.
double log_likelihood(std::span<const Session> sessions,
                      const JudgmentStore& judgments,
                      const ClickModelParams& params,
                      LabelPolicy missing = LabelPolicy::zero);

}  // namespace releval
