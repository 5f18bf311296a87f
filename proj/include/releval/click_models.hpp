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
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "releval/core.hpp"

namespace releval {

enum class ModelKind { dcm, dbn };

std::string_view to_string(ModelKind model);
std::optional<ModelKind> parse_model(std::string_view text);

/// Label-conditioned cascade parameters.
///
/// Both models key attractiveness by the perceived label. DCM adds a stop
/// probability per rank (the chance of leaving after clicking at that rank;
/// the classic DCM continuation is 1 - stop). DBN adds a satisfaction
/// probability keyed by the topical label and a continuation probability
/// gamma applied after every unsatisfied examination.
struct ClickModelParams {
  ModelKind model = ModelKind::dcm;
  std::map<Grade, double> attractiveness;
  std::vector<double> dcm_stop;
  std::map<Grade, double> dbn_satisfaction;
  double dbn_continuation = 1.0;

  double attractiveness_of(Grade perceived) const;
  double satisfaction_of(Grade topical) const;

  friend bool operator==(const ClickModelParams&,
                         const ClickModelParams&) = default;
};

/// Throws ConfigError on a probability outside [0,1] (or NaN) or when the
/// fields required by the model kind are empty.
void validate(const ClickModelParams& params);

/// Per-rank examination and click probabilities, P(E_k = 1) and P(C_k = 1).
struct ExaminationProfile {
  std::vector<double> exam;
  std::vector<double> click;

  std::size_t size() const noexcept { return exam.size(); }
};

/// exam[k] = prod_{i<k} (1 - a(A_i) s_i), click[k] = a(A_k) exam[k].
ExaminationProfile dcm_profile(const LabeledSerp& serp,
                               const ClickModelParams& params,
                               LabelPolicy missing = LabelPolicy::zero);

/// exam[k+1] = exam[k] gamma (1 - a(A_k) sat(R_k)), click[k] = a(A_k) exam[k].
ExaminationProfile dbn_profile(const LabeledSerp& serp,
                               const ClickModelParams& params,
                               LabelPolicy missing = LabelPolicy::zero);

/// Dispatches on params.model.
ExaminationProfile click_profile(const LabeledSerp& serp,
                                 const ClickModelParams& params,
                                 LabelPolicy missing = LabelPolicy::zero);

inline constexpr std::size_t kMaxEnumerationDepth = 12;

/// One complete user behaviour: the clicks it produced and how many ranks
/// were examined before leaving.
struct Trace {
  std::uint32_t clicks = 0;  ///< bit k-1 set when rank k was clicked
  int examined = 0;
  double probability = 0.0;
};

struct TraceDistribution {
  std::size_t depth = 0;
  std::vector<Trace> traces;

  double total() const;
  /// Probability mass per click vector.
  std::map<std::uint32_t, double> by_click_vector() const;
  /// Marginal P(E_k = 1) and P(C_k = 1) summed over traces.
  ExaminationProfile marginals() const;
};

/// Exhaustively enumerates every latent behaviour (click, stop, abandon
/// decisions) of the model on the SERP. Throws SizeError for N > 12.
TraceDistribution enumerate_traces(const LabeledSerp& serp,
                                   const ClickModelParams& params,
                                   LabelPolicy missing = LabelPolicy::zero);

/// log P(clicks) summed over all latent examination paths consistent with
/// the observed clicks. Throws FormatError on a length mismatch.
double session_log_likelihood(const Session& session, const LabeledSerp& serp,
                              const ClickModelParams& params,
                              LabelPolicy missing = LabelPolicy::zero);

}  // namespace releval
