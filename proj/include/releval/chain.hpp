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
#include <span>
#include <vector>

#include "releval/click_models.hpp"

namespace releval {

/// One rank of a cascade: click with `attract` when examined; after a click,
/// stop (satisfied) with `stop`. Unsatisfied users continue with the chain's
/// continuation probability.
struct ChainStep {
  double attract = 0.0;
  double stop = 0.0;
};

/// DCM is the special case continuation = 1 with positional stop; DBN uses
/// gamma and label-keyed satisfaction.
struct Chain {
  std::vector<ChainStep> steps;
  double continuation = 1.0;
};

Chain make_chain(const LabeledSerp& serp, const ClickModelParams& params,
                 LabelPolicy missing);

/// Posterior of the latent path given observed clicks. Index k is 0-based.
struct CascadePosterior {
  double likelihood = 0.0;
  std::vector<double> last_examined;  ///< P(d = k | C), d = last examined rank
  std::vector<double> examined;       ///< P(E_k = 1 | C)
  std::vector<double> satisfied;      ///< P(S_k = 1 | C), 0 on unclicked ranks
  std::vector<double> unsatisfied;    ///< P(E_k = 1, S_k = 0 | C), k < N-1
};

/// P(C) for one click vector.
double cascade_likelihood(std::span<const ChainStep> steps,
                          double continuation,
                          std::span<const std::uint8_t> clicks);

/// Fills `out` (buffers are reused). Requires P(C) > 0 for the posterior
/// terms to be defined; otherwise only `likelihood` is meaningful.
void cascade_posterior(std::span<const ChainStep> steps, double continuation,
                       std::span<const std::uint8_t> clicks,
                       CascadePosterior& out);

}  // namespace releval
