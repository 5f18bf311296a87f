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
#include "releval/chain.hpp"

#include <algorithm>

namespace releval {

Chain make_chain(const LabeledSerp& serp, const ClickModelParams& params,
                 LabelPolicy missing) {
  Chain chain;
  chain.steps.reserve(serp.size());
  if (params.model == ModelKind::dcm) {
    if (serp.size() > params.dcm_stop.size()) {
      throw EvaluationError("SERP of length " + std::to_string(serp.size()) +
                            " exceeds DCM stop parameters (" +
                            std::to_string(params.dcm_stop.size()) + ")");
    }
    chain.continuation = 1.0;
  } else {
    chain.continuation = params.dbn_continuation;
  }
  for (std::size_t k = 0; k < serp.size(); ++k) {
    const Labels& l = serp.results[k].labels;
    ChainStep step;
    step.attract = params.attractiveness_of(
        resolve(l.perceived, missing, Aspect::perceived));
    step.stop = params.model == ModelKind::dcm
                    ? params.dcm_stop[k]
                    : params.satisfaction_of(
                          resolve(l.topical, missing, Aspect::topical));
    chain.steps.push_back(step);
  }
  return chain;
}

namespace {

std::size_t first_possible_exit(std::span<const std::uint8_t> clicks) {
  std::size_t start = 0;
  for (std::size_t k = 0; k < clicks.size(); ++k) {
    if (clicks[k]) start = k;
  }
  return start;
}

}  // namespace

double cascade_likelihood(std::span<const ChainStep> steps,
                          double continuation,
                          std::span<const std::uint8_t> clicks) {
  const std::size_t n = steps.size();
  const std::size_t start = first_possible_exit(clicks);
  double prefix = 1.0;
  double total = 0.0;
  for (std::size_t d = 0; d < n; ++d) {
    const bool c = clicks[d] != 0;
    const double emit = c ? steps[d].attract : 1.0 - steps[d].attract;
    const double cont = continuation * (c ? 1.0 - steps[d].stop : 1.0);
    if (d >= start) total += prefix * emit * (d + 1 < n ? 1.0 - cont : 1.0);
    prefix *= emit * cont;
  }
  return total;
}

void cascade_posterior(std::span<const ChainStep> steps, double continuation,
                       std::span<const std::uint8_t> clicks,
                       CascadePosterior& out) {
  const std::size_t n = steps.size();
  const std::size_t start = first_possible_exit(clicks);
  out.last_examined.assign(n, 0.0);
  out.examined.assign(n, 0.0);
  out.satisfied.assign(n, 0.0);
  out.unsatisfied.assign(n, 0.0);

  // Joint probabilities P(d = k, C), split by the reason for leaving.
  double prefix = 1.0;
  double total = 0.0;
  for (std::size_t d = 0; d < n; ++d) {
    const bool c = clicks[d] != 0;
    const double emit = c ? steps[d].attract : 1.0 - steps[d].attract;
    const double cont = continuation * (c ? 1.0 - steps[d].stop : 1.0);
    if (d >= start) {
      if (d + 1 < n) {
        const double sat = c ? prefix * emit * steps[d].stop : 0.0;
        const double abandon =
            prefix * emit * (c ? 1.0 - steps[d].stop : 1.0) *
            (1.0 - continuation);
        out.satisfied[d] = sat;
        out.unsatisfied[d] = abandon;
        out.last_examined[d] = prefix * emit * (1.0 - cont);
      } else {
        out.last_examined[d] = prefix * emit;
      }
      total += out.last_examined[d];
    }
    prefix *= emit * cont;
  }
  out.likelihood = total;
  if (total <= 0.0) return;

  double tail = 0.0;
  for (std::size_t k = n; k-- > 0;) {
    out.last_examined[k] /= total;
    tail += out.last_examined[k];
    out.examined[k] = std::min(tail, 1.0);
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (k + 1 < n) {
      out.satisfied[k] /= total;
      out.unsatisfied[k] = out.examined[k + 1] + out.unsatisfied[k] / total;
    } else {
      // Nothing observable follows the last rank: the prior stands.
      out.satisfied[k] = clicks[k] ? steps[k].stop : 0.0;
      out.unsatisfied[k] = 0.0;
    }
  }
}

}  // namespace releval
