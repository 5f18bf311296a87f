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

#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "releval/click_models.hpp"
#include "releval/core.hpp"

namespace releval::testing {

/// Per-rank click and examination marginals of a cascade, by brute force
/// over every latent outcome sequence. Each examined rank has one outcome:
///   0 skip and continue        1 skip and abandon
///   2 click, satisfied (stop)  3 click, continue     4 click, abandon
/// `attract[k]` and `stop[k]` are the click and stop-after-click
/// probabilities at rank k, `gamma` the continuation. Sequences whose digits
/// after the last examined rank are non-zero are skipped so each trajectory
/// is counted once.
struct BruteMarginals {
  std::vector<double> exam;
  std::vector<double> click;
  double total = 0.0;
};

inline BruteMarginals brute_marginals(const std::vector<double>& attract,
                                      const std::vector<double>& stop,
                                      double gamma) {
  const std::size_t n = attract.size();
  BruteMarginals m{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0), 0.0};
  std::uint64_t count = 1;
  for (std::size_t k = 0; k < n; ++k) count *= 5;
  std::vector<int> digits(n);
  for (std::uint64_t code = 0; code < count; ++code) {
    std::uint64_t c = code;
    for (std::size_t k = 0; k < n; ++k) {
      digits[k] = static_cast<int>(c % 5);
      c /= 5;
    }
    double p = 1.0;
    std::size_t examined = 0;
    bool ended = false;
    for (std::size_t k = 0; k < n && !ended; ++k) {
      const double a = attract[k], s = stop[k];
      switch (digits[k]) {
        case 0: p *= (1 - a) * gamma; break;
        case 1: p *= (1 - a) * (1 - gamma); ended = true; break;
        case 2: p *= a * s; ended = true; break;
        case 3: p *= a * (1 - s) * gamma; break;
        case 4: p *= a * (1 - s) * (1 - gamma); ended = true; break;
      }
      examined = k + 1;
    }
    bool canonical = true;
    for (std::size_t k = examined; k < n; ++k) canonical = canonical && digits[k] == 0;
    if (!canonical || p == 0.0) continue;
    m.total += p;
    for (std::size_t k = 0; k < examined; ++k) {
      m.exam[k] += p;
      if (digits[k] >= 2) m.click[k] += p;
    }
  }
  return m;
}

/// Fully labelled SERP under DCM or DBN parameters.
inline BruteMarginals brute_marginals(const LabeledSerp& serp,
                                      const ClickModelParams& params) {
  std::vector<double> attract, stop;
  for (std::size_t k = 0; k < serp.size(); ++k) {
    const auto& labels = serp.results[k].labels;
    attract.push_back(params.attractiveness.at(*labels.perceived));
    stop.push_back(params.model == ModelKind::dcm
                       ? params.dcm_stop.at(k)
                       : params.dbn_satisfaction.at(*labels.topical));
  }
  return brute_marginals(attract, stop,
                         params.model == ModelKind::dcm ? 1.0 : params.dbn_continuation);
}

/// Tau-b straight from the pair-counting definition.
inline double tau_b_oracle(const std::vector<double>& x, const std::vector<double>& y) {
  double concordant = 0, discordant = 0, ties_x = 0, ties_y = 0, pairs = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      ++pairs;
      const double dx = x[i] - x[j];
      const double dy = y[i] - y[j];
      if (dx == 0) ++ties_x;
      if (dy == 0) ++ties_y;
      if (dx * dy > 0) ++concordant;
      if (dx * dy < 0) ++discordant;
    }
  }
  return (concordant - discordant) / std::sqrt((pairs - ties_x) * (pairs - ties_y));
}

/// Two-pass Pearson: means first, then centred sums.
inline double pearson_oracle(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace releval::testing
