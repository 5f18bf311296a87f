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
#include "releval/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "releval/kernels.hpp"

namespace releval {

std::optional<DcmMethod> parse_dcm_method(std::string_view text) {
  if (text == "em") return DcmMethod::em;
  if (text == "last-click") return DcmMethod::last_click;
  return std::nullopt;
}

void validate(const FitConfig& config) {
  if (config.max_iters < 1) throw ConfigError("max_iters must be >= 1");
  if (!(config.tol > 0.0)) throw ConfigError("tol must be > 0");
  if (!(config.smoothing >= 0.0)) throw ConfigError("smoothing must be >= 0");
  if (config.depth && (*config.depth == 0 || *config.depth > kDepthCap)) {
    throw ConfigError("fit depth outside 1..depth cap");
  }
}

namespace {

void check_input(std::span<const Session> sessions) {
  if (sessions.empty()) throw EstimationError("no sessions to fit");
  const bool any_click =
      std::any_of(sessions.begin(), sessions.end(), [](const Session& s) {
        return std::find(s.clicks.begin(), s.clicks.end(), true) !=
               s.clicks.end();
      });
  if (!any_click) throw EstimationError("no session has a click");
}

std::size_t stop_depth(const SessionBatch& batch, const FitConfig& config) {
  const std::size_t longest = batch.max_length();
  if (!config.depth) return longest;
  if (*config.depth < longest) {
    throw ConfigError("fit depth " + std::to_string(*config.depth) +
                      " is shorter than the longest session (" +
                      std::to_string(longest) + ")");
  }
  return *config.depth;
}

/// Posterior-mean style update; keeps `current` when there is no evidence
/// and no prior mass.
double update(double num, double den, double smoothing, double current) {
  const double total = 2.0 * smoothing + den;
  if (!(total > 0.0)) return current;
  return (smoothing + num) / total;
}

ClickModelParams counting_estimate(const SessionBatch& batch,
                                   std::size_t depth, double smoothing) {
  std::vector<double> a_num(kNumGrades, 0.0), a_den(kNumGrades, 0.0);
  std::vector<double> s_num(depth, 0.0), s_den(depth, 0.0);
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const std::size_t begin = batch.offsets[i];
    const std::size_t n = batch.offsets[i + 1] - begin;
    std::optional<std::size_t> last;
    for (std::size_t k = 0; k < n; ++k) {
      if (batch.clicks[begin + k]) last = k;
    }
    if (!last) continue;
    for (std::size_t k = 0; k <= *last; ++k) {
      const auto g = batch.perceived[begin + k];
      a_den[g] += 1.0;
      if (batch.clicks[begin + k]) {
        a_num[g] += 1.0;
        s_den[k] += 1.0;
        if (k == *last) s_num[k] += 1.0;
      }
    }
  }
  ClickModelParams p;
  p.model = ModelKind::dcm;
  for (int g = 0; g < kNumGrades; ++g) {
    p.attractiveness[Grade{g}] = update(a_num[g], a_den[g], smoothing, 0.5);
  }
  p.dcm_stop.resize(depth);
  for (std::size_t k = 0; k < depth; ++k) {
    p.dcm_stop[k] = update(s_num[k], s_den[k], smoothing, 0.5);
  }
  return p;
}

double mean_ll(const SufficientStats& stats) {
  return stats.log_likelihood / static_cast<double>(stats.sessions);
}

ClickModelParams m_step(const SufficientStats& stats,
                        const ClickModelParams& current, double smoothing) {
  ClickModelParams next = current;
  for (int g = 0; g < kNumGrades; ++g) {
    const Grade grade{g};
    next.attractiveness[grade] =
        update(stats.attract_num[g], stats.attract_den[g], smoothing,
               current.attractiveness.at(grade));
  }
  if (current.model == ModelKind::dcm) {
    for (std::size_t k = 0; k < next.dcm_stop.size(); ++k) {
      next.dcm_stop[k] = update(stats.stop_num[k], stats.stop_den[k],
                                smoothing, current.dcm_stop[k]);
    }
  } else {
    for (int g = 0; g < kNumGrades; ++g) {
      const Grade grade{g};
      next.dbn_satisfaction[grade] =
          update(stats.stop_num[g], stats.stop_den[g], smoothing,
                 current.dbn_satisfaction.at(grade));
    }
    next.dbn_continuation = update(stats.cont_num, stats.cont_den, smoothing,
                                   current.dbn_continuation);
  }
  return next;
}

FitResult run_em(const SessionBatch& batch, ClickModelParams params,
                 const FitConfig& config) {
  FitResult result;
  const auto n = static_cast<double>(batch.size());
  auto record = [&](const SufficientStats& stats) {
    result.mean_log_likelihood.push_back(mean_ll(stats));
    result.mean_objective.push_back(
        mean_ll(stats) + log_prior(params, config.smoothing) / n);
  };
  SufficientStats stats = omp::expected_counts(batch, params);
  record(stats);
  for (int it = 1; it <= config.max_iters; ++it) {
    params = m_step(stats, params, config.smoothing);
    stats = omp::expected_counts(batch, params);
    record(stats);
    result.iterations = it;
    const double change =
        std::abs(result.mean_objective[it] - result.mean_objective[it - 1]);
    if (change < config.tol) {
      result.converged = true;
      break;
    }
  }
  result.params = std::move(params);
  return result;
}

}  // namespace

double log_prior(const ClickModelParams& params, double smoothing) {
  if (smoothing == 0.0) return 0.0;
  auto term = [&](double p) {
    return smoothing * (std::log(p) + std::log1p(-p));
  };
  double sum = 0.0;
  for (const auto& [g, a] : params.attractiveness) sum += term(a);
  if (params.model == ModelKind::dcm) {
    for (double s : params.dcm_stop) sum += term(s);
  } else {
    for (const auto& [g, s] : params.dbn_satisfaction) sum += term(s);
    sum += term(params.dbn_continuation);
  }
  return sum;
}

ClickModelParams last_click_estimate(std::span<const Session> sessions,
                                     const JudgmentStore& judgments,
                                     const FitConfig& config) {
  validate(config);
  check_input(sessions);
  const SessionBatch batch = make_batch(sessions, judgments, config.missing);
  return counting_estimate(batch, stop_depth(batch, config), config.smoothing);
}

FitResult fit_dcm(std::span<const Session> sessions,
                  const JudgmentStore& judgments, const FitConfig& config) {
  validate(config);
  check_input(sessions);
  const SessionBatch batch = make_batch(sessions, judgments, config.missing);
  ClickModelParams start =
      counting_estimate(batch, stop_depth(batch, config), config.smoothing);

  if (config.dcm_method == DcmMethod::last_click) {
    FitResult result;
    result.mean_log_likelihood.push_back(
        mean_ll(omp::expected_counts(batch, start)));
    result.mean_objective.push_back(
        result.mean_log_likelihood.back() +
        log_prior(start, config.smoothing) / static_cast<double>(batch.size()));
    result.params = std::move(start);
    result.converged = true;
    return result;
  }

  auto inside = [](double p) { return std::clamp(p, 0.05, 0.95); };
  for (auto& [g, a] : start.attractiveness) a = inside(a);
  for (double& s : start.dcm_stop) s = inside(s);
  return run_em(batch, std::move(start), config);
}

FitResult fit_dbn(std::span<const Session> sessions,
                  const JudgmentStore& judgments, const FitConfig& config) {
  validate(config);
  check_input(sessions);
  const SessionBatch batch = make_batch(sessions, judgments, config.missing);

  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> jitter(-0.05, 0.05);
  ClickModelParams start;
  start.model = ModelKind::dbn;
  for (int g = 0; g < kNumGrades; ++g) {
    start.attractiveness[Grade{g}] = 0.5 + jitter(rng);
  }
  for (int g = 0; g < kNumGrades; ++g) {
    start.dbn_satisfaction[Grade{g}] = 0.5 + jitter(rng);
  }
  start.dbn_continuation = 0.9 + jitter(rng);
  return run_em(batch, std::move(start), config);
}

double log_likelihood(std::span<const Session> sessions,
                      const JudgmentStore& judgments,
                      const ClickModelParams& params, LabelPolicy missing) {
  if (sessions.empty()) return 0.0;
  validate(params);
  const SessionBatch batch = make_batch(sessions, judgments, missing);
  return omp::expected_counts(batch, params).log_likelihood;
}

}  // namespace releval
