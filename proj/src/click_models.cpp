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
#include "releval/click_models.hpp"

#include <cmath>
#include <functional>

#include "releval/chain.hpp"

namespace releval {

std::string_view to_string(ModelKind model) {
  return model == ModelKind::dcm ? "dcm" : "dbn";
}

std::optional<ModelKind> parse_model(std::string_view text) {
  if (text == "dcm") return ModelKind::dcm;
  if (text == "dbn") return ModelKind::dbn;
  return std::nullopt;
}

double ClickModelParams::attractiveness_of(Grade perceived) const {
  auto it = attractiveness.find(perceived);
  if (it == attractiveness.end()) {
    throw ConfigError("no attractiveness parameter for perceived grade " +
                      std::to_string(perceived.value()));
  }
  return it->second;
}

double ClickModelParams::satisfaction_of(Grade topical) const {
  auto it = dbn_satisfaction.find(topical);
  if (it == dbn_satisfaction.end()) {
    throw ConfigError("no satisfaction parameter for topical grade " +
                      std::to_string(topical.value()));
  }
  return it->second;
}

namespace {

void check_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ConfigError(std::string(what) + " probability outside [0,1]");
  }
}

}  // namespace

void validate(const ClickModelParams& params) {
  if (params.attractiveness.empty()) {
    throw ConfigError("attractiveness parameters are empty");
  }
  for (const auto& [g, p] : params.attractiveness) {
    check_probability(p, "attractiveness");
  }
  if (params.model == ModelKind::dcm) {
    if (params.dcm_stop.empty()) throw ConfigError("DCM stop list is empty");
    for (double s : params.dcm_stop) check_probability(s, "DCM stop");
  } else {
    if (params.dbn_satisfaction.empty()) {
      throw ConfigError("DBN satisfaction parameters are empty");
    }
    for (const auto& [g, p] : params.dbn_satisfaction) {
      check_probability(p, "DBN satisfaction");
    }
    check_probability(params.dbn_continuation, "DBN continuation");
  }
}

namespace {

void require_model(const ClickModelParams& params, ModelKind expected) {
  if (params.model != expected) {
    throw ConfigError("expected " + std::string(to_string(expected)) +
                      " parameters, got " +
                      std::string(to_string(params.model)));
  }
}

double attract_at(const LabeledSerp& serp, std::size_t k,
                  const ClickModelParams& params, LabelPolicy missing) {
  return params.attractiveness_of(
      resolve(serp.results[k].labels.perceived, missing, Aspect::perceived));
}

}  // namespace

ExaminationProfile dcm_profile(const LabeledSerp& serp,
                               const ClickModelParams& params,
                               LabelPolicy missing) {
  require_model(params, ModelKind::dcm);
  const std::size_t n = serp.size();
  if (n > params.dcm_stop.size()) {
    throw EvaluationError("SERP of length " + std::to_string(n) +
                          " exceeds DCM stop parameters (" +
                          std::to_string(params.dcm_stop.size()) + ")");
  }
  ExaminationProfile p;
  p.exam.resize(n);
  p.click.resize(n);
  double exam = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double a = attract_at(serp, k, params, missing);
    p.exam[k] = exam;
    p.click[k] = a * exam;
    exam = exam * (1.0 - a * params.dcm_stop[k]);
  }
  return p;
}

ExaminationProfile dbn_profile(const LabeledSerp& serp,
                               const ClickModelParams& params,
                               LabelPolicy missing) {
  require_model(params, ModelKind::dbn);
  const std::size_t n = serp.size();
  const double gamma = params.dbn_continuation;
  ExaminationProfile p;
  p.exam.resize(n);
  p.click.resize(n);
  double exam = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double a = attract_at(serp, k, params, missing);
    const double sat = params.satisfaction_of(
        resolve(serp.results[k].labels.topical, missing, Aspect::topical));
    p.exam[k] = exam;
    p.click[k] = a * exam;
    exam = exam * gamma * (1.0 - a * sat);
  }
  return p;
}

ExaminationProfile click_profile(const LabeledSerp& serp,
                                 const ClickModelParams& params,
                                 LabelPolicy missing) {
  return params.model == ModelKind::dcm ? dcm_profile(serp, params, missing)
                                        : dbn_profile(serp, params, missing);
}

double TraceDistribution::total() const {
  double sum = 0.0;
  for (const auto& t : traces) sum += t.probability;
  return sum;
}

std::map<std::uint32_t, double> TraceDistribution::by_click_vector() const {
  std::map<std::uint32_t, double> out;
  for (const auto& t : traces) out[t.clicks] += t.probability;
  return out;
}

ExaminationProfile TraceDistribution::marginals() const {
  ExaminationProfile p;
  p.exam.assign(depth, 0.0);
  p.click.assign(depth, 0.0);
  for (const auto& t : traces) {
    for (int k = 0; k < t.examined; ++k) p.exam[k] += t.probability;
    for (std::size_t k = 0; k < depth; ++k) {
      if (t.clicks & (1u << k)) p.click[k] += t.probability;
    }
  }
  return p;
}

TraceDistribution enumerate_traces(const LabeledSerp& serp,
                                   const ClickModelParams& params,
                                   LabelPolicy missing) {
  const std::size_t n = serp.size();
  if (n > kMaxEnumerationDepth) {
    throw SizeError("trace enumeration limited to " +
                    std::to_string(kMaxEnumerationDepth) + " ranks, got " +
                    std::to_string(n));
  }
  std::vector<double> attract(n), stop(n);
  for (std::size_t k = 0; k < n; ++k) {
    const Labels& l = serp.results[k].labels;
    attract[k] = params.attractiveness_of(
        resolve(l.perceived, missing, Aspect::perceived));
    if (params.model == ModelKind::dcm) {
      if (k >= params.dcm_stop.size()) {
        throw EvaluationError("SERP exceeds DCM stop parameters");
      }
      stop[k] = params.dcm_stop[k];
    } else {
      stop[k] = params.satisfaction_of(
          resolve(l.topical, missing, Aspect::topical));
    }
  }
  const double gamma =
      params.model == ModelKind::dcm ? 1.0 : params.dbn_continuation;

  TraceDistribution dist;
  dist.depth = n;
  if (n == 0) {
    dist.traces.push_back({0, 0, 1.0});
    return dist;
  }

  // The user has just examined rank k carrying `mass`; branch over the
  // click decision, the stop decision after a click, and the decision to
  // move on to rank k+1.
  std::function<void(std::size_t, std::uint32_t, double)> visit =
      [&](std::size_t k, std::uint32_t clicks, double mass) {
        const int examined = static_cast<int>(k + 1);
        auto leave_or_move_on = [&](std::uint32_t c, double m) {
          if (k + 1 == n) {
            dist.traces.push_back({c, examined, m});
            return;
          }
          if (gamma > 0.0) visit(k + 1, c, m * gamma);
          if (gamma < 1.0) dist.traces.push_back({c, examined, m * (1.0 - gamma)});
        };
        // Click.
        if (attract[k] > 0.0) {
          const std::uint32_t c = clicks | (1u << k);
          const double m = mass * attract[k];
          if (k + 1 == n) {
            dist.traces.push_back({c, examined, m});
          } else {
            if (stop[k] > 0.0) dist.traces.push_back({c, examined, m * stop[k]});
            if (stop[k] < 1.0) leave_or_move_on(c, m * (1.0 - stop[k]));
          }
        }
        // Skip.
        if (attract[k] < 1.0) leave_or_move_on(clicks, mass * (1.0 - attract[k]));
      };
  visit(0, 0u, 1.0);
  return dist;
}

double session_log_likelihood(const Session& session, const LabeledSerp& serp,
                              const ClickModelParams& params,
                              LabelPolicy missing) {
  if (session.clicks.size() != serp.size()) {
    throw FormatError("session '" + session.session_id + "' has " +
                      std::to_string(session.clicks.size()) +
                      " click flags for a SERP of length " +
                      std::to_string(serp.size()));
  }
  const Chain chain = make_chain(serp, params, missing);
  std::vector<std::uint8_t> clicks(session.clicks.begin(),
                                   session.clicks.end());
  return std::log(cascade_likelihood(chain.steps, chain.continuation, clicks));
}

}  // namespace releval
