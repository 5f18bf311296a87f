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
#include "releval/metrics.hpp"

#include <array>
#include <cmath>

namespace releval {

namespace {

constexpr std::array<std::pair<MetricKind, std::string_view>, 7> kNames{{
    {MetricKind::u_metric, "umetric"},
    {MetricKind::udcm, "udcm"},
    {MetricKind::udcm_s, "udcm-s"},
    {MetricKind::udbn, "udbn"},
    {MetricKind::udbn_s, "udbn-s"},
    {MetricKind::dcg, "dcg"},
    {MetricKind::err, "err"},
}};

}  // namespace

std::string_view to_string(MetricKind kind) {
  for (const auto& [k, name] : kNames) {
    if (k == kind) return name;
  }
  return "?";
}

std::optional<MetricKind> parse_metric(std::string_view text) {
  for (const auto& [k, name] : kNames) {
    if (name == text) return k;
  }
  return std::nullopt;
}

bool needs_params(MetricKind kind) {
  return kind != MetricKind::dcg && kind != MetricKind::err;
}

void validate(const MetricSpec& spec) {
  if (spec.depth == 0) throw ConfigError("metric depth must be >= 1");
  validate(spec.gain_topical);
  validate(spec.gain_snippet);
  if (spec.combine_weight &&
      !(*spec.combine_weight >= 0.0 && *spec.combine_weight <= 1.0)) {
    throw ConfigError("combine weight must be in [0,1]");
  }
}

namespace {

double topical_gain(const JudgedResult& r, const MetricSpec& spec) {
  return gain(resolve(r.labels.topical, spec.missing, Aspect::topical),
              spec.gain_topical);
}

double snippet_gain(const JudgedResult& r, const MetricSpec& spec) {
  return gain(resolve(r.labels.snippet, spec.missing, Aspect::snippet),
              spec.gain_snippet);
}

std::size_t checked_length(const ExaminationProfile& profile,
                           const LabeledSerp& serp, const MetricSpec& spec) {
  if (profile.exam.size() != serp.size() ||
      profile.click.size() != serp.size()) {
    throw EvaluationError("profile length " + std::to_string(profile.size()) +
                          " does not match SERP length " +
                          std::to_string(serp.size()));
  }
  return std::min(spec.depth, serp.size());
}

void require_model(const ClickModelParams& params, ModelKind expected) {
  if (params.model != expected) {
    throw ConfigError("metric needs " + std::string(to_string(expected)) +
                      " parameters, got " +
                      std::string(to_string(params.model)));
  }
}

double dcm_stop_at(const ClickModelParams& params, std::size_t k,
                   std::size_t n) {
  if (n > params.dcm_stop.size()) {
    throw EvaluationError("SERP of length " + std::to_string(n) +
                          " exceeds DCM stop parameters (" +
                          std::to_string(params.dcm_stop.size()) + ")");
  }
  return params.dcm_stop[k];
}

double attract_of(const JudgedResult& r, const ClickModelParams& params,
                  const MetricSpec& spec) {
  return params.attractiveness_of(
      resolve(r.labels.perceived, spec.missing, Aspect::perceived));
}

double sat_of(const JudgedResult& r, const ClickModelParams& params,
              const MetricSpec& spec) {
  return params.satisfaction_of(
      resolve(r.labels.topical, spec.missing, Aspect::topical));
}

}  // namespace

double u_metric(const ExaminationProfile& profile, const LabeledSerp& serp,
                const MetricSpec& spec) {
  const std::size_t n = checked_length(profile, serp, spec);
  double sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    sum += profile.click[k] * topical_gain(serp.results[k], spec);
  }
  return sum;
}

double u_metric_s(const ExaminationProfile& profile, const LabeledSerp& serp,
                  const MetricSpec& spec) {
  const std::size_t n = checked_length(profile, serp, spec);
  double sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    sum += profile.exam[k] * snippet_gain(serp.results[k], spec);
  }
  return sum;
}

double u_dcm(const LabeledSerp& serp, const ClickModelParams& params,
             const MetricSpec& spec) {
  require_model(params, ModelKind::dcm);
  const std::size_t n = std::min(spec.depth, serp.size());
  double sum = 0.0;
  double exam = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double a = attract_of(serp.results[k], params, spec);
    const double s = dcm_stop_at(params, k, n);
    sum += (a * exam) * topical_gain(serp.results[k], spec);
    exam = exam * (1.0 - a * s);
  }
  return sum;
}

double u_dcm_s(const LabeledSerp& serp, const ClickModelParams& params,
               const MetricSpec& spec) {
  require_model(params, ModelKind::dcm);
  const std::size_t n = std::min(spec.depth, serp.size());
  double sum = 0.0;
  double exam = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double a = attract_of(serp.results[k], params, spec);
    const double s = dcm_stop_at(params, k, n);
    sum += exam * snippet_gain(serp.results[k], spec);
    exam = exam * (1.0 - a * s);
  }
  return sum;
}

double u_dbn(const LabeledSerp& serp, const ClickModelParams& params,
             const MetricSpec& spec) {
  require_model(params, ModelKind::dbn);
  const std::size_t n = std::min(spec.depth, serp.size());
  const double gamma = params.dbn_continuation;
  double sum = 0.0;
  double exam = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double a = attract_of(serp.results[k], params, spec);
    const double sat = sat_of(serp.results[k], params, spec);
    sum += (a * exam) * topical_gain(serp.results[k], spec);
    exam = exam * gamma * (1.0 - a * sat);
  }
  return sum;
}

double u_dbn_s(const LabeledSerp& serp, const ClickModelParams& params,
               const MetricSpec& spec) {
  require_model(params, ModelKind::dbn);
  const std::size_t n = std::min(spec.depth, serp.size());
  const double gamma = params.dbn_continuation;
  double sum = 0.0;
  double exam = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double a = attract_of(serp.results[k], params, spec);
    const double sat = sat_of(serp.results[k], params, spec);
    sum += exam * snippet_gain(serp.results[k], spec);
    exam = exam * gamma * (1.0 - a * sat);
  }
  return sum;
}

double dcg(const LabeledSerp& serp, const MetricSpec& spec) {
  const std::size_t n = std::min(spec.depth, serp.size());
  double sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const int r =
        resolve(serp.results[k].labels.topical, spec.missing, Aspect::topical)
            .value();
    sum += static_cast<double>((1 << r) - 1) /
           std::log2(static_cast<double>(k + 2));
  }
  return sum;
}

double err(const LabeledSerp& serp, const MetricSpec& spec) {
  const GainScheme g{GainKind::exponential, spec.gain_topical.max_grade};
  const std::size_t n = std::min(spec.depth, serp.size());
  double sum = 0.0;
  double reach = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double stop = gain(
        resolve(serp.results[k].labels.topical, spec.missing, Aspect::topical),
        g);
    sum += reach * stop / static_cast<double>(k + 1);
    reach *= 1.0 - stop;
  }
  return sum;
}

double evaluate(const LabeledSerp& serp, const ClickModelParams* params,
                const MetricSpec& spec) {
  if (needs_params(spec.kind) && params == nullptr) {
    throw ConfigError("metric " + std::string(to_string(spec.kind)) +
                      " requires click model parameters");
  }
  auto combine = [&](double doc, auto snippet_fn) {
    if (!spec.combine_weight) return doc;
    const double w = *spec.combine_weight;
    return w * doc + (1.0 - w) * snippet_fn();
  };
  switch (spec.kind) {
    case MetricKind::u_metric: {
      const LabeledSerp top = truncate(serp, spec.depth);
      const ExaminationProfile p = click_profile(top, *params, spec.missing);
      return combine(u_metric(p, top, spec),
                     [&] { return u_metric_s(p, top, spec); });
    }
    case MetricKind::udcm:
      return combine(u_dcm(serp, *params, spec),
                     [&] { return u_dcm_s(serp, *params, spec); });
    case MetricKind::udcm_s:
      return u_dcm_s(serp, *params, spec);
    case MetricKind::udbn:
      return combine(u_dbn(serp, *params, spec),
                     [&] { return u_dbn_s(serp, *params, spec); });
    case MetricKind::udbn_s:
      return u_dbn_s(serp, *params, spec);
    case MetricKind::dcg:
      return dcg(serp, spec);
    case MetricKind::err:
      return err(serp, spec);
  }
  return 0.0;
}

}  // namespace releval
