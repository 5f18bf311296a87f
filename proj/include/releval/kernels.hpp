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

// Data-parallel hot loops. Every kernel exists twice with the same
// signature: `releval::omp` (OpenMP, used by the library) and
// `releval::serial` (straight-line reference, kept for tests and benches).

#include <cstdint>
#include <span>
#include <vector>

#include <random>

#include "releval/chain.hpp"
#include "releval/click_models.hpp"
#include "releval/core.hpp"
#include "releval/metrics.hpp"

namespace releval {

/// Sessions resolved against judgments into flat label/click arrays.
/// Session i occupies [offsets[i], offsets[i+1]).
struct SessionBatch {
  std::vector<std::size_t> offsets{0};
  std::vector<std::uint8_t> perceived;
  std::vector<std::uint8_t> topical;
  std::vector<std::uint8_t> clicks;

  std::size_t size() const noexcept { return offsets.size() - 1; }
  std::size_t max_length() const noexcept;

  void add(std::span<const std::uint8_t> perceived_grades,
           std::span<const std::uint8_t> topical_grades,
           std::span<const std::uint8_t> click_flags);
};

/// Resolves labels with `missing`; throws EvaluationError under the strict
/// policy when a label is absent.
SessionBatch make_batch(std::span<const Session> sessions,
                        const JudgmentStore& judgments, LabelPolicy missing);

/// Expected complete-data counts for one EM step plus the log-likelihood of
/// the parameters that produced them. Stop counts are keyed by rank for DCM
/// and by topical grade for DBN.
struct SufficientStats {
  std::vector<double> attract_num = std::vector<double>(kNumGrades, 0.0);
  std::vector<double> attract_den = std::vector<double>(kNumGrades, 0.0);
  std::vector<double> stop_num;
  std::vector<double> stop_den;
  double cont_num = 0.0;
  double cont_den = 0.0;
  double log_likelihood = 0.0;
  std::size_t sessions = 0;

  explicit SufficientStats(std::size_t stop_keys = 0)
      : stop_num(stop_keys, 0.0), stop_den(stop_keys, 0.0) {}

  SufficientStats& operator+=(const SufficientStats& other);
};

namespace omp {

/// Metric value per SERP, in input order.
std::vector<double> score_serps(std::span<const LabeledSerp> serps,
                                const ClickModelParams* params,
                                const MetricSpec& spec);

/// E-step over all sessions. Reduction runs over fixed-size blocks merged in
/// index order, so results are bit-identical for any thread count.
SufficientStats expected_counts(const SessionBatch& batch,
                                const ClickModelParams& params);

/// Session i of SERP q uses a generator seeded from (seed, q * per_query + i).
std::vector<Session> draw_sessions(std::span<const LabeledSerp> serps,
                                   const ClickModelParams& params,
                                   std::size_t per_query, std::uint64_t seed,
                                   LabelPolicy missing);

}  // namespace omp

namespace serial {

std::vector<double> score_serps(std::span<const LabeledSerp> serps,
                                const ClickModelParams* params,
                                const MetricSpec& spec);

SufficientStats expected_counts(const SessionBatch& batch,
                                const ClickModelParams& params);

std::vector<Session> draw_sessions(std::span<const LabeledSerp> serps,
                                   const ClickModelParams& params,
                                   std::size_t per_query, std::uint64_t seed,
                                   LabelPolicy missing);

}  // namespace serial

namespace detail {

/// Parameters flattened for the hot loops. Construction checks that every
/// grade used by `batch` has a parameter, so the kernels themselves never
/// throw.
struct ParamTable {
  ModelKind model = ModelKind::dcm;
  std::vector<double> attract = std::vector<double>(kNumGrades, 0.0);
  std::vector<double> satisfaction = std::vector<double>(kNumGrades, 0.0);
  std::vector<double> stop;
  double continuation = 1.0;

  ParamTable(const ClickModelParams& params, const SessionBatch& batch);

  std::size_t stop_keys() const noexcept {
    return model == ModelKind::dcm ? stop.size() : kNumGrades;
  }
};

/// Adds one session's expected counts into `stats`.
void accumulate_session(const SessionBatch& batch, std::size_t index,
                        const ParamTable& table, std::vector<ChainStep>& steps,
                        CascadePosterior& posterior, SufficientStats& stats);

/// Independent generator for simulated session `index`.
std::mt19937_64 session_rng(std::uint64_t seed, std::uint64_t index);

Session draw_one(const LabeledSerp& serp, const ClickModelParams& params,
                 std::uint64_t seed, std::uint64_t index, LabelPolicy missing);

}  // namespace detail

}  // namespace releval
