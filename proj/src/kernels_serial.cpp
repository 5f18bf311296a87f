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
#include <algorithm>
#include <cmath>

#include "releval/kernels.hpp"

namespace releval {

std::size_t SessionBatch::max_length() const noexcept {
  std::size_t longest = 0;
  for (std::size_t i = 0; i + 1 < offsets.size(); ++i) {
    longest = std::max(longest, offsets[i + 1] - offsets[i]);
  }
  return longest;
}

void SessionBatch::add(std::span<const std::uint8_t> perceived_grades,
                       std::span<const std::uint8_t> topical_grades,
                       std::span<const std::uint8_t> click_flags) {
  perceived.insert(perceived.end(), perceived_grades.begin(),
                   perceived_grades.end());
  topical.insert(topical.end(), topical_grades.begin(), topical_grades.end());
  clicks.insert(clicks.end(), click_flags.begin(), click_flags.end());
  offsets.push_back(clicks.size());
}

SessionBatch make_batch(std::span<const Session> sessions,
                        const JudgmentStore& judgments, LabelPolicy missing) {
  SessionBatch batch;
  std::vector<std::uint8_t> p, t, c;
  for (const Session& s : sessions) {
    validate(s);
    p.clear();
    t.clear();
    c.clear();
    if (missing == LabelPolicy::strict && !judgments.has_query(s.query_id)) {
      throw EvaluationError("session '" + s.session_id + "' references query '" +
                            s.query_id + "' absent from judgments");
    }
    for (std::size_t k = 0; k < s.docs.size(); ++k) {
      const Labels* l = judgments.find(s.query_id, s.docs[k]);
      const Labels none;
      const Labels& labels = l ? *l : none;
      p.push_back(static_cast<std::uint8_t>(
          resolve(labels.perceived, missing, Aspect::perceived).value()));
      t.push_back(static_cast<std::uint8_t>(
          resolve(labels.topical, missing, Aspect::topical).value()));
      c.push_back(s.clicks[k] ? 1 : 0);
    }
    batch.add(p, t, c);
  }
  return batch;
}

SufficientStats& SufficientStats::operator+=(const SufficientStats& other) {
  for (std::size_t g = 0; g < attract_num.size(); ++g) {
    attract_num[g] += other.attract_num[g];
    attract_den[g] += other.attract_den[g];
  }
  for (std::size_t k = 0; k < stop_num.size(); ++k) {
    stop_num[k] += other.stop_num[k];
    stop_den[k] += other.stop_den[k];
  }
  cont_num += other.cont_num;
  cont_den += other.cont_den;
  log_likelihood += other.log_likelihood;
  sessions += other.sessions;
  return *this;
}

namespace detail {

ParamTable::ParamTable(const ClickModelParams& params,
                       const SessionBatch& batch)
    : model(params.model) {
  std::vector<bool> used_perceived(kNumGrades, false);
  std::vector<bool> used_topical(kNumGrades, false);
  for (auto g : batch.perceived) used_perceived[g] = true;
  for (auto g : batch.topical) used_topical[g] = true;
  for (int g = 0; g < kNumGrades; ++g) {
    if (used_perceived[g]) attract[g] = params.attractiveness_of(Grade{g});
    if (model == ModelKind::dbn && used_topical[g]) {
      satisfaction[g] = params.satisfaction_of(Grade{g});
    }
  }
  if (model == ModelKind::dcm) {
    if (batch.max_length() > params.dcm_stop.size()) {
      throw EvaluationError("session of length " +
                            std::to_string(batch.max_length()) +
                            " exceeds DCM stop parameters (" +
                            std::to_string(params.dcm_stop.size()) + ")");
    }
    stop = params.dcm_stop;
    continuation = 1.0;
  } else {
    continuation = params.dbn_continuation;
  }
}

void accumulate_session(const SessionBatch& batch, std::size_t index,
                        const ParamTable& table, std::vector<ChainStep>& steps,
                        CascadePosterior& posterior, SufficientStats& stats) {
  const std::size_t begin = batch.offsets[index];
  const std::size_t n = batch.offsets[index + 1] - begin;
  const bool dcm = table.model == ModelKind::dcm;
  steps.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    steps[k].attract = table.attract[batch.perceived[begin + k]];
    steps[k].stop =
        dcm ? table.stop[k] : table.satisfaction[batch.topical[begin + k]];
  }
  const std::span<const std::uint8_t> clicks(batch.clicks.data() + begin, n);
  cascade_posterior(steps, table.continuation, clicks, posterior);

  stats.log_likelihood += std::log(posterior.likelihood);
  stats.sessions += 1;
  if (!(posterior.likelihood > 0.0)) return;

  for (std::size_t k = 0; k < n; ++k) {
    const auto g = batch.perceived[begin + k];
    stats.attract_den[g] += 1.0;
    stats.attract_num[g] +=
        clicks[k] ? 1.0 : (1.0 - posterior.examined[k]) * steps[k].attract;
    if (clicks[k]) {
      const std::size_t key = dcm ? k : batch.topical[begin + k];
      stats.stop_den[key] += 1.0;
      stats.stop_num[key] += posterior.satisfied[k];
    }
    if (!dcm && k + 1 < n) {
      stats.cont_num += posterior.examined[k + 1];
      stats.cont_den += posterior.unsatisfied[k];
    }
  }
}

std::mt19937_64 session_rng(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

Session draw_one(const LabeledSerp& serp, const ClickModelParams& params,
                 std::uint64_t seed, std::uint64_t index,
                 LabelPolicy missing) {
  const Chain chain = make_chain(serp, params, missing);
  auto rng = session_rng(seed, index);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  Session s;
  s.session_id = "s" + std::to_string(index);
  s.query_id = serp.query_id;
  s.docs.reserve(serp.size());
  for (const auto& r : serp.results) s.docs.push_back(r.doc_id);
  s.clicks.assign(serp.size(), false);

  for (std::size_t k = 0; k < chain.steps.size(); ++k) {
    if (unit(rng) < chain.steps[k].attract) {
      s.clicks[k] = true;
      if (unit(rng) < chain.steps[k].stop) break;
    }
    if (chain.continuation < 1.0 && !(unit(rng) < chain.continuation)) break;
  }
  return s;
}

}  // namespace detail

namespace serial {

std::vector<double> score_serps(std::span<const LabeledSerp> serps,
                                const ClickModelParams* params,
                                const MetricSpec& spec) {
  std::vector<double> out;
  out.reserve(serps.size());
  for (const auto& serp : serps) out.push_back(evaluate(serp, params, spec));
  return out;
}

SufficientStats expected_counts(const SessionBatch& batch,
                                const ClickModelParams& params) {
  const detail::ParamTable table(params, batch);
  SufficientStats stats(table.stop_keys());
  std::vector<ChainStep> steps;
  CascadePosterior posterior;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    detail::accumulate_session(batch, i, table, steps, posterior, stats);
  }
  return stats;
}

std::vector<Session> draw_sessions(std::span<const LabeledSerp> serps,
                                   const ClickModelParams& params,
                                   std::size_t per_query, std::uint64_t seed,
                                   LabelPolicy missing) {
  std::vector<Session> out;
  out.reserve(serps.size() * per_query);
  for (std::size_t q = 0; q < serps.size(); ++q) {
    for (std::size_t i = 0; i < per_query; ++i) {
      out.push_back(
          detail::draw_one(serps[q], params, seed, q * per_query + i, missing));
    }
  }
  return out;
}

}  // namespace serial

}  // namespace releval
