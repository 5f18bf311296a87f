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
#include <exception>

#include "releval/kernels.hpp"

namespace releval::omp {

namespace {

constexpr std::size_t kBlock = 512;

// First exception raised inside a parallel region, rethrown after it.
class FirstError {
 public:
  void capture() {
#pragma omp critical(releval_first_error)
    if (!error_) error_ = std::current_exception();
  }
  void rethrow() const {
    if (error_) std::rethrow_exception(error_);
  }

 private:
  std::exception_ptr error_;
};

}  // namespace

std::vector<double> score_serps(std::span<const LabeledSerp> serps,
                                const ClickModelParams* params,
                                const MetricSpec& spec) {
  std::vector<double> out(serps.size(), 0.0);
  FirstError error;
  const auto n = static_cast<std::int64_t>(serps.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t q = 0; q < n; ++q) {
    try {
      out[q] = evaluate(serps[q], params, spec);
    } catch (...) {
      error.capture();
    }
  }
  error.rethrow();
  return out;
}

SufficientStats expected_counts(const SessionBatch& batch,
                                const ClickModelParams& params) {
  const detail::ParamTable table(params, batch);
  const std::size_t blocks = (batch.size() + kBlock - 1) / kBlock;
  std::vector<SufficientStats> partial(blocks,
                                       SufficientStats(table.stop_keys()));
#pragma omp parallel
  {
    std::vector<ChainStep> steps;
    CascadePosterior posterior;
#pragma omp for schedule(static)
    for (std::int64_t b = 0; b < static_cast<std::int64_t>(blocks); ++b) {
      const std::size_t begin = static_cast<std::size_t>(b) * kBlock;
      const std::size_t end = std::min(begin + kBlock, batch.size());
      for (std::size_t i = begin; i < end; ++i) {
        detail::accumulate_session(batch, i, table, steps, posterior,
                                   partial[b]);
      }
    }
  }
  SufficientStats total(table.stop_keys());
  for (const auto& p : partial) total += p;
  return total;
}

std::vector<Session> draw_sessions(std::span<const LabeledSerp> serps,
                                   const ClickModelParams& params,
                                   std::size_t per_query, std::uint64_t seed,
                                   LabelPolicy missing) {
  // Surface parameter/label errors before entering the parallel region.
  for (const auto& serp : serps) make_chain(serp, params, missing);

  std::vector<Session> out(serps.size() * per_query);
  FirstError error;
  const auto total = static_cast<std::int64_t>(out.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < total; ++i) {
    try {
      const auto index = static_cast<std::uint64_t>(i);
      out[i] = detail::draw_one(serps[index / per_query], params, seed, index,
                                missing);
    } catch (...) {
      error.capture();
    }
  }
  error.rethrow();
  return out;
}

}  // namespace releval::omp
