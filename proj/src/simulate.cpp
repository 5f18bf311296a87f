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
#include "releval/simulate.hpp"

#include "releval/kernels.hpp"

namespace releval {

std::vector<Session> simulate_sessions(std::span<const LabeledSerp> serps,
                                       const SimConfig& config) {
  if (config.sessions_per_query == 0) {
    throw ConfigError("sessions_per_query must be >= 1");
  }
  validate(config.params);
  for (const auto& serp : serps) validate(serp);
  return omp::draw_sessions(serps, config.params, config.sessions_per_query,
                            config.seed, config.missing);
}

}  // namespace releval
