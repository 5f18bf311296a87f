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
#include "releval/core.hpp"

namespace releval {

struct SimConfig {
  std::size_t sessions_per_query = 1;
  std::uint64_t seed = 0;
  ClickModelParams params;
  LabelPolicy missing = LabelPolicy::zero;
};

/// Draws `sessions_per_query` sessions per SERP from the cascade: examine
/// top-down, click with a(A_k), then stop per the model (DCM: s_k after a
/// click; DBN: satisfaction after a click, otherwise continue with gamma).
/// Output is ordered by SERP, then session index, and is identical for a
/// given seed regardless of thread count.
std::vector<Session> simulate_sessions(std::span<const LabeledSerp> serps,
                                       const SimConfig& config);

}  // namespace releval
