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

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "releval/analysis.hpp"
#include "releval/click_models.hpp"
#include "releval/core.hpp"

namespace releval {

// Judgments: qid<TAB>docid<TAB>topical<TAB>perceived<TAB>snippet, labels
// 0..4 or "-". Lines starting with '#' and blank lines are skipped; a
// repeated (qid, docid) replaces the earlier row and is counted in
// JudgmentStore::duplicates().
JudgmentStore parse_judgments(std::istream& in);
JudgmentStore parse_judgments(const std::filesystem::path& path);

// Runs: whitespace-separated "qid Q0 docid rank score tag". The run's tag
// is the tag of its first line.
RankedRun parse_run(std::istream& in);
RankedRun parse_run(const std::filesystem::path& path);

// Click logs: one JSON object per line with session_id, qid, docs, clicks.
std::vector<Session> parse_clicks(std::istream& in);
std::vector<Session> parse_clicks(const std::filesystem::path& path);
void write_clicks(std::ostream& out, std::span<const Session> sessions);
void write_clicks(const std::filesystem::path& path,
                  std::span<const Session> sessions);

/// A parameter file: the click model plus the gain scheme it is meant to
/// be evaluated with.
struct ParamsFile {
  ClickModelParams params;
  GainScheme gain;

  friend bool operator==(const ParamsFile&, const ParamsFile&) = default;
};

std::string params_to_json(const ParamsFile& file);
ParamsFile params_from_json(const std::string& text);
ParamsFile read_params(const std::filesystem::path& path);
void write_params(const std::filesystem::path& path, const ParamsFile& file);

// Multi-rater labels: qid<TAB>docid<TAB>rater<TAB>topical<TAB>perceived<TAB>snippet,
// one row per rater, "-" where a rater skipped an aspect. Returns one set per
// (qid, docid) that has at least one label for `aspect`, ordered by
// (qid, docid).
std::vector<RaterLabelSet> parse_rater_labels(std::istream& in, Aspect aspect);
std::vector<RaterLabelSet> parse_rater_labels(
    const std::filesystem::path& path, Aspect aspect);

/// Fixed six-decimal rendering used by every report ("%.6f", so exact
/// binary ties round half to even). Negative zero prints as zero.
std::string format_number(double value);

}  // namespace releval
