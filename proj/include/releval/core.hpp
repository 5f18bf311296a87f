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

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "releval/errors.hpp"

namespace releval {

inline constexpr int kMaxGrade = 4;
inline constexpr int kNumGrades = kMaxGrade + 1;
inline constexpr std::size_t kDefaultDepth = 10;
/// Longest SERP or session accepted anywhere in the toolkit.
inline constexpr std::size_t kDepthCap = 100;

/// A graded relevance label on the 0..4 scale. Three-point snippet labels
/// (does not answer / partially / answers) use 0..2 of the same alphabet.
class Grade {
 public:
  constexpr Grade() noexcept = default;
  /// Throws DomainError unless 0 <= value <= 4.
  explicit Grade(int value);

  constexpr int value() const noexcept { return value_; }

  friend constexpr auto operator<=>(Grade, Grade) noexcept = default;

 private:
  int value_ = 0;
};

enum class GainKind { exponential, linear };

/// exponential: (2^r - 1) / 2^max_grade; linear: r / max_grade.
struct GainScheme {
  GainKind kind = GainKind::exponential;
  int max_grade = kMaxGrade;

  friend bool operator==(const GainScheme&, const GainScheme&) = default;
};

/// Throws ConfigError unless 1 <= max_grade <= 4.
void validate(const GainScheme& scheme);

/// Utility in [0,1] of a label. Throws DomainError if the grade exceeds the
/// scheme's max_grade.
double gain(Grade grade, const GainScheme& scheme);

enum class Aspect { topical, perceived, snippet };

std::string_view to_string(Aspect aspect);
std::optional<Aspect> parse_aspect(std::string_view text);

/// How a consumer treats a label the judgment pool does not have.
enum class LabelPolicy {
  zero,   ///< treat as grade 0
  strict  ///< raise EvaluationError
};

/// The three relevance aspects of one (query, document) pair. Any may be
/// missing; missing labels are never imputed here.
struct Labels {
  std::optional<Grade> topical;
  std::optional<Grade> perceived;
  std::optional<Grade> snippet;

  const std::optional<Grade>& get(Aspect aspect) const;

  friend bool operator==(const Labels&, const Labels&) = default;
};

/// Applies `policy` to a possibly-missing label.
Grade resolve(const std::optional<Grade>& label, LabelPolicy policy,
              Aspect aspect);

struct JudgedResult {
  std::string doc_id;
  int rank = 1;
  Labels labels;

  friend bool operator==(const JudgedResult&, const JudgedResult&) = default;
};

/// One ranked result list for a query, ranks 1..N in order.
struct LabeledSerp {
  std::string query_id;
  std::vector<JudgedResult> results;

  std::size_t size() const noexcept { return results.size(); }
};

/// Throws FormatError if the SERP is empty, longer than the depth cap, or
/// its ranks are not exactly 1..N.
void validate(const LabeledSerp& serp);

/// Copy of the first `depth` results.
LabeledSerp truncate(const LabeledSerp& serp, std::size_t depth);

/// Relevance judgments keyed by (query, document).
class JudgmentStore {
 public:
  /// Inserts or replaces. Returns true when an earlier entry was replaced.
  bool insert(const std::string& query_id, const std::string& doc_id,
              Labels labels);

  const Labels* find(std::string_view query_id, std::string_view doc_id) const;
  bool has_query(std::string_view query_id) const;

  std::size_t size() const noexcept { return size_; }
  /// Number of replaced duplicate rows seen while loading.
  std::size_t duplicates() const noexcept { return duplicates_; }

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const noexcept {
      return std::hash<std::string_view>{}(s);
    }
  };
  using DocMap =
      std::unordered_map<std::string, Labels, Hash, std::equal_to<>>;
  std::unordered_map<std::string, DocMap, Hash, std::equal_to<>> by_query_;
  std::size_t size_ = 0;
  std::size_t duplicates_ = 0;
};

struct RunEntry {
  std::string query_id;
  std::string doc_id;
  int rank = 1;
  double score = 0.0;
  std::string run_tag;
};

/// A system's ranked output over many queries.
struct RankedRun {
  std::string tag;
  std::vector<RunEntry> entries;
};

/// Joins a run with judgments into one SERP per query, ordered by query id.
/// Results are ordered by the run's rank field, renumbered 1..N, and
/// truncated to `depth`. Unjudged documents keep missing labels.
/// Throws FormatError on a duplicate rank or document within a query.
std::vector<LabeledSerp> join(const RankedRun& run,
                              const JudgmentStore& judgments,
                              std::size_t depth = kDefaultDepth);

/// One logged impression.
struct Session {
  std::string session_id;
  std::string query_id;
  std::vector<std::string> docs;
  std::vector<bool> clicks;

  friend bool operator==(const Session&, const Session&) = default;
};

/// Throws FormatError unless |docs| == |clicks| and 1 <= |docs| <= depth cap.
void validate(const Session& session);

/// Labels for the session's documents, looked up in `judgments`.
LabeledSerp serp_for(const Session& session, const JudgmentStore& judgments);

}  // namespace releval
