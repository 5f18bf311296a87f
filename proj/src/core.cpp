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
#include "releval/core.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace releval {

Grade::Grade(int value) : value_(value) {
  if (value < 0 || value > kMaxGrade) {
    throw DomainError("grade " + std::to_string(value) + " outside 0.." +
                      std::to_string(kMaxGrade));
  }
}

void validate(const GainScheme& scheme) {
  if (scheme.max_grade < 1 || scheme.max_grade > kMaxGrade) {
    throw ConfigError("gain max_grade must be in 1.." +
                      std::to_string(kMaxGrade));
  }
}

double gain(Grade grade, const GainScheme& scheme) {
  validate(scheme);
  const int r = grade.value();
  if (r > scheme.max_grade) {
    throw DomainError("grade " + std::to_string(r) + " exceeds max_grade " +
                      std::to_string(scheme.max_grade));
  }
  switch (scheme.kind) {
    case GainKind::exponential:
      return static_cast<double>((1 << r) - 1) /
             static_cast<double>(1 << scheme.max_grade);
    case GainKind::linear:
      return static_cast<double>(r) / static_cast<double>(scheme.max_grade);
  }
  return 0.0;
}

std::string_view to_string(Aspect aspect) {
  switch (aspect) {
    case Aspect::topical:
      return "topical";
    case Aspect::perceived:
      return "perceived";
    case Aspect::snippet:
      return "snippet";
  }
  return "?";
}

std::optional<Aspect> parse_aspect(std::string_view text) {
  for (Aspect a : {Aspect::topical, Aspect::perceived, Aspect::snippet}) {
    if (text == to_string(a)) return a;
  }
  return std::nullopt;
}

const std::optional<Grade>& Labels::get(Aspect aspect) const {
  switch (aspect) {
    case Aspect::topical:
      return topical;
    case Aspect::perceived:
      return perceived;
    case Aspect::snippet:
      break;
  }
  return snippet;
}

Grade resolve(const std::optional<Grade>& label, LabelPolicy policy,
              Aspect aspect) {
  if (label) return *label;
  if (policy == LabelPolicy::strict) {
    throw EvaluationError("missing " + std::string(to_string(aspect)) +
                          " label under strict policy");
  }
  return Grade{};
}

void validate(const LabeledSerp& serp) {
  if (serp.results.empty()) {
    throw FormatError("empty SERP for query '" + serp.query_id + "'");
  }
  if (serp.results.size() > kDepthCap) {
    throw FormatError("SERP for query '" + serp.query_id +
                      "' exceeds depth cap");
  }
  for (std::size_t i = 0; i < serp.results.size(); ++i) {
    if (serp.results[i].rank != static_cast<int>(i + 1)) {
      throw FormatError("SERP for query '" + serp.query_id +
                        "' has non-contiguous ranks");
    }
  }
}

LabeledSerp truncate(const LabeledSerp& serp, std::size_t depth) {
  LabeledSerp out;
  out.query_id = serp.query_id;
  const auto n = std::min(depth, serp.results.size());
  out.results.assign(serp.results.begin(), serp.results.begin() + n);
  return out;
}

bool JudgmentStore::insert(const std::string& query_id,
                           const std::string& doc_id, Labels labels) {
  auto& docs = by_query_[query_id];
  auto [it, inserted] = docs.insert_or_assign(doc_id, labels);
  if (inserted) {
    ++size_;
  } else {
    ++duplicates_;
  }
  return !inserted;
}

const Labels* JudgmentStore::find(std::string_view query_id,
                                  std::string_view doc_id) const {
  auto q = by_query_.find(query_id);
  if (q == by_query_.end()) return nullptr;
  auto d = q->second.find(doc_id);
  return d == q->second.end() ? nullptr : &d->second;
}

bool JudgmentStore::has_query(std::string_view query_id) const {
  return by_query_.find(query_id) != by_query_.end();
}

std::vector<LabeledSerp> join(const RankedRun& run,
                              const JudgmentStore& judgments,
                              std::size_t depth) {
  if (depth == 0) throw ConfigError("evaluation depth must be >= 1");

  std::map<std::string, std::vector<const RunEntry*>> by_query;
  for (const auto& e : run.entries) by_query[e.query_id].push_back(&e);

  std::vector<LabeledSerp> serps;
  serps.reserve(by_query.size());
  for (auto& [qid, entries] : by_query) {
    std::stable_sort(entries.begin(), entries.end(),
                     [](const RunEntry* a, const RunEntry* b) {
                       return a->rank < b->rank;
                     });
    std::set<std::string_view> seen_docs;
    for (std::size_t i = 0; i < entries.size(); ++i) {
      if (i > 0 && entries[i]->rank == entries[i - 1]->rank) {
        throw FormatError("duplicate rank " +
                          std::to_string(entries[i]->rank) + " for query '" +
                          qid + "'");
      }
      if (!seen_docs.insert(entries[i]->doc_id).second) {
        throw FormatError("duplicate document '" + entries[i]->doc_id +
                          "' for query '" + qid + "'");
      }
    }

    LabeledSerp serp;
    serp.query_id = qid;
    const auto n = std::min(depth, entries.size());
    serp.results.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      JudgedResult r;
      r.doc_id = entries[i]->doc_id;
      r.rank = static_cast<int>(i + 1);
      if (const Labels* l = judgments.find(qid, r.doc_id)) r.labels = *l;
      serp.results.push_back(std::move(r));
    }
    serps.push_back(std::move(serp));
  }
  return serps;
}

void validate(const Session& session) {
  if (session.docs.size() != session.clicks.size()) {
    throw FormatError("session '" + session.session_id + "' has " +
                      std::to_string(session.docs.size()) + " docs but " +
                      std::to_string(session.clicks.size()) + " click flags");
  }
  if (session.docs.empty() || session.docs.size() > kDepthCap) {
    throw FormatError("session '" + session.session_id +
                      "' length outside 1..depth cap");
  }
}

LabeledSerp serp_for(const Session& session, const JudgmentStore& judgments) {
  LabeledSerp serp;
  serp.query_id = session.query_id;
  serp.results.reserve(session.docs.size());
  for (std::size_t i = 0; i < session.docs.size(); ++i) {
    JudgedResult r;
    r.doc_id = session.docs[i];
    r.rank = static_cast<int>(i + 1);
    if (const Labels* l = judgments.find(session.query_id, r.doc_id)) {
      r.labels = *l;
    }
    serp.results.push_back(std::move(r));
  }
  return serp;
}

}  // namespace releval
