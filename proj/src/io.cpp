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
#include "releval/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"

namespace releval {

namespace {

using ordered_json = nlohmann::ordered_json;

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path.string());
  return out;
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

bool skippable(const std::string& line) {
  return line.empty() || line.front() == '#' ||
         line.find_first_not_of(" \t") == std::string::npos;
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    fields.push_back(line.substr(start, tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return fields;
}

std::optional<Grade> parse_label(const std::string& field, std::size_t line) {
  if (field == "-") return std::nullopt;
  int value = 0;
  const auto* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (ec != std::errc() || ptr != end || field.empty()) {
    throw FormatError("bad label '" + field + "'", line);
  }
  if (value < 0 || value > kMaxGrade) {
    throw FormatError("label " + field + " outside 0.." +
                          std::to_string(kMaxGrade),
                      line);
  }
  return Grade{value};
}

}  // namespace

JudgmentStore parse_judgments(std::istream& in) {
  JudgmentStore store;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    strip_cr(line);
    if (skippable(line)) continue;
    const auto f = split_tabs(line);
    if (f.size() != 5) {
      throw FormatError("expected 5 tab-separated fields, got " +
                            std::to_string(f.size()),
                        number);
    }
    if (f[0].empty() || f[1].empty()) {
      throw FormatError("empty query or document id", number);
    }
    Labels labels{parse_label(f[2], number), parse_label(f[3], number),
                  parse_label(f[4], number)};
    store.insert(f[0], f[1], labels);
  }
  return store;
}

JudgmentStore parse_judgments(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_judgments(in);
}

RankedRun parse_run(std::istream& in) {
  RankedRun run;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    strip_cr(line);
    if (skippable(line)) continue;
    std::istringstream fields(line);
    std::vector<std::string> f;
    for (std::string token; fields >> token;) f.push_back(token);
    if (f.size() != 6) {
      throw FormatError("expected 'qid Q0 docid rank score tag', got " +
                            std::to_string(f.size()) + " fields",
                        number);
    }
    RunEntry e;
    e.query_id = f[0];
    e.doc_id = f[2];
    {
      const auto* end = f[3].data() + f[3].size();
      auto [ptr, ec] = std::from_chars(f[3].data(), end, e.rank);
      if (ec != std::errc() || ptr != end || e.rank < 1) {
        throw FormatError("bad rank '" + f[3] + "'", number);
      }
    }
    {
      const auto* end = f[4].data() + f[4].size();
      auto [ptr, ec] = std::from_chars(f[4].data(), end, e.score);
      if (ec != std::errc() || ptr != end) {
        throw FormatError("bad score '" + f[4] + "'", number);
      }
    }
    e.run_tag = f[5];
    if (run.entries.empty()) run.tag = e.run_tag;
    run.entries.push_back(std::move(e));
  }
  return run;
}

RankedRun parse_run(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_run(in);
}

std::vector<Session> parse_clicks(std::istream& in) {
  std::vector<Session> sessions;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    strip_cr(line);
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(std::string("invalid JSON: ") + e.what(), number);
    }
    auto require = [&](const char* key) -> const nlohmann::json& {
      if (!j.is_object() || !j.contains(key)) {
        throw FormatError(std::string("missing key '") + key + "'", number);
      }
      return j.at(key);
    };
    Session s;
    const auto& sid = require("session_id");
    const auto& qid = require("qid");
    const auto& docs = require("docs");
    const auto& clicks = require("clicks");
    if (!sid.is_string() || !qid.is_string()) {
      throw FormatError("session_id and qid must be strings", number);
    }
    if (!docs.is_array() || !clicks.is_array()) {
      throw FormatError("docs and clicks must be arrays", number);
    }
    s.session_id = sid.get<std::string>();
    s.query_id = qid.get<std::string>();
    for (const auto& d : docs) {
      if (!d.is_string()) throw FormatError("doc ids must be strings", number);
      s.docs.push_back(d.get<std::string>());
    }
    for (const auto& c : clicks) {
      if (c.is_boolean()) {
        s.clicks.push_back(c.get<bool>());
      } else if (c.is_number_integer() && (c == 0 || c == 1)) {
        s.clicks.push_back(c == 1);
      } else {
        throw FormatError("click flags must be 0 or 1", number);
      }
    }
    try {
      validate(s);
    } catch (const FormatError& e) {
      throw FormatError(e.what(), number);
    }
    sessions.push_back(std::move(s));
  }
  return sessions;
}

std::vector<Session> parse_clicks(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_clicks(in);
}

void write_clicks(std::ostream& out, std::span<const Session> sessions) {
  for (const auto& s : sessions) {
    ordered_json j;
    j["session_id"] = s.session_id;
    j["qid"] = s.query_id;
    j["docs"] = s.docs;
    auto& clicks = j["clicks"] = ordered_json::array();
    for (bool c : s.clicks) clicks.push_back(c ? 1 : 0);
    out << j.dump() << '\n';
  }
}

void write_clicks(const std::filesystem::path& path,
                  std::span<const Session> sessions) {
  auto out = open_output(path);
  write_clicks(out, sessions);
}

namespace {

ordered_json grade_map_to_json(const std::map<Grade, double>& m) {
  ordered_json j = ordered_json::object();
  for (const auto& [g, p] : m) j[std::to_string(g.value())] = p;
  return j;
}

std::map<Grade, double> grade_map_from_json(const nlohmann::json& j,
                                            const char* key) {
  if (!j.is_object()) {
    throw FormatError(std::string("'") + key + "' must be an object");
  }
  std::map<Grade, double> m;
  for (const auto& [k, v] : j.items()) {
    int g = -1;
    auto [ptr, ec] = std::from_chars(k.data(), k.data() + k.size(), g);
    if (ec != std::errc() || ptr != k.data() + k.size() || g < 0 ||
        g > kMaxGrade) {
      throw FormatError(std::string("bad grade key '") + k + "' in '" + key +
                        "'");
    }
    if (!v.is_number()) {
      throw FormatError(std::string("non-numeric value in '") + key + "'");
    }
    m[Grade{g}] = v.get<double>();
  }
  return m;
}

}  // namespace

std::string params_to_json(const ParamsFile& file) {
  const auto& p = file.params;
  ordered_json j;
  j["model"] = std::string(to_string(p.model));
  j["attractiveness"] = grade_map_to_json(p.attractiveness);
  if (p.model == ModelKind::dcm) {
    j["dcm_stop"] = p.dcm_stop;
  } else {
    j["dbn_satisfaction"] = grade_map_to_json(p.dbn_satisfaction);
    j["dbn_continuation"] = p.dbn_continuation;
  }
  j["gain"] = {
      {"kind", file.gain.kind == GainKind::exponential ? "exponential"
                                                       : "linear"},
      {"max_grade", file.gain.max_grade}};
  return j.dump(2) + "\n";
}

ParamsFile params_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("invalid params JSON: ") + e.what());
  }
  if (!j.is_object()) throw FormatError("params must be a JSON object");
  try {
    ParamsFile f;
    const auto model = j.contains("model") && j["model"].is_string()
                           ? parse_model(j["model"].get<std::string>())
                           : std::nullopt;
    if (!model) throw FormatError("unknown or missing model");
    f.params.model = *model;
    if (!j.contains("attractiveness")) {
      throw FormatError("missing 'attractiveness'");
    }
    f.params.attractiveness =
        grade_map_from_json(j["attractiveness"], "attractiveness");
    if (*model == ModelKind::dcm) {
      if (!j.contains("dcm_stop") || !j["dcm_stop"].is_array()) {
        throw FormatError("dcm params need a 'dcm_stop' array");
      }
      f.params.dcm_stop = j["dcm_stop"].get<std::vector<double>>();
    } else {
      if (!j.contains("dbn_satisfaction") || !j.contains("dbn_continuation")) {
        throw FormatError(
            "dbn params need 'dbn_satisfaction' and 'dbn_continuation'");
      }
      f.params.dbn_satisfaction =
          grade_map_from_json(j["dbn_satisfaction"], "dbn_satisfaction");
      f.params.dbn_continuation = j["dbn_continuation"].get<double>();
    }
    if (j.contains("gain")) {
      const auto& g = j["gain"];
      const auto kind = g.value("kind", std::string("exponential"));
      if (kind == "exponential" || kind == "exp") {
        f.gain.kind = GainKind::exponential;
      } else if (kind == "linear") {
        f.gain.kind = GainKind::linear;
      } else {
        throw FormatError("unknown gain kind '" + kind + "'");
      }
      f.gain.max_grade = g.value("max_grade", kMaxGrade);
    }
    validate(f.params);
    validate(f.gain);
    return f;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad params field: ") + e.what());
  } catch (const ConfigError& e) {
    throw FormatError(e.what());
  }
}

ParamsFile read_params(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::ostringstream text;
  text << in.rdbuf();
  return params_from_json(text.str());
}

void write_params(const std::filesystem::path& path, const ParamsFile& file) {
  auto out = open_output(path);
  out << params_to_json(file);
}

std::vector<RaterLabelSet> parse_rater_labels(std::istream& in,
                                              Aspect aspect) {
  std::map<std::pair<std::string, std::string>, RaterLabelSet> sets;
  std::string line;
  std::size_t number = 0;
  const std::size_t column = 3 + static_cast<std::size_t>(aspect);
  while (std::getline(in, line)) {
    ++number;
    strip_cr(line);
    if (skippable(line)) continue;
    const auto f = split_tabs(line);
    if (f.size() != 6) {
      throw FormatError("expected 6 tab-separated fields, got " +
                            std::to_string(f.size()),
                        number);
    }
    std::optional<Grade> labels[3];
    for (std::size_t i = 0; i < 3; ++i) labels[i] = parse_label(f[3 + i], number);
    const auto& label = labels[column - 3];
    if (!label) continue;
    auto& set = sets[{f[0], f[1]}];
    set.query_id = f[0];
    set.doc_id = f[1];
    set.aspect = aspect;
    set.labels.push_back(*label);
  }
  std::vector<RaterLabelSet> out;
  out.reserve(sets.size());
  for (auto& [key, set] : sets) out.push_back(std::move(set));
  return out;
}

std::vector<RaterLabelSet> parse_rater_labels(
    const std::filesystem::path& path, Aspect aspect) {
  auto in = open_input(path);
  return parse_rater_labels(in, aspect);
}

std::string format_number(double value) {
  if (value == 0.0) value = 0.0;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", value);
  std::string s(buf);
  if (s == "-0.000000") s = "0.000000";
  return s;
}

}  // namespace releval
