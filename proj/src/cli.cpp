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
#include "releval/cli.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <ostream>

#include "CLI11.hpp"
#include "releval/analysis.hpp"
#include "releval/estimation.hpp"
#include "releval/io.hpp"
#include "releval/kernels.hpp"
#include "releval/metrics.hpp"
#include "releval/simulate.hpp"

namespace releval {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

const std::vector<std::string> kMetricNames{"udcm",   "udcm-s", "udbn",
                                            "udbn-s", "dcg",    "err",
                                            "umetric"};

struct EvalOptions {
  std::string metric;
  std::string judgments;
  std::string params;
  std::size_t depth = kDefaultDepth;
  std::string gain;
  int snippet_max_grade = kMaxGrade;
  std::optional<double> combine;
  std::string missing = "zero";
};

void add_eval_options(CLI::App* cmd, EvalOptions& o) {
  cmd->add_option("--metric", o.metric, "Metric")
      ->required()
      ->check(CLI::IsMember(kMetricNames));
  cmd->add_option("--judgments", o.judgments, "Judgments TSV")->required();
  cmd->add_option("--params", o.params, "Click model parameters (JSON)");
  cmd->add_option("--depth", o.depth, "Evaluation depth")
      ->check(CLI::Range(std::size_t{1}, kDepthCap));
  cmd->add_option("--gain", o.gain, "Gain scheme (default: from params, else exp)")
      ->check(CLI::IsMember({"exp", "linear"}));
  cmd->add_option("--snippet-max-grade", o.snippet_max_grade,
                  "Top grade of the snippet label scale")
      ->check(CLI::Range(1, kMaxGrade));
  cmd->add_option("--combine", o.combine,
                  "Report w*document + (1-w)*snippet utility")
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--missing", o.missing, "Missing-label policy")
      ->check(CLI::IsMember({"zero", "strict"}));
}

LabelPolicy policy_of(const std::string& text) {
  return text == "strict" ? LabelPolicy::strict : LabelPolicy::zero;
}

/// Metric spec plus the parameters it needs, loaded and checked.
struct Evaluator {
  MetricSpec spec;
  std::optional<ParamsFile> params;

  const ClickModelParams* model() const {
    return params ? &params->params : nullptr;
  }
};

Evaluator make_evaluator(const EvalOptions& o) {
  Evaluator ev;
  ev.spec.kind = *parse_metric(o.metric);
  if (needs_params(ev.spec.kind)) {
    if (o.params.empty()) {
      throw UsageError("metric " + o.metric + " requires --params");
    }
  }
  if (!o.params.empty()) ev.params = read_params(o.params);
  GainScheme topical = ev.params ? ev.params->gain : GainScheme{};
  if (!o.gain.empty()) {
    topical.kind = o.gain == "linear" ? GainKind::linear : GainKind::exponential;
  }
  ev.spec.gain_topical = topical;
  ev.spec.gain_snippet = GainScheme{topical.kind, o.snippet_max_grade};
  ev.spec.depth = o.depth;
  ev.spec.combine_weight = o.combine;
  ev.spec.missing = policy_of(o.missing);
  validate(ev.spec);
  return ev;
}

MetricReport score_run(const RankedRun& run, const JudgmentStore& judgments,
                       const Evaluator& ev) {
  const auto serps = join(run, judgments, ev.spec.depth);
  const auto values = omp::score_serps(serps, ev.model(), ev.spec);
  std::map<std::string, double> per_query;
  for (std::size_t i = 0; i < serps.size(); ++i) {
    per_query.emplace(serps[i].query_id, values[i]);
  }
  return make_report(run.tag, ev.spec.kind, std::move(per_query));
}

void print_report(std::ostream& out, const MetricReport& r, bool per_query) {
  const std::string metric(to_string(r.metric));
  if (per_query) {
    for (const auto& [qid, v] : r.per_query) {
      out << r.run_tag << '\t' << metric << '\t' << qid << '\t'
          << format_number(v) << '\n';
    }
  }
  out << r.run_tag << '\t' << metric << "\tall\t" << format_number(r.aggregate)
      << '\n';
}

// --- subcommands -----------------------------------------------------------

struct FitOptions {
  std::string model, clicks, judgments, out;
  FitConfig config;
  std::string dcm_method = "em";
  std::string missing = "zero";
  std::string gain = "exp";
  std::size_t depth = 0;
};

int cmd_fit(const FitOptions& o, std::ostream& out) {
  const auto sessions = parse_clicks(std::filesystem::path(o.clicks));
  const auto judgments = parse_judgments(std::filesystem::path(o.judgments));
  FitConfig config = o.config;
  config.missing = policy_of(o.missing);
  config.dcm_method = *parse_dcm_method(o.dcm_method);
  if (o.depth > 0) config.depth = o.depth;
  const ModelKind model = *parse_model(o.model);
  const FitResult fit = model == ModelKind::dcm
                            ? fit_dcm(sessions, judgments, config)
                            : fit_dbn(sessions, judgments, config);
  ParamsFile file;
  file.params = fit.params;
  file.gain.kind = o.gain == "linear" ? GainKind::linear : GainKind::exponential;
  write_params(o.out, file);

  out << "model\t" << o.model << '\n'
      << "sessions\t" << sessions.size() << '\n'
      << "iterations\t" << fit.iterations << '\n'
      << "converged\t" << (fit.converged ? 1 : 0) << '\n'
      << "mean_log_likelihood\t"
      << format_number(fit.mean_log_likelihood.back()) << '\n';
  return kExitOk;
}

struct EvaluateOptions {
  EvalOptions eval;
  std::string run;
  bool per_query = false;
};

int cmd_evaluate(const EvaluateOptions& o, std::ostream& out) {
  const Evaluator ev = make_evaluator(o.eval);
  const auto judgments = parse_judgments(std::filesystem::path(o.eval.judgments));
  const auto run = parse_run(std::filesystem::path(o.run));
  out << "run\tmetric\tqid\tvalue\n";
  print_report(out, score_run(run, judgments, ev), o.per_query);
  return kExitOk;
}

struct CompareOptions {
  EvalOptions eval;
  std::vector<std::string> runs;
};

int cmd_compare(const CompareOptions& o, std::ostream& out) {
  const Evaluator ev = make_evaluator(o.eval);
  const auto judgments = parse_judgments(std::filesystem::path(o.eval.judgments));
  std::vector<MetricReport> reports;
  for (const auto& path : o.runs) {
    reports.push_back(
        score_run(parse_run(std::filesystem::path(path)), judgments, ev));
  }
  out << "run\tmetric\tqid\tvalue\n";
  for (const auto& r : reports) print_report(out, r, false);

  out << "run_a\trun_b\tqueries\tkendall_tau\n";
  for (std::size_t i = 0; i < reports.size(); ++i) {
    for (std::size_t j = i + 1; j < reports.size(); ++j) {
      std::vector<double> x, y;
      for (const auto& [qid, v] : reports[i].per_query) {
        auto it = reports[j].per_query.find(qid);
        if (it == reports[j].per_query.end()) continue;
        x.push_back(v);
        y.push_back(it->second);
      }
      std::string tau = "NA";
      try {
        tau = format_number(kendall_tau_b(x, y));
      } catch (const AnalysisError&) {
      }
      out << reports[i].run_tag << '\t' << reports[j].run_tag << '\t'
          << x.size() << '\t' << tau << '\n';
    }
  }
  const auto order = system_ordering(reports);
  out << "ordering";
  for (const auto& tag : order) out << '\t' << tag;
  out << '\n';
  return kExitOk;
}

struct SimulateOptions {
  std::string model, params, judgments, run, out;
  std::size_t sessions = 0;
  std::uint64_t seed = 0;
  std::size_t depth = kDefaultDepth;
  std::string missing = "zero";
};

int cmd_simulate(const SimulateOptions& o, std::ostream& out) {
  const ParamsFile params = read_params(o.params);
  if (to_string(params.params.model) != o.model) {
    throw ConfigError("--model " + o.model + " does not match parameter file (" +
                      std::string(to_string(params.params.model)) + ")");
  }
  const auto judgments = parse_judgments(std::filesystem::path(o.judgments));
  const auto run = parse_run(std::filesystem::path(o.run));
  const auto serps = join(run, judgments, o.depth);

  SimConfig config;
  config.sessions_per_query = o.sessions;
  config.seed = o.seed;
  config.params = params.params;
  config.missing = policy_of(o.missing);
  const auto sessions = simulate_sessions(serps, config);
  write_clicks(std::filesystem::path(o.out), sessions);

  std::size_t clicked = 0;
  for (const auto& s : sessions) {
    if (std::find(s.clicks.begin(), s.clicks.end(), true) != s.clicks.end()) {
      ++clicked;
    }
  }
  out << "queries\t" << serps.size() << '\n'
      << "sessions\t" << sessions.size() << '\n'
      << "click_through\t"
      << format_number(sessions.empty() ? 0.0
                                        : static_cast<double>(clicked) /
                                              static_cast<double>(sessions.size()))
      << '\n';
  return kExitOk;
}

struct CorrelateOptions {
  EvalOptions eval;
  std::string run, clicks;
  std::string method = "pearson";
};

int cmd_correlate(const CorrelateOptions& o, std::ostream& out) {
  const Evaluator ev = make_evaluator(o.eval);
  const auto judgments = parse_judgments(std::filesystem::path(o.eval.judgments));
  const auto run = parse_run(std::filesystem::path(o.run));
  const auto sessions = parse_clicks(std::filesystem::path(o.clicks));
  const MetricReport report = score_run(run, judgments, ev);
  const auto online = online_metrics(sessions);
  const auto method = *parse_correlation_method(o.method);

  out << "metric\tonline\tmethod\tqueries\tvalue\n";
  for (OnlineMetric m : {OnlineMetric::uctr, OnlineMetric::max_rr,
                         OnlineMetric::min_rr, OnlineMetric::mean_rr}) {
    std::map<std::string, std::optional<double>> values;
    std::size_t overlap = 0;
    for (const auto& [qid, om] : online) {
      values.emplace(qid, value_of(om, m));
      if (report.per_query.count(qid) && value_of(om, m)) ++overlap;
    }
    std::string value = "NA";
    try {
      value = format_number(correlate(report.per_query, values, method));
    } catch (const AnalysisError&) {
    }
    out << to_string(report.metric) << '\t' << to_string(m) << '\t' << o.method
        << '\t' << overlap << '\t' << value << '\n';
  }
  return kExitOk;
}

struct AgreementOptions {
  std::string labels, aspect;
  std::string rule = "majority_low";
};

int cmd_agreement(const AgreementOptions& o, std::ostream& out) {
  const auto sets =
      parse_rater_labels(std::filesystem::path(o.labels), *parse_aspect(o.aspect));
  const auto rule = *parse_rule(o.rule);
  out << "qid\tdocid\t" << o.aspect << "\traters\n";
  for (const auto& set : sets) {
    out << set.query_id << '\t' << set.doc_id << '\t'
        << aggregate_raters(set, rule).value() << '\t' << set.labels.size()
        << '\n';
  }
  const AgreementStats stats = agreement(sets);
  out << "items\t" << stats.items << '\n'
      << "percent_agreement\t" << format_number(stats.percent_agreement) << '\n'
      << "fleiss_kappa\t" << format_number(stats.fleiss_kappa) << '\n';
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Click-model based offline search evaluation", "releval"};
  app.require_subcommand(1);

  FitOptions fit;
  auto* fit_cmd = app.add_subcommand("fit", "Fit click model parameters");
  fit_cmd->add_option("--model", fit.model)->required()->check(
      CLI::IsMember({"dcm", "dbn"}));
  fit_cmd->add_option("--clicks", fit.clicks, "Click log (JSON lines)")->required();
  fit_cmd->add_option("--judgments", fit.judgments)->required();
  fit_cmd->add_option("--out", fit.out, "Output parameter file")->required();
  fit_cmd->add_option("--max-iters", fit.config.max_iters)->check(CLI::PositiveNumber);
  fit_cmd->add_option("--tol", fit.config.tol)->check(CLI::PositiveNumber);
  fit_cmd->add_option("--smoothing", fit.config.smoothing)->check(CLI::NonNegativeNumber);
  fit_cmd->add_option("--seed", fit.config.seed);
  fit_cmd->add_option("--depth", fit.depth, "DCM stop list length")
      ->check(CLI::Range(std::size_t{1}, kDepthCap));
  fit_cmd->add_option("--dcm-method", fit.dcm_method)
      ->check(CLI::IsMember({"em", "last-click"}));
  fit_cmd->add_option("--missing", fit.missing)->check(CLI::IsMember({"zero", "strict"}));
  fit_cmd->add_option("--gain", fit.gain, "Gain scheme recorded in the output")
      ->check(CLI::IsMember({"exp", "linear"}));

  EvaluateOptions evaluate;
  auto* eval_cmd = app.add_subcommand("evaluate", "Score one run");
  add_eval_options(eval_cmd, evaluate.eval);
  eval_cmd->add_option("--run", evaluate.run, "Run file")->required();
  eval_cmd->add_flag("--per-query", evaluate.per_query);

  CompareOptions compare;
  auto* compare_cmd = app.add_subcommand("compare", "Score and compare runs");
  add_eval_options(compare_cmd, compare.eval);
  compare_cmd->add_option("--runs", compare.runs, "Run files")->required()->expected(1, -1);

  SimulateOptions simulate;
  auto* sim_cmd = app.add_subcommand("simulate", "Generate a synthetic click log");
  sim_cmd->add_option("--model", simulate.model)->required()->check(
      CLI::IsMember({"dcm", "dbn"}));
  sim_cmd->add_option("--params", simulate.params)->required();
  sim_cmd->add_option("--judgments", simulate.judgments)->required();
  sim_cmd->add_option("--run", simulate.run)->required();
  sim_cmd->add_option("--sessions", simulate.sessions, "Sessions per query")
      ->required()
      ->check(CLI::PositiveNumber);
  sim_cmd->add_option("--seed", simulate.seed)->required();
  sim_cmd->add_option("--out", simulate.out)->required();
  sim_cmd->add_option("--depth", simulate.depth)->check(CLI::Range(std::size_t{1}, kDepthCap));
  sim_cmd->add_option("--missing", simulate.missing)->check(CLI::IsMember({"zero", "strict"}));

  CorrelateOptions correlate_opts;
  auto* corr_cmd = app.add_subcommand("correlate", "Correlate a metric with online click metrics");
  add_eval_options(corr_cmd, correlate_opts.eval);
  corr_cmd->add_option("--run", correlate_opts.run)->required();
  corr_cmd->add_option("--clicks", correlate_opts.clicks)->required();
  corr_cmd->add_option("--method", correlate_opts.method)
      ->check(CLI::IsMember({"pearson", "kendall"}));

  AgreementOptions agree;
  auto* agree_cmd = app.add_subcommand("agreement", "Aggregate multi-rater labels");
  agree_cmd->add_option("--labels", agree.labels, "Rater labels TSV")->required();
  agree_cmd->add_option("--aspect", agree.aspect)->required()->check(
      CLI::IsMember({"topical", "perceived", "snippet"}));
  agree_cmd->add_option("--rule", agree.rule)->check(
      CLI::IsMember({"majority_low", "mean_round"}));

  std::vector<const char*> argv{"releval"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*fit_cmd) return cmd_fit(fit, out);
    if (*eval_cmd) return cmd_evaluate(evaluate, out);
    if (*compare_cmd) return cmd_compare(compare, out);
    if (*sim_cmd) return cmd_simulate(simulate, out);
    if (*corr_cmd) return cmd_correlate(correlate_opts, out);
    if (*agree_cmd) return cmd_agreement(agree, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace releval
