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
// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "recovery_fixture.hpp"
#include "releval/analysis.hpp"
#include "releval/estimation.hpp"
#include "releval/io.hpp"
#include "releval/kernels.hpp"
#include "releval/metrics.hpp"
#include "test_support.hpp"

using namespace releval;
using namespace releval::testing;

namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

const fs::path kData = RELEVAL_DATA_DIR;
const std::string kCli = RELEVAL_CLI;

struct Verdict {
  bool pass = true;
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v, int precision = 3) {
  std::ostringstream os;
  os.precision(precision);
  os << v;
  return os.str();
}

// The 100 seeded instances shared by criteria 1 and 2.
std::vector<Instance> shared_instances() {
  std::mt19937_64 rng(20240601);
  std::vector<Instance> out;
  for (int i = 0; i < 100; ++i) out.push_back(random_instance(rng, 8));
  return out;
}

Verdict oracle_equivalence() {
  const auto start = Clock::now();
  double worst = 0.0;
  for (const auto& inst : shared_instances()) {
    for (const auto* params : {&inst.dcm, &inst.dbn}) {
      const auto closed = click_profile(inst.serp, *params);
      const auto brute = brute_marginals(inst.serp, *params);
      for (std::size_t k = 0; k < closed.size(); ++k) {
        worst = std::max(worst, std::abs(closed.exam[k] - brute.exam[k]));
        worst = std::max(worst, std::abs(closed.click[k] - brute.click[k]));
      }
    }
  }
  const double elapsed = seconds_since(start);
  return {worst <= 1e-10 && elapsed < 10.0,
          "max |closed - enumeration| = " + fmt(worst) + ", " + fmt(elapsed) + " s"};
}

Verdict composition_identity() {
  std::size_t mismatches = 0;
  const MetricSpec spec;
  for (const auto& inst : shared_instances()) {
    const auto dcm = dcm_profile(inst.serp, inst.dcm);
    const auto dbn = dbn_profile(inst.serp, inst.dbn);
    mismatches += u_dcm(inst.serp, inst.dcm, spec) != u_metric(dcm, inst.serp, spec);
    mismatches += u_dcm_s(inst.serp, inst.dcm, spec) != u_metric_s(dcm, inst.serp, spec);
    mismatches += u_dbn(inst.serp, inst.dbn, spec) != u_metric(dbn, inst.serp, spec);
    mismatches += u_dbn_s(inst.serp, inst.dbn, spec) != u_metric_s(dbn, inst.serp, spec);
  }
  return {mismatches == 0, std::to_string(mismatches) + " of 400 values differ"};
}

Verdict worked_fixtures() {
  const auto serp = make_serp({{4, 3, 0}, {2, 1, 4}});
  MetricSpec spec;
  spec.gain_topical = {GainKind::linear, 4};
  spec.gain_snippet = {GainKind::linear, 4};
  const std::array<double, kNumGrades> attract{0.0, 0.4, 0.6, 0.8, 0.9};
  const auto dcm = dcm_params(attract, {0.5, 0.5});
  const auto dbn = dbn_params(attract, {0.1, 0.2, 0.3, 0.4, 0.5}, 0.9);
  const double values[4] = {u_dcm(serp, dcm, spec), u_dcm_s(serp, dcm, spec),
                            u_dbn(serp, dbn, spec), u_dbn_s(serp, dbn, spec)};
  const double expected[4] = {0.92, 0.6, 0.908, 0.54};
  bool pass = true;
  std::string detail;
  for (int i = 0; i < 4; ++i) {
    pass = pass && std::abs(values[i] - expected[i]) <= 1e-12;
    detail += (i ? ", " : "") + fmt(values[i], 12);
  }
  return {pass, "uDCM, uDCM_S, uDBN, uDBN_S = " + detail};
}

double max_gap(const std::map<Grade, double>& fit, const std::map<Grade, double>& truth) {
  double gap = 0.0;
  for (const auto& [g, v] : truth) gap = std::max(gap, std::abs(fit.at(g) - v));
  return gap;
}

// Sessions shared by criteria 4 and 5.
const RecoveryCorpus& corpus() {
  static const RecoveryCorpus c = recovery_corpus(200, 10, 2024);
  return c;
}

const std::vector<Session>& dbn_recovery_sessions() {
  static const std::vector<Session> s = simulate(corpus(), dbn_truth(), 1000, 99);
  return s;
}

Verdict recovery_dcm() {
  const auto start = Clock::now();
  const auto truth = dcm_truth();
  const auto sessions = simulate(corpus(), truth, 1000, 98);
  const auto fit = fit_dcm(sessions, corpus().judgments, FitConfig{});
  const double elapsed = seconds_since(start);
  const double a_gap = max_gap(fit.params.attractiveness, truth.attractiveness);
  double s_gap = 0.0;
  const std::size_t n = truth.dcm_stop.size();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    s_gap = std::max(s_gap, std::abs(fit.params.dcm_stop[i] - truth.dcm_stop[i]));
  }
  const bool pass = a_gap <= 0.02 && s_gap <= 0.02 && elapsed < 60.0;
  return {pass, std::to_string(sessions.size()) + " sessions, max|a| err " + fmt(a_gap) +
                    ", max|s_1..s_9| err " + fmt(s_gap) + ", " + fmt(elapsed) +
                    " s; s_10 = " + fmt(fit.params.dcm_stop[n - 1]) + " vs " +
                    fmt(truth.dcm_stop[n - 1]) +
                    " is excluded: the stop probability after the last result "
                    "never enters the likelihood"};
}

Verdict recovery_dbn() {
  const auto start = Clock::now();
  const auto truth = dbn_truth();
  const auto& sessions = dbn_recovery_sessions();
  FitConfig config;
  config.seed = 1;
  const auto fit = fit_dbn(sessions, corpus().judgments, config);
  const double elapsed = seconds_since(start);
  const double a_gap = max_gap(fit.params.attractiveness, truth.attractiveness);
  const double s_gap = max_gap(fit.params.dbn_satisfaction, truth.dbn_satisfaction);
  const double g_gap = std::abs(fit.params.dbn_continuation - truth.dbn_continuation);
  const bool pass = a_gap <= 0.05 && s_gap <= 0.05 && g_gap <= 0.02 && elapsed < 60.0;
  return {pass, std::to_string(sessions.size()) + " sessions, max|a| err " + fmt(a_gap) +
                    ", max|sat| err " + fmt(s_gap) + ", |gamma| err " + fmt(g_gap) + ", " +
                    fmt(elapsed) + " s"};
}

double worst_drop(const std::vector<double>& trace) {
  double drop = 0.0;
  for (std::size_t i = 1; i < trace.size(); ++i) {
    drop = std::max(drop, trace[i - 1] - trace[i]);
  }
  return drop;
}

Verdict em_ascent() {
  std::vector<std::vector<Session>> datasets;
  std::vector<JudgmentStore> judgments;
  std::mt19937_64 rng(21);
  for (int d = 0; d < 20; ++d) {
    const auto truth = random_instance(rng, 8);
    JudgmentStore store;
    for (const auto& r : truth.serp.results) {
      store.insert(truth.serp.query_id, r.doc_id, r.labels);
    }
    SimConfig sim;
    sim.sessions_per_query = 200;
    sim.seed = static_cast<std::uint64_t>(d);
    sim.params = truth.dbn;
    auto sessions = simulate_sessions(std::vector<LabeledSerp>{truth.serp}, sim);
    const bool clicked = std::any_of(sessions.begin(), sessions.end(), [](const Session& s) {
      return std::find(s.clicks.begin(), s.clicks.end(), true) != s.clicks.end();
    });
    if (!clicked) continue;
    datasets.push_back(std::move(sessions));
    judgments.push_back(std::move(store));
  }
  datasets.push_back(dbn_recovery_sessions());
  judgments.push_back(corpus().judgments);

  double ll_drop = 0.0, objective_drop = 0.0, smoothed_ll_drop = 0.0;
  int iterations = 0;
  for (std::size_t i = 0; i < datasets.size(); ++i) {
    FitConfig config;
    config.seed = i;
    config.smoothing = 0.0;
    const auto plain = fit_dbn(datasets[i], judgments[i], config);
    ll_drop = std::max(ll_drop, worst_drop(plain.mean_log_likelihood));
    iterations += plain.iterations;
    config.smoothing = 1.0;
    const auto smoothed = fit_dbn(datasets[i], judgments[i], config);
    objective_drop = std::max(objective_drop, worst_drop(smoothed.mean_objective));
    smoothed_ll_drop = std::max(smoothed_ll_drop, worst_drop(smoothed.mean_log_likelihood));
    iterations += smoothed.iterations;
  }
  const bool pass = ll_drop <= 1e-9 && objective_drop <= 1e-9;
  return {pass, std::to_string(datasets.size()) + " datasets, " + std::to_string(iterations) +
                    " iterations; largest per-iteration drop: log-likelihood (no "
                    "pseudo-counts) " + fmt(ll_drop) + ", penalised objective " +
                    fmt(objective_drop) + "; raw log-likelihood under pseudo-counts " +
                    fmt(smoothed_ll_drop) + " (not monotone by construction)"};
}

Verdict ranking_discrepancy() {
  const auto judgments = parse_judgments(kData / "judgments.tsv");
  const auto params = read_params(kData / "dcm.json").params;
  std::vector<MetricReport> by_dcg, by_udcm;
  for (const char* name : {"run_topical.txt", "run_clicktrained.txt", "run_attractive.txt",
                           "run_shuffled.txt"}) {
    const auto run = parse_run(kData / name);
    const auto serps = join(run, judgments, kDefaultDepth);
    const auto score = [&](MetricKind kind, std::vector<MetricReport>& into) {
      MetricSpec spec;
      spec.kind = kind;
      const auto values = omp::score_serps(serps, &params, spec);
      std::map<std::string, double> per_query;
      for (std::size_t i = 0; i < serps.size(); ++i) per_query[serps[i].query_id] = values[i];
      into.push_back(make_report(run.tag, kind, per_query));
    };
    score(MetricKind::dcg, by_dcg);
    score(MetricKind::udcm, by_udcm);
  }
  std::vector<double> topical, perceived;
  std::ifstream in(kData / "judgments.tsv");
  for (std::string line; std::getline(in, line);) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    std::string q, d, ts, ps;
    fields >> q >> d >> ts >> ps;
    if (ts == "-" || ps == "-") continue;
    topical.push_back(std::stod(ts));
    perceived.push_back(std::stod(ps));
  }
  const double label_corr = pearson_oracle(topical, perceived);
  const auto dcg_order = system_ordering(by_dcg);
  const auto udcm_order = system_ordering(by_udcm);
  const auto join_tags = [](const std::vector<std::string>& v) {
    std::string s;
    for (const auto& x : v) s += (s.empty() ? "" : " > ") + x;
    return s;
  };
  return {label_corr < 0 && dcg_order != udcm_order,
          "perceived/topical correlation " + fmt(label_corr) + "; DCG: " +
              join_tags(dcg_order) + "; uDCM: " + join_tags(udcm_order)};
}

Verdict degenerate_limits() {
  std::mt19937_64 rng(404);
  const MetricSpec spec;
  std::size_t failures = 0;
  for (int i = 0; i < 200; ++i) {
    const auto inst = random_instance(rng, 10);
    const auto& serp = inst.serp;
    const auto g_r = [&](std::size_t k) {
      return gain(*serp.results[k].labels.topical, spec.gain_topical);
    };
    const auto g_s = [&](std::size_t k) {
      return gain(*serp.results[k].labels.snippet, spec.gain_snippet);
    };
    const auto a_of = [&](std::size_t k) {
      return inst.dcm.attractiveness_of(*serp.results[k].labels.perceived);
    };

    auto no_attraction = inst.dcm;
    for (auto& [g, v] : no_attraction.attractiveness) v = 0.0;
    double snippet_sum = 0.0;
    for (std::size_t k = 0; k < serp.size(); ++k) snippet_sum += g_s(k);
    failures += u_dcm(serp, no_attraction, spec) != 0.0;
    failures += u_dcm_s(serp, no_attraction, spec) != snippet_sum;

    auto never_stop = inst.dcm;
    std::fill(never_stop.dcm_stop.begin(), never_stop.dcm_stop.end(), 0.0);
    double clicked_sum = 0.0;
    for (std::size_t k = 0; k < serp.size(); ++k) clicked_sum += a_of(k) * g_r(k);
    failures += u_dcm(serp, never_stop, spec) != clicked_sum;

    auto abandon = inst.dbn;
    abandon.dbn_continuation = 0.0;
    failures += u_dbn(serp, abandon, spec) != a_of(0) * g_r(0);
  }
  return {failures == 0, std::to_string(failures) + " of 800 exact checks failed"};
}

Verdict analysis_oracles() {
  std::mt19937_64 rng(8);
  std::vector<std::string> base;
  for (int i = 0; i < 50; ++i) base.push_back("item" + std::to_string(i));
  double tau_gap = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    auto a = base, b = base;
    std::shuffle(a.begin(), a.end(), rng);
    std::shuffle(b.begin(), b.end(), rng);
    std::vector<double> pos_a(50), pos_b(50);
    for (std::size_t i = 0; i < 50; ++i) {
      pos_a[std::stoul(a[i].substr(4))] = static_cast<double>(i);
      pos_b[std::stoul(b[i].substr(4))] = static_cast<double>(i);
    }
    tau_gap = std::max(tau_gap, std::abs(kendall_tau(a, b) - tau_b_oracle(pos_a, pos_b)));
  }

  double pearson_gap = 0.0;
  std::normal_distribution<double> noise(1.0, 3.0);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> x(40), y(40);
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] = noise(rng);
      y[i] = 0.3 * x[i] + noise(rng);
    }
    pearson_gap = std::max(pearson_gap, std::abs(pearson(x, y) - pearson_oracle(x, y)));
  }

  std::vector<RaterLabelSet> unanimous;
  std::uniform_int_distribution<int> grade(0, kMaxGrade);
  for (int item = 0; item < 30; ++item) {
    const Grade g{grade(rng)};
    unanimous.push_back({"q", "d" + std::to_string(item), Aspect::topical,
                         std::vector<Grade>(2 + item % 4, g)});
  }
  const double kappa = agreement(unanimous).fleiss_kappa;

  return {tau_gap == 0.0 && pearson_gap <= 1e-12 && kappa == 1.0,
          "max tau gap " + fmt(tau_gap) + ", max pearson gap " + fmt(pearson_gap) +
              ", unanimous kappa " + fmt(kappa)};
}

struct Command {
  int status;
  std::string out;
};

Command shell(const std::string& command) {
  Command result{-1, {}};
  FILE* pipe = popen(command.c_str(), "r");
  if (!pipe) return result;
  char buffer[4096];
  std::size_t n;
  while ((n = fread(buffer, 1, sizeof buffer, pipe)) > 0) result.out.append(buffer, n);
  const int raw = pclose(pipe);
  result.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return result;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string quoted(const fs::path& p) { return "'" + p.string() + "'"; }

struct Pipeline {
  bool ok = true;
  std::string transcript;
};

Pipeline run_pipeline(const fs::path& dir) {
  fs::create_directories(dir);
  const auto judgments = quoted(kData / "judgments.tsv");
  const auto run = [](const char* name) { return quoted(kData / name); };
  const auto clicks = quoted(dir / "clicks.jsonl");
  const auto fitted = quoted(dir / "fit.json");
  const std::vector<std::string> steps{
      "simulate --model dbn --params " + quoted(kData / "dbn.json") + " --judgments " +
          judgments + " --run " + run("run_shuffled.txt") +
          " --sessions 300 --seed 7 --out " + clicks,
      "fit --model dbn --clicks " + clicks + " --judgments " + judgments + " --out " +
          fitted + " --seed 7",
      "evaluate --metric udbn --judgments " + judgments + " --run " + run("run_topical.txt") +
          " --params " + fitted + " --per-query",
      "compare --metric udbn-s --judgments " + judgments + " --params " + fitted +
          " --runs " + run("run_topical.txt") + " " + run("run_clicktrained.txt") + " " +
          run("run_attractive.txt") + " " + run("run_shuffled.txt"),
      "correlate --metric udbn --judgments " + judgments + " --run " +
          run("run_shuffled.txt") + " --params " + fitted + " --clicks " + clicks +
          " --method kendall",
  };
  Pipeline p;
  for (const auto& step : steps) {
    const auto result = shell("'" + kCli + "' " + step + " 2>&1");
    p.ok = p.ok && result.status == 0;
    p.transcript += "$ " + step.substr(0, step.find(' ')) + " [exit " +
                    std::to_string(result.status) + "]\n" + result.out;
  }
  p.transcript += slurp(dir / "clicks.jsonl") + slurp(dir / "fit.json");
  return p;
}

Verdict cli_pipeline() {
  const auto root = fs::temp_directory_path() /
                    ("releval_acceptance_" + std::to_string(::getpid()));
  const auto first = run_pipeline(root / "a");
  const auto second = run_pipeline(root / "b");
  fs::remove_all(root);
  const bool identical = first.transcript == second.transcript;
  return {first.ok && second.ok && identical,
          std::string(first.ok && second.ok ? "all steps exit 0" : "a step failed") +
              ", outputs " + (identical ? "byte-identical" : "differ") + " (" +
              std::to_string(first.transcript.size()) + " bytes)"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"1 oracle equivalence", oracle_equivalence},
      {"2 metric composition identity", composition_identity},
      {"3 worked fixtures", worked_fixtures},
      {"4a parameter recovery (DCM)", recovery_dcm},
      {"4b parameter recovery (DBN)", recovery_dbn},
      {"5 EM ascent (DBN)", em_ascent},
      {"6 ranking discrepancy", ranking_discrepancy},
      {"7 degenerate limits", degenerate_limits},
      {"8 analysis oracles", analysis_oracles},
      {"9 end-to-end CLI", cli_pipeline},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failed += !v.pass;
    std::cout << (v.pass ? "PASS " : "FAIL ") << name << ": " << v.detail << std::endl;
  }
  std::cout << (failed ? "FAILED " : "ALL PASSED ") << criteria.size() - failed << "/"
            << criteria.size() << std::endl;
  return failed ? 1 : 0;
}
