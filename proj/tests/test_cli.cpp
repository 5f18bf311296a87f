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
#include <cstdint>
#include <filesystem>
#include <sstream>

#include "doctest.h"
#include "releval/cli.hpp"

using namespace releval;

namespace {

const std::filesystem::path kData = RELEVAL_DATA_DIR;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return (kData / name).string(); }

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("releval_cli_" + std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("dcg on a single top-grade result") {
  const auto r = run({"evaluate", "--metric", "dcg", "--judgments",
                      data("single/judgments.tsv"), "--run", data("single/run.txt")});
  CHECK(r.code == kExitOk);
  CHECK(r.out == "run\tmetric\tqid\tvalue\nsingle\tdcg\tall\t15.000000\n");
}

TEST_CASE("exit codes") {
  CHECK(run({"evaluate", "--metric", "udcm", "--judgments", data("single/judgments.tsv"),
             "--run", data("single/run.txt")})
            .code == kExitUsage);
  CHECK(run({"evaluate", "--metric", "ndcg", "--judgments", data("single/judgments.tsv"),
             "--run", data("single/run.txt")})
            .code == kExitUsage);
  CHECK(run({"frobnicate"}).code == kExitUsage);
  CHECK(run({}).code == kExitUsage);
  CHECK(run({"--help"}).code == kExitOk);

  const auto bad = run({"evaluate", "--metric", "dcg", "--judgments", data("raters.tsv"),
                        "--run", data("single/run.txt")});
  CHECK(bad.code == kExitData);
  CHECK(bad.err.find("line 1") != std::string::npos);
  CHECK(run({"evaluate", "--metric", "dcg", "--judgments", data("no_such_file.tsv"),
             "--run", data("single/run.txt")})
            .code == kExitData);
  CHECK(run({"simulate", "--model", "dbn", "--params", data("dcm.json"), "--judgments",
             data("judgments.tsv"), "--run", data("run_topical.txt"), "--sessions", "1",
             "--seed", "1", "--out", "/dev/null"})
            .code == kExitData);
}

TEST_CASE("fit then evaluate") {
  TempDir tmp;
  const auto sim = run({"simulate", "--model", "dbn", "--params", data("dbn.json"),
                        "--judgments", data("judgments.tsv"), "--run",
                        data("run_shuffled.txt"), "--sessions", "200", "--seed", "3",
                        "--out", tmp / "clicks.jsonl"});
  REQUIRE(sim.code == kExitOk);
  CHECK(sim.out.find("sessions\t4000\n") != std::string::npos);

  const auto fit = run({"fit", "--model", "dbn", "--clicks", tmp / "clicks.jsonl",
                        "--judgments", data("judgments.tsv"), "--out", tmp / "fit.json"});
  REQUIRE(fit.code == kExitOk);
  CHECK(fit.out.find("model\tdbn\n") != std::string::npos);

  const auto eval = run({"evaluate", "--metric", "udbn", "--judgments",
                         data("judgments.tsv"), "--run", data("run_topical.txt"),
                         "--params", tmp / "fit.json", "--per-query"});
  CHECK(eval.code == kExitOk);
  // header, 20 queries, aggregate
  CHECK(std::count(eval.out.begin(), eval.out.end(), '\n') == 22);
}

TEST_CASE("compare reports aggregates, pairwise tau and the ordering") {
  const auto r = run({"compare", "--metric", "dcg", "--judgments", data("judgments.tsv"),
                      "--runs", data("run_topical.txt"), data("run_attractive.txt")});
  REQUIRE(r.code == kExitOk);
  CHECK(r.out.find("run_a\trun_b\tqueries\tkendall_tau\ntopical\tattractive\t20\t") !=
        std::string::npos);
  CHECK(r.out.find("ordering\ttopical\tattractive\n") != std::string::npos);
}

TEST_CASE("agreement") {
  const auto r = run({"agreement", "--labels", data("raters.tsv"), "--aspect", "topical"});
  REQUIRE(r.code == kExitOk);
  CHECK(r.out.find("items\t20\n") != std::string::npos);
  CHECK(r.out.find("fleiss_kappa\t") != std::string::npos);
  CHECK(run({"agreement", "--labels", data("raters.tsv"), "--aspect", "tone"}).code ==
        kExitUsage);
}
