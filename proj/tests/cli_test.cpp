// Copyright 2026 The ttmpp Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ttmpp/cli.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "lp_reader.hpp"
#include "test_support.hpp"
#include "ttmpp/brute_force.hpp"

namespace ttmpp {
namespace {

using testing::TempDir;
namespace fs = std::filesystem;

const fs::path kSource = TTMPP_SOURCE_DIR;

std::string data(const std::string& name) {
  return (kSource / "data" / name).string();
}

std::string golden(const std::string& name) {
  return read_text_file(kSource / "tests" / "golden" / name);
}

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "ttmpp");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

TEST(Cli, ValidateReferenceInstanceIsSilent) {
  const auto r = run({"validate", data("t1.json")});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "");
  EXPECT_EQ(r.err, "");
}

TEST(Cli, ValidateReportsEveryViolation) {
  TempDir dir;
  auto j = instance_to_json(testing::make_t1());
  j["faculty"][1]["load_min"] = 3.0;
  j["C"][0][1] = 0;  // f2 keeps A@s3
  const auto path = (dir.path() / "bad.json").string();
  write_text_file(path, j.dump());
  const auto r = run({"validate", path});
  EXPECT_EQ(r.code, cli::kExitInvalidInstance);
  EXPECT_EQ(r.out, "");
  EXPECT_NE(r.err.find("invalid_load_range"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("assignment_not_eligible"), std::string::npos) << r.err;
}

TEST(Cli, SolveGoldenPlain) {
  const auto r = run({"solve", data("t1.json"), "--scenario",
                      data("cancel_a_s3.json"), "--report", "plain"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, golden("t1_cancel_a_s3.txt"));
}

TEST(Cli, SolveGoldenJson) {
  const auto r = run({"solve", data("t1.json"), "--scenario",
                      data("cancel_a_s3.json"), "--report", "json"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, golden("t1_cancel_a_s3.json"));
}

TEST(Cli, SwapScenarioGoldens) {
  auto r = run({"solve", data("t1.json"), "--scenario", data("swap_a_b_s3.json")});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, golden("t1_swap_a_b_s3.txt"));
  r = run({"solve", data("t1.json"), "--scenario", data("swap_a_b_s3.json"),
           "--report", "json"});
  EXPECT_EQ(r.out, golden("t1_swap_a_b_s3.json"));
}

// The goldens were written by the program; pin them to the oracle too.
TEST(Cli, GoldensAgreeWithBruteForce) {
  const auto t1 = load_instance(data("t1.json"));
  EXPECT_EQ(t1, testing::make_t1());
  for (const char* name : {"cancel_a_s3", "swap_a_b_s3"}) {
    const auto sc = parse_scenario_json(
        read_text_file(data(std::string(name) + ".json")));
    const auto inst = apply_scenario(t1, sc);
    const auto oracle = brute_force(inst);
    ASSERT_EQ(oracle.status, SolveStatus::kOptimal);
    const auto report = report_from_json(
        json::parse(golden(std::string("t1_") + name + ".json")));
    EXPECT_EQ(report.objective, oracle.objective) << name;
    EXPECT_EQ(static_cast<int>(report.entries.size()), oracle.change_count)
        << name;
  }
}

TEST(Cli, SolveWritesReportAndSolutionFiles) {
  TempDir dir;
  const auto report = (dir.path() / "r.txt").string();
  const auto solution = (dir.path() / "s.json").string();
  const auto r = run({"solve", data("t1.json"), "--scenario",
                      data("cancel_a_s3.json"), "--out", report, "--solution",
                      solution});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "");
  EXPECT_EQ(read_text_file(report), golden("t1_cancel_a_s3.txt"));
  const auto sol = solution_from_json(json::parse(read_text_file(solution)));
  EXPECT_EQ(sol.objective, -2.0);
}

TEST(Cli, ExitCodesFollowSolveStatus) {
  TempDir dir;
  Scenario crowd;
  crowd.demand_deltas = {{"B", "s3", 2}};
  const auto path = (dir.path() / "crowd.json").string();
  write_text_file(path, serialize_scenario_json(crowd));
  auto r = run({"solve", data("t1.json"), "--scenario", path});
  EXPECT_EQ(r.code, cli::kExitInfeasible);
  EXPECT_EQ(r.out, "");
  EXPECT_NE(r.err.find("Infeasible"), std::string::npos);

  EXPECT_EQ(cli::exit_code(SolveStatus::kOptimal), 0);
  EXPECT_EQ(cli::exit_code(SolveStatus::kInfeasible), 2);
  EXPECT_EQ(cli::exit_code(SolveStatus::kLimitReached), 3);
  EXPECT_EQ(cli::exit_code(SolveStatus::kError), 70);
}

TEST(Cli, TimeLimitGivesLimitReached) {
  TempDir dir;
  const auto inst = (dir.path() / "paper.json").string();
  const auto scenarios = (dir.path() / "sc").string();
  ASSERT_EQ(run({"gen-paper-instance", "--seed", "1", "--out", inst,
                 "--scenario-dir", scenarios})
                .code,
            0);
  const auto r = run({"solve", inst, "--scenario",
                      scenarios + "/cancel_flagship.json", "--time-limit",
                      "0.000001"});
  EXPECT_EQ(r.code, cli::kExitLimitReached) << r.err;
  EXPECT_NE(r.err.find("LimitReached"), std::string::npos);
}

TEST(Cli, ParseAndIoErrors) {
  EXPECT_EQ(run({}).code, cli::kExitUsage);
  EXPECT_EQ(run({"frobnicate"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"solve"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"solve", data("t1.json"), "--report", "xml"}).code,
            cli::kExitUsage);
  EXPECT_EQ(run({"solve", data("t1.json"), "--time-limit", "-1"}).code,
            cli::kExitUsage);
  EXPECT_EQ(run({"-v", "-q", "validate", data("t1.json")}).code, cli::kExitUsage);
  EXPECT_EQ(run({"validate", data("t1.json"), "solve"}).code, cli::kExitUsage);

  auto r = run({"solve", "/nonexistent/t1.json"});
  EXPECT_EQ(r.code, cli::kExitIo);
  EXPECT_NE(r.err.find("/nonexistent/t1.json"), std::string::npos);
  r = run({"export-lp", data("t1.json"), "--out", "/nonexistent/dir/x.lp"});
  EXPECT_EQ(r.code, cli::kExitIo);

  TempDir dir;
  const auto broken = (dir.path() / "broken.json").string();
  write_text_file(broken, "{\n  \"schema_version\": 1,\n  ]");
  r = run({"validate", broken});
  EXPECT_EQ(r.code, cli::kExitUsage);
  EXPECT_NE(r.err.find(broken + ":3:"), std::string::npos) << r.err;

  EXPECT_EQ(run({"--help"}).code, 0);
  EXPECT_EQ(run({"--version"}).code, 0);
}

TEST(Cli, PerturbBuildsScenarios) {
  auto r = run({"perturb", data("t1.json"), "--cancel", "A@s3", "--name",
                "cancel A@s3"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, read_text_file(data("cancel_a_s3.json")));

  r = run({"perturb", data("t1.json"), "--cancel", "A@s3", "--add", "B@s3:1"});
  EXPECT_EQ(r.code, 0);
  const auto sc = parse_scenario_json(r.out);
  ASSERT_EQ(sc.demand_deltas.size(), 2u);
  EXPECT_EQ(sc.demand_deltas[1], (DemandDelta{"B", "s3", 1}));

  EXPECT_EQ(run({"perturb", data("t1.json")}).code, cli::kExitUsage);
  EXPECT_EQ(run({"perturb", data("t1.json"), "--cancel", "A@s3:2"}).code,
            cli::kExitUsage);
  EXPECT_EQ(run({"perturb", data("t1.json"), "--cancel", "Z@s3"}).code,
            cli::kExitUsage);
  EXPECT_EQ(run({"perturb", data("t1.json"), "--cancel", "As3"}).code,
            cli::kExitUsage);
}

TEST(Cli, DeltaSpecGrammar) {
  EXPECT_EQ(cli::parse_delta_spec("MTH201@MWF-0810:3", -1),
            (DemandDelta{"MTH201", "MWF-0810", -3}));
  EXPECT_EQ(cli::parse_delta_spec("A@s1", 1), (DemandDelta{"A", "s1", 1}));
  EXPECT_EQ(cli::parse_delta_spec("A@8:10", 1), (DemandDelta{"A", "8", 10}));
  EXPECT_EQ(cli::parse_delta_spec("A@8:10:2", 1), (DemandDelta{"A", "8:10", 2}));
  EXPECT_EQ(cli::parse_delta_spec("A@t:x", 1), (DemandDelta{"A", "t:x", 1}));
  EXPECT_THROW(cli::parse_delta_spec("A@s1:0", 1), cli::UsageError);
  EXPECT_THROW(cli::parse_delta_spec("@s1", 1), cli::UsageError);
  EXPECT_THROW(cli::parse_delta_spec("A@", 1), cli::UsageError);
  EXPECT_THROW(cli::parse_delta_spec("A@:2", 1), cli::UsageError);
}

TEST(Cli, ListenAddressGrammar) {
  EXPECT_EQ(cli::parse_listen_address("0.0.0.0:80").host, "0.0.0.0");
  EXPECT_EQ(cli::parse_listen_address(":8080").host, "127.0.0.1");
  EXPECT_EQ(cli::parse_listen_address("8080").port, 8080);
  EXPECT_EQ(cli::parse_listen_address("[::1]:9000").host, "::1");
  EXPECT_THROW(cli::parse_listen_address("host:0"), cli::UsageError);
  EXPECT_THROW(cli::parse_listen_address("host:70000"), cli::UsageError);
  EXPECT_THROW(cli::parse_listen_address("host:"), cli::UsageError);
}

TEST(Cli, ExportLpMatchesModel) {
  TempDir dir;
  const auto out = (dir.path() / "t1.lp").string();
  ASSERT_EQ(run({"export-lp", data("t1.json"), "--scenario",
                 data("cancel_a_s3.json"), "--out", out})
                .code,
            0);
  const auto inst = apply_scenario(testing::make_t1(), testing::cancel_a_s3());
  EXPECT_EQ(read_text_file(out), to_lp_string(build_model(inst)));
  EXPECT_EQ(testing::read_lp(read_text_file(out)).variables.size(), 16u);
}

TEST(Cli, GeneratedPaperInstanceInBothFormats) {
  TempDir dir;
  const auto json_path = (dir.path() / "paper.json").string();
  const auto csv_dir = (dir.path() / "paper_csv").string();
  ASSERT_EQ(run({"gen-paper-instance", "--seed", "4", "--out", json_path}).code, 0);
  ASSERT_EQ(run({"gen-paper-instance", "--seed", "4", "--format", "csv", "--out",
                 csv_dir})
                .code,
            0);
  const auto a = load_instance(json_path);
  EXPECT_EQ(a, generate_paper_instance(4));
  EXPECT_EQ(load_instance(csv_dir), a);
  EXPECT_EQ(build_model(a).variables.size(), 9350u);
  EXPECT_TRUE(check_feasible(a, Perturbation(17, 22, 24, 0)).feasible());
  EXPECT_EQ(run({"validate", csv_dir}).code, 0);
  EXPECT_EQ(run({"gen-paper-instance", "--format", "csv"}).code, cli::kExitUsage);
}

// An Added row whose course differs from the course the same faculty
// member lost: the flagship cancellation forces a course swap.
TEST(Cli, FlagshipCancellationForcesCourseSwap) {
  TempDir dir;
  const auto inst = (dir.path() / "paper.json").string();
  const auto scenarios = (dir.path() / "sc").string();
  ASSERT_EQ(run({"gen-paper-instance", "--seed", "1", "--out", inst,
                 "--scenario-dir", scenarios})
                .code,
            0);
  const auto r = run({"solve", inst, "--scenario",
                      scenarios + "/cancel_flagship.json", "--report", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto report = report_from_json(json::parse(r.out));
  bool swapped = false;
  for (const auto& added : report.entries) {
    if (added.direction != SwapDirection::kAdded) continue;
    for (const auto& removed : report.entries) {
      if (removed.direction == SwapDirection::kRemoved &&
          removed.faculty_id == added.faculty_id &&
          removed.course_id != added.course_id) {
        swapped = true;
      }
    }
  }
  EXPECT_TRUE(swapped) << render_plain(report);
}

}  // namespace
}  // namespace ttmpp
