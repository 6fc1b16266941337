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

#include "ttmpp/report.hpp"

#include <gtest/gtest.h>

#include "test_support.hpp"
#include "ttmpp/brute_force.hpp"

namespace ttmpp {
namespace {

using testing::make_t1;

Solution zero_solution(const Instance& inst) {
  Solution s;
  s.status = SolveStatus::kOptimal;
  s.has_incumbent = true;
  s.p = Perturbation(inst.num_courses(), inst.num_faculty(), inst.num_slots(), 0);
  s.t_aux = AuxArray(inst.num_courses(), inst.num_faculty(), 0);
  return s;
}

SwapReport t1_cancel_report() {
  const auto inst = apply_scenario(make_t1(), testing::cancel_a_s3());
  return diff_schedules(inst, solve(build_model(inst)));
}

TEST(DiffSchedules, ReferenceCancellation) {
  const auto r = t1_cancel_report();
  ASSERT_EQ(r.entries.size(), 1u);
  EXPECT_EQ(r.entries[0],
            (SwapEntry{SwapDirection::kRemoved, "Course A", "Faculty Two",
                       "Slot 3", "A", "f2", "s3"}));
  ASSERT_EQ(r.activated_penalties.size(), 1u);
  EXPECT_EQ(r.activated_penalties[0].course_id, "A");
  EXPECT_EQ(r.activated_penalties[0].faculty_id, "f2");
  EXPECT_EQ(r.activated_penalties[0].t_aux, 1);
  EXPECT_EQ(r.objective, -2.0);
  EXPECT_EQ(r.preference_delta, -1.0);
  EXPECT_EQ(r.penalty_total, 1.0);
}

TEST(DiffSchedules, ZeroPerturbation) {
  const auto inst = make_t1();
  const auto r = diff_schedules(inst, zero_solution(inst));
  EXPECT_TRUE(r.entries.empty());
  EXPECT_TRUE(r.activated_penalties.empty());
  EXPECT_EQ(r.objective, 0.0);
}

TEST(DiffSchedules, RefusesWithoutIncumbent) {
  const auto inst = make_t1();
  auto s = zero_solution(inst);
  s.status = SolveStatus::kInfeasible;
  s.has_incumbent = false;
  EXPECT_THROW(diff_schedules(inst, s), ReportError);
  s.status = SolveStatus::kLimitReached;
  EXPECT_THROW(diff_schedules(inst, s), ReportError);
  s.has_incumbent = true;
  EXPECT_NO_THROW(diff_schedules(inst, s));
}

TEST(DiffSchedules, RemovedBeforeAddedInIndexOrder) {
  const auto inst = make_t1();
  auto s = zero_solution(inst);
  s.p(1, 0, 1) = -1;
  s.p(0, 0, 1) = 1;
  s.p(0, 0, 0) = -1;
  s.t_aux = canonical_aux(s.p);
  const auto r = diff_schedules(inst, s);
  ASSERT_EQ(r.entries.size(), 3u);
  EXPECT_EQ(r.entries[0].direction, SwapDirection::kRemoved);
  EXPECT_EQ(r.entries[0].course_id, "A");
  EXPECT_EQ(r.entries[1].direction, SwapDirection::kRemoved);
  EXPECT_EQ(r.entries[1].course_id, "B");
  EXPECT_EQ(r.entries[2].direction, SwapDirection::kAdded);
  EXPECT_EQ(r.count(SwapDirection::kRemoved), 2u);
  EXPECT_EQ(r.count(SwapDirection::kAdded), 1u);
}

TEST(RenderReport, EmptyPlainTableShowsNoneOnBothSides) {
  const auto inst = make_t1();
  const auto text =
      render_report(diff_schedules(inst, zero_solution(inst)),
                    ReportFormat::kPlainTable);
  EXPECT_NE(text.find("Sections removed"), std::string::npos);
  EXPECT_NE(text.find("Sections added"), std::string::npos);
  const auto first = text.find("(None)");
  ASSERT_NE(first, std::string::npos);
  EXPECT_NE(text.find("(None)", first + 1), std::string::npos);
}

TEST(RenderReport, ReferenceCancellationGolden) {
  const std::string want =
      "Sections removed                 | Sections added\n"
      "Course    Faculty      Time slot | Course  Faculty  Time slot\n"
      "-------------------------------- | --------------------------\n"
      "Course A  Faculty Two  Slot 3    | (None)\n"
      "\n"
      "Status:            Optimal\n"
      "Objective:         -2\n"
      "Preference delta:  -1\n"
      "Penalty total:     1\n"
      "Changed cells:     1\n"
      "Swap penalties:\n"
      "  Course A / Faculty Two  T=1\n";
  EXPECT_EQ(render_report(t1_cancel_report(), ReportFormat::kPlainTable), want);
}

TEST(RenderReport, JsonRoundTrip) {
  const auto r = t1_cancel_report();
  const auto text = render_report(r, ReportFormat::kJson);
  const auto j = nlohmann::json::parse(text);
  EXPECT_EQ(j["schema_version"], kReportSchemaVersion);
  EXPECT_EQ(j["change_count"], 1);
  EXPECT_EQ(report_from_json(j), r);
}

TEST(RenderReport, JsonRejectsUnknownSchema) {
  auto j = report_to_json(t1_cancel_report());
  j["schema_version"] = 99;
  EXPECT_THROW(report_from_json(j), ReportError);
  j = report_to_json(t1_cancel_report());
  j["entries"][0]["direction"] = "sideways";
  EXPECT_THROW(report_from_json(j), ReportError);
}

TEST(RenderReport, DeterministicAcrossRuns) {
  const auto a = render_report(t1_cancel_report(), ReportFormat::kPlainTable);
  const auto b = render_report(t1_cancel_report(), ReportFormat::kPlainTable);
  EXPECT_EQ(a, b);
}

TEST(SwapReport, ConservationAndDecompositionOnOracleInstances) {
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 120; ++seed) {
    const auto inst = testing::random_tiny_instance(seed);
    const auto sol = solve(build_model(inst));
    if (sol.status != SolveStatus::kOptimal) continue;
    testing::expect_sound(inst, sol);
    const auto r = diff_schedules(inst, sol);
    EXPECT_EQ(static_cast<int>(r.entries.size()), sol.change_count);
    EXPECT_NEAR(r.objective, r.preference_delta - r.penalty_total, 1e-9);
    EXPECT_NEAR(r.objective, sol.objective, 1e-9);
    // removed - added equals the net number of cancelled sections
    const auto base = baseline_demand(inst);
    long net = 0;
    for (std::size_t k = 0; k < base.values().size(); ++k) {
      net += base.values()[k] - inst.demand.values()[k];
    }
    EXPECT_EQ(static_cast<long>(r.count(SwapDirection::kRemoved)) -
                  static_cast<long>(r.count(SwapDirection::kAdded)),
              net)
        << "seed " << seed;
    EXPECT_EQ(report_from_json(report_to_json(r)), r);
    ++checked;
  }
  EXPECT_GT(checked, 40);
}

}  // namespace
}  // namespace ttmpp
