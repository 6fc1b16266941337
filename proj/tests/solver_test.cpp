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

#include "ttmpp/solver.hpp"

#include <gtest/gtest.h>

#include <set>

#include "test_support.hpp"
#include "ttmpp/brute_force.hpp"

namespace ttmpp {
namespace {

using testing::expect_sound;
using testing::make_t1;

Instance t1_cancelled() {
  return apply_scenario(make_t1(), testing::cancel_a_s3());
}

// All feasible P of an instance with their objectives, by plain odometer
// enumeration over X + P in {0,1}. Independent of brute_force's pruning.
std::vector<std::pair<double, int>> enumerate_all(const Instance& inst) {
  const auto n = inst.obsolete_schedule.size();
  std::vector<std::pair<double, int>> out;
  Perturbation p(inst.num_courses(), inst.num_faculty(), inst.num_slots(), 0);
  for (std::uint64_t mask = 0; mask < (1ull << n); ++mask) {
    for (std::size_t k = 0; k < n; ++k) {
      const int y = (mask >> k) & 1;
      p.values()[k] = y - inst.obsolete_schedule.values()[k];
    }
    if (!check_feasible(inst, p).feasible()) continue;
    out.emplace_back(evaluate_objective(inst, p, canonical_aux(p)),
                     change_count(p));
  }
  return out;
}

TEST(BruteForce, ReferenceCancellation) {
  const auto inst = t1_cancelled();
  const auto all = enumerate_all(inst);
  ASSERT_FALSE(all.empty());
  double best = -1e300;
  for (auto [z, c] : all) best = std::max(best, z);
  std::set<int> optimal_counts;
  for (auto [z, c] : all) {
    if (z == best) optimal_counts.insert(c);
  }
  EXPECT_EQ(best, -2.0);
  EXPECT_EQ(*optimal_counts.begin(), 1);

  const auto sol = brute_force(inst);
  ASSERT_EQ(sol.status, SolveStatus::kOptimal);
  EXPECT_EQ(sol.objective, -2.0);
  EXPECT_EQ(sol.change_count, 1);
  EXPECT_EQ(sol.p(0, 1, 2), -1);
  expect_sound(inst, sol);
}

TEST(BruteForce, UnmodifiedReferenceAndInfeasible) {
  const auto sol = brute_force(make_t1());
  EXPECT_EQ(sol.status, SolveStatus::kOptimal);
  EXPECT_EQ(sol.objective, 0.0);
  EXPECT_EQ(sol.change_count, 0);

  auto bad = make_t1();
  bad.demand(1, 2) = 2;  // two B sections at s3, only two teachers, f2 busy
  bad.demand(0, 2) = 1;
  EXPECT_EQ(brute_force(bad).status, SolveStatus::kInfeasible);
}

TEST(BruteForce, RefusesLargeInstances) {
  Instance inst;
  for (int i = 0; i < 5; ++i) inst.courses.push_back({"c" + std::to_string(i)});
  for (int j = 0; j < 5; ++j) inst.faculty.push_back({"f" + std::to_string(j)});
  inst.slots = {{"s0"}};
  resize_arrays(inst);
  EXPECT_THROW(brute_force(inst), std::invalid_argument);
}

TEST(LpRelaxation, UnmodifiedReferenceHasZeroOptimum) {
  const auto lp = solve_lp_relaxation(build_model(make_t1()));
  ASSERT_EQ(lp.status, LpStatus::kOptimal);
  EXPECT_NEAR(lp.objective, 0.0, 1e-9);
}

TEST(LpRelaxation, ContradictoryDemandIsInfeasible) {
  auto inst = make_t1();
  inst.demand(1, 0) = 1;  // B@s1, but f1 holds A@s1 and f2 is unavailable
  inst.preferences(1, 0) = 0.0;
  const auto lp = solve_lp_relaxation(build_model(inst));
  EXPECT_EQ(lp.status, LpStatus::kInfeasible);
}

TEST(LpRelaxation, FixedPerturbationLeavesTAtZero) {
  auto model = build_model(make_t1());
  for (std::size_t k = 0; k < model.num_p(); ++k) {
    model.variables[k].lower = model.variables[k].upper = 0;
  }
  const auto lp = solve_lp_relaxation(model);
  ASSERT_EQ(lp.status, LpStatus::kOptimal);
  EXPECT_NEAR(lp.objective, 0.0, 1e-12);
  for (std::size_t k = model.num_p(); k < model.variables.size(); ++k) {
    EXPECT_NEAR(lp.values[k], 0.0, 1e-12);
  }
}

TEST(Solve, ReferenceCancellation) {
  const auto inst = t1_cancelled();
  const auto sol = solve(build_model(inst));
  ASSERT_EQ(sol.status, SolveStatus::kOptimal);
  EXPECT_EQ(sol.objective, -2.0);
  EXPECT_EQ(sol.change_count, 1);
  EXPECT_EQ(sol.p(0, 1, 2), -1);
  EXPECT_EQ(sol.t_aux(0, 1), 1);
  EXPECT_EQ(sol.stats.gap, 0.0);
  expect_sound(inst, sol);
}

TEST(Solve, UnmodifiedReference) {
  const auto inst = make_t1();
  const auto sol = solve(build_model(inst));
  ASSERT_EQ(sol.status, SolveStatus::kOptimal);
  EXPECT_EQ(sol.objective, 0.0);
  EXPECT_EQ(sol.change_count, 0);
  expect_sound(inst, sol);
}

TEST(Solve, InfeasibleIsAStatus) {
  auto inst = make_t1();
  inst.demand(1, 0) = 1;
  inst.preferences(1, 0) = 0.0;
  const auto sol = solve(build_model(inst));
  EXPECT_EQ(sol.status, SolveStatus::kInfeasible);
  EXPECT_FALSE(sol.has_incumbent);
}

TEST(Solve, RejectsBadOptions) {
  SolveOptions o;
  o.integrality_tolerance = 0.0;
  EXPECT_THROW(solve(build_model(make_t1()), o), std::invalid_argument);
  SolveOptions n;
  n.node_limit = 0;
  EXPECT_THROW(solve(build_model(make_t1()), n), std::invalid_argument);
}

TEST(MinChangeRefine, ReferenceCases) {
  const auto inst = t1_cancelled();
  const auto model = build_model(inst);
  const auto refined = min_change_refine(model, -2.0);
  ASSERT_EQ(refined.status, SolveStatus::kOptimal);
  EXPECT_EQ(refined.change_count, 1);
  EXPECT_EQ(refined.objective, -2.0);
  expect_sound(inst, refined);

  const auto base = make_t1();
  const auto unchanged = min_change_refine(build_model(base), 0.0);
  ASSERT_EQ(unchanged.status, SolveStatus::kOptimal);
  EXPECT_EQ(unchanged.change_count, 0);
}

TEST(Solve, CanonicalAuxWhenPenaltyIsZero) {
  auto inst = t1_cancelled();
  for (double& a : inst.swap_penalties.values()) a = 0.0;
  SolveOptions o;
  o.min_change_phase = false;
  const auto sol = solve(build_model(inst), o);
  ASSERT_EQ(sol.status, SolveStatus::kOptimal);
  EXPECT_EQ(sol.t_aux, canonical_aux(sol.p));
  expect_sound(inst, sol);
}

TEST(Solve, DeterministicAcrossRuns) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto inst = testing::random_tiny_instance(seed);
    const auto model = build_model(inst);
    const auto a = solve(model);
    const auto b = solve(model);
    EXPECT_EQ(a.status, b.status);
    EXPECT_EQ(a.p, b.p);
    EXPECT_EQ(a.objective, b.objective);
    EXPECT_EQ(a.stats.nodes, b.stats.nodes);
    EXPECT_EQ(a.stats.lp_iterations, b.stats.lp_iterations);
  }
}

TEST(Solve, BoundSandwichAtEveryNode) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const auto inst = testing::random_tiny_instance(seed);
    SolveOptions o;
    o.min_change_phase = false;
    int violations = 0;
    o.on_node = [&](const NodeEvent& e) {
      if (e.outcome == NodeEvent::Outcome::kInfeasible) return;
      if (e.lp_bound > e.parent_bound + 1e-7) ++violations;
      if (e.outcome == NodeEvent::Outcome::kBranched && e.incumbent &&
          e.lp_bound < *e.incumbent - 1e-7) {
        ++violations;
      }
    };
    const auto sol = solve(build_model(inst), o);
    EXPECT_EQ(violations, 0) << "seed " << seed;
    if (sol.status == SolveStatus::kOptimal) {
      EXPECT_GE(sol.stats.root_bound, sol.objective - 1e-9);
      EXPECT_EQ(sol.stats.gap, 0.0);
      expect_sound(inst, sol);
    }
  }
}

TEST(Solve, MatchesOracleOnRandomInstances) {
  int optimal = 0, infeasible = 0;
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    const auto inst = testing::random_tiny_instance(seed, 16);
    const auto oracle = brute_force(inst);
    for (auto rule :
         {BranchingRule::kMostFractional, BranchingRule::kFirstFractional}) {
      SolveOptions o;
      o.branching_rule = rule;
      const auto sol = solve(build_model(inst), o);
      ASSERT_EQ(sol.status, oracle.status) << "seed " << seed;
      if (oracle.status != SolveStatus::kOptimal) continue;
      EXPECT_EQ(sol.objective, oracle.objective) << "seed " << seed;
      EXPECT_EQ(sol.change_count, oracle.change_count) << "seed " << seed;
      expect_sound(inst, sol);
    }
    (oracle.status == SolveStatus::kOptimal ? optimal : infeasible)++;
  }
  EXPECT_GT(optimal, 30);
  EXPECT_GT(infeasible, 10);
}

TEST(Solve, NodeLimitReportsLimitReached) {
  // A tie-rich instance where the root relaxation is fractional.
  std::optional<Solution> limited;
  for (std::uint64_t seed = 0; seed < 300 && !limited; ++seed) {
    const auto inst = testing::random_tiny_instance(seed);
    const auto model = build_model(inst);
    SolveOptions full;
    full.min_change_phase = false;
    const auto sol = solve(model, full);
    if (sol.stats.nodes < 3) continue;
    SolveOptions o = full;
    o.node_limit = 1;
    limited = solve(model, o);
  }
  ASSERT_TRUE(limited.has_value());
  EXPECT_EQ(limited->status, SolveStatus::kLimitReached);
  if (limited->has_incumbent) EXPECT_GE(limited->stats.gap, 0.0);
}

}  // namespace
}  // namespace ttmpp
