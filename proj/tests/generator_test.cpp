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

#include "ttmpp/generator.hpp"

#include <gtest/gtest.h>

#include "ttmpp/model.hpp"

namespace ttmpp {
namespace {

int load(const Instance& inst, std::size_t j) {
  int n = 0;
  for (std::size_t i = 0; i < inst.num_courses(); ++i) {
    for (std::size_t t = 0; t < inst.num_slots(); ++t) {
      n += inst.obsolete_schedule(i, j, t);
    }
  }
  return n;
}

TEST(GeneratePaperInstance, PublishedDimensions) {
  const auto inst = generate_paper_instance(1);
  EXPECT_EQ(inst.num_courses(), 17u);
  EXPECT_EQ(inst.num_faculty(), 22u);
  EXPECT_EQ(inst.num_slots(), 24u);
  int sections = 0;
  for (int m : inst.demand.values()) sections += m;
  EXPECT_EQ(sections, 57);
  EXPECT_EQ(build_model(inst).variables.size(), 9350u);
  for (double w : inst.preferences.values()) EXPECT_EQ(w, 1.0);
  for (double a : inst.swap_penalties.values()) EXPECT_EQ(a, 1.0);
}

TEST(GeneratePaperInstance, FacultyLoads) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto inst = generate_paper_instance(seed);
    int full = 0, part = 0;
    for (std::size_t j = 0; j < inst.num_faculty(); ++j) {
      const auto& f = inst.faculty[j];
      if (f.load_min == 3 && f.load_max == 3) {
        ++full;
        EXPECT_EQ(load(inst, j), 3);
      } else {
        ++part;
        EXPECT_EQ(f.load_min, 0);
        EXPECT_EQ(f.load_max, 2);
        EXPECT_LE(load(inst, j), 2);
      }
    }
    EXPECT_EQ(full, 13);
    EXPECT_EQ(part, 9);
  }
}

TEST(GeneratePaperInstance, ObsoleteScheduleIsFeasibleForItsOwnDemand) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto inst = generate_paper_instance(seed);
    ASSERT_TRUE(validate_instance(inst).empty()) << "seed " << seed;
    const Perturbation zero(17, 22, 24, 0);
    EXPECT_TRUE(check_feasible(inst, zero).feasible()) << "seed " << seed;
  }
}

TEST(GeneratePaperInstance, FlagshipCourseHasThreePartTimeSections) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto inst = generate_paper_instance(seed);
    const auto i = *course_index(inst, kFlagshipCourse);
    int part = 0, full = 0;
    for (std::size_t j = 0; j < inst.num_faculty(); ++j) {
      for (std::size_t t = 0; t < inst.num_slots(); ++t) {
        if (!inst.obsolete_schedule(i, j, t)) continue;
        (inst.faculty[j].load_min == 0 ? part : full)++;
      }
    }
    EXPECT_EQ(part, 3);
    EXPECT_GE(full, 1);
  }
}

TEST(GeneratePaperInstance, ConflictsComeFromOverlappingMeetings) {
  const auto inst = generate_paper_instance(1);
  EXPECT_TRUE(validate_instance(inst).empty());
  auto conflicting = [&](const std::string& a, const std::string& b) {
    return std::any_of(inst.conflicts.begin(), inst.conflicts.end(),
                       [&](const ConflictPair& p) {
                         return (p.slot_a == a && p.slot_b == b) ||
                                (p.slot_a == b && p.slot_b == a);
                       });
  };
  EXPECT_TRUE(conflicting("MWF-0810", "MTWR-0810"));
  EXPECT_TRUE(conflicting("TR-0800", "MTWR-0810"));
  EXPECT_FALSE(conflicting("MWF-0810", "TR-0800"));
  EXPECT_FALSE(conflicting("MWF-0810", "MWF-0915"));
  EXPECT_FALSE(inst.conflicts.empty());
}

TEST(GeneratePaperInstance, SeedDeterminism) {
  EXPECT_EQ(generate_paper_instance(5), generate_paper_instance(5));
  EXPECT_NE(generate_paper_instance(5).obsolete_schedule,
            generate_paper_instance(6).obsolete_schedule);
}

TEST(PaperScenarios, Shapes) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto inst = generate_paper_instance(seed);
    const auto sc = paper_scenarios(inst);
    ASSERT_EQ(sc.cancel_part_time.demand_deltas.size(), 1u);
    ASSERT_EQ(sc.cancel_full_time.demand_deltas.size(), 1u);
    ASSERT_EQ(sc.cancel_flagship.demand_deltas.size(), 4u);
    for (const auto& d : sc.cancel_flagship.demand_deltas) {
      EXPECT_EQ(d.course, kFlagshipCourse);
      EXPECT_EQ(d.delta, -1);
    }
    for (const auto* s : {&sc.cancel_part_time, &sc.cancel_full_time,
                          &sc.cancel_flagship}) {
      const auto edited = apply_scenario(inst, *s);
      EXPECT_TRUE(validate_instance(edited).empty());
    }
  }
}

}  // namespace
}  // namespace ttmpp
