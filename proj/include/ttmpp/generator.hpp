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

// Synthetic mid-sized mathematics department: 57 sections of 17 courses,
// 13 full-time faculty teaching exactly 3 courses, 9 part-time faculty
// teaching 0 to 2, and 24 time slots whose conflicts come from overlapping
// meeting days and clock times. W and alpha are all ones. Part-time faculty
// teach lower-division courses only; full-time faculty are split into a
// pure and an applied group that also cover their own upper-division
// courses. The obsolete schedule is drawn from a seed and is feasible for
// its own demand by construction.

#ifndef TTMPP_GENERATOR_HPP_
#define TTMPP_GENERATOR_HPP_

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "ttmpp/instance.hpp"

namespace ttmpp {

struct DepartmentShape {
  static constexpr int kCourses = 17;
  static constexpr int kFullTime = 13;
  static constexpr int kPartTime = 9;
  static constexpr int kSlots = 24;
  static constexpr int kSections = 57;
  static constexpr int kFullTimeLoad = 3;
  static constexpr int kPartTimeMaxLoad = 2;
};

// The course whose sections Simulation-3-style scenarios cancel; exactly
// three of its sections go to part-time faculty.
inline constexpr const char* kFlagshipCourse = "MTH201";

namespace detail {

enum class Division { kLower, kPure, kApplied };

struct CourseSpec {
  const char* id;
  const char* label;
  Division division;
  int sections;
};

inline const std::vector<CourseSpec>& course_catalog() {
  static const std::vector<CourseSpec> catalog = {
      {"MTH105", "MTH 105", Division::kLower, 4},
      {"MTH111", "MTH 111", Division::kLower, 5},
      {"MTH112", "MTH 112", Division::kLower, 6},
      {"MTH161", "MTH 161", Division::kLower, 8},
      {"MTH201", "MTH 201", Division::kLower, 8},
      {"MTH202", "MTH 202", Division::kLower, 5},
      {"MTH211", "MTH 211", Division::kLower, 4},
      {"MTH301", "MTH 301", Division::kPure, 2},
      {"MTH311", "MTH 311", Division::kPure, 2},
      {"MTH321", "MTH 321", Division::kPure, 2},
      {"MTH401", "MTH 401", Division::kPure, 1},
      {"MTH411", "MTH 411", Division::kPure, 1},
      {"MTH341", "MTH 341", Division::kApplied, 2},
      {"MTH351", "MTH 351", Division::kApplied, 2},
      {"MTH361", "MTH 361", Division::kApplied, 2},
      {"MTH431", "MTH 431", Division::kApplied, 2},
      {"MTH451", "MTH 451", Division::kApplied, 1},
  };
  return catalog;
}

struct SlotSpec {
  std::string days;
  int start;  // minutes after midnight
  int end;
};

inline std::string clock(int minutes) {
  const int h = minutes / 60;
  const int m = minutes % 60;
  return std::to_string(h) + ":" + (m < 10 ? "0" : "") + std::to_string(m);
}

inline std::vector<SlotSpec> slot_catalog() {
  const int short_starts[] = {490, 555, 620, 685, 750, 815, 880, 945};
  const int long_starts[] = {480, 565, 650, 735, 820, 905};
  std::vector<SlotSpec> out;
  for (int s : short_starts) out.push_back({"MWF", s, s + 55});
  for (int s : long_starts) out.push_back({"TR", s, s + 75});
  for (int k = 0; k < 5; ++k) {
    out.push_back({"MTWR", short_starts[k], short_starts[k] + 55});
  }
  for (int k = 2; k < 7; ++k) {
    out.push_back({"MWRF", short_starts[k], short_starts[k] + 55});
  }
  return out;
}

inline bool slots_overlap(const SlotSpec& a, const SlotSpec& b) {
  const bool share_day = std::any_of(a.days.begin(), a.days.end(), [&](char c) {
    return b.days.find(c) != std::string::npos;
  });
  return share_day && a.start < b.end && b.start < a.end;
}

class SeededDraw {
 public:
  explicit SeededDraw(std::uint64_t seed) : rng_(seed) {}
  std::size_t below(std::size_t n) { return n == 0 ? 0 : rng_() % n; }
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t k = v.size(); k > 1; --k) {
      std::swap(v[k - 1], v[below(k)]);
    }
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace detail

inline Instance generate_paper_instance(std::uint64_t seed) {
  using detail::Division;
  const auto& catalog = detail::course_catalog();
  const auto slot_specs = detail::slot_catalog();
  detail::SeededDraw draw(seed);

  Instance inst;
  for (const auto& c : catalog) inst.courses.push_back({c.id, c.label, 1.0});
  std::vector<Division> group;
  for (int k = 0; k < DepartmentShape::kFullTime; ++k) {
    const bool pure = k < 6;
    const std::string n = (k + 1 < 10 ? "0" : "") + std::to_string(k + 1);
    inst.faculty.push_back({"FT" + n,
                            std::string("Full-time ") + n +
                                (pure ? " (pure)" : " (applied)"),
                            DepartmentShape::kFullTimeLoad,
                            DepartmentShape::kFullTimeLoad});
    group.push_back(pure ? Division::kPure : Division::kApplied);
  }
  for (int k = 0; k < DepartmentShape::kPartTime; ++k) {
    const std::string n = (k + 1 < 10 ? "0" : "") + std::to_string(k + 1);
    inst.faculty.push_back({"PT" + n, "Part-time " + n, 0.0,
                            DepartmentShape::kPartTimeMaxLoad});
    group.push_back(Division::kLower);
  }
  for (const auto& s : slot_specs) {
    const std::string id = s.days + "-" + (s.start < 600 ? "0" : "") +
                           std::to_string(s.start / 60) +
                           (s.start % 60 < 10 ? "0" : "") +
                           std::to_string(s.start % 60);
    inst.slots.push_back({id, s.days + " " + detail::clock(s.start) + "-" +
                                  detail::clock(s.end)});
  }
  for (std::size_t a = 0; a < slot_specs.size(); ++a) {
    for (std::size_t b = a + 1; b < slot_specs.size(); ++b) {
      if (detail::slots_overlap(slot_specs[a], slot_specs[b])) {
        inst.conflicts.push_back({inst.slots[a].id, inst.slots[b].id});
      }
    }
  }
  resize_arrays(inst);

  const std::size_t nj = inst.num_faculty();
  for (std::size_t i = 0; i < catalog.size(); ++i) {
    for (std::size_t j = 0; j < nj; ++j) {
      const auto d = catalog[i].division;
      inst.eligibility(i, j) = d == Division::kLower || d == group[j] ? 1 : 0;
    }
  }

  // Course to faculty. Upper-division sections go to their own group,
  // three flagship sections to distinct part-timers, the rest of the lower
  // division fills the remaining capacity.
  std::vector<int> capacity(nj);
  for (std::size_t j = 0; j < nj; ++j) {
    capacity[j] = static_cast<int>(inst.faculty[j].load_max);
  }
  std::vector<std::vector<std::size_t>> teaches(nj);
  auto give = [&](std::size_t i, std::size_t j) {
    teaches[j].push_back(i);
    --capacity[j];
  };
  auto members = [&](Division d) {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < nj; ++j) {
      if (group[j] == d) out.push_back(j);
    }
    return out;
  };
  for (Division d : {Division::kPure, Division::kApplied}) {
    auto staff = members(d);
    for (std::size_t i = 0; i < catalog.size(); ++i) {
      if (catalog[i].division != d) continue;
      for (int s = 0; s < catalog[i].sections; ++s) {
        std::vector<std::size_t> open;
        for (auto j : staff) {
          if (capacity[j] > 1) open.push_back(j);  // keep one lower section
        }
        if (open.empty()) throw std::logic_error("upper-division overflow");
        give(i, open[draw.below(open.size())]);
      }
    }
  }
  std::vector<std::size_t> lower_sections;
  std::size_t flagship = 0;
  for (std::size_t i = 0; i < catalog.size(); ++i) {
    if (catalog[i].id == std::string(kFlagshipCourse)) flagship = i;
    if (catalog[i].division != Division::kLower) continue;
    for (int s = 0; s < catalog[i].sections; ++s) lower_sections.push_back(i);
  }
  auto part_timers = members(Division::kLower);
  draw.shuffle(part_timers);
  for (int k = 0; k < 3; ++k) {
    give(flagship, part_timers[k]);
    lower_sections.erase(std::find(lower_sections.begin(),
                                   lower_sections.end(), flagship));
  }
  draw.shuffle(lower_sections);
  std::vector<std::size_t> seats;
  for (std::size_t j = 0; j < nj; ++j) {
    for (int c = 0; c < capacity[j]; ++c) seats.push_back(j);
  }
  // Remaining flagship sections are kept away from part-timers.
  std::stable_partition(lower_sections.begin(), lower_sections.end(),
                        [&](std::size_t i) { return i == flagship; });
  std::vector<std::size_t> full_seats, part_seats;
  for (auto j : seats) {
    (group[j] == Division::kLower ? part_seats : full_seats).push_back(j);
  }
  draw.shuffle(full_seats);
  draw.shuffle(part_seats);
  std::vector<std::size_t> order = full_seats;
  // Flagship sections take the first full-time seats; the rest of the
  // queue is reshuffled so part-timers see a random mix.
  std::vector<std::size_t> rest(full_seats.begin() + 5, full_seats.end());
  rest.insert(rest.end(), part_seats.begin(), part_seats.end());
  draw.shuffle(rest);
  order.resize(5);
  order.insert(order.end(), rest.begin(), rest.end());
  if (order.size() != lower_sections.size()) {
    throw std::logic_error("section and seat counts disagree");
  }
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (k >= 5 && lower_sections[k] == flagship) {
      throw std::logic_error("flagship section left over");
    }
    give(lower_sections[k], order[k]);
  }

  // Times: each faculty member gets pairwise non-conflicting slots.
  const auto pairs = conflict_indices(inst);
  auto clash = [&](std::size_t a, std::size_t b) {
    if (a == b) return true;
    return std::binary_search(pairs.begin(), pairs.end(),
                              std::make_pair(std::min(a, b), std::max(a, b)));
  };
  for (std::size_t j = 0; j < nj; ++j) {
    std::vector<std::size_t> taken;
    for (std::size_t i : teaches[j]) {
      std::vector<std::size_t> open;
      for (std::size_t t = 0; t < inst.num_slots(); ++t) {
        if (std::none_of(taken.begin(), taken.end(),
                         [&](std::size_t u) { return clash(t, u); })) {
          open.push_back(t);
        }
      }
      const std::size_t t = open[draw.below(open.size())];
      taken.push_back(t);
      inst.obsolete_schedule(i, j, t) = 1;
    }
  }
  inst.demand = baseline_demand(inst);
  return inst;
}

// Reference edits on a generated department.
//   cancel_part_time: one part-time section is cancelled.
//   cancel_full_time: one full-time section is cancelled; a part-time
//     section of the same course sits in a slot the full-time member can
//     still take.
//   cancel_flagship: the three part-time flagship sections and one
//     full-time flagship section are cancelled.
struct PaperScenarios {
  Scenario cancel_part_time;
  Scenario cancel_full_time;
  Scenario cancel_flagship;
};

inline PaperScenarios paper_scenarios(const Instance& inst) {
  const std::size_t ni = inst.num_courses();
  const std::size_t nj = inst.num_faculty();
  const std::size_t nt = inst.num_slots();
  const auto pairs = conflict_indices(inst);
  auto clash = [&](std::size_t a, std::size_t b) {
    return a == b ||
           std::binary_search(pairs.begin(), pairs.end(),
                              std::make_pair(std::min(a, b), std::max(a, b)));
  };
  auto part_time = [&](std::size_t j) { return inst.faculty[j].load_min == 0; };
  auto slots_of = [&](std::size_t j) {
    std::vector<std::pair<std::size_t, std::size_t>> out;  // (course, slot)
    for (std::size_t i = 0; i < ni; ++i) {
      for (std::size_t t = 0; t < nt; ++t) {
        if (inst.obsolete_schedule(i, j, t)) out.emplace_back(i, t);
      }
    }
    return out;
  };
  // A part-time section (of `course`, or any course when nullopt) that `j`
  // could take over after dropping the section at slot `freed`.
  auto takeover = [&](std::size_t j, std::size_t freed,
                      std::optional<std::size_t> course) {
    std::vector<std::size_t> keep;
    for (auto [i, t] : slots_of(j)) {
      if (t != freed) keep.push_back(t);
    }
    for (std::size_t k = 0; k < nj; ++k) {
      if (!part_time(k)) continue;
      for (auto [i, t] : slots_of(k)) {
        if (course && i != *course) continue;
        if (!inst.eligibility(i, j) || inst.preferences(j, t) <= 0) continue;
        if (std::none_of(keep.begin(), keep.end(),
                         [&](std::size_t u) { return clash(t, u); })) {
          return true;
        }
      }
    }
    return false;
  };
  auto delta = [&](std::size_t i, std::size_t t) {
    return DemandDelta{inst.courses[i].id, inst.slots[t].id, -1};
  };

  PaperScenarios out;
  out.cancel_part_time.name = "cancel one part-time section";
  out.cancel_full_time.name = "cancel one full-time section";
  out.cancel_flagship.name = std::string("cancel four ") + kFlagshipCourse +
                             " sections";
  for (std::size_t j = 0; j < nj && out.cancel_part_time.demand_deltas.empty();
       ++j) {
    if (!part_time(j)) continue;
    const auto own = slots_of(j);
    if (!own.empty()) {
      out.cancel_part_time.demand_deltas.push_back(
          delta(own.front().first, own.front().second));
    }
  }
  for (std::size_t j = 0; j < nj && out.cancel_full_time.demand_deltas.empty();
       ++j) {
    if (part_time(j)) continue;
    for (auto [i, t] : slots_of(j)) {
      if (takeover(j, t, i)) {
        out.cancel_full_time.demand_deltas.push_back(delta(i, t));
        break;
      }
    }
  }
  const auto flagship = course_index(inst, kFlagshipCourse);
  if (flagship) {
    bool full_time_found = false;
    for (std::size_t j = 0; j < nj; ++j) {
      for (auto [i, t] : slots_of(j)) {
        if (i != *flagship) continue;
        if (part_time(j)) {
          out.cancel_flagship.demand_deltas.push_back(delta(i, t));
        } else if (!full_time_found && takeover(j, t, std::nullopt)) {
          out.cancel_flagship.demand_deltas.push_back(delta(i, t));
          full_time_found = true;
        }
      }
    }
  }
  return out;
}

}  // namespace ttmpp

#endif  // TTMPP_GENERATOR_HPP_
