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

// Domain model for the rescheduling problem: courses (index i), faculty
// (index j), time slots (index t), and the parameter arrays that describe
// the obsolete timetable and the new demand. Every array uses the
// (course, faculty, slot) index order.

#ifndef TTMPP_INSTANCE_HPP_
#define TTMPP_INSTANCE_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ttmpp/grid.hpp"

namespace ttmpp {

struct Course {
  std::string id;
  std::string label;
  double load_units = 1.0;  // H_i

  friend bool operator==(const Course&, const Course&) = default;
};

struct FacultyMember {
  std::string id;
  std::string label;
  double load_min = 0.0;
  double load_max = 0.0;

  friend bool operator==(const FacultyMember&, const FacultyMember&) = default;
};

struct TimeSlot {
  std::string id;
  std::string label;

  friend bool operator==(const TimeSlot&, const TimeSlot&) = default;
};

// Two slot ids that one faculty member may not both teach in.
// Canonical order: slot_a precedes slot_b in the instance's slot list.
struct ConflictPair {
  std::string slot_a;
  std::string slot_b;

  friend bool operator==(const ConflictPair&, const ConflictPair&) = default;
};

struct Instance {
  std::vector<Course> courses;
  std::vector<FacultyMember> faculty;
  std::vector<TimeSlot> slots;
  std::vector<ConflictPair> conflicts;

  Grid3<int> obsolete_schedule;  // X[i][j][t] in {0,1}
  Grid2<double> preferences;     // W[j][t] >= 0
  Grid2<double> swap_penalties;  // alpha[i][j] >= 0
  Grid2<int> demand;             // M[i][t] >= 0
  Grid2<int> eligibility;        // C[i][j] in {0,1}

  std::size_t num_courses() const { return courses.size(); }
  std::size_t num_faculty() const { return faculty.size(); }
  std::size_t num_slots() const { return slots.size(); }

  friend bool operator==(const Instance&, const Instance&) = default;
};

// Allocates every parameter array at the dimensions implied by the entity
// lists: X, M and C zero, W and alpha one.
inline void resize_arrays(Instance& inst) {
  const auto ni = inst.num_courses();
  const auto nj = inst.num_faculty();
  const auto nt = inst.num_slots();
  inst.obsolete_schedule = Grid3<int>(ni, nj, nt, 0);
  inst.preferences = Grid2<double>(nj, nt, 1.0);
  inst.swap_penalties = Grid2<double>(ni, nj, 1.0);
  inst.demand = Grid2<int>(ni, nt, 0);
  inst.eligibility = Grid2<int>(ni, nj, 0);
}

namespace detail {

template <typename Entity>
std::optional<std::size_t> find_index(const std::vector<Entity>& items,
                                      const std::string& id) {
  for (std::size_t k = 0; k < items.size(); ++k) {
    if (items[k].id == id) return k;
  }
  return std::nullopt;
}

}  // namespace detail

inline std::optional<std::size_t> course_index(const Instance& inst,
                                               const std::string& id) {
  return detail::find_index(inst.courses, id);
}
inline std::optional<std::size_t> faculty_index(const Instance& inst,
                                                const std::string& id) {
  return detail::find_index(inst.faculty, id);
}
inline std::optional<std::size_t> slot_index(const Instance& inst,
                                             const std::string& id) {
  return detail::find_index(inst.slots, id);
}

// Conflict pairs resolved to slot indices, each (a, b) with a < b, sorted
// and deduplicated. Pairs naming unknown or identical slots are dropped;
// validate_instance reports them.
inline std::vector<std::pair<std::size_t, std::size_t>> conflict_indices(
    const Instance& inst) {
  std::set<std::pair<std::size_t, std::size_t>> pairs;
  for (const auto& c : inst.conflicts) {
    auto a = slot_index(inst, c.slot_a);
    auto b = slot_index(inst, c.slot_b);
    if (!a || !b || *a == *b) continue;
    pairs.emplace(std::min(*a, *b), std::max(*a, *b));
  }
  return {pairs.begin(), pairs.end()};
}

// Rewrites the conflict list into canonical order with duplicates removed.
inline void canonicalize_conflicts(Instance& inst) {
  std::vector<ConflictPair> out;
  for (auto [a, b] : conflict_indices(inst)) {
    out.push_back({inst.slots[a].id, inst.slots[b].id});
  }
  inst.conflicts = std::move(out);
}

// ---------------------------------------------------------------------------
// Validation

enum class ViolationKind {
  kDimensionMismatch,
  kEmptyId,
  kDuplicateId,
  kNonPositiveLoadUnits,
  kInvalidLoadRange,
  kInvalidConflict,
  kNonCanonicalConflict,
  kDuplicateConflict,
  kNonBinarySchedule,
  kNonBinaryEligibility,
  kAssignmentNotEligible,
  kAssignmentInUnavailableSlot,
  kNegativePreference,
  kNegativeSwapPenalty,
  kNegativeDemand,
  kNonFiniteValue,
};

inline const char* to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::kDimensionMismatch: return "dimension_mismatch";
    case ViolationKind::kEmptyId: return "empty_id";
    case ViolationKind::kDuplicateId: return "duplicate_id";
    case ViolationKind::kNonPositiveLoadUnits: return "non_positive_load_units";
    case ViolationKind::kInvalidLoadRange: return "invalid_load_range";
    case ViolationKind::kInvalidConflict: return "invalid_conflict";
    case ViolationKind::kNonCanonicalConflict: return "non_canonical_conflict";
    case ViolationKind::kDuplicateConflict: return "duplicate_conflict";
    case ViolationKind::kNonBinarySchedule: return "non_binary_schedule";
    case ViolationKind::kNonBinaryEligibility: return "non_binary_eligibility";
    case ViolationKind::kAssignmentNotEligible: return "assignment_not_eligible";
    case ViolationKind::kAssignmentInUnavailableSlot:
      return "assignment_in_unavailable_slot";
    case ViolationKind::kNegativePreference: return "negative_preference";
    case ViolationKind::kNegativeSwapPenalty: return "negative_swap_penalty";
    case ViolationKind::kNegativeDemand: return "negative_demand";
    case ViolationKind::kNonFiniteValue: return "non_finite_value";
  }
  return "unknown";
}

struct Violation {
  ViolationKind kind;
  std::string message;
  std::vector<std::size_t> indices;  // (i, j, t) subset, in that order
};

using ValidationReport = std::vector<Violation>;

namespace detail {

template <typename Entity>
void check_ids(const std::vector<Entity>& items, const char* what,
               ValidationReport& report) {
  std::map<std::string, std::size_t> seen;
  for (std::size_t k = 0; k < items.size(); ++k) {
    if (items[k].id.empty()) {
      report.push_back({ViolationKind::kEmptyId,
                        std::string("empty ") + what + " id", {k}});
      continue;
    }
    auto [it, inserted] = seen.emplace(items[k].id, k);
    if (!inserted) {
      report.push_back({ViolationKind::kDuplicateId,
                        std::string("duplicate ") + what + " id '" +
                            items[k].id + "'",
                        {it->second, k}});
    }
  }
}

inline void dimension_violation(ValidationReport& report, const char* name,
                                std::size_t r, std::size_t c) {
  report.push_back({ViolationKind::kDimensionMismatch,
                    std::string(name) + " must be " + std::to_string(r) +
                        "x" + std::to_string(c),
                    {}});
}

}  // namespace detail

// Checks every structural invariant of an instance. Feasibility of the
// rescheduling problem itself is not examined here.
inline ValidationReport validate_instance(const Instance& inst) {
  ValidationReport report;
  const auto ni = inst.num_courses();
  const auto nj = inst.num_faculty();
  const auto nt = inst.num_slots();

  detail::check_ids(inst.courses, "course", report);
  detail::check_ids(inst.faculty, "faculty", report);
  detail::check_ids(inst.slots, "slot", report);

  for (std::size_t i = 0; i < ni; ++i) {
    const double h = inst.courses[i].load_units;
    if (!std::isfinite(h)) {
      report.push_back({ViolationKind::kNonFiniteValue,
                        "non-finite course load units", {i}});
    } else if (h <= 0.0) {
      report.push_back({ViolationKind::kNonPositiveLoadUnits,
                        "course load units must be positive", {i}});
    }
  }
  for (std::size_t j = 0; j < nj; ++j) {
    const auto& f = inst.faculty[j];
    if (!std::isfinite(f.load_min) || !std::isfinite(f.load_max)) {
      report.push_back({ViolationKind::kNonFiniteValue,
                        "non-finite faculty load bound", {j}});
    } else if (f.load_min < 0.0 || f.load_min > f.load_max) {
      report.push_back({ViolationKind::kInvalidLoadRange,
                        "faculty load range must satisfy 0 <= min <= max",
                        {j}});
    }
  }

  std::optional<std::size_t> prev_a, prev_b;
  std::set<std::pair<std::size_t, std::size_t>> seen_pairs;
  for (std::size_t k = 0; k < inst.conflicts.size(); ++k) {
    const auto& c = inst.conflicts[k];
    auto a = slot_index(inst, c.slot_a);
    auto b = slot_index(inst, c.slot_b);
    if (!a || !b) {
      report.push_back({ViolationKind::kInvalidConflict,
                        "conflict names unknown slot '" +
                            (a ? c.slot_b : c.slot_a) + "'",
                        {k}});
      continue;
    }
    if (*a == *b) {
      report.push_back({ViolationKind::kInvalidConflict,
                        "conflict pairs a slot with itself", {k}});
      continue;
    }
    auto key = std::make_pair(std::min(*a, *b), std::max(*a, *b));
    if (!seen_pairs.insert(key).second) {
      report.push_back({ViolationKind::kDuplicateConflict,
                        "duplicate conflict pair", {k}});
      continue;
    }
    bool in_order = *a < *b;
    if (in_order && prev_a) {
      in_order = std::make_pair(*prev_a, *prev_b) < key;
    }
    if (!in_order) {
      report.push_back({ViolationKind::kNonCanonicalConflict,
                        "conflict pairs are not in canonical order", {k}});
    }
    prev_a = key.first;
    prev_b = key.second;
  }

  const bool x_ok = inst.obsolete_schedule.has_shape(ni, nj, nt);
  const bool w_ok = inst.preferences.has_shape(nj, nt);
  const bool a_ok = inst.swap_penalties.has_shape(ni, nj);
  const bool m_ok = inst.demand.has_shape(ni, nt);
  const bool c_ok = inst.eligibility.has_shape(ni, nj);
  if (!x_ok) {
    report.push_back({ViolationKind::kDimensionMismatch,
                      "obsolete schedule must be " + std::to_string(ni) +
                          "x" + std::to_string(nj) + "x" + std::to_string(nt),
                      {}});
  }
  if (!w_ok) detail::dimension_violation(report, "preferences", nj, nt);
  if (!a_ok) detail::dimension_violation(report, "swap penalties", ni, nj);
  if (!m_ok) detail::dimension_violation(report, "demand", ni, nt);
  if (!c_ok) detail::dimension_violation(report, "eligibility", ni, nj);

  if (w_ok) {
    for (std::size_t j = 0; j < nj; ++j) {
      for (std::size_t t = 0; t < nt; ++t) {
        const double w = inst.preferences(j, t);
        if (!std::isfinite(w)) {
          report.push_back({ViolationKind::kNonFiniteValue,
                            "non-finite preference", {j, t}});
        } else if (w < 0.0) {
          report.push_back({ViolationKind::kNegativePreference,
                            "negative preference", {j, t}});
        }
      }
    }
  }
  if (a_ok) {
    for (std::size_t i = 0; i < ni; ++i) {
      for (std::size_t j = 0; j < nj; ++j) {
        const double a = inst.swap_penalties(i, j);
        if (!std::isfinite(a)) {
          report.push_back({ViolationKind::kNonFiniteValue,
                            "non-finite swap penalty", {i, j}});
        } else if (a < 0.0) {
          report.push_back({ViolationKind::kNegativeSwapPenalty,
                            "negative swap penalty", {i, j}});
        }
      }
    }
  }
  if (m_ok) {
    for (std::size_t i = 0; i < ni; ++i) {
      for (std::size_t t = 0; t < nt; ++t) {
        if (inst.demand(i, t) < 0) {
          report.push_back({ViolationKind::kNegativeDemand,
                            "negative demand", {i, t}});
        }
      }
    }
  }
  if (c_ok) {
    for (std::size_t i = 0; i < ni; ++i) {
      for (std::size_t j = 0; j < nj; ++j) {
        const int c = inst.eligibility(i, j);
        if (c != 0 && c != 1) {
          report.push_back({ViolationKind::kNonBinaryEligibility,
                            "eligibility entries must be 0 or 1", {i, j}});
        }
      }
    }
  }
  if (x_ok) {
    for (std::size_t i = 0; i < ni; ++i) {
      for (std::size_t j = 0; j < nj; ++j) {
        for (std::size_t t = 0; t < nt; ++t) {
          const int x = inst.obsolete_schedule(i, j, t);
          if (x != 0 && x != 1) {
            report.push_back({ViolationKind::kNonBinarySchedule,
                              "obsolete schedule entries must be 0 or 1",
                              {i, j, t}});
            continue;
          }
          if (x == 0) continue;
          if (c_ok && inst.eligibility(i, j) != 1) {
            report.push_back({ViolationKind::kAssignmentNotEligible,
                              "assignment of ineligible course", {i, j, t}});
          }
          if (w_ok && !(inst.preferences(j, t) > 0.0)) {
            report.push_back({ViolationKind::kAssignmentInUnavailableSlot,
                              "assignment in unavailable slot", {i, j, t}});
          }
        }
      }
    }
  }
  return report;
}

// F[j][t] = 1 exactly when W[j][t] > 0.
inline Grid2<int> derive_availability(const Instance& inst) {
  const auto& w = inst.preferences;
  Grid2<int> f(w.rows(), w.cols(), 0);
  for (std::size_t j = 0; j < w.rows(); ++j) {
    for (std::size_t t = 0; t < w.cols(); ++t) {
      f(j, t) = w(j, t) > 0.0 ? 1 : 0;
    }
  }
  return f;
}

// Section counts implied by the obsolete schedule: sum over faculty of X.
inline Grid2<int> baseline_demand(const Instance& inst) {
  const auto& x = inst.obsolete_schedule;
  Grid2<int> m(x.dim0(), x.dim2(), 0);
  for (std::size_t i = 0; i < x.dim0(); ++i) {
    for (std::size_t j = 0; j < x.dim1(); ++j) {
      for (std::size_t t = 0; t < x.dim2(); ++t) m(i, t) += x(i, j, t);
    }
  }
  return m;
}

// ---------------------------------------------------------------------------
// Scenarios

struct DemandDelta {
  std::string course;
  std::string slot;
  int delta = 0;  // negative cancels sections, positive adds them

  friend bool operator==(const DemandDelta&, const DemandDelta&) = default;
};

struct PreferenceOverride {
  std::string faculty;
  std::string slot;
  double value = 0.0;

  friend bool operator==(const PreferenceOverride&,
                         const PreferenceOverride&) = default;
};

struct PenaltyOverride {
  std::string course;
  std::string faculty;
  double value = 0.0;

  friend bool operator==(const PenaltyOverride&,
                         const PenaltyOverride&) = default;
};

// A named edit set applied on top of a base instance.
struct Scenario {
  std::string name;
  std::string base_instance;  // store id of the base; may be empty
  std::vector<DemandDelta> demand_deltas;
  std::vector<PreferenceOverride> preference_overrides;
  std::vector<PenaltyOverride> penalty_overrides;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::size_t require_index(std::optional<std::size_t> idx,
                                 const char* what, const std::string& id) {
  if (!idx) {
    throw ScenarioError(std::string("scenario names unknown ") + what +
                        " '" + id + "'");
  }
  return *idx;
}

}  // namespace detail

// Returns a copy of `inst` with the scenario's demand deltas and weight
// overrides applied. Deltas on the same cell accumulate; the resulting
// demand must stay non-negative. The obsolete schedule is never touched.
inline Instance apply_scenario(const Instance& inst, const Scenario& sc) {
  Instance out = inst;
  for (const auto& d : sc.demand_deltas) {
    auto i = detail::require_index(course_index(inst, d.course), "course",
                                   d.course);
    auto t = detail::require_index(slot_index(inst, d.slot), "slot", d.slot);
    out.demand(i, t) += d.delta;
  }
  for (const auto& d : sc.demand_deltas) {
    auto i = *course_index(inst, d.course);
    auto t = *slot_index(inst, d.slot);
    if (out.demand(i, t) < 0) {
      throw ScenarioError("cannot cancel " + std::to_string(-d.delta) +
                          " section(s) of " + d.course + "@" + d.slot +
                          ": only " + std::to_string(inst.demand(i, t)) +
                          " scheduled");
    }
  }
  for (const auto& o : sc.preference_overrides) {
    auto j = detail::require_index(faculty_index(inst, o.faculty), "faculty",
                                   o.faculty);
    auto t = detail::require_index(slot_index(inst, o.slot), "slot", o.slot);
    if (!(o.value >= 0.0) || !std::isfinite(o.value)) {
      throw ScenarioError("preference override for " + o.faculty + "@" +
                          o.slot + " must be finite and non-negative");
    }
    out.preferences(j, t) = o.value;
  }
  for (const auto& o : sc.penalty_overrides) {
    auto i = detail::require_index(course_index(inst, o.course), "course",
                                   o.course);
    auto j = detail::require_index(faculty_index(inst, o.faculty), "faculty",
                                   o.faculty);
    if (!(o.value >= 0.0) || !std::isfinite(o.value)) {
      throw ScenarioError("penalty override for " + o.course + "/" +
                          o.faculty + " must be finite and non-negative");
    }
    out.swap_penalties(i, j) = o.value;
  }
  return out;
}

// The scenario that undoes `sc` when applied to apply_scenario(inst, sc):
// negated deltas and overrides restoring the original weights.
inline Scenario inverse_scenario(const Instance& inst, const Scenario& sc) {
  Scenario inv;
  inv.name = sc.name.empty() ? "inverse" : "inverse of " + sc.name;
  inv.base_instance = sc.base_instance;
  for (auto it = sc.demand_deltas.rbegin(); it != sc.demand_deltas.rend();
       ++it) {
    inv.demand_deltas.push_back({it->course, it->slot, -it->delta});
  }
  for (auto it = sc.preference_overrides.rbegin();
       it != sc.preference_overrides.rend(); ++it) {
    auto j = detail::require_index(faculty_index(inst, it->faculty),
                                   "faculty", it->faculty);
    auto t = detail::require_index(slot_index(inst, it->slot), "slot",
                                   it->slot);
    inv.preference_overrides.push_back(
        {it->faculty, it->slot, inst.preferences(j, t)});
  }
  for (auto it = sc.penalty_overrides.rbegin();
       it != sc.penalty_overrides.rend(); ++it) {
    auto i = detail::require_index(course_index(inst, it->course), "course",
                                   it->course);
    auto j = detail::require_index(faculty_index(inst, it->faculty),
                                   "faculty", it->faculty);
    inv.penalty_overrides.push_back(
        {it->course, it->faculty, inst.swap_penalties(i, j)});
  }
  return inv;
}

}  // namespace ttmpp

#endif  // TTMPP_INSTANCE_HPP_
