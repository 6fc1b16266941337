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

// Solver-neutral integer program for the minimal-perturbation problem.
//
// Variables are the perturbation P[i][j][t] (new schedule = X + P) and the
// linearization variables T[i][j] >= |sum_t P[i][j][t]|. The objective
//
//   maximize  sum_{j,t} W[j][t] * sum_i P[i][j][t]  -  sum_{i,j} alpha[i][j] * T[i][j]
//
// trades faculty time preferences against course swaps. Because X is a
// fixed 0/1 array, the requirement 0 <= X + P <= 1 is expressed as the
// variable bounds P in [-X, 1 - X] rather than as rows.
//
// This header also carries two evaluators that work directly from the
// Instance (evaluate_objective and check_feasible); they never look at an
// IlpModel, so they can be used to audit solver output.

#ifndef TTMPP_MODEL_HPP_
#define TTMPP_MODEL_HPP_

#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdlib>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ttmpp/grid.hpp"
#include "ttmpp/instance.hpp"

namespace ttmpp {

// Shortest text that reads back to the same double.
inline std::string format_number(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

enum class VarKind { kP, kT };

struct VariableRef {
  VarKind kind = VarKind::kP;
  std::size_t course = 0;
  std::size_t faculty = 0;
  std::optional<std::size_t> slot;  // absent for T

  friend bool operator==(const VariableRef&, const VariableRef&) = default;
};

struct ModelVariable {
  VariableRef ref;
  int lower = 0;
  int upper = 0;
};

enum class Sense { kLessEqual, kEqual, kGreaterEqual };

enum class ConstraintFamily {
  kNewVariable,
  kBinarySchedule,
  kAssignAll,
  kChoiceList,
  kAvailability,
  kTeachingLoad,
  kTimeConflict,
  kObjectiveLevel,
};

inline const char* family_heading(ConstraintFamily f) {
  switch (f) {
    case ConstraintFamily::kNewVariable: return "New variable constraints";
    case ConstraintFamily::kBinarySchedule: return "New schedule is binary";
    case ConstraintFamily::kAssignAll: return "Assign all courses";
    case ConstraintFamily::kChoiceList:
      return "Faculty teach only courses from their choice list";
    case ConstraintFamily::kAvailability:
      return "Faculty teach only during their available times";
    case ConstraintFamily::kTeachingLoad: return "Teaching load requirements";
    case ConstraintFamily::kTimeConflict: return "Avoid time slot conflicts";
    case ConstraintFamily::kObjectiveLevel: return "Objective level";
  }
  return "?";
}

struct Term {
  std::size_t var = 0;  // index into IlpModel::variables
  double coef = 0.0;
};

struct LinearConstraint {
  std::vector<Term> terms;
  Sense sense = Sense::kLessEqual;
  double rhs = 0.0;
  ConstraintFamily family = ConstraintFamily::kAssignAll;
  std::string tag;  // family heading plus the row's indices
};

struct IlpModel {
  std::size_t num_courses = 0;
  std::size_t num_faculty = 0;
  std::size_t num_slots = 0;

  // All P in (i, j, t) order, then all T in (i, j) order.
  std::vector<ModelVariable> variables;
  std::vector<LinearConstraint> constraints;
  std::vector<Term> objective;  // maximized

  // X value behind each P variable, indexed like the P block.
  std::vector<int> obsolete;

  std::size_t num_p() const { return num_courses * num_faculty * num_slots; }
  std::size_t p_index(std::size_t i, std::size_t j, std::size_t t) const {
    return (i * num_faculty + j) * num_slots + t;
  }
  std::size_t t_index(std::size_t i, std::size_t j) const {
    return num_p() + i * num_faculty + j;
  }
};

// Builds the integer program for a structurally valid instance. Constant X
// terms are folded into the right-hand sides.
inline IlpModel build_model(const Instance& inst) {
  const auto ni = inst.num_courses();
  const auto nj = inst.num_faculty();
  const auto nt = inst.num_slots();
  const auto& x = inst.obsolete_schedule;

  IlpModel model;
  model.num_courses = ni;
  model.num_faculty = nj;
  model.num_slots = nt;
  model.variables.reserve(ni * nj * nt + ni * nj);
  model.obsolete.reserve(ni * nj * nt);
  for (std::size_t i = 0; i < ni; ++i) {
    for (std::size_t j = 0; j < nj; ++j) {
      for (std::size_t t = 0; t < nt; ++t) {
        const int xv = x(i, j, t);
        model.variables.push_back({{VarKind::kP, i, j, t}, -xv, 1 - xv});
        model.obsolete.push_back(xv);
      }
    }
  }
  // |sum_t P| can reach the slot count when several sections move at once.
  for (std::size_t i = 0; i < ni; ++i) {
    for (std::size_t j = 0; j < nj; ++j) {
      model.variables.push_back(
          {{VarKind::kT, i, j, std::nullopt}, 0, static_cast<int>(nt)});
    }
  }

  auto& rows = model.constraints;
  auto push = [&rows](ConstraintFamily family, Sense sense, double rhs,
                      std::vector<Term> terms, const std::string& where) {
    rows.push_back({std::move(terms), sense, rhs, family,
                    std::string(family_heading(family)) + " " + where});
  };
  const auto& C = inst.courses;
  const auto& J = inst.faculty;
  const auto& S = inst.slots;

  for (std::size_t i = 0; i < ni; ++i) {
    for (std::size_t j = 0; j < nj; ++j) {
      std::vector<Term> plus{{model.t_index(i, j), 1.0}};
      std::vector<Term> minus{{model.t_index(i, j), 1.0}};
      for (std::size_t t = 0; t < nt; ++t) {
        plus.push_back({model.p_index(i, j, t), -1.0});
        minus.push_back({model.p_index(i, j, t), 1.0});
      }
      const std::string where = "[" + C[i].id + "," + J[j].id;
      push(ConstraintFamily::kNewVariable, Sense::kGreaterEqual, 0.0,
           std::move(plus), where + ",+]");
      push(ConstraintFamily::kNewVariable, Sense::kGreaterEqual, 0.0,
           std::move(minus), where + ",-]");
    }
  }

  for (std::size_t i = 0; i < ni; ++i) {
    for (std::size_t t = 0; t < nt; ++t) {
      std::vector<Term> terms;
      int assigned = 0;
      for (std::size_t j = 0; j < nj; ++j) {
        terms.push_back({model.p_index(i, j, t), 1.0});
        assigned += x(i, j, t);
      }
      push(ConstraintFamily::kAssignAll, Sense::kEqual,
           inst.demand(i, t) - assigned, std::move(terms),
           "[" + C[i].id + "," + S[t].id + "]");
    }
  }

  for (std::size_t i = 0; i < ni; ++i) {
    int sections = 0;
    for (std::size_t t = 0; t < nt; ++t) sections += inst.demand(i, t);
    for (std::size_t j = 0; j < nj; ++j) {
      std::vector<Term> terms;
      int assigned = 0;
      for (std::size_t t = 0; t < nt; ++t) {
        terms.push_back({model.p_index(i, j, t), 1.0});
        assigned += x(i, j, t);
      }
      push(ConstraintFamily::kChoiceList, Sense::kLessEqual,
           inst.eligibility(i, j) * sections - assigned, std::move(terms),
           "[" + C[i].id + "," + J[j].id + "]");
    }
  }

  const auto avail = derive_availability(inst);
  for (std::size_t j = 0; j < nj; ++j) {
    for (std::size_t t = 0; t < nt; ++t) {
      std::vector<Term> terms;
      int assigned = 0;
      for (std::size_t i = 0; i < ni; ++i) {
        terms.push_back({model.p_index(i, j, t), 1.0});
        assigned += x(i, j, t);
      }
      push(ConstraintFamily::kAvailability, Sense::kLessEqual,
           avail(j, t) - assigned, std::move(terms),
           "[" + J[j].id + "," + S[t].id + "]");
    }
  }

  for (std::size_t j = 0; j < nj; ++j) {
    std::vector<Term> terms;
    double load = 0.0;
    for (std::size_t i = 0; i < ni; ++i) {
      const double h = C[i].load_units;
      for (std::size_t t = 0; t < nt; ++t) {
        terms.push_back({model.p_index(i, j, t), h});
        load += h * x(i, j, t);
      }
    }
    push(ConstraintFamily::kTeachingLoad, Sense::kLessEqual,
         J[j].load_max - load, terms, "[" + J[j].id + ",max]");
    push(ConstraintFamily::kTeachingLoad, Sense::kGreaterEqual,
         J[j].load_min - load, std::move(terms), "[" + J[j].id + ",min]");
  }

  const auto pairs = conflict_indices(inst);
  for (std::size_t j = 0; j < nj; ++j) {
    for (auto [a, b] : pairs) {
      std::vector<Term> terms;
      int assigned = 0;
      for (std::size_t i = 0; i < ni; ++i) {
        terms.push_back({model.p_index(i, j, a), 1.0});
        assigned += x(i, j, a);
      }
      for (std::size_t i = 0; i < ni; ++i) {
        terms.push_back({model.p_index(i, j, b), 1.0});
        assigned += x(i, j, b);
      }
      push(ConstraintFamily::kTimeConflict, Sense::kLessEqual, 1 - assigned,
           std::move(terms),
           "[" + J[j].id + "," + S[a].id + "," + S[b].id + "]");
    }
  }

  for (std::size_t i = 0; i < ni; ++i) {
    for (std::size_t j = 0; j < nj; ++j) {
      for (std::size_t t = 0; t < nt; ++t) {
        const double w = inst.preferences(j, t);
        if (w != 0.0) model.objective.push_back({model.p_index(i, j, t), w});
      }
    }
  }
  for (std::size_t i = 0; i < ni; ++i) {
    for (std::size_t j = 0; j < nj; ++j) {
      const double a = inst.swap_penalties(i, j);
      if (a != 0.0) model.objective.push_back({model.t_index(i, j), -a});
    }
  }
  return model;
}

// Objective value of a full assignment of model variables.
inline double model_objective(const IlpModel& model,
                              std::span<const double> values) {
  double z = 0.0;
  for (const auto& term : model.objective) z += term.coef * values[term.var];
  return z;
}

// Indices of rows violated by `values` (beyond `tol`), plus any variable
// outside its bounds reported as row index constraints.size() + var.
inline std::vector<std::size_t> model_violations(const IlpModel& model,
                                                 std::span<const double> values,
                                                 double tol = 1e-9) {
  std::vector<std::size_t> out;
  for (std::size_t r = 0; r < model.constraints.size(); ++r) {
    const auto& row = model.constraints[r];
    double lhs = 0.0;
    for (const auto& term : row.terms) lhs += term.coef * values[term.var];
    const bool ok = row.sense == Sense::kLessEqual  ? lhs <= row.rhs + tol
                    : row.sense == Sense::kGreaterEqual ? lhs >= row.rhs - tol
                    : std::abs(lhs - row.rhs) <= tol;
    if (!ok) out.push_back(r);
  }
  for (std::size_t v = 0; v < model.variables.size(); ++v) {
    const auto& var = model.variables[v];
    if (values[v] < var.lower - tol || values[v] > var.upper + tol) {
      out.push_back(model.constraints.size() + v);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Direct evaluators

using Perturbation = Grid3<int>;  // P[i][j][t]
using AuxArray = Grid2<int>;      // T[i][j]

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// T[i][j] = |sum_t P[i][j][t]|.
inline AuxArray canonical_aux(const Perturbation& p) {
  AuxArray aux(p.dim0(), p.dim1(), 0);
  for (std::size_t i = 0; i < p.dim0(); ++i) {
    for (std::size_t j = 0; j < p.dim1(); ++j) {
      int s = 0;
      for (std::size_t t = 0; t < p.dim2(); ++t) s += p(i, j, t);
      aux(i, j) = std::abs(s);
    }
  }
  return aux;
}

inline int change_count(const Perturbation& p) {
  int n = 0;
  for (int v : p.values()) n += std::abs(v);
  return n;
}

// The preference and penalty parts of the objective, kept apart so reports
// can show which term drove a change.
struct ObjectiveParts {
  double preference = 0.0;  // sum W * P
  double penalty = 0.0;     // sum alpha * T
  double total() const { return preference - penalty; }
};

inline ObjectiveParts objective_parts(const Instance& inst,
                                      const Perturbation& p,
                                      const AuxArray& t_aux) {
  const auto ni = inst.num_courses();
  const auto nj = inst.num_faculty();
  const auto nt = inst.num_slots();
  if (!p.has_shape(ni, nj, nt) || !t_aux.has_shape(ni, nj)) {
    throw DimensionError("perturbation arrays do not match the instance");
  }
  ObjectiveParts parts;
  for (std::size_t j = 0; j < nj; ++j) {
    for (std::size_t t = 0; t < nt; ++t) {
      int s = 0;
      for (std::size_t i = 0; i < ni; ++i) s += p(i, j, t);
      parts.preference += inst.preferences(j, t) * s;
    }
  }
  for (std::size_t i = 0; i < ni; ++i) {
    for (std::size_t j = 0; j < nj; ++j) {
      parts.penalty += inst.swap_penalties(i, j) * t_aux(i, j);
    }
  }
  return parts;
}

inline double evaluate_objective(const Instance& inst, const Perturbation& p,
                                 const AuxArray& t_aux) {
  return objective_parts(inst, p, t_aux).total();
}

struct FamilyCheck {
  ConstraintFamily family;
  bool passed = true;
  std::vector<std::size_t> first_violation;  // indices of the first bad row
  double residual = 0.0;                     // lhs - rhs at that row
};

struct FeasibilityReport {
  std::vector<FamilyCheck> families;

  bool feasible() const {
    for (const auto& f : families) {
      if (!f.passed) return false;
    }
    return true;
  }
  const FamilyCheck& family(ConstraintFamily f) const {
    for (const auto& check : families) {
      if (check.family == f) return check;
    }
    throw std::out_of_range("family not checked");
  }
};

// Checks the new schedule X + P against every constraint family, computed
// straight from the instance arrays in integer arithmetic (loads use the
// course units). The linearization rows hold by construction because the
// penalty uses |sum_t P| directly.
inline FeasibilityReport check_feasible(const Instance& inst,
                                        const Perturbation& p) {
  const auto ni = inst.num_courses();
  const auto nj = inst.num_faculty();
  const auto nt = inst.num_slots();
  if (!p.has_shape(ni, nj, nt)) {
    throw DimensionError("perturbation does not match the instance");
  }
  const auto& x = inst.obsolete_schedule;
  auto y = [&](std::size_t i, std::size_t j, std::size_t t) {
    return x(i, j, t) + p(i, j, t);
  };

  FeasibilityReport report;
  auto fail = [](FamilyCheck& check, std::vector<std::size_t> where,
                 double residual) {
    if (!check.passed) return;
    check.passed = false;
    check.first_violation = std::move(where);
    check.residual = residual;
  };

  report.families.push_back({ConstraintFamily::kNewVariable});

  FamilyCheck binary{ConstraintFamily::kBinarySchedule};
  for (std::size_t i = 0; i < ni; ++i) {
    for (std::size_t j = 0; j < nj; ++j) {
      for (std::size_t t = 0; t < nt; ++t) {
        const int v = y(i, j, t);
        if (v < 0) fail(binary, {i, j, t}, v);
        if (v > 1) fail(binary, {i, j, t}, v - 1);
      }
    }
  }
  report.families.push_back(binary);

  FamilyCheck assign{ConstraintFamily::kAssignAll};
  for (std::size_t i = 0; i < ni; ++i) {
    for (std::size_t t = 0; t < nt; ++t) {
      int s = 0;
      for (std::size_t j = 0; j < nj; ++j) s += y(i, j, t);
      if (s != inst.demand(i, t)) fail(assign, {i, t}, s - inst.demand(i, t));
    }
  }
  report.families.push_back(assign);

  FamilyCheck choice{ConstraintFamily::kChoiceList};
  for (std::size_t i = 0; i < ni; ++i) {
    int sections = 0;
    for (std::size_t t = 0; t < nt; ++t) sections += inst.demand(i, t);
    for (std::size_t j = 0; j < nj; ++j) {
      int s = 0;
      for (std::size_t t = 0; t < nt; ++t) s += y(i, j, t);
      const int cap = inst.eligibility(i, j) * sections;
      if (s > cap) fail(choice, {i, j}, s - cap);
    }
  }
  report.families.push_back(choice);

  const auto avail = derive_availability(inst);
  FamilyCheck availability{ConstraintFamily::kAvailability};
  for (std::size_t j = 0; j < nj; ++j) {
    for (std::size_t t = 0; t < nt; ++t) {
      int s = 0;
      for (std::size_t i = 0; i < ni; ++i) s += y(i, j, t);
      if (s > avail(j, t)) fail(availability, {j, t}, s - avail(j, t));
    }
  }
  report.families.push_back(availability);

  FamilyCheck load{ConstraintFamily::kTeachingLoad};
  constexpr double kLoadTol = 1e-9;
  for (std::size_t j = 0; j < nj; ++j) {
    double total = 0.0;
    for (std::size_t i = 0; i < ni; ++i) {
      int s = 0;
      for (std::size_t t = 0; t < nt; ++t) s += y(i, j, t);
      total += inst.courses[i].load_units * s;
    }
    if (total > inst.faculty[j].load_max + kLoadTol) {
      fail(load, {j}, total - inst.faculty[j].load_max);
    } else if (total < inst.faculty[j].load_min - kLoadTol) {
      fail(load, {j}, total - inst.faculty[j].load_min);
    }
  }
  report.families.push_back(load);

  FamilyCheck conflict{ConstraintFamily::kTimeConflict};
  const auto pairs = conflict_indices(inst);
  for (std::size_t j = 0; j < nj; ++j) {
    for (auto [a, b] : pairs) {
      int s = 0;
      for (std::size_t i = 0; i < ni; ++i) s += y(i, j, a) + y(i, j, b);
      if (s > 1) fail(conflict, {j, a, b}, s - 1);
    }
  }
  report.families.push_back(conflict);
  return report;
}

}  // namespace ttmpp

#endif  // TTMPP_MODEL_HPP_
