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

// Exact solver for IlpModel: LP-based branch-and-bound on the P variables
// over BoundedSimplex, followed by an optional second phase that minimizes
// the number of changed schedule cells among all optimal solutions.
//
// Only P is branched on. Once P is integral, the best T for any alpha >= 0
// is |sum_t P|, itself an integer, so T is read back in canonical form
// rather than searched over.

#ifndef TTMPP_SOLVER_HPP_
#define TTMPP_SOLVER_HPP_

#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "ttmpp/model.hpp"
#include "ttmpp/simplex.hpp"

namespace ttmpp {

enum class BranchingRule { kMostFractional, kFirstFractional };

// One processed branch-and-bound node, for tracing and tests.
struct NodeEvent {
  enum class Outcome { kInfeasible, kPruned, kIncumbent, kIntegral, kBranched };
  std::size_t depth = 0;
  Outcome outcome = Outcome::kPruned;
  double parent_bound = 0.0;
  double lp_bound = 0.0;  // LP relaxation optimum (maximization sense)
  std::optional<double> incumbent;  // before this node was processed
};

struct SolveOptions {
  double integrality_tolerance = 1e-6;
  double lp_pivot_tolerance = 1e-9;
  std::optional<std::size_t> node_limit;
  std::optional<double> time_limit_seconds;
  bool min_change_phase = true;
  BranchingRule branching_rule = BranchingRule::kMostFractional;
  std::function<void(const NodeEvent&)> on_node;
};

// Throws std::invalid_argument for options that break the invariants.
inline void check_options(const SolveOptions& o) {
  if (!(o.integrality_tolerance > 0.0) || !(o.lp_pivot_tolerance > 0.0)) {
    throw std::invalid_argument("solver tolerances must be positive");
  }
  if (o.node_limit && *o.node_limit == 0) {
    throw std::invalid_argument("node limit must be positive");
  }
  if (o.time_limit_seconds && !(*o.time_limit_seconds > 0.0)) {
    throw std::invalid_argument("time limit must be positive");
  }
}

enum class SolveStatus { kOptimal, kInfeasible, kLimitReached, kError };

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::kOptimal: return "Optimal";
    case SolveStatus::kInfeasible: return "Infeasible";
    case SolveStatus::kLimitReached: return "LimitReached";
    case SolveStatus::kError: return "Error";
  }
  return "?";
}

struct SolveStats {
  std::size_t nodes = 0;
  std::size_t lp_iterations = 0;
  double wall_seconds = 0.0;
  double root_bound = 0.0;
  double best_bound = 0.0;
  double gap = 0.0;  // best_bound - objective, 0 when proven optimal
};

struct Solution {
  SolveStatus status = SolveStatus::kError;
  bool has_incumbent = false;
  Perturbation p;
  AuxArray t_aux;
  double objective = 0.0;
  int change_count = 0;
  SolveStats stats;
  std::string message;  // set for kError and limits
};

// Continuous relaxation result; objective in the model's maximize sense.
struct LpSolution {
  LpStatus status = LpStatus::kNumericalFailure;
  std::vector<double> values;
  double objective = 0.0;
  std::size_t iterations = 0;
};

namespace detail {

inline SparseLp to_sparse_lp(const IlpModel& model,
                             const std::vector<Term>& objective,
                             const LinearConstraint* extra_row) {
  const std::size_t nv = model.variables.size();
  std::vector<std::vector<std::pair<std::size_t, double>>> cols(nv);
  SparseLp lp;
  auto add_row = [&](const LinearConstraint& row) {
    const std::size_t r = lp.num_rows++;
    for (const auto& term : row.terms) {
      if (term.coef != 0.0) cols[term.var].emplace_back(r, term.coef);
    }
    switch (row.sense) {
      case Sense::kLessEqual:
        lp.row_lower.push_back(-kInfinity);
        lp.row_upper.push_back(row.rhs);
        break;
      case Sense::kGreaterEqual:
        lp.row_lower.push_back(row.rhs);
        lp.row_upper.push_back(kInfinity);
        break;
      case Sense::kEqual:
        lp.row_lower.push_back(row.rhs);
        lp.row_upper.push_back(row.rhs);
        break;
    }
  };
  for (const auto& row : model.constraints) add_row(row);
  if (extra_row) add_row(*extra_row);
  std::vector<double> cost(nv, 0.0);
  for (const auto& term : objective) cost[term.var] -= term.coef;
  for (std::size_t v = 0; v < nv; ++v) {
    lp.add_column(cost[v], model.variables[v].lower, model.variables[v].upper,
                  cols[v]);
  }
  return lp;
}

inline std::size_t lp_iteration_cap(const SparseLp& lp) {
  return 50 * (lp.num_rows + lp.num_cols) + 1000;
}

inline bool integral_coefficients(const std::vector<Term>& objective) {
  for (const auto& term : objective) {
    if (term.coef != std::round(term.coef)) return false;
  }
  return true;
}

// Full variable vector for integer P values with T = |sum_t P|.
inline std::vector<double> canonical_values(const IlpModel& model,
                                            const std::vector<int>& p) {
  std::vector<double> values(model.variables.size(), 0.0);
  for (std::size_t k = 0; k < p.size(); ++k) values[k] = p[k];
  for (std::size_t i = 0; i < model.num_courses; ++i) {
    for (std::size_t j = 0; j < model.num_faculty; ++j) {
      int s = 0;
      for (std::size_t t = 0; t < model.num_slots; ++t) {
        s += p[model.p_index(i, j, t)];
      }
      values[model.t_index(i, j)] = std::abs(s);
    }
  }
  return values;
}

struct SearchResult {
  SolveStatus status = SolveStatus::kError;
  std::optional<std::vector<int>> p;
  double objective = 0.0;  // in the searched objective
  SolveStats stats;
  std::string message;
};

// Best-bound branch-and-bound with depth-first dives. `objective` is
// maximized; `extra_row` (optional) is appended to the model's rows.
class BranchAndBound {
 public:
  BranchAndBound(const IlpModel& model, std::vector<Term> objective,
                 std::optional<LinearConstraint> extra_row,
                 const SolveOptions& options)
      : model_(model),
        objective_(std::move(objective)),
        extra_row_(std::move(extra_row)),
        options_(options),
        integral_objective_(integral_coefficients(objective_)) {}

  void set_incumbent(const std::vector<int>& p) {
    const auto values = canonical_values(model_, p);
    if (!satisfies_model(values)) return;
    incumbent_ = p;
    incumbent_value_ = value_of(values);
  }

  SearchResult run() {
    const auto start = std::chrono::steady_clock::now();
    SearchResult result;
    SparseLp lp = to_sparse_lp(model_, objective_,
                               extra_row_ ? &*extra_row_ : nullptr);
    const std::size_t cap = lp_iteration_cap(lp);
    SimplexTolerances tol;
    tol.pivot = options_.lp_pivot_tolerance;
    BoundedSimplex simplex(std::move(lp), tol);
    const std::size_t np = model_.num_p();

    std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
    std::uint64_t seq = 0;
    std::vector<std::size_t> touched;  // columns whose bounds differ from root
    auto reset_bounds = [&] {
      for (std::size_t v : touched) {
        simplex.set_col_bounds(v, model_.variables[v].lower,
                               model_.variables[v].upper);
      }
      touched.clear();
    };
    auto apply = [&](const BoundChange& c) {
      simplex.set_col_bounds(c.var, c.lower, c.upper);
      touched.push_back(c.var);
    };

    std::optional<Node> current = Node{};
    current->parent_bound = kInfinity;
    bool root = true;
    bool limit_hit = false;
    auto elapsed = [&] {
      return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                           start)
          .count();
    };

    while (true) {
      if (!current) {
        if (open.empty()) break;
        current = open.top();
        open.pop();
        if (prunable(current->parent_bound)) {
          current.reset();
          continue;
        }
        reset_bounds();
        for (const auto& c : current->changes) apply(c);
        if (current->basis) simplex.restore(*current->basis);
      }
      if ((options_.node_limit && result.stats.nodes >= *options_.node_limit) ||
          (options_.time_limit_seconds &&
           elapsed() >= *options_.time_limit_seconds)) {
        limit_hit = true;
        break;
      }

      ++result.stats.nodes;
      const std::size_t before = simplex.iterations();
      LpStatus lp_status = simplex.solve(cap);
      if (lp_status == LpStatus::kNumericalFailure ||
          lp_status == LpStatus::kIterationLimit) {
        // One retry from a fresh all-logical basis.
        BasisSnapshot fresh = slack_snapshot(simplex);
        simplex.restore(fresh);
        lp_status = simplex.solve(cap);
      }
      result.stats.lp_iterations += simplex.iterations() - before;

      NodeEvent event;
      event.depth = current->depth;
      event.parent_bound = current->parent_bound;
      event.incumbent = incumbent_ ? std::optional<double>(incumbent_value_)
                                   : std::nullopt;

      if (lp_status == LpStatus::kInfeasible) {
        if (root) result.stats.root_bound = -kInfinity;
        root = false;
        event.outcome = NodeEvent::Outcome::kInfeasible;
        notify(event);
        current.reset();
        continue;
      }
      if (lp_status != LpStatus::kOptimal) {
        result.status = SolveStatus::kError;
        result.message = std::string("LP relaxation failed: ") +
                         to_string(lp_status);
        finish(result, start);
        return result;
      }
      const double bound = -simplex.objective();
      event.lp_bound = bound;
      if (root) {
        result.stats.root_bound = bound;
        root = false;
      }
      if (prunable(bound)) {
        event.outcome = NodeEvent::Outcome::kPruned;
        notify(event);
        current.reset();
        continue;
      }

      const auto values = simplex.col_values();
      std::size_t branch_var = kNoVar;
      double best_score = -1.0;
      for (std::size_t k = 0; k < np; ++k) {
        const double v = values[k];
        const double frac = v - std::floor(v);
        if (frac <= options_.integrality_tolerance ||
            frac >= 1.0 - options_.integrality_tolerance) {
          continue;
        }
        if (options_.branching_rule == BranchingRule::kFirstFractional) {
          branch_var = k;
          break;
        }
        const double score = std::min(frac, 1.0 - frac);
        if (score > best_score + 1e-12) {
          best_score = score;
          branch_var = k;
        }
      }

      if (branch_var == kNoVar) {
        std::vector<int> p(np);
        for (std::size_t k = 0; k < np; ++k) {
          p[k] = static_cast<int>(std::lround(values[k]));
        }
        const auto full = canonical_values(model_, p);
        const double z = value_of(full);
        event.outcome = NodeEvent::Outcome::kIntegral;
        if (satisfies_model(full) && (!incumbent_ || z > incumbent_value_)) {
          incumbent_ = std::move(p);
          incumbent_value_ = z;
          event.outcome = NodeEvent::Outcome::kIncumbent;
        }
        notify(event);
        current.reset();
        continue;
      }

      event.outcome = NodeEvent::Outcome::kBranched;
      notify(event);
      const double v = values[branch_var];
      const double lo = simplex.col_lower(branch_var);
      const double up = simplex.col_upper(branch_var);
      BoundChange down{branch_var, lo, std::floor(v)};
      BoundChange upc{branch_var, std::ceil(v), up};
      const bool up_first = v - std::floor(v) >= 0.5;

      Node other;
      other.changes = current->changes;
      other.changes.push_back(up_first ? down : upc);
      other.parent_bound = bound;
      other.depth = current->depth + 1;
      other.seq = ++seq;
      other.basis = std::make_shared<BasisSnapshot>(simplex.snapshot());
      open.push(std::move(other));

      const BoundChange dive = up_first ? upc : down;
      current->changes.push_back(dive);
      current->parent_bound = bound;
      current->depth += 1;
      current->basis.reset();
      apply(dive);
    }

    double open_bound = -kInfinity;
    if (limit_hit) {
      if (current) open_bound = std::max(open_bound, current->parent_bound);
      while (!open.empty()) {
        open_bound = std::max(open_bound, open.top().parent_bound);
        open.pop();
      }
    }
    if (incumbent_) {
      result.p = incumbent_;
      result.objective = incumbent_value_;
    }
    if (limit_hit) {
      result.status = SolveStatus::kLimitReached;
      result.message = "node or time limit reached";
      result.stats.best_bound = incumbent_
                                    ? std::max(open_bound, incumbent_value_)
                                    : open_bound;
    } else {
      result.status =
          incumbent_ ? SolveStatus::kOptimal : SolveStatus::kInfeasible;
      result.stats.best_bound = incumbent_ ? incumbent_value_ : -kInfinity;
    }
    result.stats.gap =
        incumbent_ ? result.stats.best_bound - incumbent_value_ : kInfinity;
    finish(result, start);
    return result;
  }

 private:
  static constexpr std::size_t kNoVar = std::numeric_limits<std::size_t>::max();

  struct BoundChange {
    std::size_t var;
    double lower;
    double upper;
  };

  struct Node {
    std::vector<BoundChange> changes;
    double parent_bound = kInfinity;
    std::size_t depth = 0;
    std::uint64_t seq = 0;
    std::shared_ptr<BasisSnapshot> basis;
  };

  // Highest bound first; among equal bounds the oldest node.
  struct NodeOrder {
    bool operator()(const Node& a, const Node& b) const {
      if (a.parent_bound != b.parent_bound) {
        return a.parent_bound < b.parent_bound;
      }
      return a.seq > b.seq;
    }
  };

  static BasisSnapshot slack_snapshot(const BoundedSimplex& simplex) {
    BasisSnapshot s;
    const std::size_t n = simplex.num_cols();
    const std::size_t m = simplex.num_rows();
    s.status.assign(n + m, VarStatus::kAtLower);
    s.head.resize(m);
    for (std::size_t r = 0; r < m; ++r) {
      s.head[r] = n + r;
      s.status[n + r] = VarStatus::kBasic;
    }
    for (std::size_t j = 0; j < n; ++j) {
      const double lo = simplex.col_lower(j);
      const double up = simplex.col_upper(j);
      s.status[j] = std::isfinite(up) && std::abs(up) < std::abs(lo)
                        ? VarStatus::kAtUpper
                        : VarStatus::kAtLower;
    }
    return s;
  }

  // A node whose relaxation cannot beat the incumbent is discarded. With
  // integral objective coefficients every integer point scores an integer,
  // so the bound may be rounded down first.
  bool prunable(double bound) const {
    if (!incumbent_) return false;
    if (integral_objective_) {
      return std::floor(bound + 1e-6) <= incumbent_value_ + 0.5;
    }
    return bound <= incumbent_value_ + 1e-9 * std::max(1.0, std::abs(bound));
  }

  double value_of(const std::vector<double>& values) const {
    double z = 0.0;
    for (const auto& term : objective_) z += term.coef * values[term.var];
    return z;
  }

  bool satisfies_model(const std::vector<double>& values) const {
    if (!model_violations(model_, values, 1e-6).empty()) return false;
    if (extra_row_) {
      double lhs = 0.0;
      for (const auto& term : extra_row_->terms) {
        lhs += term.coef * values[term.var];
      }
      if (extra_row_->sense == Sense::kGreaterEqual &&
          lhs < extra_row_->rhs - 1e-9) {
        return false;
      }
      if (extra_row_->sense == Sense::kLessEqual &&
          lhs > extra_row_->rhs + 1e-9) {
        return false;
      }
    }
    return true;
  }

  void notify(const NodeEvent& e) const {
    if (options_.on_node) options_.on_node(e);
  }

  static void finish(SearchResult& r,
                     std::chrono::steady_clock::time_point start) {
    r.stats.wall_seconds = std::chrono::duration<double>(
                               std::chrono::steady_clock::now() - start)
                               .count();
  }

  const IlpModel& model_;
  std::vector<Term> objective_;
  std::optional<LinearConstraint> extra_row_;
  const SolveOptions& options_;
  bool integral_objective_;
  std::optional<std::vector<int>> incumbent_;
  double incumbent_value_ = -kInfinity;
};

inline Solution make_solution(const IlpModel& model, const SearchResult& r) {
  Solution s;
  s.status = r.status;
  s.stats = r.stats;
  s.message = r.message;
  s.p = Perturbation(model.num_courses, model.num_faculty, model.num_slots, 0);
  s.t_aux = AuxArray(model.num_courses, model.num_faculty, 0);
  if (r.p) {
    s.has_incumbent = true;
    s.p.values() = *r.p;
    s.t_aux = canonical_aux(s.p);
    s.objective = model_objective(model, canonical_values(model, *r.p));
    s.change_count = change_count(s.p);
  }
  return s;
}

// sum (1 - 2X) P equals sum |P| whenever P lies within [-X, 1 - X].
inline std::vector<Term> change_count_objective(const IlpModel& model) {
  std::vector<Term> obj;
  for (std::size_t k = 0; k < model.num_p(); ++k) {
    obj.push_back({k, -(1.0 - 2.0 * model.obsolete[k])});
  }
  return obj;
}

inline void accumulate(SolveStats& into, const SolveStats& from) {
  into.nodes += from.nodes;
  into.lp_iterations += from.lp_iterations;
  into.wall_seconds += from.wall_seconds;
}

inline Solution refine(const IlpModel& model, double z_star,
                       const SolveOptions& options,
                       const std::vector<int>* warm) {
  LinearConstraint level;
  level.terms = model.objective;
  level.sense = Sense::kGreaterEqual;
  level.family = ConstraintFamily::kObjectiveLevel;
  level.tag = family_heading(ConstraintFamily::kObjectiveLevel);
  level.rhs = integral_coefficients(model.objective)
                  ? z_star - 0.5
                  : z_star - 1e-7 * std::max(1.0, std::abs(z_star));
  BranchAndBound bb(model, change_count_objective(model), level, options);
  if (warm) bb.set_incumbent(*warm);
  return make_solution(model, bb.run());
}

}  // namespace detail

// Optimum of the continuous relaxation (integrality dropped).
inline LpSolution solve_lp_relaxation(const IlpModel& model,
                                      double pivot_tolerance = 1e-9) {
  SparseLp lp = detail::to_sparse_lp(model, model.objective, nullptr);
  const std::size_t cap = detail::lp_iteration_cap(lp);
  SimplexTolerances tol;
  tol.pivot = pivot_tolerance;
  BoundedSimplex simplex(std::move(lp), tol);
  LpSolution out;
  out.status = simplex.solve(cap);
  out.iterations = simplex.iterations();
  if (out.status == LpStatus::kOptimal) {
    const auto v = simplex.col_values();
    out.values.assign(v.begin(), v.end());
    out.objective = -simplex.objective();
  }
  return out;
}

// Second lexicographic phase: among solutions whose objective reaches
// z_star, find one with the fewest changed cells.
inline Solution min_change_refine(const IlpModel& model, double z_star,
                                  const SolveOptions& options = {}) {
  check_options(options);
  return detail::refine(model, z_star, options, nullptr);
}

inline Solution solve(const IlpModel& model, const SolveOptions& options = {}) {
  check_options(options);
  detail::BranchAndBound bb(model, model.objective, std::nullopt, options);
  const auto first = bb.run();
  Solution best = detail::make_solution(model, first);
  if (best.status != SolveStatus::kOptimal || !options.min_change_phase) {
    return best;
  }
  const double z_star = best.objective;
  Solution refined = detail::refine(model, z_star, options, &*first.p);
  const double slack = 1e-9 * std::max(1.0, std::abs(z_star));
  if (refined.status == SolveStatus::kOptimal &&
      refined.objective >= z_star - slack &&
      refined.change_count <= best.change_count) {
    detail::accumulate(refined.stats, best.stats);
    refined.stats.root_bound = best.stats.root_bound;
    refined.stats.best_bound = refined.objective;
    refined.stats.gap = 0.0;
    return refined;
  }
  detail::accumulate(best.stats, refined.stats);
  if (refined.status == SolveStatus::kLimitReached) {
    best.message = "min-change phase stopped at a limit";
  }
  return best;
}

}  // namespace ttmpp

#endif  // TTMPP_SOLVER_HPP_
