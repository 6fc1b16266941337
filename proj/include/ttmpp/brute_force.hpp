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

// Exhaustive reference solver for tiny instances. It never builds an
// IlpModel: every candidate P is judged by check_feasible and scored by
// evaluate_objective straight from the instance.

#ifndef TTMPP_BRUTE_FORCE_HPP_
#define TTMPP_BRUTE_FORCE_HPP_

#include <chrono>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "ttmpp/instance.hpp"
#include "ttmpp/model.hpp"
#include "ttmpp/solver.hpp"

namespace ttmpp {

inline constexpr std::size_t kBruteForceCellBudget = 24;

// Enumerates every P with X + P in {0,1}. Cells are visited course by
// course, slot by slot, faculty innermost, so a (course, slot) group whose
// column sum misses the demand is cut off as soon as it is complete; no
// point in such a subtree can satisfy "assign all". Ties on the objective
// go to the fewest changes, then to the lexicographically smallest P.
inline Solution brute_force(const Instance& inst) {
  const auto ni = inst.num_courses();
  const auto nj = inst.num_faculty();
  const auto nt = inst.num_slots();
  if (ni * nj * nt > kBruteForceCellBudget) {
    throw std::invalid_argument("instance exceeds the brute-force budget of " +
                                std::to_string(kBruteForceCellBudget) +
                                " cells");
  }
  const auto start = std::chrono::steady_clock::now();
  const auto& x = inst.obsolete_schedule;

  Solution best;
  best.status = SolveStatus::kInfeasible;
  best.p = Perturbation(ni, nj, nt, 0);
  best.t_aux = AuxArray(ni, nj, 0);
  Perturbation p(ni, nj, nt, 0);
  std::size_t leaves = 0;

  auto consider = [&] {
    ++leaves;
    if (!check_feasible(inst, p).feasible()) return;
    const auto aux = canonical_aux(p);
    const double z = evaluate_objective(inst, p, aux);
    const int changes = change_count(p);
    bool better = !best.has_incumbent;
    if (!better) {
      const double tie = 1e-9 * std::max(1.0, std::abs(best.objective));
      if (z > best.objective + tie) {
        better = true;
      } else if (z >= best.objective - tie) {
        if (changes != best.change_count) {
          better = changes < best.change_count;
        } else {
          better = p.values() < best.p.values();
        }
      }
    }
    if (better) {
      best.has_incumbent = true;
      best.status = SolveStatus::kOptimal;
      best.p = p;
      best.t_aux = aux;
      best.objective = z;
      best.change_count = changes;
    }
  };

  // Recursion over (i, t, j) positions.
  const std::size_t total = ni * nt * nj;
  auto visit = [&](auto&& self, std::size_t pos, int column_sum) -> void {
    if (pos == total) {
      consider();
      return;
    }
    const std::size_t j = pos % nj;
    const std::size_t t = (pos / nj) % nt;
    const std::size_t i = pos / (nj * nt);
    for (int y = 0; y <= 1; ++y) {
      p(i, j, t) = y - x(i, j, t);
      const int sum = column_sum + y;
      if (j + 1 == nj) {
        if (sum != inst.demand(i, t)) continue;
        self(self, pos + 1, 0);
      } else {
        self(self, pos + 1, sum);
      }
    }
    p(i, j, t) = 0;
  };
  if (nj == 0) {
    // No faculty: only the empty perturbation exists.
    consider();
  } else {
    visit(visit, 0, 0);
  }

  best.stats.nodes = leaves;
  best.stats.wall_seconds = std::chrono::duration<double>(
                                std::chrono::steady_clock::now() - start)
                                .count();
  best.stats.best_bound = best.objective;
  return best;
}

}  // namespace ttmpp

#endif  // TTMPP_BRUTE_FORCE_HPP_
