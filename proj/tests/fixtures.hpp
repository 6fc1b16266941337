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

#ifndef TTMPP_TESTS_FIXTURES_HPP_
#define TTMPP_TESTS_FIXTURES_HPP_

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "ttmpp/instance.hpp"

namespace ttmpp::testing {

// Two courses, two faculty, three slots. f1 must teach exactly two
// sections (A@s1, B@s2); f2 may teach up to one and has A@s3.
inline Instance make_t1() {
  Instance inst;
  inst.courses = {{"A", "Course A", 1.0}, {"B", "Course B", 1.0}};
  inst.faculty = {{"f1", "Faculty One", 2.0, 2.0},
                  {"f2", "Faculty Two", 0.0, 1.0}};
  inst.slots = {{"s1", "Slot 1"}, {"s2", "Slot 2"}, {"s3", "Slot 3"}};
  resize_arrays(inst);
  for (int& c : inst.eligibility.values()) c = 1;
  inst.obsolete_schedule(0, 0, 0) = 1;  // A, f1, s1
  inst.obsolete_schedule(1, 0, 1) = 1;  // B, f1, s2
  inst.obsolete_schedule(0, 1, 2) = 1;  // A, f2, s3
  inst.demand = baseline_demand(inst);
  return inst;
}

inline Scenario cancel_a_s3() {
  Scenario sc;
  sc.name = "cancel A@s3";
  sc.demand_deltas = {{"A", "s3", -1}};
  return sc;
}

// Small deterministic draws that do not depend on the standard library's
// distribution implementations.
class Draw {
 public:
  explicit Draw(std::uint64_t seed) : rng_(seed) {}
  std::size_t below(std::size_t n) { return n == 0 ? 0 : rng_() % n; }
  bool chance(int percent) { return static_cast<int>(rng_() % 100) < percent; }
  template <typename T>
  T pick(const std::vector<T>& items) {
    return items[below(items.size())];
  }

 private:
  std::mt19937_64 rng_;
};

// Random instance with at most `max_cells` (course, faculty, slot) cells.
// Weights come from short dyadic lists so objective sums are exact. The
// obsolete schedule respects eligibility and availability; the demand is
// the baseline nudged by a few random section edits, so some instances are
// infeasible.
inline Instance random_tiny_instance(std::uint64_t seed,
                                     std::size_t max_cells = 24) {
  Draw d(seed);
  std::size_t ni, nj, nt;
  do {
    ni = 1 + d.below(3);
    nj = 1 + d.below(3);
    nt = 1 + d.below(4);
  } while (ni * nj * nt > max_cells);

  Instance inst;
  for (std::size_t i = 0; i < ni; ++i) {
    inst.courses.push_back({"c" + std::to_string(i), "Course " +
                            std::to_string(i),
                            d.chance(80) ? 1.0 : d.pick<double>({0.5, 2.0})});
  }
  for (std::size_t j = 0; j < nj; ++j) {
    inst.faculty.push_back({"f" + std::to_string(j),
                            "Faculty " + std::to_string(j), 0.0, 0.0});
  }
  for (std::size_t t = 0; t < nt; ++t) {
    inst.slots.push_back({"s" + std::to_string(t), "Slot " +
                          std::to_string(t)});
  }
  resize_arrays(inst);
  const std::vector<double> w_values{0.0, 0.5, 1.0, 1.0, 2.0, 3.0};
  const std::vector<double> a_values{0.0, 0.5, 1.0, 1.0, 2.0};
  for (double& w : inst.preferences.values()) w = d.pick(w_values);
  for (double& a : inst.swap_penalties.values()) a = d.pick(a_values);
  for (int& c : inst.eligibility.values()) c = d.chance(75) ? 1 : 0;
  if (nt >= 2 && d.chance(40)) {
    const std::size_t a = d.below(nt);
    std::size_t b = d.below(nt);
    if (a != b) {
      inst.conflicts.push_back({inst.slots[a].id, inst.slots[b].id});
    }
  }
  canonicalize_conflicts(inst);

  for (std::size_t j = 0; j < nj; ++j) {
    for (std::size_t t = 0; t < nt; ++t) {
      if (!d.chance(45)) continue;
      const std::size_t i = d.below(ni);
      inst.obsolete_schedule(i, j, t) = 1;
      inst.eligibility(i, j) = 1;
      if (inst.preferences(j, t) == 0.0) inst.preferences(j, t) = 1.0;
    }
  }
  for (std::size_t j = 0; j < nj; ++j) {
    double load = 0.0;
    for (std::size_t i = 0; i < ni; ++i) {
      for (std::size_t t = 0; t < nt; ++t) {
        load += inst.courses[i].load_units * inst.obsolete_schedule(i, j, t);
      }
    }
    const double lo = std::max(0.0, load - static_cast<double>(d.below(2)));
    inst.faculty[j].load_min = lo;
    inst.faculty[j].load_max = load + static_cast<double>(d.below(3));
  }
  inst.demand = baseline_demand(inst);
  const std::size_t edits = d.below(3);
  for (std::size_t e = 0; e < edits; ++e) {
    const std::size_t i = d.below(ni);
    const std::size_t t = d.below(nt);
    if (inst.demand(i, t) > 0 && d.chance(60)) {
      inst.demand(i, t) -= 1;
    } else {
      inst.demand(i, t) += 1;
    }
  }
  return inst;
}

}  // namespace ttmpp::testing

#endif  // TTMPP_TESTS_FIXTURES_HPP_
