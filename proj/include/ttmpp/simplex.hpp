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

// Bounded-variable primal simplex.
//
// Solves   minimize c'x   s.t.   row_lower <= A x <= row_upper,
//                                col_lower <=   x <= col_upper
//
// Each row r gets a logical variable s_r with column -e_r so the system
// reads A x - s = 0 and every constraint becomes a variable bound. The
// method is the "composite" primal simplex: it starts from any basis and,
// while some basic variable is outside its bounds, prices with the gradient
// of the sum of infeasibilities; once the basis is primal feasible it
// switches to the true costs. This lets branch-and-bound tighten bounds on
// an optimal basis and simply call solve() again.
//
// The basis inverse is kept explicitly (dense, row-major) and updated with
// elementary row operations after each pivot. Both the pivot row and the
// entering column are usually sparse in these models, so updates only touch
// the nonzero pattern. Periodic reinversion rebuilds it from the identity.

#ifndef TTMPP_SIMPLEX_HPP_
#define TTMPP_SIMPLEX_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace ttmpp {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct SparseLp {
  std::size_t num_rows = 0;
  std::size_t num_cols = 0;
  // Compressed sparse columns.
  std::vector<std::size_t> col_start{0};
  std::vector<std::size_t> row_index;
  std::vector<double> value;

  std::vector<double> cost;  // minimized
  std::vector<double> col_lower;
  std::vector<double> col_upper;
  std::vector<double> row_lower;
  std::vector<double> row_upper;

  void add_column(double c, double lo, double up,
                  std::span<const std::pair<std::size_t, double>> entries) {
    for (auto [r, v] : entries) {
      row_index.push_back(r);
      value.push_back(v);
    }
    col_start.push_back(row_index.size());
    cost.push_back(c);
    col_lower.push_back(lo);
    col_upper.push_back(up);
    ++num_cols;
  }
};

enum class LpStatus {
  kOptimal,
  kInfeasible,
  kUnbounded,
  kIterationLimit,
  kNumericalFailure,
};

inline const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::kOptimal: return "optimal";
    case LpStatus::kInfeasible: return "infeasible";
    case LpStatus::kUnbounded: return "unbounded";
    case LpStatus::kIterationLimit: return "iteration limit";
    case LpStatus::kNumericalFailure: return "numerical failure";
  }
  return "?";
}

struct SimplexTolerances {
  double pivot = 1e-9;        // smallest |alpha| accepted as a pivot
  double primal = 1e-9;       // bound violation still considered feasible
  double dual = 1e-9;         // reduced cost considered zero
  int refresh_period = 64;    // iterations between full x_B / y recomputes
  int reinvert_period = 400;  // pivots between rebuilds of the inverse
};

// Nonbasic position of a variable. Basic variables carry kBasic.
enum class VarStatus : std::uint8_t { kBasic, kAtLower, kAtUpper, kFree };

struct BasisSnapshot {
  std::vector<std::size_t> head;  // variable basic in each row position
  std::vector<VarStatus> status;  // per variable (structural then logical)
};

class BoundedSimplex {
 public:
  explicit BoundedSimplex(SparseLp lp, SimplexTolerances tol = {})
      : lp_(std::move(lp)), tol_(tol) {
    m_ = lp_.num_rows;
    n_ = lp_.num_cols;
    lower_.resize(n_ + m_);
    upper_.resize(n_ + m_);
    for (std::size_t j = 0; j < n_; ++j) {
      lower_[j] = lp_.col_lower[j];
      upper_[j] = lp_.col_upper[j];
    }
    for (std::size_t r = 0; r < m_; ++r) {
      lower_[n_ + r] = lp_.row_lower[r];
      upper_[n_ + r] = lp_.row_upper[r];
    }
    cost_.assign(n_ + m_, 0.0);
    std::copy(lp_.cost.begin(), lp_.cost.end(), cost_.begin());
    x_.assign(n_ + m_, 0.0);
    status_.assign(n_ + m_, VarStatus::kAtLower);
    pos_.assign(n_ + m_, kNone);
    head_.resize(m_);
    for (std::size_t j = 0; j < n_; ++j) place_nonbasic(j);
    slack_basis();
    compute_primal();
  }

  std::size_t num_rows() const { return m_; }
  std::size_t num_cols() const { return n_; }

  double col_lower(std::size_t j) const { return lower_[j]; }
  double col_upper(std::size_t j) const { return upper_[j]; }

  // Changes the bounds of a structural column. A nonbasic column moves to
  // the new bound; a basic one may become infeasible, which the next solve
  // repairs.
  void set_col_bounds(std::size_t j, double lo, double up) {
    lower_[j] = lo;
    upper_[j] = up;
    if (status_[j] != VarStatus::kBasic) {
      place_nonbasic(j);
      primal_stale_ = true;
    }
  }

  LpStatus solve(std::size_t max_iterations) {
    if (primal_stale_) compute_primal();
    std::size_t budget = max_iterations;
    for (int attempt = 0; attempt < 3; ++attempt) {
      LpStatus s = iterate(budget);
      if (s != LpStatus::kOptimal && s != LpStatus::kInfeasible) return s;
      // Verify from scratch before trusting the answer.
      reinvert();
      compute_primal();
      const bool feasible = max_infeasibility() <= 10 * tol_.primal;
      if (s == LpStatus::kInfeasible && !feasible) {
        if (confirm_infeasible()) return s;
        continue;
      }
      if (s == LpStatus::kOptimal && feasible && dual_feasible()) return s;
    }
    return LpStatus::kNumericalFailure;
  }

  double objective() const {
    double z = 0.0;
    for (std::size_t j = 0; j < n_; ++j) z += cost_[j] * x_[j];
    return z;
  }
  std::span<const double> col_values() const { return {x_.data(), n_}; }
  double row_activity(std::size_t r) const { return x_[n_ + r]; }
  std::size_t iterations() const { return total_iterations_; }

  BasisSnapshot snapshot() const { return {head_, status_}; }

  // Reinstalls a previously captured basis under the current bounds.
  void restore(const BasisSnapshot& basis) {
    status_ = basis.status;
    for (std::size_t k = 0; k < n_ + m_; ++k) {
      if (status_[k] != VarStatus::kBasic) place_nonbasic_keep(k);
    }
    install_basis(basis.head);
    duals_valid_ = false;
    compute_primal();
  }

 private:
  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  // Nonbasic placement at the finite bound nearest zero.
  void place_nonbasic(std::size_t k) {
    const double lo = lower_[k];
    const double up = upper_[k];
    if (std::isfinite(lo) && std::isfinite(up)) {
      status_[k] = std::abs(up) < std::abs(lo) ? VarStatus::kAtUpper
                                               : VarStatus::kAtLower;
    } else if (std::isfinite(lo)) {
      status_[k] = VarStatus::kAtLower;
    } else if (std::isfinite(up)) {
      status_[k] = VarStatus::kAtUpper;
    } else {
      status_[k] = VarStatus::kFree;
    }
    x_[k] = nonbasic_value(k);
  }

  // Keeps the recorded side when it is still finite.
  void place_nonbasic_keep(std::size_t k) {
    const VarStatus s = status_[k];
    if ((s == VarStatus::kAtLower && std::isfinite(lower_[k])) ||
        (s == VarStatus::kAtUpper && std::isfinite(upper_[k])) ||
        (s == VarStatus::kFree && !std::isfinite(lower_[k]) &&
         !std::isfinite(upper_[k]))) {
      x_[k] = nonbasic_value(k);
      return;
    }
    place_nonbasic(k);
  }

  double nonbasic_value(std::size_t k) const {
    switch (status_[k]) {
      case VarStatus::kAtLower: return lower_[k];
      case VarStatus::kAtUpper: return upper_[k];
      default: return 0.0;
    }
  }

  void slack_basis() {
    binv_.assign(m_ * m_, 0.0);
    for (std::size_t r = 0; r < m_; ++r) {
      binv_[r * m_ + r] = -1.0;
      head_[r] = n_ + r;
      pos_[n_ + r] = r;
      status_[n_ + r] = VarStatus::kBasic;
    }
    for (std::size_t j = 0; j < n_; ++j) pos_[j] = kNone;
    pivots_since_inversion_ = 0;
  }

  // alpha = B^{-1} a_k
  void ftran(std::size_t k, std::vector<double>& alpha) const {
    alpha.assign(m_, 0.0);
    if (k >= n_) {
      const std::size_t c = k - n_;
      for (std::size_t r = 0; r < m_; ++r) alpha[r] = -binv_[r * m_ + c];
      return;
    }
    for (std::size_t p = lp_.col_start[k]; p < lp_.col_start[k + 1]; ++p) {
      const std::size_t c = lp_.row_index[p];
      const double v = lp_.value[p];
      for (std::size_t r = 0; r < m_; ++r) alpha[r] += v * binv_[r * m_ + c];
    }
  }

  // y' a_k
  double dot_column(const std::vector<double>& y, std::size_t k) const {
    if (k >= n_) return -y[k - n_];
    double s = 0.0;
    for (std::size_t p = lp_.col_start[k]; p < lp_.col_start[k + 1]; ++p) {
      s += lp_.value[p] * y[lp_.row_index[p]];
    }
    return s;
  }

  // Replaces the basic variable in row position r by k, given alpha = B^{-1} a_k.
  void pivot_inverse(std::size_t r, const std::vector<double>& alpha) {
    double* row_r = &binv_[r * m_];
    const double inv = 1.0 / alpha[r];
    nz_cols_.clear();
    for (std::size_t c = 0; c < m_; ++c) {
      if (row_r[c] != 0.0) {
        row_r[c] *= inv;
        nz_cols_.push_back(c);
      }
    }
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r) continue;
      const double a = alpha[i];
      if (a == 0.0) continue;
      double* row_i = &binv_[i * m_];
      for (std::size_t c : nz_cols_) {
        double v = row_i[c] - a * row_r[c];
        row_i[c] = std::abs(v) < 1e-14 ? 0.0 : v;
      }
    }
    ++pivots_since_inversion_;
  }

  // Rebuilds B^{-1} for the variables listed in `want` (one per row). A
  // column that turns out dependent is dropped to its bound and its row
  // keeps the logical.
  void install_basis(const std::vector<std::size_t>& want) {
    for (std::size_t k = 0; k < n_ + m_; ++k) {
      if (status_[k] == VarStatus::kBasic) {
        status_[k] = VarStatus::kAtLower;
        place_nonbasic_keep(k);
      }
    }
    std::vector<char> wanted_logical(m_, 0);
    std::vector<std::size_t> structurals;
    for (std::size_t k : want) {
      if (k >= n_) {
        wanted_logical[k - n_] = 1;
      } else {
        structurals.push_back(k);
      }
    }
    slack_basis();
    std::vector<char> locked(wanted_logical);
    std::vector<double> alpha;
    for (std::size_t k : structurals) {
      ftran(k, alpha);
      std::size_t best = kNone;
      double best_abs = 1e-9;
      for (std::size_t r = 0; r < m_; ++r) {
        if (locked[r]) continue;
        const double a = std::abs(alpha[r]);
        if (a > best_abs) {
          best_abs = a;
          best = r;
        }
      }
      if (best == kNone) {
        status_[k] = VarStatus::kAtLower;
        place_nonbasic(k);
        continue;
      }
      pivot_inverse(best, alpha);
      const std::size_t out = head_[best];
      pos_[out] = kNone;
      status_[out] = VarStatus::kAtLower;
      place_nonbasic(out);
      head_[best] = k;
      pos_[k] = best;
      status_[k] = VarStatus::kBasic;
      locked[best] = 1;
    }
    pivots_since_inversion_ = 0;
  }

  void reinvert() {
    std::vector<std::size_t> want = head_;
    install_basis(want);
    duals_valid_ = false;
  }

  // x_B = -B^{-1} N x_N
  void compute_primal() {
    std::vector<double> rhs(m_, 0.0);
    for (std::size_t k = 0; k < n_ + m_; ++k) {
      if (status_[k] == VarStatus::kBasic) continue;
      x_[k] = nonbasic_value(k);
      const double v = x_[k];
      if (v == 0.0) continue;
      if (k >= n_) {
        rhs[k - n_] += v;
      } else {
        for (std::size_t p = lp_.col_start[k]; p < lp_.col_start[k + 1]; ++p) {
          rhs[lp_.row_index[p]] -= lp_.value[p] * v;
        }
      }
    }
    for (std::size_t r = 0; r < m_; ++r) {
      const double* row = &binv_[r * m_];
      double s = 0.0;
      for (std::size_t c = 0; c < m_; ++c) s += row[c] * rhs[c];
      x_[head_[r]] = s;
    }
    primal_stale_ = false;
  }

  double infeasibility(std::size_t k) const {
    if (x_[k] < lower_[k]) return lower_[k] - x_[k];
    if (x_[k] > upper_[k]) return x_[k] - upper_[k];
    return 0.0;
  }

  double max_infeasibility() const {
    double worst = 0.0;
    for (std::size_t r = 0; r < m_; ++r) {
      worst = std::max(worst, infeasibility(head_[r]));
    }
    return worst;
  }

  // Basic costs for the current phase; returns true in phase one.
  bool phase_costs(std::vector<double>& cb) const {
    cb.assign(m_, 0.0);
    bool phase_one = false;
    for (std::size_t r = 0; r < m_; ++r) {
      const std::size_t k = head_[r];
      if (x_[k] < lower_[k] - tol_.primal) {
        cb[r] = -1.0;
        phase_one = true;
      } else if (x_[k] > upper_[k] + tol_.primal) {
        cb[r] = 1.0;
        phase_one = true;
      }
    }
    if (!phase_one) {
      for (std::size_t r = 0; r < m_; ++r) cb[r] = cost_[head_[r]];
    }
    return phase_one;
  }

  // y' = cb' B^{-1}
  void compute_duals(const std::vector<double>& cb, std::vector<double>& y) {
    y.assign(m_, 0.0);
    for (std::size_t r = 0; r < m_; ++r) {
      const double c = cb[r];
      if (c == 0.0) continue;
      const double* row = &binv_[r * m_];
      for (std::size_t k = 0; k < m_; ++k) y[k] += c * row[k];
    }
  }

  double reduced_cost(bool phase_one, const std::vector<double>& y,
                      std::size_t k) const {
    const double c = phase_one ? 0.0 : cost_[k];
    return c - dot_column(y, k);
  }

  // True when the reduced cost d lets variable k improve, with the direction.
  bool attractive(std::size_t k, double d, int& dir) const {
    switch (status_[k]) {
      case VarStatus::kBasic: return false;
      case VarStatus::kAtLower:
        if (d < -tol_.dual && upper_[k] > lower_[k]) {
          dir = 1;
          return true;
        }
        return false;
      case VarStatus::kAtUpper:
        if (d > tol_.dual && upper_[k] > lower_[k]) {
          dir = -1;
          return true;
        }
        return false;
      case VarStatus::kFree:
        if (std::abs(d) > tol_.dual) {
          dir = d < 0 ? 1 : -1;
          return true;
        }
        return false;
    }
    return false;
  }

  bool dual_feasible() {
    std::vector<double> cb, y;
    if (phase_costs(cb)) return false;
    compute_duals(cb, y);
    for (std::size_t k = 0; k < n_ + m_; ++k) {
      int dir = 0;
      const double d = reduced_cost(false, y, k);
      if (attractive(k, d, dir) && std::abs(d) > 1e3 * tol_.dual) return false;
    }
    return true;
  }

  // Phase-one optimality certificate recomputed from a fresh inverse.
  bool confirm_infeasible() {
    std::vector<double> cb, y;
    if (!phase_costs(cb)) return false;
    compute_duals(cb, y);
    for (std::size_t k = 0; k < n_ + m_; ++k) {
      int dir = 0;
      const double d = reduced_cost(true, y, k);
      if (attractive(k, d, dir) && std::abs(d) > 1e3 * tol_.dual) return false;
    }
    return true;
  }

  LpStatus iterate(std::size_t& budget) {
    std::vector<double> cb, y_phase1, alpha;
    int degenerate_run = 0;
    int since_refresh = 0;
    while (true) {
      if (budget == 0) return LpStatus::kIterationLimit;
      if (pivots_since_inversion_ >=
          static_cast<std::size_t>(tol_.reinvert_period)) {
        reinvert();
        compute_primal();
        since_refresh = 0;
      } else if (since_refresh >= tol_.refresh_period) {
        compute_primal();
        duals_valid_ = false;
        since_refresh = 0;
      }
      const bool phase_one = phase_costs(cb);
      if (phase_one) {
        compute_duals(cb, y_phase1);
        duals_valid_ = false;
      } else if (!duals_valid_) {
        compute_duals(cb, y_);
        duals_valid_ = true;
      }
      const std::vector<double>& y = phase_one ? y_phase1 : y_;

      // Pricing: Dantzig, switching to Bland's smallest index on long
      // degenerate runs.
      const bool bland = degenerate_run > 50;
      std::size_t q = kNone;
      int dir = 0;
      double best = 0.0;
      double d_q = 0.0;
      for (std::size_t k = 0; k < n_ + m_; ++k) {
        if (status_[k] == VarStatus::kBasic) continue;
        int d_dir = 0;
        const double d = reduced_cost(phase_one, y, k);
        if (!attractive(k, d, d_dir)) continue;
        if (bland) {
          q = k;
          dir = d_dir;
          d_q = d;
          break;
        }
        if (std::abs(d) > best) {
          best = std::abs(d);
          q = k;
          dir = d_dir;
          d_q = d;
        }
      }
      if (q == kNone) {
        return phase_one ? LpStatus::kInfeasible : LpStatus::kOptimal;
      }

      ftran(q, alpha);

      // Harris two-pass ratio test. g is the rate of change of each basic
      // variable per unit step of the entering one.
      double theta_max = kInfinity;
      for (std::size_t r = 0; r < m_; ++r) {
        const double g = -dir * alpha[r];
        if (std::abs(g) <= tol_.pivot) continue;
        const std::size_t k = head_[r];
        const double target = step_target(k, g);
        if (!std::isfinite(target)) continue;
        const double slack = g > 0 ? target + tol_.primal - x_[k]
                                   : x_[k] - target + tol_.primal;
        theta_max = std::min(theta_max, std::max(slack, 0.0) / std::abs(g));
      }
      const double range = upper_[q] - lower_[q];
      std::size_t leave = kNone;
      double theta = 0.0;
      double leave_target = 0.0;
      if (range <= theta_max) {
        theta = range;
      } else {
        if (!std::isfinite(theta_max)) {
          return phase_one ? LpStatus::kNumericalFailure : LpStatus::kUnbounded;
        }
        double best_pivot = 0.0;
        for (std::size_t r = 0; r < m_; ++r) {
          const double g = -dir * alpha[r];
          if (std::abs(g) <= tol_.pivot) continue;
          const std::size_t k = head_[r];
          const double target = step_target(k, g);
          if (!std::isfinite(target)) continue;
          const double ratio = std::max((target - x_[k]) / g, 0.0);
          if (ratio > theta_max) continue;
          const bool better =
              bland ? (leave == kNone || k < head_[leave])
                    : std::abs(g) > best_pivot;
          if (better) {
            best_pivot = std::abs(g);
            leave = r;
            theta = ratio;
            leave_target = target;
          }
        }
        if (leave == kNone) return LpStatus::kNumericalFailure;
      }

      degenerate_run = theta < 1e-12 ? degenerate_run + 1 : 0;
      --budget;
      ++total_iterations_;
      ++since_refresh;

      x_[q] += dir * theta;
      for (std::size_t r = 0; r < m_; ++r) {
        if (alpha[r] != 0.0) x_[head_[r]] -= dir * theta * alpha[r];
      }
      if (leave == kNone) {
        status_[q] = dir > 0 ? VarStatus::kAtUpper : VarStatus::kAtLower;
        x_[q] = nonbasic_value(q);
        continue;
      }
      const std::size_t out = head_[leave];
      status_[out] = leave_target == upper_[out] && leave_target != lower_[out]
                         ? VarStatus::kAtUpper
                         : VarStatus::kAtLower;
      x_[out] = leave_target;
      pos_[out] = kNone;
      if (!phase_one && duals_valid_) {
        // y += (d_q / alpha_r) * (row r of the old inverse)
        const double step = d_q / alpha[leave];
        const double* row = &binv_[leave * m_];
        for (std::size_t c = 0; c < m_; ++c) {
          if (row[c] != 0.0) y_[c] += step * row[c];
        }
      }
      pivot_inverse(leave, alpha);
      head_[leave] = q;
      pos_[q] = leave;
      status_[q] = VarStatus::kBasic;
    }
  }

  // Bound that basic variable k runs into when moving with rate g. An
  // infeasible variable stops as soon as it reaches feasibility.
  double step_target(std::size_t k, double g) const {
    const double v = x_[k];
    if (g > 0) {
      if (v < lower_[k] - tol_.primal) return lower_[k];
      if (v > upper_[k] + tol_.primal) return kInfinity;
      return upper_[k];
    }
    if (v > upper_[k] + tol_.primal) return upper_[k];
    if (v < lower_[k] - tol_.primal) return -kInfinity;
    return lower_[k];
  }

  SparseLp lp_;
  SimplexTolerances tol_;
  std::size_t m_ = 0;
  std::size_t n_ = 0;
  std::vector<double> lower_, upper_, cost_, x_;
  std::vector<VarStatus> status_;
  std::vector<std::size_t> pos_;
  std::vector<std::size_t> head_;
  std::vector<double> binv_;
  std::vector<std::size_t> nz_cols_;
  std::vector<double> y_;  // phase-two duals, updated per pivot
  bool duals_valid_ = false;
  std::size_t pivots_since_inversion_ = 0;
  std::size_t total_iterations_ = 0;
  bool primal_stale_ = false;
};

}  // namespace ttmpp

#endif  // TTMPP_SIMPLEX_HPP_
