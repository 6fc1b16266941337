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

// Swap plans: which sections leave and which arrive, with the objective
// split into its preference and penalty terms.

#ifndef TTMPP_REPORT_HPP_
#define TTMPP_REPORT_HPP_

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "ttmpp/model.hpp"
#include "ttmpp/solver.hpp"

namespace ttmpp {

inline constexpr int kReportSchemaVersion = 1;

enum class SwapDirection { kRemoved, kAdded };

struct SwapEntry {
  SwapDirection direction = SwapDirection::kRemoved;
  std::string course;  // labels
  std::string faculty;
  std::string slot;
  std::string course_id;
  std::string faculty_id;
  std::string slot_id;

  friend bool operator==(const SwapEntry&, const SwapEntry&) = default;
};

struct ActivatedPenalty {
  std::string course;
  std::string faculty;
  std::string course_id;
  std::string faculty_id;
  int t_aux = 0;

  friend bool operator==(const ActivatedPenalty&,
                         const ActivatedPenalty&) = default;
};

struct SwapReport {
  std::string status = "Optimal";
  std::vector<SwapEntry> entries;  // removed first, then added
  double objective = 0.0;
  double preference_delta = 0.0;
  double penalty_total = 0.0;
  std::vector<ActivatedPenalty> activated_penalties;

  std::size_t count(SwapDirection d) const {
    return static_cast<std::size_t>(
        std::count_if(entries.begin(), entries.end(),
                      [d](const SwapEntry& e) { return e.direction == d; }));
  }
  friend bool operator==(const SwapReport&, const SwapReport&) = default;
};

class ReportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline SwapReport diff_schedules(const Instance& inst, const Solution& sol) {
  if (!sol.has_incumbent || (sol.status != SolveStatus::kOptimal &&
                             sol.status != SolveStatus::kLimitReached)) {
    throw ReportError(std::string("no schedule to report: solver status ") +
                      to_string(sol.status));
  }
  const auto ni = inst.num_courses();
  const auto nj = inst.num_faculty();
  const auto nt = inst.num_slots();
  if (!sol.p.has_shape(ni, nj, nt) || !sol.t_aux.has_shape(ni, nj)) {
    throw DimensionError("solution does not match the instance");
  }
  SwapReport report;
  report.status = to_string(sol.status);
  for (auto dir : {SwapDirection::kRemoved, SwapDirection::kAdded}) {
    const int want = dir == SwapDirection::kRemoved ? -1 : 1;
    for (std::size_t i = 0; i < ni; ++i) {
      for (std::size_t j = 0; j < nj; ++j) {
        for (std::size_t t = 0; t < nt; ++t) {
          if (sol.p(i, j, t) != want) continue;
          report.entries.push_back({dir, inst.courses[i].label,
                                    inst.faculty[j].label, inst.slots[t].label,
                                    inst.courses[i].id, inst.faculty[j].id,
                                    inst.slots[t].id});
        }
      }
    }
  }
  const auto parts = objective_parts(inst, sol.p, sol.t_aux);
  report.preference_delta = parts.preference;
  report.penalty_total = parts.penalty;
  report.objective = parts.total();
  for (std::size_t i = 0; i < ni; ++i) {
    for (std::size_t j = 0; j < nj; ++j) {
      if (sol.t_aux(i, j) <= 0) continue;
      report.activated_penalties.push_back(
          {inst.courses[i].label, inst.faculty[j].label, inst.courses[i].id,
           inst.faculty[j].id, sol.t_aux(i, j)});
    }
  }
  return report;
}

enum class ReportFormat { kPlainTable, kJson };

// JSON encoding.

inline const char* to_string(SwapDirection d) {
  return d == SwapDirection::kRemoved ? "removed" : "added";
}

inline nlohmann::json report_to_json(const SwapReport& r) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : r.entries) {
    entries.push_back({{"direction", to_string(e.direction)},
                       {"course", e.course},
                       {"faculty", e.faculty},
                       {"slot", e.slot},
                       {"course_id", e.course_id},
                       {"faculty_id", e.faculty_id},
                       {"slot_id", e.slot_id}});
  }
  nlohmann::json penalties = nlohmann::json::array();
  for (const auto& a : r.activated_penalties) {
    penalties.push_back({{"course", a.course},
                         {"faculty", a.faculty},
                         {"course_id", a.course_id},
                         {"faculty_id", a.faculty_id},
                         {"t_aux", a.t_aux}});
  }
  return {{"schema_version", kReportSchemaVersion},
          {"status", r.status},
          {"objective", r.objective},
          {"preference_delta", r.preference_delta},
          {"penalty_total", r.penalty_total},
          {"change_count", r.entries.size()},
          {"entries", entries},
          {"activated_penalties", penalties}};
}

inline SwapReport report_from_json(const nlohmann::json& j) {
  try {
    if (j.at("schema_version").get<int>() != kReportSchemaVersion) {
      throw ReportError("unsupported report schema_version " +
                        j.at("schema_version").dump());
    }
    SwapReport r;
    r.status = j.at("status").get<std::string>();
    r.objective = j.at("objective").get<double>();
    r.preference_delta = j.at("preference_delta").get<double>();
    r.penalty_total = j.at("penalty_total").get<double>();
    for (const auto& e : j.at("entries")) {
      const auto dir = e.at("direction").get<std::string>();
      if (dir != "removed" && dir != "added") {
        throw ReportError("unknown entry direction '" + dir + "'");
      }
      r.entries.push_back(
          {dir == "removed" ? SwapDirection::kRemoved : SwapDirection::kAdded,
           e.at("course").get<std::string>(), e.at("faculty").get<std::string>(),
           e.at("slot").get<std::string>(), e.value("course_id", ""),
           e.value("faculty_id", ""), e.value("slot_id", "")});
    }
    for (const auto& a : j.at("activated_penalties")) {
      r.activated_penalties.push_back(
          {a.at("course").get<std::string>(), a.at("faculty").get<std::string>(),
           a.value("course_id", ""), a.value("faculty_id", ""),
           a.at("t_aux").get<int>()});
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ReportError(std::string("malformed report: ") + e.what());
  }
}

// Plain table: removed on the left, added on the right, one section per
// line, "(None)" when a side is empty.

namespace detail {

inline std::string pad(const std::string& s, std::size_t w) {
  return s.size() >= w ? s : s + std::string(w - s.size(), ' ');
}

}  // namespace detail

inline std::string render_plain(const SwapReport& r) {
  using Row = std::vector<std::string>;
  std::vector<Row> removed, added;
  for (const auto& e : r.entries) {
    (e.direction == SwapDirection::kRemoved ? removed : added)
        .push_back({e.course, e.faculty, e.slot});
  }
  if (removed.empty()) removed.push_back({"(None)", "", ""});
  if (added.empty()) added.push_back({"(None)", "", ""});
  const Row head = {"Course", "Faculty", "Time slot"};
  auto widths = [&](const std::vector<Row>& rows) {
    std::vector<std::size_t> w(3);
    for (std::size_t c = 0; c < 3; ++c) {
      w[c] = head[c].size();
      for (const auto& row : rows) w[c] = std::max(w[c], row[c].size());
    }
    return w;
  };
  const auto wl = widths(removed);
  const auto wr = widths(added);
  auto side = [&](const Row& row, const std::vector<std::size_t>& w) {
    return detail::pad(row[0], w[0]) + "  " + detail::pad(row[1], w[1]) +
           "  " + detail::pad(row[2], w[2]);
  };
  const std::size_t left = wl[0] + wl[1] + wl[2] + 4;
  std::ostringstream os;
  auto line = [&](const std::string& a, const std::string& b) {
    std::string s = detail::pad(a, left) + " | " + b;
    while (!s.empty() && s.back() == ' ') s.pop_back();
    os << s << '\n';
  };
  line("Sections removed", "Sections added");
  line(side(head, wl), side(head, wr));
  line(std::string(left, '-'),
       std::string(wr[0] + wr[1] + wr[2] + 4, '-'));
  const Row blank = {"", "", ""};
  for (std::size_t k = 0; k < std::max(removed.size(), added.size()); ++k) {
    line(side(k < removed.size() ? removed[k] : blank, wl),
         side(k < added.size() ? added[k] : blank, wr));
  }
  os << '\n';
  os << "Status:            " << r.status << '\n';
  os << "Objective:         " << format_number(r.objective) << '\n';
  os << "Preference delta:  " << format_number(r.preference_delta) << '\n';
  os << "Penalty total:     " << format_number(r.penalty_total) << '\n';
  os << "Changed cells:     " << r.entries.size() << '\n';
  if (!r.activated_penalties.empty()) {
    os << "Swap penalties:\n";
    for (const auto& a : r.activated_penalties) {
      os << "  " << a.course << " / " << a.faculty << "  T=" << a.t_aux
         << '\n';
    }
  }
  return os.str();
}

inline std::string render_report(const SwapReport& r, ReportFormat format) {
  if (format == ReportFormat::kJson) return report_to_json(r).dump(2) + "\n";
  return render_plain(r);
}

}  // namespace ttmpp

#endif  // TTMPP_REPORT_HPP_
