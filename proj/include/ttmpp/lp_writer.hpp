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

// CPLEX LP text export of an IlpModel. Variables are P_i_j_t and T_i_j
// (zero-based indices), rows R1..Rm in model order; each row is preceded by
// a comment carrying its tag. Output is byte-stable for a given model.

#ifndef TTMPP_LP_WRITER_HPP_
#define TTMPP_LP_WRITER_HPP_

#include <ostream>
#include <sstream>
#include <string>

#include "ttmpp/model.hpp"

namespace ttmpp {

inline std::string lp_variable_name(const VariableRef& ref) {
  std::string name = ref.kind == VarKind::kP ? "P_" : "T_";
  name += std::to_string(ref.course) + "_" + std::to_string(ref.faculty);
  if (ref.slot) name += "_" + std::to_string(*ref.slot);
  return name;
}

namespace detail {

class LpLine {
 public:
  explicit LpLine(std::ostream& os) : os_(os) {}
  void put(const std::string& token) {
    if (width_ + token.size() + 1 > 78) {
      os_ << "\n   ";
      width_ = 3;
    }
    os_ << ' ' << token;
    width_ += token.size() + 1;
  }
  void start(const std::string& head) {
    os_ << ' ' << head;
    width_ = head.size() + 1;
  }
  void end() { os_ << '\n'; }

 private:
  std::ostream& os_;
  std::size_t width_ = 0;
};

inline void lp_terms(LpLine& line, const IlpModel& model,
                     const std::vector<Term>& terms) {
  bool any = false;
  for (const auto& term : terms) {
    if (term.coef == 0.0) continue;
    const double a = term.coef < 0 ? -term.coef : term.coef;
    std::string tok = term.coef < 0 ? "- " : "+ ";
    if (a != 1.0) tok += format_number(a) + " ";
    tok += lp_variable_name(model.variables[term.var].ref);
    line.put(tok);
    any = true;
  }
  if (!any) line.put("0 " + lp_variable_name(model.variables.front().ref));
}

}  // namespace detail

inline void write_lp(std::ostream& os, const IlpModel& model) {
  if (model.variables.empty()) {
    throw std::invalid_argument("cannot export a model with no variables");
  }
  os << "\\ ttmpp swap model: " << model.num_courses << " courses, "
     << model.num_faculty << " faculty, " << model.num_slots << " slots\n";
  os << "\\ " << model.variables.size() << " variables, "
     << model.constraints.size() << " rows\n";
  os << "Maximize\n";
  detail::LpLine line(os);
  line.start("obj:");
  detail::lp_terms(line, model, model.objective);
  line.end();

  os << "Subject To\n";
  for (std::size_t r = 0; r < model.constraints.size(); ++r) {
    const auto& row = model.constraints[r];
    os << "\\ " << row.tag << "\n";
    line.start("R" + std::to_string(r + 1) + ":");
    detail::lp_terms(line, model, row.terms);
    const char* sense = row.sense == Sense::kLessEqual  ? "<="
                        : row.sense == Sense::kEqual    ? "="
                                                        : ">=";
    line.put(std::string(sense) + " " + format_number(row.rhs));
    line.end();
  }

  os << "Bounds\n";
  for (const auto& v : model.variables) {
    const auto name = lp_variable_name(v.ref);
    if (v.lower == v.upper) {
      os << ' ' << name << " = " << v.lower << '\n';
    } else {
      os << ' ' << v.lower << " <= " << name << " <= " << v.upper << '\n';
    }
  }

  os << "General\n";
  line.start("");
  for (const auto& v : model.variables) line.put(lp_variable_name(v.ref));
  line.end();
  os << "End\n";
}

inline std::string to_lp_string(const IlpModel& model) {
  std::ostringstream os;
  write_lp(os, model);
  return os.str();
}

}  // namespace ttmpp

#endif  // TTMPP_LP_WRITER_HPP_
