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

// Just enough of an LP-format reader to check exported files: linear
// objective and rows, two-sided and fixed bounds, a General section.
// Knows nothing about the writer's internals beyond the file format.

#ifndef TTMPP_TESTS_LP_READER_HPP_
#define TTMPP_TESTS_LP_READER_HPP_

#include <cctype>
#include <cstdlib>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace ttmpp::testing {

struct LpRow {
  std::string name;
  std::map<std::string, double> coefs;
  std::string sense;
  double rhs = 0.0;
};

struct LpFile {
  bool maximize = false;
  std::map<std::string, double> objective;
  std::vector<LpRow> rows;
  std::map<std::string, std::pair<double, double>> bounds;
  std::set<std::string> integers;
  std::set<std::string> variables;  // every name seen anywhere
};

inline std::vector<std::string> lp_tokens(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    const auto cut = line.find('\\');
    if (cut != std::string::npos) line.resize(cut);
    std::istringstream words(line);
    std::string w;
    while (words >> w) out.push_back(w);
  }
  return out;
}

inline bool lp_is_number(const std::string& s) {
  if (s.empty()) return false;
  char* end = nullptr;
  std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size();
}

inline LpFile read_lp(const std::string& text) {
  const auto tok = lp_tokens(text);
  LpFile lp;
  enum { kNone, kObj, kRows, kBounds, kGeneral } section = kNone;
  std::size_t k = 0;
  auto lower = [](std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(c));
    return s;
  };
  // Reads "[name:] (+|-) [coef] var ..." until a sense token or section.
  auto linear = [&](std::map<std::string, double>& coefs) {
    double sign = 1.0;
    double coef = 1.0;
    while (k < tok.size()) {
      const auto& t = tok[k];
      if (t == "<=" || t == ">=" || t == "=" || t == "<" || t == ">") return;
      const auto lt = lower(t);
      if (lt == "subject" || lt == "bounds" || lt == "general" ||
          lt == "end") {
        return;
      }
      if (t.back() == ':') {  // objective name
        ++k;
        continue;
      }
      if (t == "+") {
        sign = 1.0;
      } else if (t == "-") {
        sign = -1.0;
      } else if (lp_is_number(t)) {
        coef = std::stod(t);
      } else {
        coefs[t] += sign * coef;
        lp.variables.insert(t);
        sign = 1.0;
        coef = 1.0;
      }
      ++k;
    }
  };
  while (k < tok.size()) {
    const auto lt = lower(tok[k]);
    if (lt == "maximize" || lt == "minimize") {
      lp.maximize = lt == "maximize";
      section = kObj;
      ++k;
      linear(lp.objective);
      continue;
    }
    if (lt == "subject") {
      section = kRows;
      k += 2;  // "Subject To"
      continue;
    }
    if (lt == "bounds") {
      section = kBounds;
      ++k;
      continue;
    }
    if (lt == "general") {
      section = kGeneral;
      ++k;
      continue;
    }
    if (lt == "end") break;
    if (section == kRows) {
      LpRow row;
      if (tok[k].back() == ':') {
        row.name = tok[k].substr(0, tok[k].size() - 1);
        ++k;
      }
      linear(row.coefs);
      if (k + 1 >= tok.size()) throw std::runtime_error("truncated row");
      row.sense = tok[k++];
      row.rhs = std::stod(tok[k++]);
      lp.rows.push_back(row);
    } else if (section == kBounds) {
      if (lp_is_number(tok[k])) {  // lo <= x <= hi
        const double lo = std::stod(tok[k]);
        const std::string var = tok[k + 2];
        const double hi = std::stod(tok[k + 4]);
        lp.bounds[var] = {lo, hi};
        lp.variables.insert(var);
        k += 5;
      } else {  // x = v
        const std::string var = tok[k];
        const double v = std::stod(tok[k + 2]);
        lp.bounds[var] = {v, v};
        lp.variables.insert(var);
        k += 3;
      }
    } else if (section == kGeneral) {
      lp.integers.insert(tok[k]);
      lp.variables.insert(tok[k]);
      ++k;
    } else {
      throw std::runtime_error("unexpected token '" + tok[k] + "'");
    }
  }
  return lp;
}

}  // namespace ttmpp::testing

#endif  // TTMPP_TESTS_LP_READER_HPP_
