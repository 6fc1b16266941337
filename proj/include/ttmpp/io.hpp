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

// Reading and writing instances, scenarios and solutions.
//
// JSON instance document (schema_version 1):
//   courses    [{id, label, load_units}]
//   faculty    [{id, label, load_min, load_max}]
//   slots      [{id, label}]
//   conflicts  [[slot_a, slot_b]]
//   W          faculty x slot      (row j, column t)
//   alpha      course x faculty    (row i, column j)
//   C          course x faculty    (row i, column j), 0 or 1
//   M          course x slot       (row i, column t), non-negative integers
//   X_triples  [[course, faculty, slot]] for every X = 1
//   metadata   {name, description, created}
//
// CSV bundle: a directory holding courses.csv, faculty.csv, slots.csv,
// conflicts.csv, W.csv, alpha.csv, C.csv, M.csv and X.csv. Matrix files
// have a header row naming the column ids and a leading id column.
//
// Every loader runs validate_instance and refuses invalid data.

#ifndef TTMPP_IO_HPP_
#define TTMPP_IO_HPP_

#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ttmpp/instance.hpp"
#include "ttmpp/model.hpp"
#include "ttmpp/solver.hpp"

namespace ttmpp {

inline constexpr int kInstanceSchemaVersion = 1;
inline constexpr int kScenarioSchemaVersion = 1;
inline constexpr int kSolutionSchemaVersion = 1;

using json = nlohmann::json;

// Row and column are 1-based; 0 means the error is not tied to a cell.
class IoError : public std::runtime_error {
 public:
  IoError(std::string file, std::size_t row, std::size_t column,
          const std::string& message)
      : std::runtime_error(format(file, row, column, message)),
        file_(std::move(file)),
        row_(row),
        column_(column) {}

  const std::string& file() const { return file_; }
  std::size_t row() const { return row_; }
  std::size_t column() const { return column_; }

 private:
  static std::string format(const std::string& file, std::size_t row,
                            std::size_t column, const std::string& message) {
    std::string where = file;
    if (row > 0) where += ":" + std::to_string(row);
    if (column > 0) where += ":" + std::to_string(column);
    return where + ": " + message;
  }

  std::string file_;
  std::size_t row_;
  std::size_t column_;
};

// The file itself could not be opened, read or written.
class FileError : public IoError {
 public:
  FileError(const std::string& file, const std::string& message)
      : IoError(file, 0, 0, message) {}
};

class InvalidInstanceError : public IoError {
 public:
  InvalidInstanceError(const std::string& file, ValidationReport report)
      : IoError(file, 0, 0, summary(report)), report_(std::move(report)) {}
  const ValidationReport& report() const { return report_; }

 private:
  static std::string summary(const ValidationReport& report) {
    std::string s = "instance fails validation (" +
                    std::to_string(report.size()) + " violation" +
                    (report.size() == 1 ? "" : "s") + ")";
    if (!report.empty()) s += ": " + report.front().message;
    return s;
  }
  ValidationReport report_;
};

struct InstanceMetadata {
  std::string name;
  std::string description;
  std::string created;  // ISO 8601, UTC

  friend bool operator==(const InstanceMetadata&,
                         const InstanceMetadata&) = default;
};

struct InstanceDocument {
  int schema_version = kInstanceSchemaVersion;
  InstanceMetadata metadata;
  Instance instance;

  friend bool operator==(const InstanceDocument&,
                         const InstanceDocument&) = default;
};

inline std::string utc_timestamp() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline void require_valid(const Instance& inst, const std::string& source) {
  auto report = validate_instance(inst);
  if (!report.empty()) throw InvalidInstanceError(source, std::move(report));
}

namespace detail {

class JsonReader {
 public:
  explicit JsonReader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const std::string& msg, std::size_t row = 0,
                         std::size_t col = 0) const {
    throw IoError(source_, row, col, msg);
  }

  const json& member(const json& obj, const char* key,
                     const std::string& where) const {
    if (!obj.is_object()) fail(where + ": expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) fail(where + ": missing \"" + key + "\"");
    return *it;
  }

  const json& array(const json& obj, const char* key) const {
    const json& v = member(obj, key, "document");
    if (!v.is_array()) fail(std::string("\"") + key + "\" must be an array");
    return v;
  }

  std::string text(const json& obj, const char* key, const std::string& where,
                   std::size_t row) const {
    const json& v = member(obj, key, where);
    if (!v.is_string()) {
      fail(where + ": \"" + key + "\" must be a string", row);
    }
    return v.get<std::string>();
  }

  std::string text_or(const json& obj, const char* key,
                      const std::string& where, std::size_t row) const {
    if (!obj.contains(key)) return "";
    return text(obj, key, where, row);
  }

  double number(const json& v, const std::string& where, std::size_t row,
                std::size_t col) const {
    if (!v.is_number()) fail(where + ": non-numeric cell", row, col);
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail(where + ": non-finite cell", row, col);
    return d;
  }

  int integer(const json& v, const std::string& where, std::size_t row,
              std::size_t col) const {
    const double d = number(v, where, row, col);
    if (d != std::floor(d) || std::abs(d) > 1e9) {
      fail(where + ": expected an integer", row, col);
    }
    return static_cast<int>(d);
  }

  template <typename T, typename Cell>
  Grid2<T> matrix(const json& doc, const char* key, std::size_t rows,
                  std::size_t cols, Cell cell) const {
    const json& m = member(doc, key, "document");
    const std::string where = key;
    if (!m.is_array()) fail(where + ": expected an array of rows");
    if (m.size() != rows) {
      fail(where + ": expected " + std::to_string(rows) + " rows, found " +
           std::to_string(m.size()));
    }
    Grid2<T> out(rows, cols, T{});
    for (std::size_t r = 0; r < rows; ++r) {
      if (!m[r].is_array() || m[r].size() != cols) {
        fail(where + ": expected " + std::to_string(cols) + " columns", r + 1);
      }
      for (std::size_t c = 0; c < cols; ++c) {
        out(r, c) = cell(m[r][c], where, r + 1, c + 1);
      }
    }
    return out;
  }

  const std::string& source() const { return source_; }

 private:
  std::string source_;
};

template <typename Entity>
void check_unique_ids(const std::vector<Entity>& items, const char* what,
                      const std::string& source, std::size_t row_offset) {
  std::set<std::string> seen;
  for (std::size_t k = 0; k < items.size(); ++k) {
    if (items[k].id.empty()) {
      throw IoError(source, k + row_offset, 1,
                    std::string("empty ") + what + " id");
    }
    if (!seen.insert(items[k].id).second) {
      throw IoError(source, k + row_offset, 1,
                    std::string("duplicated ") + what + " id '" + items[k].id +
                        "'");
    }
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// JSON instance documents

inline json instance_to_json(const Instance& inst,
                             const InstanceMetadata& meta = {}) {
  json doc;
  doc["schema_version"] = kInstanceSchemaVersion;
  doc["metadata"] = {{"name", meta.name},
                     {"description", meta.description},
                     {"created", meta.created}};
  json courses = json::array();
  for (const auto& c : inst.courses) {
    courses.push_back(
        {{"id", c.id}, {"label", c.label}, {"load_units", c.load_units}});
  }
  json faculty = json::array();
  for (const auto& f : inst.faculty) {
    faculty.push_back({{"id", f.id},
                       {"label", f.label},
                       {"load_min", f.load_min},
                       {"load_max", f.load_max}});
  }
  json slots = json::array();
  for (const auto& s : inst.slots) {
    slots.push_back({{"id", s.id}, {"label", s.label}});
  }
  json conflicts = json::array();
  for (const auto& p : inst.conflicts) {
    conflicts.push_back({p.slot_a, p.slot_b});
  }
  doc["courses"] = courses;
  doc["faculty"] = faculty;
  doc["slots"] = slots;
  doc["conflicts"] = conflicts;
  auto matrix = [](const auto& grid) {
    json m = json::array();
    for (std::size_t r = 0; r < grid.rows(); ++r) {
      json row = json::array();
      for (std::size_t c = 0; c < grid.cols(); ++c) row.push_back(grid(r, c));
      m.push_back(row);
    }
    return m;
  };
  doc["W"] = matrix(inst.preferences);
  doc["alpha"] = matrix(inst.swap_penalties);
  doc["C"] = matrix(inst.eligibility);
  doc["M"] = matrix(inst.demand);
  json triples = json::array();
  for (std::size_t i = 0; i < inst.num_courses(); ++i) {
    for (std::size_t j = 0; j < inst.num_faculty(); ++j) {
      for (std::size_t t = 0; t < inst.num_slots(); ++t) {
        if (inst.obsolete_schedule(i, j, t) != 0) {
          triples.push_back(
              {inst.courses[i].id, inst.faculty[j].id, inst.slots[t].id});
        }
      }
    }
  }
  doc["X_triples"] = triples;
  return doc;
}

inline InstanceDocument instance_document_from_json(
    const json& doc, const std::string& source = "<json>") {
  detail::JsonReader in(source);
  if (!doc.is_object()) in.fail("instance document must be a JSON object");
  const json& version = in.member(doc, "schema_version", "document");
  if (!version.is_number_integer() ||
      version.get<int>() != kInstanceSchemaVersion) {
    in.fail("unsupported schema_version " + version.dump() + " (expected " +
            std::to_string(kInstanceSchemaVersion) + ")");
  }
  InstanceDocument out;
  if (doc.contains("metadata")) {
    const json& m = doc["metadata"];
    out.metadata.name = in.text_or(m, "name", "metadata", 0);
    out.metadata.description = in.text_or(m, "description", "metadata", 0);
    out.metadata.created = in.text_or(m, "created", "metadata", 0);
  }
  Instance& inst = out.instance;
  const json& courses = in.array(doc, "courses");
  for (std::size_t k = 0; k < courses.size(); ++k) {
    const auto& c = courses[k];
    inst.courses.push_back(
        {in.text(c, "id", "courses", k + 1), in.text_or(c, "label", "courses", k + 1),
         in.number(in.member(c, "load_units", "courses"), "courses.load_units",
                   k + 1, 0)});
  }
  const json& faculty = in.array(doc, "faculty");
  for (std::size_t k = 0; k < faculty.size(); ++k) {
    const auto& f = faculty[k];
    inst.faculty.push_back(
        {in.text(f, "id", "faculty", k + 1), in.text_or(f, "label", "faculty", k + 1),
         in.number(in.member(f, "load_min", "faculty"), "faculty.load_min",
                   k + 1, 0),
         in.number(in.member(f, "load_max", "faculty"), "faculty.load_max",
                   k + 1, 0)});
  }
  const json& slots = in.array(doc, "slots");
  for (std::size_t k = 0; k < slots.size(); ++k) {
    inst.slots.push_back({in.text(slots[k], "id", "slots", k + 1),
                          in.text_or(slots[k], "label", "slots", k + 1)});
  }
  detail::check_unique_ids(inst.courses, "course", source + "#courses", 1);
  detail::check_unique_ids(inst.faculty, "faculty", source + "#faculty", 1);
  detail::check_unique_ids(inst.slots, "slot", source + "#slots", 1);

  const json& conflicts = in.array(doc, "conflicts");
  for (std::size_t k = 0; k < conflicts.size(); ++k) {
    const auto& p = conflicts[k];
    if (!p.is_array() || p.size() != 2 || !p[0].is_string() ||
        !p[1].is_string()) {
      in.fail("conflicts: each entry must be [slot_a, slot_b]", k + 1);
    }
    inst.conflicts.push_back({p[0].get<std::string>(), p[1].get<std::string>()});
  }

  const auto ni = inst.num_courses();
  const auto nj = inst.num_faculty();
  const auto nt = inst.num_slots();
  auto non_negative = [&](const json& v, const std::string& where,
                          std::size_t r, std::size_t c) {
    const double d = in.number(v, where, r, c);
    if (d < 0) in.fail(where + ": negative entry", r, c);
    return d;
  };
  auto count = [&](const json& v, const std::string& where, std::size_t r,
                   std::size_t c) {
    const int n = in.integer(v, where, r, c);
    if (n < 0) in.fail(where + ": negative entry", r, c);
    return n;
  };
  auto flag = [&](const json& v, const std::string& where, std::size_t r,
                  std::size_t c) {
    const int n = in.integer(v, where, r, c);
    if (n != 0 && n != 1) in.fail(where + ": entry must be 0 or 1", r, c);
    return n;
  };
  inst.preferences = in.matrix<double>(doc, "W", nj, nt, non_negative);
  inst.swap_penalties = in.matrix<double>(doc, "alpha", ni, nj, non_negative);
  inst.eligibility = in.matrix<int>(doc, "C", ni, nj, flag);
  inst.demand = in.matrix<int>(doc, "M", ni, nt, count);

  inst.obsolete_schedule = Grid3<int>(ni, nj, nt, 0);
  const json& triples = in.array(doc, "X_triples");
  for (std::size_t k = 0; k < triples.size(); ++k) {
    const auto& x = triples[k];
    if (!x.is_array() || x.size() != 3) {
      in.fail("X_triples: each entry must be [course, faculty, slot]", k + 1);
    }
    for (std::size_t c = 0; c < 3; ++c) {
      if (!x[c].is_string()) in.fail("X_triples: ids must be strings", k + 1, c + 1);
    }
    const auto i = course_index(inst, x[0].get<std::string>());
    const auto j = faculty_index(inst, x[1].get<std::string>());
    const auto t = slot_index(inst, x[2].get<std::string>());
    if (!i) in.fail("X_triples: unknown course " + x[0].dump(), k + 1, 1);
    if (!j) in.fail("X_triples: unknown faculty " + x[1].dump(), k + 1, 2);
    if (!t) in.fail("X_triples: unknown slot " + x[2].dump(), k + 1, 3);
    if (inst.obsolete_schedule(*i, *j, *t) != 0) {
      in.fail("X_triples: duplicated triple", k + 1);
    }
    inst.obsolete_schedule(*i, *j, *t) = 1;
  }
  require_valid(inst, source);
  return out;
}

inline std::string serialize_instance_json(const Instance& inst,
                                           const InstanceMetadata& meta = {}) {
  return instance_to_json(inst, meta).dump(2) + "\n";
}

inline json parse_json_text(std::string_view text, const std::string& source) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    // byte offsets are all nlohmann gives us; translate to line and column
    std::size_t line = 1, col = 1;
    for (std::size_t k = 0; k + 1 < e.byte && k < text.size(); ++k) {
      if (text[k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw IoError(source, line, col, "malformed JSON");
  }
}

inline InstanceDocument parse_instance_document(
    std::string_view text, const std::string& source = "<json>") {
  return instance_document_from_json(parse_json_text(text, source), source);
}

inline Instance parse_instance_json(std::string_view text,
                                    const std::string& source = "<json>") {
  return parse_instance_document(text, source).instance;
}

// ---------------------------------------------------------------------------
// CSV bundle

using CsvBundle = std::map<std::string, std::string>;  // file name -> text

inline const std::vector<std::string>& csv_bundle_files() {
  static const std::vector<std::string> files = {
      "courses.csv", "faculty.csv", "slots.csv", "conflicts.csv", "W.csv",
      "alpha.csv",   "C.csv",       "M.csv",     "X.csv"};
  return files;
}

namespace detail {

using CsvRows = std::vector<std::vector<std::string>>;

inline CsvRows parse_csv(std::string_view text, const std::string& file) {
  CsvRows rows;
  std::vector<std::string> row;
  std::string cell;
  bool quoted = false, any = false;
  std::size_t line = 1;
  auto end_row = [&] {
    row.push_back(cell);
    cell.clear();
    const bool blank = row.size() == 1 && row[0].empty() && !any;
    if (!blank) rows.push_back(row);
    row.clear();
    any = false;
  };
  for (std::size_t k = 0; k < text.size(); ++k) {
    const char ch = text[k];
    if (quoted) {
      if (ch == '"') {
        if (k + 1 < text.size() && text[k + 1] == '"') {
          cell += '"';
          ++k;
        } else {
          quoted = false;
        }
      } else {
        if (ch == '\n') ++line;
        cell += ch;
      }
      continue;
    }
    switch (ch) {
      case '"':
        quoted = true;
        any = true;
        break;
      case ',':
        row.push_back(cell);
        cell.clear();
        any = true;
        break;
      case '\r':
        break;
      case '\n':
        end_row();
        ++line;
        break;
      default:
        cell += ch;
    }
  }
  if (quoted) throw IoError(file, line, 0, "unterminated quoted field");
  if (!cell.empty() || !row.empty() || any) end_row();
  return rows;
}

inline std::string csv_field(const std::string& s) {
  const bool needs = s.find_first_of(",\"\n\r") != std::string::npos ||
                     (!s.empty() && (s.front() == ' ' || s.back() == ' '));
  if (!needs) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

inline void csv_line(std::string& out, const std::vector<std::string>& cells) {
  for (std::size_t k = 0; k < cells.size(); ++k) {
    if (k) out += ',';
    out += csv_field(cells[k]);
  }
  out += '\n';
}

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

inline double csv_number(const std::string& raw, const std::string& file,
                         std::size_t row, std::size_t col) {
  const std::string s = trim(raw);
  double v = 0.0;
  const char* first = s.data();
  if (!s.empty() && s.front() == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() ||
      !std::isfinite(v)) {
    throw IoError(file, row, col, "non-numeric cell '" + raw + "'");
  }
  return v;
}

inline int csv_integer(const std::string& raw, const std::string& file,
                       std::size_t row, std::size_t col) {
  const double v = csv_number(raw, file, row, col);
  if (v != std::floor(v) || std::abs(v) > 1e9) {
    throw IoError(file, row, col, "expected an integer, found '" + raw + "'");
  }
  return static_cast<int>(v);
}

inline void expect_header(const CsvRows& rows, const std::string& file,
                          const std::vector<std::string>& want) {
  if (rows.empty()) throw IoError(file, 1, 0, "missing header row");
  const auto& head = rows.front();
  for (std::size_t c = 0; c < want.size(); ++c) {
    if (c >= head.size() || trim(head[c]) != want[c]) {
      throw IoError(file, 1, c + 1, "expected header column '" + want[c] + "'");
    }
  }
  if (head.size() != want.size()) {
    throw IoError(file, 1, want.size() + 1, "unexpected extra header column");
  }
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != want.size()) {
      throw IoError(file, r + 1, 0,
                    "expected " + std::to_string(want.size()) + " columns, found " +
                        std::to_string(rows[r].size()));
    }
  }
}

// Reads an id-keyed matrix; rows and columns may come in any order but
// must cover both id lists exactly once.
template <typename T, typename RowEntity, typename ColEntity, typename Cell>
Grid2<T> csv_matrix(const CsvRows& rows, const std::string& file,
                    const std::string& corner,
                    const std::vector<RowEntity>& row_ids,
                    const std::vector<ColEntity>& col_ids, Cell cell) {
  if (rows.empty()) throw IoError(file, 1, 0, "missing header row");
  const auto& head = rows.front();
  if (head.empty() || trim(head[0]) != corner) {
    throw IoError(file, 1, 1, "expected header column '" + corner + "'");
  }
  std::vector<std::size_t> col_of(head.size());
  std::set<std::size_t> seen_cols;
  for (std::size_t c = 1; c < head.size(); ++c) {
    const auto id = trim(head[c]);
    const auto idx = find_index(col_ids, id);
    if (!idx) throw IoError(file, 1, c + 1, "unknown id '" + id + "' in header");
    if (!seen_cols.insert(*idx).second) {
      throw IoError(file, 1, c + 1, "duplicated id '" + id + "' in header");
    }
    col_of[c] = *idx;
  }
  if (seen_cols.size() != col_ids.size()) {
    throw IoError(file, 1, 0,
                  "header names " + std::to_string(seen_cols.size()) + " of " +
                      std::to_string(col_ids.size()) + " ids (dimension mismatch)");
  }
  Grid2<T> out(row_ids.size(), col_ids.size(), T{});
  std::set<std::size_t> seen_rows;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != head.size()) {
      throw IoError(file, r + 1, 0,
                    "expected " + std::to_string(head.size()) + " columns, found " +
                        std::to_string(row.size()));
    }
    const auto id = trim(row[0]);
    const auto idx = find_index(row_ids, id);
    if (!idx) throw IoError(file, r + 1, 1, "unknown id '" + id + "'");
    if (!seen_rows.insert(*idx).second) {
      throw IoError(file, r + 1, 1, "duplicated id '" + id + "'");
    }
    for (std::size_t c = 1; c < row.size(); ++c) {
      out(*idx, col_of[c]) = cell(row[c], r + 1, c + 1);
    }
  }
  if (seen_rows.size() != row_ids.size()) {
    throw IoError(file, 0, 0,
                  "file has " + std::to_string(seen_rows.size()) + " of " +
                      std::to_string(row_ids.size()) + " rows (dimension mismatch)");
  }
  return out;
}

}  // namespace detail

inline CsvBundle to_csv_bundle(const Instance& inst) {
  using detail::csv_line;
  CsvBundle b;
  std::string s;
  csv_line(s, {"id", "label", "load_units"});
  for (const auto& c : inst.courses) {
    csv_line(s, {c.id, c.label, format_number(c.load_units)});
  }
  b["courses.csv"] = std::move(s);
  s.clear();
  csv_line(s, {"id", "label", "load_min", "load_max"});
  for (const auto& f : inst.faculty) {
    csv_line(s, {f.id, f.label, format_number(f.load_min),
                 format_number(f.load_max)});
  }
  b["faculty.csv"] = std::move(s);
  s.clear();
  csv_line(s, {"id", "label"});
  for (const auto& t : inst.slots) csv_line(s, {t.id, t.label});
  b["slots.csv"] = std::move(s);
  s.clear();
  csv_line(s, {"slot_a", "slot_b"});
  for (const auto& p : inst.conflicts) csv_line(s, {p.slot_a, p.slot_b});
  b["conflicts.csv"] = std::move(s);

  auto matrix = [](const std::string& corner, const auto& rows,
                   const auto& cols, auto value) {
    std::string out;
    std::vector<std::string> head = {corner};
    for (const auto& c : cols) head.push_back(c.id);
    csv_line(out, head);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      std::vector<std::string> line = {rows[r].id};
      for (std::size_t c = 0; c < cols.size(); ++c) line.push_back(value(r, c));
      csv_line(out, line);
    }
    return out;
  };
  b["W.csv"] = matrix("faculty", inst.faculty, inst.slots,
                      [&](std::size_t j, std::size_t t) {
                        return format_number(inst.preferences(j, t));
                      });
  b["alpha.csv"] = matrix("course", inst.courses, inst.faculty,
                          [&](std::size_t i, std::size_t j) {
                            return format_number(inst.swap_penalties(i, j));
                          });
  b["C.csv"] = matrix("course", inst.courses, inst.faculty,
                      [&](std::size_t i, std::size_t j) {
                        return std::to_string(inst.eligibility(i, j));
                      });
  b["M.csv"] = matrix("course", inst.courses, inst.slots,
                      [&](std::size_t i, std::size_t t) {
                        return std::to_string(inst.demand(i, t));
                      });
  s.clear();
  csv_line(s, {"course", "faculty", "slot"});
  for (std::size_t i = 0; i < inst.num_courses(); ++i) {
    for (std::size_t j = 0; j < inst.num_faculty(); ++j) {
      for (std::size_t t = 0; t < inst.num_slots(); ++t) {
        if (inst.obsolete_schedule(i, j, t) != 0) {
          csv_line(s, {inst.courses[i].id, inst.faculty[j].id, inst.slots[t].id});
        }
      }
    }
  }
  b["X.csv"] = std::move(s);
  return b;
}

inline Instance parse_csv_bundle(const CsvBundle& bundle,
                                 const std::string& source = "<bundle>") {
  std::string missing;
  for (const auto& f : csv_bundle_files()) {
    if (!bundle.count(f)) missing += (missing.empty() ? "" : ", ") + f;
  }
  if (!missing.empty()) {
    throw IoError(source, 0, 0, "missing required file(s): " + missing);
  }
  auto path = [&](const std::string& f) {
    return source.empty() ? f : source + "/" + f;
  };
  std::map<std::string, detail::CsvRows> rows;
  for (const auto& f : csv_bundle_files()) {
    rows[f] = detail::parse_csv(bundle.at(f), path(f));
  }
  using detail::csv_integer;
  using detail::csv_number;
  using detail::trim;

  Instance inst;
  {
    const auto file = path("courses.csv");
    const auto& r = rows["courses.csv"];
    detail::expect_header(r, file, {"id", "label", "load_units"});
    for (std::size_t k = 1; k < r.size(); ++k) {
      inst.courses.push_back(
          {trim(r[k][0]), r[k][1], csv_number(r[k][2], file, k + 1, 3)});
    }
    detail::check_unique_ids(inst.courses, "course", file, 2);
  }
  {
    const auto file = path("faculty.csv");
    const auto& r = rows["faculty.csv"];
    detail::expect_header(r, file, {"id", "label", "load_min", "load_max"});
    for (std::size_t k = 1; k < r.size(); ++k) {
      inst.faculty.push_back({trim(r[k][0]), r[k][1],
                              csv_number(r[k][2], file, k + 1, 3),
                              csv_number(r[k][3], file, k + 1, 4)});
    }
    detail::check_unique_ids(inst.faculty, "faculty", file, 2);
  }
  {
    const auto file = path("slots.csv");
    const auto& r = rows["slots.csv"];
    detail::expect_header(r, file, {"id", "label"});
    for (std::size_t k = 1; k < r.size(); ++k) {
      inst.slots.push_back({trim(r[k][0]), r[k][1]});
    }
    detail::check_unique_ids(inst.slots, "slot", file, 2);
  }
  {
    const auto file = path("conflicts.csv");
    const auto& r = rows["conflicts.csv"];
    detail::expect_header(r, file, {"slot_a", "slot_b"});
    for (std::size_t k = 1; k < r.size(); ++k) {
      inst.conflicts.push_back({trim(r[k][0]), trim(r[k][1])});
    }
  }
  auto non_negative = [](const std::string& file) {
    return [file](const std::string& cell, std::size_t r, std::size_t c) {
      const double v = csv_number(cell, file, r, c);
      if (v < 0) throw IoError(file, r, c, "negative entry '" + cell + "'");
      return v;
    };
  };
  inst.preferences = detail::csv_matrix<double>(
      rows["W.csv"], path("W.csv"), "faculty", inst.faculty, inst.slots,
      non_negative(path("W.csv")));
  inst.swap_penalties = detail::csv_matrix<double>(
      rows["alpha.csv"], path("alpha.csv"), "course", inst.courses,
      inst.faculty, non_negative(path("alpha.csv")));
  inst.eligibility = detail::csv_matrix<int>(
      rows["C.csv"], path("C.csv"), "course", inst.courses, inst.faculty,
      [file = path("C.csv")](const std::string& cell, std::size_t r,
                             std::size_t c) {
        const int v = csv_integer(cell, file, r, c);
        if (v != 0 && v != 1) {
          throw IoError(file, r, c, "entry must be 0 or 1, found '" + cell + "'");
        }
        return v;
      });
  inst.demand = detail::csv_matrix<int>(
      rows["M.csv"], path("M.csv"), "course", inst.courses, inst.slots,
      [file = path("M.csv")](const std::string& cell, std::size_t r,
                             std::size_t c) {
        const int v = csv_integer(cell, file, r, c);
        if (v < 0) throw IoError(file, r, c, "negative entry '" + cell + "'");
        return v;
      });
  {
    const auto file = path("X.csv");
    const auto& r = rows["X.csv"];
    detail::expect_header(r, file, {"course", "faculty", "slot"});
    inst.obsolete_schedule = Grid3<int>(inst.num_courses(), inst.num_faculty(),
                                        inst.num_slots(), 0);
    for (std::size_t k = 1; k < r.size(); ++k) {
      const auto i = course_index(inst, trim(r[k][0]));
      const auto j = faculty_index(inst, trim(r[k][1]));
      const auto t = slot_index(inst, trim(r[k][2]));
      if (!i) throw IoError(file, k + 1, 1, "unknown course '" + r[k][0] + "'");
      if (!j) throw IoError(file, k + 1, 2, "unknown faculty '" + r[k][1] + "'");
      if (!t) throw IoError(file, k + 1, 3, "unknown slot '" + r[k][2] + "'");
      if (inst.obsolete_schedule(*i, *j, *t) != 0) {
        throw IoError(file, k + 1, 0, "duplicated triple");
      }
      inst.obsolete_schedule(*i, *j, *t) = 1;
    }
  }
  require_valid(inst, source);
  return inst;
}

// ---------------------------------------------------------------------------
// Files

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileError(path.string(), "cannot open file for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw FileError(path.string(), "read failed");
  return ss.str();
}

inline void write_text_file(const std::filesystem::path& path,
                            const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FileError(path.string(), "cannot open file for writing");
  out << text;
  out.flush();
  if (!out) throw FileError(path.string(), "write failed");
}

inline Instance read_csv_bundle(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw FileError(dir.string(), "not a directory");
  }
  CsvBundle bundle;
  for (const auto& f : csv_bundle_files()) {
    if (std::filesystem::exists(dir / f)) bundle[f] = read_text_file(dir / f);
  }
  return parse_csv_bundle(bundle, dir.string());
}

inline void write_csv_bundle(const Instance& inst,
                             const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw FileError(dir.string(), "cannot create directory");
  for (const auto& [name, text] : to_csv_bundle(inst)) {
    write_text_file(dir / name, text);
  }
}

// A directory is read as a CSV bundle, anything else as a JSON document.
inline InstanceDocument load_instance_document(
    const std::filesystem::path& path) {
  if (std::filesystem::is_directory(path)) {
    InstanceDocument doc;
    doc.instance = read_csv_bundle(path);
    doc.metadata.name = path.filename().string();
    return doc;
  }
  return parse_instance_document(read_text_file(path), path.string());
}

inline Instance load_instance(const std::filesystem::path& path) {
  return load_instance_document(path).instance;
}

// ---------------------------------------------------------------------------
// Scenarios

inline json scenario_to_json(const Scenario& sc) {
  json deltas = json::array();
  for (const auto& d : sc.demand_deltas) {
    deltas.push_back({{"course", d.course}, {"slot", d.slot}, {"delta", d.delta}});
  }
  json prefs = json::array();
  for (const auto& o : sc.preference_overrides) {
    prefs.push_back({{"faculty", o.faculty}, {"slot", o.slot}, {"value", o.value}});
  }
  json pens = json::array();
  for (const auto& o : sc.penalty_overrides) {
    pens.push_back(
        {{"course", o.course}, {"faculty", o.faculty}, {"value", o.value}});
  }
  return {{"schema_version", kScenarioSchemaVersion},
          {"name", sc.name},
          {"base_instance", sc.base_instance},
          {"demand_deltas", deltas},
          {"preference_overrides", prefs},
          {"penalty_overrides", pens}};
}

inline Scenario scenario_from_json(const json& doc,
                                   const std::string& source = "<scenario>") {
  detail::JsonReader in(source);
  if (!doc.is_object()) in.fail("scenario must be a JSON object");
  if (doc.contains("schema_version") &&
      doc["schema_version"] != json(kScenarioSchemaVersion)) {
    in.fail("unsupported schema_version " + doc["schema_version"].dump());
  }
  Scenario sc;
  sc.name = in.text_or(doc, "name", "scenario", 0);
  sc.base_instance = in.text_or(doc, "base_instance", "scenario", 0);
  auto list = [&](const char* key) -> const json& {
    static const json empty = json::array();
    if (!doc.contains(key)) return empty;
    const json& v = doc[key];
    if (!v.is_array()) in.fail(std::string("\"") + key + "\" must be an array");
    return v;
  };
  const json& deltas = list("demand_deltas");
  for (std::size_t k = 0; k < deltas.size(); ++k) {
    const auto& d = deltas[k];
    sc.demand_deltas.push_back(
        {in.text(d, "course", "demand_deltas", k + 1),
         in.text(d, "slot", "demand_deltas", k + 1),
         in.integer(in.member(d, "delta", "demand_deltas"), "demand_deltas",
                    k + 1, 0)});
  }
  const json& prefs = list("preference_overrides");
  for (std::size_t k = 0; k < prefs.size(); ++k) {
    const auto& o = prefs[k];
    sc.preference_overrides.push_back(
        {in.text(o, "faculty", "preference_overrides", k + 1),
         in.text(o, "slot", "preference_overrides", k + 1),
         in.number(in.member(o, "value", "preference_overrides"),
                   "preference_overrides", k + 1, 0)});
  }
  const json& pens = list("penalty_overrides");
  for (std::size_t k = 0; k < pens.size(); ++k) {
    const auto& o = pens[k];
    sc.penalty_overrides.push_back(
        {in.text(o, "course", "penalty_overrides", k + 1),
         in.text(o, "faculty", "penalty_overrides", k + 1),
         in.number(in.member(o, "value", "penalty_overrides"),
                   "penalty_overrides", k + 1, 0)});
  }
  return sc;
}

inline std::string serialize_scenario_json(const Scenario& sc) {
  return scenario_to_json(sc).dump(2) + "\n";
}

inline Scenario parse_scenario_json(std::string_view text,
                                    const std::string& source = "<scenario>") {
  return scenario_from_json(parse_json_text(text, source), source);
}

// ---------------------------------------------------------------------------
// Solve options and solutions

inline json options_to_json(const SolveOptions& o) {
  json j = {{"integrality_tolerance", o.integrality_tolerance},
            {"lp_pivot_tolerance", o.lp_pivot_tolerance},
            {"min_change_phase", o.min_change_phase},
            {"branching_rule", o.branching_rule == BranchingRule::kMostFractional
                                   ? "most_fractional"
                                   : "first_fractional"}};
  j["node_limit"] = o.node_limit ? json(*o.node_limit) : json(nullptr);
  j["time_limit_seconds"] =
      o.time_limit_seconds ? json(*o.time_limit_seconds) : json(nullptr);
  return j;
}

// Applies the keys present in `j` on top of `base`; unknown keys are
// rejected so typos do not silently fall back to defaults.
inline SolveOptions options_from_json(const json& j, SolveOptions base = {},
                                      const std::string& source = "<options>") {
  detail::JsonReader in(source);
  if (j.is_null()) return base;
  if (!j.is_object()) in.fail("solve options must be a JSON object");
  for (const auto& [key, v] : j.items()) {
    if (key == "integrality_tolerance") {
      base.integrality_tolerance = in.number(v, key, 0, 0);
    } else if (key == "lp_pivot_tolerance") {
      base.lp_pivot_tolerance = in.number(v, key, 0, 0);
    } else if (key == "min_change_phase") {
      if (!v.is_boolean()) in.fail("min_change_phase must be a boolean");
      base.min_change_phase = v.get<bool>();
    } else if (key == "branching_rule") {
      const auto rule = v.is_string() ? v.get<std::string>() : "";
      if (rule == "most_fractional") {
        base.branching_rule = BranchingRule::kMostFractional;
      } else if (rule == "first_fractional") {
        base.branching_rule = BranchingRule::kFirstFractional;
      } else {
        in.fail("branching_rule must be \"most_fractional\" or "
                "\"first_fractional\"");
      }
    } else if (key == "node_limit") {
      if (v.is_null()) {
        base.node_limit.reset();
      } else {
        const int n = in.integer(v, key, 0, 0);
        if (n < 1) in.fail("node_limit must be positive");
        base.node_limit = static_cast<std::size_t>(n);
      }
    } else if (key == "time_limit_seconds") {
      if (v.is_null()) {
        base.time_limit_seconds.reset();
      } else {
        base.time_limit_seconds = in.number(v, key, 0, 0);
      }
    } else {
      in.fail("unknown solve option \"" + key + "\"");
    }
  }
  try {
    check_options(base);
  } catch (const std::invalid_argument& e) {
    in.fail(e.what());
  }
  return base;
}

namespace detail {

// JSON has no infinities; unbounded statistics travel as null.
inline json finite_or_null(double v) {
  return std::isfinite(v) ? json(v) : json(nullptr);
}
inline double number_or(const json& v, double if_null) {
  return v.is_null() ? if_null : v.get<double>();
}

}  // namespace detail

inline json solution_to_json(const Solution& s) {
  json p = json::array();
  for (std::size_t i = 0; i < s.p.dim0(); ++i) {
    for (std::size_t j = 0; j < s.p.dim1(); ++j) {
      for (std::size_t t = 0; t < s.p.dim2(); ++t) {
        if (s.p(i, j, t) != 0) p.push_back({i, j, t, s.p(i, j, t)});
      }
    }
  }
  json aux = json::array();
  for (std::size_t i = 0; i < s.t_aux.rows(); ++i) {
    for (std::size_t j = 0; j < s.t_aux.cols(); ++j) {
      if (s.t_aux(i, j) != 0) aux.push_back({i, j, s.t_aux(i, j)});
    }
  }
  return {{"schema_version", kSolutionSchemaVersion},
          {"status", to_string(s.status)},
          {"has_incumbent", s.has_incumbent},
          {"objective", s.objective},
          {"change_count", s.change_count},
          {"message", s.message},
          {"dims", {s.p.dim0(), s.p.dim1(), s.p.dim2()}},
          {"p", p},
          {"t_aux", aux},
          {"stats",
           {{"nodes", s.stats.nodes},
            {"lp_iterations", s.stats.lp_iterations},
            {"wall_seconds", s.stats.wall_seconds},
            {"root_bound", detail::finite_or_null(s.stats.root_bound)},
            {"best_bound", detail::finite_or_null(s.stats.best_bound)},
            {"gap", detail::finite_or_null(s.stats.gap)}}}};
}

inline SolveStatus solve_status_from_string(const std::string& s) {
  for (auto st : {SolveStatus::kOptimal, SolveStatus::kInfeasible,
                  SolveStatus::kLimitReached, SolveStatus::kError}) {
    if (s == to_string(st)) return st;
  }
  throw std::invalid_argument("unknown solve status '" + s + "'");
}

inline Solution solution_from_json(const json& doc,
                                   const std::string& source = "<solution>") {
  detail::JsonReader in(source);
  try {
    if (doc.at("schema_version").get<int>() != kSolutionSchemaVersion) {
      in.fail("unsupported schema_version " + doc.at("schema_version").dump());
    }
    Solution s;
    s.status = solve_status_from_string(doc.at("status").get<std::string>());
    s.has_incumbent = doc.at("has_incumbent").get<bool>();
    s.objective = doc.at("objective").get<double>();
    s.change_count = doc.at("change_count").get<int>();
    s.message = doc.at("message").get<std::string>();
    const auto& dims = doc.at("dims");
    const auto ni = dims.at(0).get<std::size_t>();
    const auto nj = dims.at(1).get<std::size_t>();
    const auto nt = dims.at(2).get<std::size_t>();
    s.p = Perturbation(ni, nj, nt, 0);
    s.t_aux = AuxArray(ni, nj, 0);
    for (const auto& e : doc.at("p")) {
      const auto i = e.at(0).get<std::size_t>();
      const auto j = e.at(1).get<std::size_t>();
      const auto t = e.at(2).get<std::size_t>();
      if (i >= ni || j >= nj || t >= nt) in.fail("p entry out of range");
      s.p(i, j, t) = e.at(3).get<int>();
    }
    for (const auto& e : doc.at("t_aux")) {
      const auto i = e.at(0).get<std::size_t>();
      const auto j = e.at(1).get<std::size_t>();
      if (i >= ni || j >= nj) in.fail("t_aux entry out of range");
      s.t_aux(i, j) = e.at(2).get<int>();
    }
    const auto& st = doc.at("stats");
    s.stats.nodes = st.at("nodes").get<std::size_t>();
    s.stats.lp_iterations = st.at("lp_iterations").get<std::size_t>();
    s.stats.wall_seconds = st.at("wall_seconds").get<double>();
    s.stats.root_bound = detail::number_or(st.at("root_bound"), -kInfinity);
    s.stats.best_bound = detail::number_or(st.at("best_bound"), -kInfinity);
    s.stats.gap = detail::number_or(st.at("gap"), kInfinity);
    return s;
  } catch (const json::exception& e) {
    throw IoError(source, 0, 0, std::string("malformed solution: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw IoError(source, 0, 0, e.what());
  }
}

}  // namespace ttmpp

#endif  // TTMPP_IO_HPP_
