// Copyright 2026 The linkguard Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LINKGUARD_DISCLOSURE_MICROTABLE_HPP_
#define LINKGUARD_DISCLOSURE_MICROTABLE_HPP_

#include <cmath>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "linkguard/errors.hpp"
#include "linkguard/text.hpp"

namespace linkguard::disclosure {

// Numeric microdata: one id and one value per column for each row.
struct Microtable {
  std::vector<std::string> columns;
  std::vector<std::string> ids;
  std::vector<std::vector<double>> rows;

  std::size_t size() const { return rows.size(); }
  std::size_t width() const { return columns.size(); }

  void validate() const {
    if (ids.size() != rows.size()) throw ArgumentError("microtable: id count differs from row count");
    std::set<std::string> seen;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != columns.size())
        throw ArgumentError("microtable: row '" + ids[i] + "' is not rectangular");
      if (!seen.insert(ids[i]).second) throw ArgumentError("microtable: duplicate id '" + ids[i] + "'");
      for (double v : rows[i])
        if (!std::isfinite(v)) throw ArgumentError("microtable: non-finite value in row '" + ids[i] + "'");
    }
  }

  std::optional<std::size_t> column_index(const std::string& name) const {
    for (std::size_t c = 0; c < columns.size(); ++c)
      if (columns[c] == name) return c;
    return std::nullopt;
  }

  friend bool operator==(const Microtable&, const Microtable&) = default;
};

struct ColumnStats {
  std::vector<double> mean;
  std::vector<double> sd;  // sample standard deviation (n - 1)
};

inline ColumnStats column_stats(const Microtable& t) {
  const std::size_t n = t.size();
  ColumnStats s{std::vector<double>(t.width(), 0.0), std::vector<double>(t.width(), 0.0)};
  if (n == 0) return s;
  for (const auto& row : t.rows)
    for (std::size_t c = 0; c < t.width(); ++c) s.mean[c] += row[c];
  for (auto& m : s.mean) m /= static_cast<double>(n);
  if (n < 2) return s;
  for (const auto& row : t.rows)
    for (std::size_t c = 0; c < t.width(); ++c) s.sd[c] += (row[c] - s.mean[c]) * (row[c] - s.mean[c]);
  for (auto& v : s.sd) v = std::sqrt(v / static_cast<double>(n - 1));
  return s;
}

// CSV with header `id,<col>,<col>...`.
inline Microtable parse_microtable(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  Microtable t;
  bool header = true;
  std::set<std::string> seen;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    auto cells = split_csv_line(line);
    if (!cells) throw IngestionError(line_no, "malformed quoting");
    if (header) {
      if (cells->size() < 2) throw IngestionError(line_no, "header needs an id column and at least one value column");
      t.columns.assign(cells->begin() + 1, cells->end());
      header = false;
      continue;
    }
    if (cells->size() != t.columns.size() + 1)
      throw IngestionError(line_no, "expected " + std::to_string(t.columns.size() + 1) + " cells, got " +
                                        std::to_string(cells->size()));
    const std::string& id = (*cells)[0];
    if (id.empty()) throw IngestionError(line_no, "empty id");
    if (!seen.insert(id).second) throw IngestionError(line_no, "duplicate id '" + id + "'");
    std::vector<double> row;
    for (std::size_t c = 1; c < cells->size(); ++c) {
      auto v = parse_double((*cells)[c]);
      if (!v || !std::isfinite(*v)) throw IngestionError(line_no, "non-numeric value '" + (*cells)[c] + "'");
      row.push_back(*v);
    }
    t.ids.push_back(id);
    t.rows.push_back(std::move(row));
  }
  if (header) throw IngestionError(line_no, "missing header row");
  return t;
}

inline Microtable load_microtable(const std::string& path) { return parse_microtable(read_file(path)); }

inline std::string format_microtable(const Microtable& t) {
  std::string out = "id";
  for (const auto& c : t.columns) out += "," + csv_cell(c);
  out += '\n';
  for (std::size_t i = 0; i < t.size(); ++i) {
    out += csv_cell(t.ids[i]);
    for (double v : t.rows[i]) out += "," + format_double(v);
    out += '\n';
  }
  return out;
}

}  // namespace linkguard::disclosure

#endif  // LINKGUARD_DISCLOSURE_MICROTABLE_HPP_
