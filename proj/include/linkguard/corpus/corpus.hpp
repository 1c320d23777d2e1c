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

// Delimited-table ingestion and synthetic linked file pairs with a typo
// model and known ground truth.

#ifndef LINKGUARD_CORPUS_CORPUS_HPP_
#define LINKGUARD_CORPUS_CORPUS_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "linkguard/corpus/pools.hpp"
#include "linkguard/disclosure/microtable.hpp"
#include "linkguard/errors.hpp"
#include "linkguard/linkage/schema.hpp"
#include "linkguard/rng.hpp"
#include "linkguard/text.hpp"

namespace linkguard::corpus {

using linkage::Record;
using linkage::Schema;

// ---------------------------------------------------------------- ingestion

inline std::vector<Record> parse_table(std::string_view text, const Schema& schema) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  std::vector<Record> out;
  std::vector<std::string> header;
  std::size_t id_col = 0;
  std::set<std::string> seen;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    auto cells = split_csv_line(line);
    if (!cells) throw IngestionError(line_no, "malformed quoting");
    if (header.empty()) {
      header = *cells;
      if (header.size() != schema.fields().size())
        throw IngestionError(line_no, "header has " + std::to_string(header.size()) + " columns, schema has " +
                                          std::to_string(schema.fields().size()));
      for (std::size_t c = 0; c < header.size(); ++c)
        if (header[c] != schema.fields()[c].name)
          throw IngestionError(line_no, "header column " + std::to_string(c + 1) + " is '" + header[c] +
                                            "', schema expects '" + schema.fields()[c].name + "'");
      id_col = *schema.index_of(schema.id_field());
      continue;
    }
    if (cells->size() != header.size())
      throw IngestionError(line_no, "expected " + std::to_string(header.size()) + " cells, got " +
                                        std::to_string(cells->size()));
    Record r;
    r.id = (*cells)[id_col];
    if (r.id.empty()) throw IngestionError(line_no, "empty id");
    if (!seen.insert(r.id).second) throw IngestionError(line_no, "duplicate id '" + r.id + "'");
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (c == id_col) continue;
      const std::string& cell = (*cells)[c];
      if (cell.empty()) {
        r.values[header[c]] = std::nullopt;
        continue;
      }
      if (schema.fields()[c].kind == linkage::FieldKind::kNumeric && !parse_double(cell))
        throw IngestionError(line_no, "field '" + header[c] + "' is not numeric: '" + cell + "'");
      r.values[header[c]] = cell;
    }
    out.push_back(std::move(r));
  }
  if (header.empty()) throw IngestionError(line_no == 0 ? 1 : line_no, "missing header row");
  return out;
}

// One Record per data row; empty cells become missing values.
inline std::vector<Record> load_table(const std::string& path, const Schema& schema) {
  return parse_table(read_file(path), schema);
}

inline std::string format_table(const Schema& schema, const std::vector<Record>& records) {
  std::string out;
  for (std::size_t c = 0; c < schema.fields().size(); ++c) {
    if (c) out += ',';
    out += csv_cell(schema.fields()[c].name);
  }
  out += '\n';
  for (const auto& r : records) {
    for (std::size_t c = 0; c < schema.fields().size(); ++c) {
      if (c) out += ',';
      const auto& name = schema.fields()[c].name;
      if (name == schema.id_field()) {
        out += csv_cell(r.id);
      } else if (auto v = r.value(name)) {
        out += csv_cell(*v);
      }
    }
    out += '\n';
  }
  return out;
}

// ------------------------------------------------------------- error model

enum class EditOp { kSubstitute, kTranspose, kDelete, kInsert };

inline std::string_view to_string(EditOp op) {
  switch (op) {
    case EditOp::kSubstitute:
      return "substitute";
    case EditOp::kTranspose:
      return "transpose";
    case EditOp::kDelete:
      return "delete";
    case EditOp::kInsert:
      return "insert";
  }
  return "substitute";
}

inline EditOp parse_edit_op(std::string_view s) {
  s = trim(s);
  if (s == "substitute") return EditOp::kSubstitute;
  if (s == "transpose") return EditOp::kTranspose;
  if (s == "delete") return EditOp::kDelete;
  if (s == "insert") return EditOp::kInsert;
  throw ArgumentError("unknown edit operation '" + std::string(s) + "'");
}

struct ErrorProfile {
  double field_error_rate = 0.0;  // P(field receives one edit)
  double missing_rate = 0.0;      // P(field is blanked)
  std::vector<EditOp> ops = {EditOp::kSubstitute, EditOp::kTranspose, EditOp::kDelete, EditOp::kInsert};

  void validate() const {
    if (!(field_error_rate >= 0.0 && field_error_rate <= 1.0) || !(missing_rate >= 0.0 && missing_rate <= 1.0))
      throw ArgumentError("error profile: rates must lie in [0, 1]");
    if (field_error_rate > 0.0 && ops.empty()) throw ArgumentError("error profile: no edit operations allowed");
  }
};

// Deterministic single edit. Transpose swaps position and position + 1.
inline std::string apply_edit(std::string value, EditOp op, std::size_t position, char ch = 'X') {
  switch (op) {
    case EditOp::kSubstitute:
      if (position >= value.size()) throw ArgumentError("apply_edit: position out of range");
      value[position] = ch;
      break;
    case EditOp::kTranspose:
      if (position + 1 >= value.size()) throw ArgumentError("apply_edit: position out of range");
      std::swap(value[position], value[position + 1]);
      break;
    case EditOp::kDelete:
      if (position >= value.size()) throw ArgumentError("apply_edit: position out of range");
      value.erase(position, 1);
      break;
    case EditOp::kInsert:
      if (position > value.size()) throw ArgumentError("apply_edit: position out of range");
      value.insert(value.begin() + static_cast<std::ptrdiff_t>(position), ch);
      break;
  }
  return value;
}

namespace detail {

inline bool digit(char c) { return c >= '0' && c <= '9'; }

inline char random_char_like(char like, Rng& rng) {
  if (digit(like)) return static_cast<char>('0' + rng.below(10));
  return static_cast<char>('A' + rng.below(26));
}

inline bool applicable(EditOp op, const std::string& v) {
  switch (op) {
    case EditOp::kSubstitute:
      return !v.empty();
    case EditOp::kTranspose:
      for (std::size_t i = 0; i + 1 < v.size(); ++i)
        if (v[i] != v[i + 1]) return true;
      return false;
    case EditOp::kDelete:
      return v.size() >= 2;
    case EditOp::kInsert:
      return true;
  }
  return false;
}

}  // namespace detail

// With probability field_error_rate applies exactly one visible edit drawn
// uniformly from the allowed operations that can change this value.
inline std::string corrupt_value(const std::string& value, const ErrorProfile& profile, Rng& rng) {
  if (value.empty()) return value;
  if (!rng.bernoulli(profile.field_error_rate)) return value;
  std::vector<EditOp> usable;
  for (EditOp op : profile.ops)
    if (detail::applicable(op, value)) usable.push_back(op);
  if (usable.empty()) return value;
  const EditOp op = usable[rng.below(usable.size())];
  switch (op) {
    case EditOp::kSubstitute: {
      const std::size_t pos = rng.below(value.size());
      char ch;
      do {
        ch = detail::random_char_like(value[pos], rng);
      } while (ch == value[pos]);
      return apply_edit(value, op, pos, ch);
    }
    case EditOp::kTranspose: {
      std::vector<std::size_t> spots;
      for (std::size_t i = 0; i + 1 < value.size(); ++i)
        if (value[i] != value[i + 1]) spots.push_back(i);
      return apply_edit(value, op, spots[rng.below(spots.size())]);
    }
    case EditOp::kDelete:
      return apply_edit(value, op, rng.below(value.size()));
    case EditOp::kInsert: {
      const std::size_t pos = rng.below(value.size() + 1);
      const char like = value[pos == value.size() ? pos - 1 : pos];
      return apply_edit(value, op, pos, detail::random_char_like(like, rng));
    }
  }
  return value;
}

inline std::string corrupt_value(const std::string& value, const ErrorProfile& profile, std::uint64_t seed) {
  Rng rng(seed);
  return corrupt_value(value, profile, rng);
}

// ------------------------------------------------------------- generation

struct TruthSet {
  std::vector<std::pair<std::string, std::string>> pairs;  // (idA, idB), sorted
  double overlap = 0.0;

  std::set<std::pair<std::string, std::string>> as_set() const { return {pairs.begin(), pairs.end()}; }
};

struct LinkedFiles {
  Schema schema;
  std::vector<Record> file_a;
  std::vector<Record> file_b;
  TruthSet truth;
};

inline Schema synthetic_schema() {
  return Schema({{"id", linkage::FieldKind::kText},
                 {"first_name", linkage::FieldKind::kText},
                 {"last_name", linkage::FieldKind::kText},
                 {"birth_year", linkage::FieldKind::kNumeric},
                 {"sex", linkage::FieldKind::kCategorical},
                 {"zip", linkage::FieldKind::kCategorical}},
                "id");
}

namespace detail {

inline constexpr std::uint64_t kZipStream = 1;
inline constexpr std::uint64_t kChoiceStream = 2;
inline constexpr std::uint64_t kOrderStream = 3;
inline constexpr std::uint64_t kIdentityStream = 1ULL << 32;
inline constexpr std::uint64_t kCorruptStream = 2ULL << 32;

struct Identity {
  std::string first, last, year, sex, zip;
  std::string key() const { return first + '|' + last + '|' + year + '|' + sex; }
};

inline Identity draw_identity(Rng& rng, const std::vector<std::string>& zips) {
  Identity id;
  id.first = std::string(kFirstNames[rng.below(kFirstNames.size())]);
  id.last = synth_surname(rng);
  id.year = std::to_string(1930 + rng.below(75));
  id.sex = rng.bernoulli(0.5) ? "F" : "M";
  id.zip = zips[rng.below(zips.size())];
  return id;
}

inline std::string padded(char prefix, std::size_t i) {
  std::string digits = std::to_string(i);
  return std::string(1, prefix) + std::string(digits.size() < 6 ? 6 - digits.size() : 0, '0') + digits;
}

}  // namespace detail

// fileA holds n synthetic identities; fileB holds round(overlap * n)
// corrupted copies of randomly chosen fileA identities plus fresh identities
// up to n. Identities are unique on (first, last, year, sex). Every record is
// drawn from its own derived seed.
inline LinkedFiles generate_pairs(std::size_t n, double overlap, const ErrorProfile& profile, std::uint64_t seed) {
  if (n < 1) throw ArgumentError("generate_pairs: n must be at least 1");
  if (!(overlap >= 0.0 && overlap <= 1.0)) throw ArgumentError("generate_pairs: overlap must lie in [0, 1]");
  profile.validate();

  const std::size_t copies = static_cast<std::size_t>(std::llround(overlap * static_cast<double>(n)));
  const std::size_t fresh = n - copies;

  Rng zip_rng(derive_seed(seed, detail::kZipStream));
  const std::size_t zip_count = std::max<std::size_t>(1, (n + 10) / 20);
  std::vector<std::string> zips;
  {
    std::unordered_set<std::string> seen;
    while (zips.size() < zip_count) {
      std::string z = std::to_string(10000 + zip_rng.below(90000));
      if (seen.insert(z).second) zips.push_back(std::move(z));
    }
  }

  std::vector<detail::Identity> identities;
  identities.reserve(n + fresh);
  std::unordered_set<std::string> keys;
  for (std::size_t i = 0; i < n + fresh; ++i) {
    Rng rng(derive_seed(seed, detail::kIdentityStream + i));
    detail::Identity id;
    do {
      id = detail::draw_identity(rng, zips);
    } while (!keys.insert(id.key()).second);
    identities.push_back(std::move(id));
  }

  LinkedFiles out;
  out.schema = synthetic_schema();
  out.truth.overlap = overlap;
  auto to_record = [](std::string rid, const detail::Identity& id) {
    Record r;
    r.id = std::move(rid);
    r.values["first_name"] = id.first;
    r.values["last_name"] = id.last;
    r.values["birth_year"] = id.year;
    r.values["sex"] = id.sex;
    r.values["zip"] = id.zip;
    return r;
  };
  for (std::size_t i = 0; i < n; ++i) out.file_a.push_back(to_record(detail::padded('A', i + 1), identities[i]));

  std::vector<std::size_t> chosen(n);
  for (std::size_t i = 0; i < n; ++i) chosen[i] = i;
  Rng choice_rng(derive_seed(seed, detail::kChoiceStream));
  choice_rng.shuffle(chosen);
  chosen.resize(copies);

  // (source index in A or SIZE_MAX, record) in generation order
  std::vector<std::pair<std::size_t, Record>> b_rows;
  for (std::size_t k = 0; k < copies; ++k) {
    const std::size_t src = chosen[k];
    Record r = to_record("", identities[src]);
    Rng rng(derive_seed(seed, detail::kCorruptStream + src));
    for (auto& [field, value] : r.values) {
      if (!value) continue;
      if (rng.bernoulli(profile.missing_rate)) {
        value = std::nullopt;
      } else {
        value = corrupt_value(*value, profile, rng);
      }
    }
    b_rows.emplace_back(src, std::move(r));
  }
  for (std::size_t k = 0; k < fresh; ++k) b_rows.emplace_back(SIZE_MAX, to_record("", identities[n + k]));

  Rng order_rng(derive_seed(seed, detail::kOrderStream));
  order_rng.shuffle(b_rows);
  for (std::size_t j = 0; j < b_rows.size(); ++j) {
    b_rows[j].second.id = detail::padded('B', j + 1);
    if (b_rows[j].first != SIZE_MAX) out.truth.pairs.emplace_back(out.file_a[b_rows[j].first].id, b_rows[j].second.id);
    out.file_b.push_back(std::move(b_rows[j].second));
  }
  std::sort(out.truth.pairs.begin(), out.truth.pairs.end());
  return out;
}

inline std::string format_truth(const TruthSet& truth) {
  std::string out = "id_a,id_b\n";
  for (const auto& [a, b] : truth.pairs) out += csv_cell(a) + "," + csv_cell(b) + "\n";
  return out;
}

inline TruthSet parse_truth(std::string_view text) {
  TruthSet t;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  bool header = true;
  std::set<std::string> seen_a, seen_b;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    auto cells = split_csv_line(line);
    if (!cells || cells->size() != 2) throw IngestionError(line_no, "expected two cells");
    if (header) {
      header = false;
      continue;
    }
    if (!seen_a.insert((*cells)[0]).second || !seen_b.insert((*cells)[1]).second)
      throw IngestionError(line_no, "id appears in more than one true pair");
    t.pairs.emplace_back((*cells)[0], (*cells)[1]);
  }
  std::sort(t.pairs.begin(), t.pairs.end());
  return t;
}

inline TruthSet load_truth(const std::string& path) { return parse_truth(read_file(path)); }

// Numeric microdata with correlated columns (age, income, weight), rows
// distinct with probability one.
inline disclosure::Microtable generate_microtable(std::size_t n, std::uint64_t seed) {
  disclosure::Microtable t;
  t.columns = {"age", "income", "weight"};
  for (std::size_t i = 0; i < n; ++i) {
    Rng rng(derive_seed(seed, detail::kIdentityStream + i));
    const double age = 18.0 + 62.0 * rng.uniform();
    const double income = std::exp(9.8 + 0.012 * age + 0.45 * rng.normal());
    const double weight = 62.0 + 0.15 * age + 11.0 * rng.normal();
    t.ids.push_back(detail::padded('R', i + 1));
    t.rows.push_back({age, income, weight});
  }
  return t;
}

}  // namespace linkguard::corpus

#endif  // LINKGUARD_CORPUS_CORPUS_HPP_
