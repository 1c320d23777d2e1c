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

#ifndef LINKGUARD_LINKAGE_SCHEMA_HPP_
#define LINKGUARD_LINKAGE_SCHEMA_HPP_

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "linkguard/errors.hpp"
#include "linkguard/text.hpp"

namespace linkguard::linkage {

enum class FieldKind { kText, kCategorical, kNumeric };

inline std::string_view to_string(FieldKind kind) {
  switch (kind) {
    case FieldKind::kText:
      return "text";
    case FieldKind::kCategorical:
      return "categorical";
    case FieldKind::kNumeric:
      return "numeric";
  }
  return "text";
}

inline FieldKind parse_field_kind(std::string_view s) {
  if (s == "text") return FieldKind::kText;
  if (s == "categorical") return FieldKind::kCategorical;
  if (s == "numeric") return FieldKind::kNumeric;
  throw SchemaError("unknown field kind '" + std::string(s) + "'");
}

struct FieldDef {
  std::string name;
  FieldKind kind = FieldKind::kText;
};

class Schema {
 public:
  Schema() = default;

  Schema(std::vector<FieldDef> fields, std::string id_field)
      : fields_(std::move(fields)), id_field_(std::move(id_field)) {
    std::set<std::string> seen;
    for (const auto& f : fields_) {
      if (f.name.empty()) throw SchemaError("schema: empty field name");
      if (!seen.insert(f.name).second) throw SchemaError("schema: duplicate field '" + f.name + "'");
    }
    if (!seen.contains(id_field_))
      throw SchemaError("schema: id field '" + id_field_ + "' is not among the fields");
  }

  // "id:text,first:text,zip:categorical"
  static Schema parse(std::string_view spec, std::string id_field) {
    std::vector<FieldDef> fields;
    for (const auto& item : split(spec, ',')) {
      const auto parts = split(trim(item), ':');
      if (parts.size() > 2 || trim(parts[0]).empty())
        throw SchemaError("schema: malformed field '" + item + "'");
      FieldDef def{std::string(trim(parts[0])), FieldKind::kText};
      if (parts.size() == 2) def.kind = parse_field_kind(trim(parts[1]));
      fields.push_back(std::move(def));
    }
    return Schema(std::move(fields), std::move(id_field));
  }

  const std::vector<FieldDef>& fields() const { return fields_; }
  const std::string& id_field() const { return id_field_; }

  bool has_field(std::string_view name) const { return index_of(name).has_value(); }

  std::optional<std::size_t> index_of(std::string_view name) const {
    for (std::size_t i = 0; i < fields_.size(); ++i)
      if (fields_[i].name == name) return i;
    return std::nullopt;
  }

  std::string describe() const {
    std::string out;
    for (const auto& f : fields_) {
      if (!out.empty()) out += ',';
      out += f.name + ":" + std::string(to_string(f.kind));
    }
    return out;
  }

 private:
  std::vector<FieldDef> fields_;
  std::string id_field_;
};

// One row. Absent keys and nullopt values both read as missing.
struct Record {
  std::string id;
  std::map<std::string, std::optional<std::string>> values;

  const std::optional<std::string>* find(std::string_view field) const {
    auto it = values.find(std::string(field));
    return it == values.end() ? nullptr : &it->second;
  }

  std::optional<std::string> value(std::string_view field) const {
    const auto* v = find(field);
    return v ? *v : std::nullopt;
  }

  friend bool operator==(const Record&, const Record&) = default;
};

inline void validate_record(const Record& r, const Schema& schema) {
  for (const auto& [key, value] : r.values)
    if (!schema.has_field(key))
      throw SchemaError("record '" + r.id + "': field '" + key + "' is not in the schema");
}

}  // namespace linkguard::linkage

#endif  // LINKGUARD_LINKAGE_SCHEMA_HPP_
