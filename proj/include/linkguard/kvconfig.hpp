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

#ifndef LINKGUARD_KVCONFIG_HPP_
#define LINKGUARD_KVCONFIG_HPP_

#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "linkguard/errors.hpp"
#include "linkguard/text.hpp"

namespace linkguard {

// `key = value` lines, `#` comments, blank lines ignored. Keys are unique and
// keep their file order, which some consumers (feature lists) rely on.
class KeyValueConfig {
 public:
  KeyValueConfig() = default;

  static KeyValueConfig parse(std::string_view text) {
    KeyValueConfig cfg;
    std::istringstream in{std::string(text)};
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
      ++line_no;
      std::string_view line = trim(raw);
      if (line.empty() || line.front() == '#') continue;
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) throw IngestionError(line_no, "expected 'key = value'");
      std::string key(trim(line.substr(0, eq)));
      std::string value(trim(line.substr(eq + 1)));
      if (key.empty()) throw IngestionError(line_no, "empty key");
      if (cfg.find(key)) throw IngestionError(line_no, "duplicate key '" + key + "'");
      cfg.entries_.emplace_back(std::move(key), std::move(value));
    }
    return cfg;
  }

  static KeyValueConfig load(const std::string& path) { return parse(read_file(path)); }

  void set(std::string key, std::string value) {
    for (auto& [k, v] : entries_) {
      if (k == key) {
        v = std::move(value);
        return;
      }
    }
    entries_.emplace_back(std::move(key), std::move(value));
  }

  std::optional<std::string> find(std::string_view key) const {
    for (const auto& [k, v] : entries_)
      if (k == key) return v;
    return std::nullopt;
  }

  std::string get(std::string_view key) const {
    auto v = find(key);
    if (!v) throw ArgumentError("config: missing key '" + std::string(key) + "'");
    return *v;
  }

  std::string get_or(std::string_view key, std::string fallback) const {
    auto v = find(key);
    return v ? *v : std::move(fallback);
  }

  double get_double(std::string_view key) const {
    auto v = parse_double(get(key));
    if (!v) throw ArgumentError("config: '" + std::string(key) + "' is not a number");
    return *v;
  }

  double get_double_or(std::string_view key, double fallback) const {
    return find(key) ? get_double(key) : fallback;
  }

  std::int64_t get_int(std::string_view key) const {
    auto v = parse_int(get(key));
    if (!v) throw ArgumentError("config: '" + std::string(key) + "' is not an integer");
    return *v;
  }

  std::int64_t get_int_or(std::string_view key, std::int64_t fallback) const {
    return find(key) ? get_int(key) : fallback;
  }

  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

}  // namespace linkguard

#endif  // LINKGUARD_KVCONFIG_HPP_
