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

#ifndef LINKGUARD_LINKAGE_BLOCKING_HPP_
#define LINKGUARD_LINKAGE_BLOCKING_HPP_

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "linkguard/linkage/schema.hpp"

namespace linkguard::linkage {

// Records partitioned by the exact value of the blocking field. Records
// without a value land in `overflow`, which is compared against everything.
template <class T>
struct BlockMap {
  std::map<std::string, std::vector<T>> blocks;
  std::vector<T> overflow;
};

using Blocks = BlockMap<Record>;
using BlockIndex = BlockMap<std::size_t>;

inline BlockIndex block_index(const std::vector<Record>& records, const std::string& field) {
  BlockIndex out;
  for (std::size_t i = 0; i < records.size(); ++i) {
    auto v = records[i].value(field);
    if (v) {
      out.blocks[*v].push_back(i);
    } else {
      out.overflow.push_back(i);
    }
  }
  return out;
}

inline Blocks make_blocks(const std::vector<Record>& records, const std::string& block_field,
                          const Schema& schema) {
  if (!schema.has_field(block_field)) throw SchemaError("blocking field '" + block_field + "' is not in the schema");
  const BlockIndex index = block_index(records, block_field);
  Blocks out;
  for (const auto& [key, members] : index.blocks)
    for (std::size_t i : members) out.blocks[key].push_back(records[i]);
  for (std::size_t i : index.overflow) out.overflow.push_back(records[i]);
  return out;
}

// Pairs compared when deduplicating a single blocked file.
template <class T>
std::uint64_t within_file_pair_count(const BlockMap<T>& b) {
  std::uint64_t blocked = 0;
  std::uint64_t pairs = 0;
  for (const auto& [key, members] : b.blocks) {
    const std::uint64_t s = members.size();
    pairs += s * (s - 1) / 2;
    blocked += s;
  }
  const std::uint64_t o = b.overflow.size();
  return pairs + o * blocked + o * (o - 1) / 2;
}

// Candidate (indexA, indexB) pairs across two files, sorted. Without a
// blocking field this is the full cross product.
inline std::vector<std::pair<std::size_t, std::size_t>> candidate_pairs(const std::vector<Record>& a,
                                                                        const std::vector<Record>& b,
                                                                        const std::string* block_field) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  if (block_field == nullptr) {
    out.reserve(a.size() * b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j) out.emplace_back(i, j);
    return out;
  }
  const BlockIndex ia = block_index(a, *block_field);
  const BlockIndex ib = block_index(b, *block_field);
  for (const auto& [key, members] : ia.blocks) {
    auto it = ib.blocks.find(key);
    if (it == ib.blocks.end()) continue;
    for (std::size_t i : members)
      for (std::size_t j : it->second) out.emplace_back(i, j);
  }
  // A-overflow meets every B record; B-overflow meets the keyed A records
  // (overflow x overflow is already covered by the first loop).
  for (std::size_t i : ia.overflow)
    for (std::size_t j = 0; j < b.size(); ++j) out.emplace_back(i, j);
  for (const auto& [key, members] : ia.blocks)
    for (std::size_t i : members)
      for (std::size_t j : ib.overflow) out.emplace_back(i, j);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace linkguard::linkage

#endif  // LINKGUARD_LINKAGE_BLOCKING_HPP_
