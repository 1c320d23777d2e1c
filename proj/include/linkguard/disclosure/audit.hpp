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

// Hash-chained audit log.
//
// Canonical entry encoding: six fields in order (seq as decimal ASCII,
// timestamp, actor, query digest, response digest, previous digest), each
// as a u32 big-endian length followed by the bytes. An entry's digest is the
// lowercase hex SHA-256 of that encoding. The first entry chains to 64 '0'
// characters. On disk each line is the lowercase hex of one encoding.
//
// The chain alone cannot see the loss or alteration of the final entry;
// an anchor (entry count plus head digest) kept apart from the log closes
// that gap.

#ifndef LINKGUARD_DISCLOSURE_AUDIT_HPP_
#define LINKGUARD_DISCLOSURE_AUDIT_HPP_

#include <ctime>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "linkguard/errors.hpp"
#include "linkguard/sha256.hpp"
#include "linkguard/text.hpp"

namespace linkguard::disclosure {

inline const std::string kGenesisDigest(64, '0');

struct AuditEntry {
  std::uint64_t seq = 0;
  std::string timestamp;  // UTC, YYYY-MM-DDTHH:MM:SSZ
  std::string actor;
  std::string query_digest;
  std::string response_digest;
  std::string prev_digest;

  friend bool operator==(const AuditEntry&, const AuditEntry&) = default;
};

inline bool is_digest_hex(std::string_view s) {
  if (s.size() != 64) return false;
  for (char c : s)
    if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'))) return false;
  return true;
}

inline std::vector<std::uint8_t> canonical_encoding(const AuditEntry& e) {
  std::vector<std::uint8_t> out;
  auto put = [&](std::string_view field) {
    const auto n = static_cast<std::uint32_t>(field.size());
    for (int shift = 24; shift >= 0; shift -= 8) out.push_back(static_cast<std::uint8_t>(n >> shift));
    out.insert(out.end(), field.begin(), field.end());
  };
  put(std::to_string(e.seq));
  put(e.timestamp);
  put(e.actor);
  put(e.query_digest);
  put(e.response_digest);
  put(e.prev_digest);
  return out;
}

inline std::optional<AuditEntry> decode_canonical(std::span<const std::uint8_t> bytes) {
  std::vector<std::string> fields;
  std::size_t at = 0;
  while (at < bytes.size()) {
    if (at + 4 > bytes.size()) return std::nullopt;
    const std::uint32_t n = (std::uint32_t{bytes[at]} << 24) | (std::uint32_t{bytes[at + 1]} << 16) |
                            (std::uint32_t{bytes[at + 2]} << 8) | std::uint32_t{bytes[at + 3]};
    at += 4;
    if (n > bytes.size() - at) return std::nullopt;
    fields.emplace_back(reinterpret_cast<const char*>(bytes.data() + at), n);
    at += n;
  }
  if (fields.size() != 6) return std::nullopt;
  const std::string& seq = fields[0];
  if (seq.empty() || seq.size() > 19 || (seq.size() > 1 && seq[0] == '0')) return std::nullopt;
  for (char c : seq)
    if (c < '0' || c > '9') return std::nullopt;
  AuditEntry e{std::stoull(seq), fields[1], fields[2], fields[3], fields[4], fields[5]};
  if (!is_digest_hex(e.query_digest) || !is_digest_hex(e.response_digest) || !is_digest_hex(e.prev_digest))
    return std::nullopt;
  return e;
}

inline std::string entry_digest(const AuditEntry& e) { return to_hex(sha256(canonical_encoding(e))); }

inline std::string format_line(const AuditEntry& e) { return to_hex(canonical_encoding(e)); }

// Strict lowercase hex; anything else is unparseable.
inline std::optional<AuditEntry> parse_line(std::string_view line) {
  if (line.size() % 2 != 0) return std::nullopt;
  std::vector<std::uint8_t> bytes;
  bytes.reserve(line.size() / 2);
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    return -1;
  };
  for (std::size_t i = 0; i < line.size(); i += 2) {
    const int hi = nibble(line[i]);
    const int lo = nibble(line[i + 1]);
    if (hi < 0 || lo < 0) return std::nullopt;
    bytes.push_back(static_cast<std::uint8_t>(hi * 16 + lo));
  }
  return decode_canonical(bytes);
}

struct AuditAnchor {
  std::uint64_t count = 0;
  std::string head_digest = kGenesisDigest;

  friend bool operator==(const AuditAnchor&, const AuditAnchor&) = default;
};

inline std::string format_anchor(const AuditAnchor& a) {
  return "count " + std::to_string(a.count) + "\nhead " + a.head_digest + "\n";
}

inline AuditAnchor parse_anchor(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string k1, k2, count, head;
  if (!(in >> k1 >> count >> k2 >> head) || k1 != "count" || k2 != "head" || !is_digest_hex(head))
    throw ArgumentError("audit anchor: expected 'count N' and 'head DIGEST'");
  auto n = parse_int(count);
  if (!n || *n < 0) throw ArgumentError("audit anchor: bad count");
  return {static_cast<std::uint64_t>(*n), head};
}

struct VerifyReport {
  bool ok = true;
  std::size_t failing_index = 0;  // 0-based line index of the first failure
  std::string reason;
};

// Resumes a scan at line `start` whose predecessor has digest `prev`. The
// scan is a left fold, so resuming after an unchanged prefix gives the same
// verdict as a scan from line 0.
inline VerifyReport verify_from(const std::vector<std::string>& lines, std::size_t start, std::string prev,
                                const std::optional<AuditAnchor>& anchor = std::nullopt) {
  for (std::size_t i = start; i < lines.size(); ++i) {
    auto e = parse_line(lines[i]);
    if (!e) return {false, i, "entry is not a canonical encoding"};
    if (e->seq != i) return {false, i, "sequence number " + std::to_string(e->seq) + " where " + std::to_string(i) +
                                           " was expected"};
    if (e->prev_digest != prev) return {false, i, "previous-digest link broken"};
    prev = entry_digest(*e);
  }
  if (anchor) {
    if (anchor->count != lines.size())
      return {false, lines.size(), "anchor expects " + std::to_string(anchor->count) + " entries, log has " +
                                       std::to_string(lines.size())};
    if (anchor->head_digest != prev) return {false, lines.empty() ? 0 : lines.size() - 1, "head digest differs from anchor"};
  }
  return {};
}

inline VerifyReport verify_lines(const std::vector<std::string>& lines,
                                 const std::optional<AuditAnchor>& anchor = std::nullopt) {
  return verify_from(lines, 0, kGenesisDigest, anchor);
}

inline bool audit_verify(const std::vector<std::string>& lines,
                         const std::optional<AuditAnchor>& anchor = std::nullopt) {
  return verify_lines(lines, anchor).ok;
}

enum class AuditClock { kLogical, kSystem };

// Append-only, single writer at a time. Logical clock stamps entry n with
// the epoch plus n seconds so replays are byte-stable.
class AuditLog {
 public:
  explicit AuditLog(AuditClock clock = AuditClock::kLogical) : clock_(clock) {}

  AuditLog(AuditLog&& other) noexcept : clock_(other.clock_) {
    std::lock_guard<std::mutex> lock(other.mu_);
    lines_ = std::move(other.lines_);
    head_ = std::move(other.head_);
    verified_ = other.verified_;
  }
  AuditLog& operator=(AuditLog&&) = delete;

  static AuditLog from_lines(std::vector<std::string> lines, AuditClock clock = AuditClock::kLogical,
                             const std::optional<AuditAnchor>& anchor = std::nullopt) {
    AuditLog log(clock);
    const auto report = verify_lines(lines, anchor);
    log.verified_ = report.ok;
    if (report.ok) {
      for (const auto& l : lines) log.head_ = entry_digest(*parse_line(l));
    }
    log.lines_ = std::move(lines);
    return log;
  }

  AuditEntry append(std::string actor, std::string query_digest, std::string response_digest) {
    std::lock_guard<std::mutex> lock(mu_);
    if (!verified_) throw ArgumentError("audit: refusing to append to an unverifiable log");
    if (!is_digest_hex(query_digest) || !is_digest_hex(response_digest))
      throw ArgumentError("audit: digests must be 64 lowercase hex characters");
    AuditEntry e;
    e.seq = lines_.size();
    e.timestamp = now(e.seq);
    e.actor = std::move(actor);
    e.query_digest = std::move(query_digest);
    e.response_digest = std::move(response_digest);
    e.prev_digest = head_;
    lines_.push_back(format_line(e));
    head_ = entry_digest(e);
    return e;
  }

  std::vector<std::string> lines() const {
    std::lock_guard<std::mutex> lock(mu_);
    return lines_;
  }

  std::size_t size() const {
    std::lock_guard<std::mutex> lock(mu_);
    return lines_.size();
  }

  AuditAnchor anchor() const {
    std::lock_guard<std::mutex> lock(mu_);
    return {lines_.size(), head_};
  }

  std::string text() const {
    std::string out;
    for (const auto& l : lines()) out += l + "\n";
    return out;
  }

 private:
  std::string now(std::uint64_t seq) const {
    std::time_t t = clock_ == AuditClock::kLogical ? static_cast<std::time_t>(seq) : std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
  }

  AuditClock clock_;
  mutable std::mutex mu_;
  std::vector<std::string> lines_;
  std::string head_ = kGenesisDigest;
  bool verified_ = true;
};

}  // namespace linkguard::disclosure

#endif  // LINKGUARD_DISCLOSURE_AUDIT_HPP_
