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

// Two-party intersection state machines. Message order:
//
//   initiator -> HELLO(p, q), ENC_A(E(a) in list order)
//   responder -> DOUBLE_ENC_A(shuffled pairs E(a), E'(E(a))), ENC_B(E'(b))
//   initiator -> RESULT(matched positions in ENC_B)   [honest mode only]
//
// A message of the wrong kind, a malformed payload, or any input after the
// final phase poisons the party. A poisoned party answers every input with
// ABORT. A received ABORT poisons without a reply.

#ifndef LINKGUARD_PRIVMATCH_PARTY_HPP_
#define LINKGUARD_PRIVMATCH_PARTY_HPP_

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "linkguard/privmatch/group.hpp"
#include "linkguard/privmatch/wire.hpp"

namespace linkguard::privmatch {

enum class Phase {
  kIdle,
  kAwaitHello,
  kAwaitEncA,
  kAwaitDoubleEncA,
  kAwaitEncB,
  kAwaitResult,
  kDone,
  kPoisoned,
};

inline std::string_view to_string(Phase p) {
  switch (p) {
    case Phase::kIdle:
      return "idle";
    case Phase::kAwaitHello:
      return "await-hello";
    case Phase::kAwaitEncA:
      return "await-enc-a";
    case Phase::kAwaitDoubleEncA:
      return "await-double-enc-a";
    case Phase::kAwaitEncB:
      return "await-enc-b";
    case Phase::kAwaitResult:
      return "await-result";
    case Phase::kDone:
      return "done";
    case Phase::kPoisoned:
      return "poisoned";
  }
  return "unknown";
}

// Pairs in DOUBLE_ENC_A use two elements each.
inline constexpr std::size_t kMaxListItems = kMaxElements / 2;

namespace detail {

// Order-preserving de-duplication; lists are sets.
inline std::vector<std::string> distinct(const std::vector<std::string>& items) {
  std::set<std::string> seen;
  std::vector<std::string> out;
  for (const auto& it : items)
    if (seen.insert(it).second) out.push_back(it);
  if (out.size() > kMaxListItems)
    throw CapacityError("list of " + std::to_string(out.size()) + " items exceeds the " +
                        std::to_string(kMaxListItems) + "-item frame limit");
  return out;
}

// Distinct items must stay distinct after hashing; a collision would merge
// two items in the intersection. Only tiny groups make this reachable.
inline std::vector<std::string> distinct_in_group(const std::vector<std::string>& items, const DomainParams& d) {
  auto out = distinct(items);
  std::set<mpz_class> images;
  for (const auto& it : out)
    if (!images.insert(hash_to_group(it, d).value).second)
      throw CapacityError("item '" + it + "' collides with another item in a " + std::to_string(d.bits) +
                          "-bit group");
  return out;
}

// Canonical (no leading zero byte) subgroup element, or nullopt.
inline std::optional<mpz_class> parse_element(const Bytes& b, const DomainParams& d) {
  if (b.empty() || b.front() == 0) return std::nullopt;
  mpz_class v = from_bytes(b);
  if (!in_subgroup(v, d)) return std::nullopt;
  return v;
}

// Canonical non-negative integer; zero is the empty string.
inline std::optional<mpz_class> parse_index(const Bytes& b) {
  if (!b.empty() && b.front() == 0) return std::nullopt;
  if (b.size() > 8) return std::nullopt;
  return from_bytes(b);
}

}  // namespace detail

class PartyBase {
 public:
  Phase phase() const { return phase_; }
  bool poisoned() const { return phase_ == Phase::kPoisoned; }
  bool finished() const { return phase_ == Phase::kDone || phase_ == Phase::kPoisoned; }
  const std::string& abort_reason() const { return reason_; }

 protected:
  PartyBase(DomainParams params, PartyKey key, Phase start)
      : params_(std::move(params)), key_(std::move(key)), phase_(start) {
    key_.validate(params_);
  }

  // Poisons and returns the ABORT to send (none when the peer aborted).
  std::vector<WireMessage> fail(std::string reason, bool reply = true) {
    const Phase at = phase_;
    if (!poisoned()) reason_ = std::string(to_string(at)) + ": " + reason;
    phase_ = Phase::kPoisoned;
    if (!reply) return {};
    return {WireMessage{MsgKind::kAbort, {to_bytes(static_cast<unsigned long>(at))}}};
  }

  // Shared preamble: poisoned parties and peer ABORTs.
  std::optional<std::vector<WireMessage>> screen(const WireMessage& m) {
    if (poisoned()) return fail("input after abort");
    if (m.kind == MsgKind::kAbort) return fail("peer aborted", false);
    return std::nullopt;
  }

  GroupElement encrypt(const GroupElement& e) const { return commute_encrypt(key_, e, params_); }

  DomainParams params_;
  PartyKey key_;
  Phase phase_;
  std::string reason_;
};

struct InitiatorOptions {
  bool honest = false;  // send RESULT so the responder learns the intersection
};

class Initiator : public PartyBase {
 public:
  Initiator(DomainParams params, PartyKey key, const std::vector<std::string>& items, InitiatorOptions opts = {})
      : PartyBase(std::move(params), std::move(key), Phase::kIdle),
        items_(detail::distinct_in_group(items, params_)),
        opts_(opts) {}

  std::vector<WireMessage> start() {
    if (phase_ != Phase::kIdle) return fail("start called twice");
    WireMessage hello{MsgKind::kHello, encode_integers({params_.p, params_.q})};
    WireMessage enc{MsgKind::kEncA, {}};
    for (std::size_t i = 0; i < items_.size(); ++i) {
      const GroupElement e = encrypt(hash_to_group(items_[i], params_));
      position_.emplace(e.value, i);
      enc.elements.push_back(to_bytes(e.value));
    }
    double_enc_.assign(items_.size(), mpz_class(0));
    phase_ = Phase::kAwaitDoubleEncA;
    return {hello, enc};
  }

  std::vector<WireMessage> step(const WireMessage& m) {
    if (auto out = screen(m)) return *out;
    switch (phase_) {
      case Phase::kAwaitDoubleEncA:
        if (m.kind != MsgKind::kDoubleEncA) break;
        return on_double_enc(m);
      case Phase::kAwaitEncB:
        if (m.kind != MsgKind::kEncB) break;
        return on_enc_b(m);
      default:
        break;
    }
    return fail("unexpected " + std::string(to_string(m.kind)));
  }

  const std::vector<std::string>& items() const { return items_; }
  // Plaintext intersection in the initiator's list order.
  const std::vector<std::string>& intersection() const { return intersection_; }
  // Cardinality of the responder's list, as revealed by ENC_B.
  std::size_t peer_list_size() const { return peer_size_; }

 private:
  std::vector<WireMessage> on_double_enc(const WireMessage& m) {
    if (m.elements.size() != 2 * items_.size()) return fail("DOUBLE_ENC_A has the wrong element count");
    std::vector<bool> filled(items_.size(), false);
    for (std::size_t k = 0; k < m.elements.size(); k += 2) {
      auto single = detail::parse_element(m.elements[k], params_);
      auto twice = detail::parse_element(m.elements[k + 1], params_);
      if (!single || !twice) return fail("DOUBLE_ENC_A element outside the subgroup");
      auto it = position_.find(*single);
      if (it == position_.end() || filled[it->second]) return fail("DOUBLE_ENC_A pair does not match ENC_A");
      filled[it->second] = true;
      double_enc_[it->second] = *twice;
    }
    phase_ = Phase::kAwaitEncB;
    return {};
  }

  std::vector<WireMessage> on_enc_b(const WireMessage& m) {
    std::multimap<mpz_class, std::size_t> by_value;
    for (std::size_t j = 0; j < m.elements.size(); ++j) {
      auto e = detail::parse_element(m.elements[j], params_);
      if (!e) return fail("ENC_B element outside the subgroup");
      by_value.emplace(encrypt(GroupElement{*e}).value, j);
    }
    peer_size_ = m.elements.size();
    std::set<std::size_t> matched;
    for (std::size_t i = 0; i < items_.size(); ++i) {
      auto [lo, hi] = by_value.equal_range(double_enc_[i]);
      if (lo == hi) continue;
      intersection_.push_back(items_[i]);
      for (auto it = lo; it != hi; ++it) matched.insert(it->second);
    }
    phase_ = Phase::kDone;
    if (!opts_.honest) return {};
    WireMessage result{MsgKind::kResult, {}};
    for (std::size_t j : matched) result.elements.push_back(to_bytes(mpz_class(static_cast<unsigned long>(j))));
    return {result};
  }

  std::vector<std::string> items_;
  InitiatorOptions opts_;
  std::map<mpz_class, std::size_t> position_;
  std::vector<mpz_class> double_enc_;
  std::vector<std::string> intersection_;
  std::size_t peer_size_ = 0;
};

struct ResponderOptions {
  bool shuffle = true;
  std::uint64_t shuffle_seed = 0;
};

class Responder : public PartyBase {
 public:
  Responder(DomainParams params, PartyKey key, const std::vector<std::string>& items, ResponderOptions opts = {})
      : PartyBase(std::move(params), std::move(key), Phase::kAwaitHello),
        items_(detail::distinct_in_group(items, params_)),
        opts_(opts) {}

  std::vector<WireMessage> step(const WireMessage& m) {
    if (auto out = screen(m)) return *out;
    switch (phase_) {
      case Phase::kAwaitHello:
        if (m.kind != MsgKind::kHello) break;
        return on_hello(m);
      case Phase::kAwaitEncA:
        if (m.kind != MsgKind::kEncA) break;
        return on_enc_a(m);
      case Phase::kAwaitResult:
        if (m.kind != MsgKind::kResult) break;
        return on_result(m);
      default:
        break;
    }
    return fail("unexpected " + std::string(to_string(m.kind)));
  }

  // Stream closed by the initiator. Clean only while awaiting an optional
  // RESULT, which is the withheld-result case.
  bool on_eof() {
    if (phase_ == Phase::kAwaitResult) {
      phase_ = Phase::kDone;
      return true;
    }
    if (phase_ == Phase::kDone) return true;
    fail("stream closed early", false);
    return false;
  }

  const std::vector<std::string>& items() const { return items_; }
  // Plaintext items the responder learned; empty unless RESULT arrived.
  const std::vector<std::string>& learned() const { return learned_; }
  bool received_result() const { return received_result_; }
  // Cardinality of the initiator's list, as revealed by ENC_A.
  std::size_t peer_list_size() const { return peer_size_; }

 private:
  std::vector<WireMessage> on_hello(const WireMessage& m) {
    if (m.elements.size() != 2) return fail("HELLO must carry p and q");
    if (m.elements[0] != to_bytes(params_.p) || m.elements[1] != to_bytes(params_.q))
      return fail("HELLO group parameters differ from the local ones");
    phase_ = Phase::kAwaitEncA;
    return {};
  }

  std::vector<WireMessage> on_enc_a(const WireMessage& m) {
    if (m.elements.size() > kMaxListItems) return fail("ENC_A longer than the frame limit allows");
    std::vector<std::pair<Bytes, Bytes>> pairs;
    pairs.reserve(m.elements.size());
    for (const auto& raw : m.elements) {
      auto e = detail::parse_element(raw, params_);
      if (!e) return fail("ENC_A element outside the subgroup");
      pairs.emplace_back(raw, to_bytes(encrypt(GroupElement{*e}).value));
    }
    peer_size_ = m.elements.size();
    if (opts_.shuffle) {
      Rng rng(opts_.shuffle_seed);
      rng.shuffle(pairs);
    }
    WireMessage doubled{MsgKind::kDoubleEncA, {}};
    for (auto& [single, twice] : pairs) {
      doubled.elements.push_back(std::move(single));
      doubled.elements.push_back(std::move(twice));
    }
    WireMessage enc_b{MsgKind::kEncB, {}};
    for (const auto& item : items_) enc_b.elements.push_back(to_bytes(encrypt(hash_to_group(item, params_)).value));
    phase_ = Phase::kAwaitResult;
    return {doubled, enc_b};
  }

  std::vector<WireMessage> on_result(const WireMessage& m) {
    std::vector<std::string> learned;
    long previous = -1;
    for (const auto& raw : m.elements) {
      auto j = detail::parse_index(raw);
      if (!j || *j >= items_.size() || j->get_si() <= previous) return fail("RESULT index invalid or unordered");
      previous = j->get_si();
      learned.push_back(items_[static_cast<std::size_t>(previous)]);
    }
    learned_ = std::move(learned);
    received_result_ = true;
    phase_ = Phase::kDone;
    return {};
  }

  std::vector<std::string> items_;
  ResponderOptions opts_;
  std::vector<std::string> learned_;
  bool received_result_ = false;
  std::size_t peer_size_ = 0;
};

}  // namespace linkguard::privmatch

#endif  // LINKGUARD_PRIVMATCH_PARTY_HPP_
