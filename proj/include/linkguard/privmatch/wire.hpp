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

// Frame layout (all integers big-endian):
//
//   u32 payload_length | u8 kind | payload
//   payload = u16 count | count x (u16 length | length bytes)
//
// payload_length counts the payload only, not the kind byte.

#ifndef LINKGUARD_PRIVMATCH_WIRE_HPP_
#define LINKGUARD_PRIVMATCH_WIRE_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "linkguard/errors.hpp"
#include "linkguard/privmatch/group.hpp"

namespace linkguard::privmatch {

enum class MsgKind : std::uint8_t {
  kHello = 1,
  kEncA = 2,
  kDoubleEncA = 3,
  kEncB = 4,
  kResult = 5,
  kAbort = 6,
};

inline std::string_view to_string(MsgKind k) {
  switch (k) {
    case MsgKind::kHello:
      return "HELLO";
    case MsgKind::kEncA:
      return "ENC_A";
    case MsgKind::kDoubleEncA:
      return "DOUBLE_ENC_A";
    case MsgKind::kEncB:
      return "ENC_B";
    case MsgKind::kResult:
      return "RESULT";
    case MsgKind::kAbort:
      return "ABORT";
  }
  return "UNKNOWN";
}

inline bool valid_kind(std::uint8_t k) { return k >= 1 && k <= 6; }

inline constexpr std::size_t kFrameHeaderBytes = 5;
inline constexpr std::size_t kMaxPayloadBytes = 16u << 20;
inline constexpr std::size_t kMaxElements = 0xFFFF;
inline constexpr std::size_t kMaxElementBytes = 0xFFFF;

struct WireMessage {
  MsgKind kind = MsgKind::kAbort;
  std::vector<Bytes> elements;

  friend bool operator==(const WireMessage&, const WireMessage&) = default;
};

inline Bytes encode_msg(const WireMessage& m) {
  if (m.elements.size() > kMaxElements) throw FramingError("encode: more than 65535 elements");
  std::size_t payload = 2;
  for (const auto& e : m.elements) {
    if (e.size() > kMaxElementBytes) throw FramingError("encode: element longer than 65535 bytes");
    payload += 2 + e.size();
  }
  if (payload > kMaxPayloadBytes) throw FramingError("encode: payload exceeds 16 MiB");
  Bytes out;
  out.reserve(kFrameHeaderBytes + payload);
  for (int shift = 24; shift >= 0; shift -= 8) out.push_back(static_cast<std::uint8_t>(payload >> shift));
  out.push_back(static_cast<std::uint8_t>(m.kind));
  out.push_back(static_cast<std::uint8_t>(m.elements.size() >> 8));
  out.push_back(static_cast<std::uint8_t>(m.elements.size()));
  for (const auto& e : m.elements) {
    out.push_back(static_cast<std::uint8_t>(e.size() >> 8));
    out.push_back(static_cast<std::uint8_t>(e.size()));
    out.insert(out.end(), e.begin(), e.end());
  }
  return out;
}

// Header fields, validated. Throws on unknown kind or oversize length.
struct FrameHeader {
  std::uint32_t payload_length = 0;
  MsgKind kind = MsgKind::kAbort;
};

inline FrameHeader decode_header(std::span<const std::uint8_t> header) {
  if (header.size() < kFrameHeaderBytes) throw FramingError("decode: truncated frame header");
  const std::uint32_t len = (std::uint32_t{header[0]} << 24) | (std::uint32_t{header[1]} << 16) |
                            (std::uint32_t{header[2]} << 8) | std::uint32_t{header[3]};
  if (len > kMaxPayloadBytes) throw FramingError("decode: payload length " + std::to_string(len) + " exceeds 16 MiB");
  if (len < 2) throw FramingError("decode: payload shorter than its element count");
  if (!valid_kind(header[4])) throw FramingError("decode: unknown message kind " + std::to_string(header[4]));
  return {len, static_cast<MsgKind>(header[4])};
}

inline std::vector<Bytes> decode_payload(std::span<const std::uint8_t> payload) {
  if (payload.size() < 2) throw FramingError("decode: payload shorter than its element count");
  const std::size_t count = (std::size_t{payload[0]} << 8) | payload[1];
  std::vector<Bytes> out;
  out.reserve(count);
  std::size_t at = 2;
  for (std::size_t i = 0; i < count; ++i) {
    if (at + 2 > payload.size()) throw FramingError("decode: truncated element length");
    const std::size_t len = (std::size_t{payload[at]} << 8) | payload[at + 1];
    at += 2;
    if (at + len > payload.size()) throw FramingError("decode: truncated element");
    out.emplace_back(payload.begin() + static_cast<std::ptrdiff_t>(at),
                     payload.begin() + static_cast<std::ptrdiff_t>(at + len));
    at += len;
  }
  if (at != payload.size()) throw FramingError("decode: trailing bytes after the last element");
  return out;
}

// Requires exactly one complete frame.
inline WireMessage decode_msg(std::span<const std::uint8_t> frame) {
  const FrameHeader h = decode_header(frame);
  if (frame.size() != kFrameHeaderBytes + h.payload_length)
    throw FramingError("decode: frame is " + std::to_string(frame.size()) + " bytes, header declares " +
                       std::to_string(kFrameHeaderBytes + h.payload_length));
  return WireMessage{h.kind, decode_payload(frame.subspan(kFrameHeaderBytes))};
}

// Stream helper: decodes the first frame of `buffer` when complete and
// returns it with the number of bytes consumed.
inline std::optional<std::pair<WireMessage, std::size_t>> try_decode(std::span<const std::uint8_t> buffer) {
  if (buffer.size() < kFrameHeaderBytes) return std::nullopt;
  const FrameHeader h = decode_header(buffer);
  const std::size_t total = kFrameHeaderBytes + h.payload_length;
  if (buffer.size() < total) return std::nullopt;
  return std::make_pair(decode_msg(buffer.first(total)), total);
}

inline std::vector<Bytes> encode_integers(const std::vector<mpz_class>& values) {
  std::vector<Bytes> out;
  out.reserve(values.size());
  for (const auto& v : values) out.push_back(to_bytes(v));
  return out;
}

}  // namespace linkguard::privmatch

#endif  // LINKGUARD_PRIVMATCH_WIRE_HPP_
