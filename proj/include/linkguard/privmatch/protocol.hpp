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

#ifndef LINKGUARD_PRIVMATCH_PROTOCOL_HPP_
#define LINKGUARD_PRIVMATCH_PROTOCOL_HPP_

#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "linkguard/privmatch/party.hpp"
#include "linkguard/privmatch/transport.hpp"
#include "linkguard/sha256.hpp"

namespace linkguard::privmatch {

struct ProtocolOptions {
  DomainParams params;
  bool allow_toy = false;
  std::uint64_t seed = 0;  // derives both keys and the responder's shuffle
  bool honest = false;
  bool shuffle = true;
};

inline constexpr std::uint64_t kInitiatorKeyStream = 0xA1;
inline constexpr std::uint64_t kResponderKeyStream = 0xB1;
inline constexpr std::uint64_t kShuffleStream = 0xB2;

inline PartyKey derive_key(const DomainParams& d, std::uint64_t seed, std::uint64_t stream) {
  Rng rng(derive_seed(seed, stream));
  return PartyKey::random(d, rng);
}

inline Initiator make_initiator(const std::vector<std::string>& items, const ProtocolOptions& o) {
  o.params.validate(o.allow_toy);
  return Initiator(o.params, derive_key(o.params, o.seed, kInitiatorKeyStream), items, {o.honest});
}

inline Responder make_responder(const std::vector<std::string>& items, const ProtocolOptions& o) {
  o.params.validate(o.allow_toy);
  return Responder(o.params, derive_key(o.params, o.seed, kResponderKeyStream), items,
                   {o.shuffle, derive_seed(o.seed, kShuffleStream)});
}

struct InitiatorOutcome {
  std::vector<std::string> intersection;
  std::size_t peer_list_size = 0;
  Bytes transcript;  // every frame sent or received, in stream order
};

struct ResponderOutcome {
  std::vector<std::string> learned;
  bool received_result = false;
  std::size_t peer_list_size = 0;
};

namespace detail {

inline void send_all(Transport& t, const std::vector<WireMessage>& out) {
  for (const auto& m : out) t.send(m);
}

[[noreturn]] inline void abort_run(std::string_view who, const PartyBase& p) {
  throw ProtocolError(std::string(who) + " aborted in " + p.abort_reason());
}

}  // namespace detail

// Blocking initiator loop; closes the transport when finished.
inline InitiatorOutcome run_initiator(Transport& transport, const std::vector<std::string>& items,
                                      const ProtocolOptions& o) {
  Initiator party = make_initiator(items, o);
  RecordingTransport t(transport);
  detail::send_all(t, party.start());
  while (!party.finished()) {
    auto m = t.recv();
    if (!m) throw ProtocolError("initiator: stream ended in phase " + std::string(to_string(party.phase())));
    detail::send_all(t, party.step(*m));
  }
  t.close();
  if (party.poisoned()) detail::abort_run("initiator", party);
  return {party.intersection(), party.peer_list_size(), t.transcript()};
}

// Blocking responder loop.
inline ResponderOutcome run_responder(Transport& t, const std::vector<std::string>& items,
                                      const ProtocolOptions& o) {
  Responder party = make_responder(items, o);
  while (!party.finished()) {
    auto m = t.recv();
    if (!m) {
      const Phase at = party.phase();
      if (!party.on_eof()) throw ProtocolError("responder: stream ended in phase " + std::string(to_string(at)));
      break;
    }
    detail::send_all(t, party.step(*m));
  }
  t.close();
  if (party.poisoned()) detail::abort_run("responder", party);
  return {party.learned(), party.received_result(), party.peer_list_size()};
}

enum class TransportKind { kLoopback, kTwoProcess };

struct IntersectionRun {
  InitiatorOutcome initiator;
  ResponderOutcome responder;
};

namespace detail {

// Single-threaded pump over in-memory byte queues: each party only sees
// frames decoded from its own inbound stream.
inline IntersectionRun run_loopback(const std::vector<std::string>& list_a, const std::vector<std::string>& list_b,
                                    const ProtocolOptions& o) {
  Initiator ini = make_initiator(list_a, o);
  Responder resp = make_responder(list_b, o);
  auto [ta, tb] = LoopbackTransport::make_pair();
  RecordingTransport rec(*ta);
  send_all(rec, ini.start());
  bool a_closed = false;
  bool progress = true;
  while (progress) {
    progress = false;
    while (!resp.finished() && tb->pending()) {
      send_all(*tb, resp.step(*tb->recv()));
      progress = true;
    }
    while (!ini.finished() && ta->pending()) {
      send_all(rec, ini.step(*rec.recv()));
      progress = true;
    }
    if (ini.finished() && !a_closed) {
      rec.close();
      a_closed = true;
      progress = true;
    }
    if (!resp.finished() && tb->peer_closed()) {
      const Phase at = resp.phase();
      if (!resp.on_eof()) throw ProtocolError("responder: stream ended in phase " + std::string(to_string(at)));
      progress = true;
    }
  }
  if (ini.poisoned()) abort_run("initiator", ini);
  if (resp.poisoned()) abort_run("responder", resp);
  if (!ini.finished() || !resp.finished()) throw ProtocolError("loopback: protocol stalled");
  return {{ini.intersection(), ini.peer_list_size(), rec.transcript()},
          {resp.learned(), resp.received_result(), resp.peer_list_size()}};
}

inline std::string serialize(const ResponderOutcome& r) {
  std::string out = "received " + std::to_string(r.received_result) + "\npeer " + std::to_string(r.peer_list_size) + "\n";
  for (const auto& item : r.learned)
    out += "item " + to_hex(std::span(reinterpret_cast<const std::uint8_t*>(item.data()), item.size())) + "\n";
  return out;
}

inline ResponderOutcome deserialize(const std::string& text) {
  ResponderOutcome r;
  std::istringstream in(text);
  std::string tag, value;
  while (in >> tag >> value) {
    if (tag == "received") {
      r.received_result = value == "1";
    } else if (tag == "peer") {
      r.peer_list_size = std::stoul(value);
    } else if (tag == "item") {
      std::string item;
      for (std::size_t i = 0; i + 1 < value.size(); i += 2)
        item.push_back(static_cast<char>(std::stoi(value.substr(i, 2), nullptr, 16)));
      r.learned.push_back(std::move(item));
    } else if (tag == "error") {
      throw ProtocolError("responder process: " + value);
    }
  }
  return r;
}

inline void write_fully(int fd, const std::string& s) {
  std::size_t done = 0;
  while (done < s.size()) {
    const ssize_t n = ::write(fd, s.data() + done, s.size() - done);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) return;
    done += static_cast<std::size_t>(n);
  }
}

// Responder in a forked child over a socketpair; its outcome comes back on a
// separate pipe that is not part of the protocol stream.
inline IntersectionRun run_two_process(const std::vector<std::string>& list_a,
                                       const std::vector<std::string>& list_b, const ProtocolOptions& o) {
  o.params.validate(o.allow_toy);
  int sv[2];
  if (::socketpair(AF_UNIX, SOCK_STREAM, 0, sv) != 0) throw ProtocolError("two-process: socketpair failed");
  int report[2];
  if (::pipe(report) != 0) {
    ::close(sv[0]);
    ::close(sv[1]);
    throw ProtocolError("two-process: pipe failed");
  }
  const pid_t pid = ::fork();
  if (pid < 0) throw ProtocolError("two-process: fork failed");
  if (pid == 0) {
    ::close(sv[0]);
    ::close(report[0]);
    int status = 0;
    std::string text;
    try {
      FdTransport t(sv[1]);
      text = serialize(run_responder(t, list_b, o));
    } catch (const std::exception& e) {
      std::string msg = e.what();
      for (auto& c : msg)
        if (c == ' ' || c == '\n') c = '_';
      text = "error " + msg + "\n";
      status = 1;
    }
    write_fully(report[1], text);
    ::close(report[1]);
    ::_exit(status);
  }
  ::close(sv[1]);
  ::close(report[1]);
  IntersectionRun run;
  std::string failure;
  try {
    FdTransport t(sv[0]);
    run.initiator = run_initiator(t, list_a, o);
  } catch (const std::exception& e) {
    failure = e.what();
  }
  std::string text;
  char buf[4096];
  ssize_t n;
  while ((n = ::read(report[0], buf, sizeof buf)) > 0 || (n < 0 && errno == EINTR))
    if (n > 0) text.append(buf, static_cast<std::size_t>(n));
  ::close(report[0]);
  int status = 0;
  ::waitpid(pid, &status, 0);
  if (!failure.empty()) throw ProtocolError(failure);
  run.responder = deserialize(text);
  if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) throw ProtocolError("two-process: responder exited abnormally");
  return run;
}

}  // namespace detail

inline IntersectionRun run_intersection(const std::vector<std::string>& list_a,
                                        const std::vector<std::string>& list_b, const ProtocolOptions& o,
                                        TransportKind kind = TransportKind::kLoopback) {
  return kind == TransportKind::kLoopback ? detail::run_loopback(list_a, list_b, o)
                                          : detail::run_two_process(list_a, list_b, o);
}

inline std::vector<WireMessage> decode_transcript(const Bytes& transcript) {
  std::vector<WireMessage> out;
  std::span<const std::uint8_t> rest(transcript);
  while (!rest.empty()) {
    auto frame = try_decode(rest);
    if (!frame) throw FramingError("transcript ends inside a frame");
    out.push_back(std::move(frame->first));
    rest = rest.subspan(frame->second);
  }
  return out;
}

// ------------------------------------------------------------------ demos

struct AsymmetryReport {
  std::vector<std::string> initiator_learned;
  std::vector<std::string> responder_knowledge;  // plaintext items known to the responder
  std::size_t responder_inferred_initiator_size = 0;
  std::size_t initiator_inferred_responder_size = 0;
  std::vector<std::string> honest_responder_learned;  // same run with RESULT returned
};

inline AsymmetryReport demo_asymmetry(const std::vector<std::string>& list_a, const std::vector<std::string>& list_b,
                                      ProtocolOptions o) {
  o.honest = false;
  const auto withheld = run_intersection(list_a, list_b, o);
  o.honest = true;
  const auto honest = run_intersection(list_a, list_b, o);
  return {withheld.initiator.intersection, withheld.responder.learned, withheld.responder.peer_list_size,
          withheld.initiator.peer_list_size, honest.responder.learned};
}

// A curious initiator declares the whole dictionary as its list and so
// learns every responder item inside the dictionary.
inline std::vector<std::string> demo_inflation(const std::vector<std::string>& dictionary,
                                               const std::vector<std::string>& honest_b, const ProtocolOptions& o) {
  return run_intersection(dictionary, honest_b, o).initiator.intersection;
}

}  // namespace linkguard::privmatch

#endif  // LINKGUARD_PRIVMATCH_PROTOCOL_HPP_
