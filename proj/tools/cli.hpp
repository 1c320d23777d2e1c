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

// Command-line front end. dispatch() returns 0 on success, 1 on a domain
// error and 2 on a usage error. Every primary output starts with a block of
// '#' lines naming the tool version, the command, the seed and the effective
// parameters; the loaders skip those lines.

#ifndef LINKGUARD_TOOLS_CLI_HPP_
#define LINKGUARD_TOOLS_CLI_HPP_

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "linkguard/linkguard.hpp"

namespace linkguard::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitUsage = 2;

// Reported as a usage error after parsing (flag combinations CLI11 cannot
// express).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Header {
  std::string command;
  std::optional<std::uint64_t> seed;
  std::vector<std::pair<std::string, std::string>> params;

  void add(std::string key, std::string value) { params.emplace_back(std::move(key), std::move(value)); }

  std::string text() const {
    std::string out = "# linkguard " + std::string(kVersion) + "\n";
    out += "# command: " + command + "\n";
    out += "# seed: " + (seed ? std::to_string(*seed) : std::string("none")) + "\n";
    for (const auto& [k, v] : params) out += "# param " + k + "=" + v + "\n";
    return out;
  }
};

// Writes to `path`, or to `out` when the path is empty.
inline void emit(const std::string& path, const std::string& body, std::ostream& out) {
  if (path.empty()) {
    out << body;
  } else {
    write_file(path, body);
  }
}

inline std::vector<std::string> load_items(const std::string& path) {
  std::vector<std::string> items;
  for (auto& line : read_lines(path)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    items.push_back(line);
  }
  return items;
}

namespace detail {

inline std::string join(const std::vector<std::string>& v, char sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? std::string(1, sep) : "") + v[i];
  return out;
}

inline std::string hex(std::span<const std::uint8_t> bytes) { return to_hex(bytes); }

}  // namespace detail

// ---------------------------------------------------------------- synth

struct SynthArgs {
  std::string kind = "pairs";
  std::size_t n = 1000;
  double overlap = 1.0;
  double error_rate = 0.0;
  double missing_rate = 0.0;
  std::uint64_t seed = 0;
  std::string out_dir;
};

inline int run_synth(const SynthArgs& a, std::ostream& out) {
  Header h{"synth", a.seed, {}};
  h.add("kind", a.kind);
  h.add("n", std::to_string(a.n));
  namespace fs = std::filesystem;
  fs::create_directories(a.out_dir);
  const fs::path dir(a.out_dir);
  if (a.kind == "micro") {
    const auto t = corpus::generate_microtable(a.n, a.seed);
    write_file((dir / "microtable.csv").string(), h.text() + disclosure::format_microtable(t));
    out << "wrote " << (dir / "microtable.csv").string() << " rows=" << t.size() << "\n";
    return kExitOk;
  }
  h.add("overlap", format_double(a.overlap));
  h.add("error_rate", format_double(a.error_rate));
  h.add("missing_rate", format_double(a.missing_rate));
  corpus::ErrorProfile profile;
  profile.field_error_rate = a.error_rate;
  profile.missing_rate = a.missing_rate;
  const auto files = corpus::generate_pairs(a.n, a.overlap, profile, a.seed);
  write_file((dir / "file_a.csv").string(), h.text() + corpus::format_table(files.schema, files.file_a));
  write_file((dir / "file_b.csv").string(), h.text() + corpus::format_table(files.schema, files.file_b));
  write_file((dir / "truth.csv").string(), h.text() + corpus::format_truth(files.truth));
  out << "wrote " << a.out_dir << " file_a=" << files.file_a.size() << " file_b=" << files.file_b.size()
      << " true_pairs=" << files.truth.pairs.size() << "\n";
  return kExitOk;
}

// ----------------------------------------------------------------- link

struct LinkArgs {
  std::string file_a, file_b, config, truth, out, pairs;
};

inline int run_link(const LinkArgs& a, std::ostream& out) {
  const linkage::LinkJob job = a.config.empty() ? linkage::synthetic_link_job() : linkage::load_link_job(a.config);
  const auto fa = corpus::load_table(a.file_a, job.schema);
  const auto fb = corpus::load_table(a.file_b, job.schema);
  const auto result = linkage::link(job.schema, fa, fb, job.config);
  std::optional<linkage::LinkQuality> q;
  if (!a.truth.empty()) q = linkage::evaluate_links(result, corpus::load_truth(a.truth).as_set());

  Header h{"link", std::nullopt, {}};
  h.add("config", a.config.empty() ? "builtin-synthetic" : a.config);
  h.add("block", job.config.block_field.value_or("none"));
  h.add("mu", format_double(job.config.mu));
  h.add("lambda", format_double(job.config.lambda));
  emit(a.out, h.text() + linkage::format_link_report(result, q), out);
  if (!a.pairs.empty()) write_file(a.pairs, h.text() + linkage::format_link_pairs(result));
  return kExitOk;
}

// ------------------------------------------------------------- baseline

struct BaselineArgs {
  unsigned n = 0;
  bool moments = false;
  std::string out;
};

inline int run_baseline(const BaselineArgs& a, std::ostream& out) {
  Header h{"baseline", std::nullopt, {}};
  h.add("n", std::to_string(a.n));
  std::string body;
  if (a.moments) {
    const auto m = baseline::exact_match_moments(a.n);
    body = "statistic,value\nmean," + format_double(m.mean) + "\nvariance," + format_double(m.variance) + "\n";
  } else {
    const auto t = baseline::pmf_table(a.n);
    body = "r,probability\n";
    for (std::size_t r = 0; r < t.probs.size(); ++r) body += std::to_string(r) + "," + format_double(t.probs[r]) + "\n";
  }
  emit(a.out, h.text() + body, out);
  return kExitOk;
}

// --------------------------------------------------------------- pmatch

struct PmatchArgs {
  std::string role = "both";
  std::string transport = "loopback";
  std::string list_a, list_b, dictionary;
  std::string listen, connect;
  std::string params;
  unsigned bits = 512;
  std::string group_label = "linkguard-default-group";
  bool toy = false;
  bool honest = false;
  bool no_shuffle = false;
  std::string demo;
  std::uint64_t seed = 0;
  std::string out, transcript;
};

inline std::string format_transcript(const privmatch::Bytes& transcript) {
  std::string out = "kind,frame_hex\n";
  std::span<const std::uint8_t> rest(transcript);
  while (!rest.empty()) {
    auto frame = privmatch::try_decode(rest);
    if (!frame) throw FramingError("transcript ends inside a frame");
    out += std::string(privmatch::to_string(frame->first.kind)) + "," +
           detail::hex(rest.subspan(0, frame->second)) + "\n";
    rest = rest.subspan(frame->second);
  }
  return out;
}

inline int run_pmatch(const PmatchArgs& a, std::ostream& out) {
  privmatch::ProtocolOptions o;
  o.params = a.toy ? privmatch::toy_params()
                   : (a.params.empty() ? privmatch::derive_group(a.bits, a.group_label)
                                       : privmatch::parse_params(KeyValueConfig::load(a.params)));
  o.allow_toy = a.toy;
  o.seed = a.seed;
  o.honest = a.honest;
  o.shuffle = !a.no_shuffle;

  Header h{"pmatch", a.seed, {}};
  h.add("role", a.demo.empty() ? a.role : "demo-" + a.demo);
  h.add("modulus_bits", std::to_string(o.params.bits));
  h.add("honest", a.honest ? "true" : "false");
  h.add("shuffle", o.shuffle ? "true" : "false");
  std::string body = "field,value\n";
  auto row = [&](std::string_view k, const std::string& v) { body += std::string(k) + "," + csv_cell(v) + "\n"; };

  if (a.demo == "asymmetry") {
    if (a.list_a.empty() || a.list_b.empty()) throw UsageError("--demo asymmetry needs --a and --b");
    const auto r = privmatch::demo_asymmetry(load_items(a.list_a), load_items(a.list_b), o);
    row("initiator_learned_count", std::to_string(r.initiator_learned.size()));
    for (const auto& s : r.initiator_learned) row("initiator_learned", s);
    row("responder_knowledge_count", std::to_string(r.responder_knowledge.size()));
    for (const auto& s : r.responder_knowledge) row("responder_knowledge", s);
    row("responder_inferred_initiator_size", std::to_string(r.responder_inferred_initiator_size));
    row("initiator_inferred_responder_size", std::to_string(r.initiator_inferred_responder_size));
    row("honest_responder_learned_count", std::to_string(r.honest_responder_learned.size()));
    emit(a.out, h.text() + body, out);
    return kExitOk;
  }
  if (a.demo == "inflation") {
    if (a.dictionary.empty() || a.list_b.empty()) throw UsageError("--demo inflation needs --dictionary and --b");
    const auto dict = load_items(a.dictionary);
    const auto b = load_items(a.list_b);
    const auto recovered = privmatch::demo_inflation(dict, b, o);
    const std::set<std::string> in_dict(dict.begin(), dict.end());
    std::size_t reachable = 0;
    for (const auto& s : std::set<std::string>(b.begin(), b.end())) reachable += in_dict.contains(s);
    row("dictionary_size", std::to_string(in_dict.size()));
    row("responder_items_in_dictionary", std::to_string(reachable));
    row("recovered_count", std::to_string(recovered.size()));
    row("recovery_rate", format_double(reachable ? static_cast<double>(recovered.size()) / reachable : 1.0));
    for (const auto& s : recovered) row("recovered", s);
    emit(a.out, h.text() + body, out);
    return kExitOk;
  }
  if (!a.demo.empty()) throw UsageError("--demo must be asymmetry or inflation");

  auto open_network = [&]() -> std::unique_ptr<privmatch::FdTransport> {
    if (!a.listen.empty() && !a.connect.empty()) throw UsageError("--listen and --connect are exclusive");
    if (!a.listen.empty()) return privmatch::listen_tcp(a.listen);
    if (!a.connect.empty()) return privmatch::connect_tcp(a.connect);
    throw UsageError("--role " + a.role + " needs --listen or --connect");
  };

  if (a.role == "initiator") {
    if (a.list_a.empty()) throw UsageError("--role initiator needs --a");
    auto t = open_network();
    const auto r = privmatch::run_initiator(*t, load_items(a.list_a), o);
    row("peer_list_size", std::to_string(r.peer_list_size));
    row("intersection_count", std::to_string(r.intersection.size()));
    for (const auto& s : r.intersection) row("intersection", s);
    emit(a.out, h.text() + body, out);
    if (!a.transcript.empty()) write_file(a.transcript, h.text() + format_transcript(r.transcript));
    return kExitOk;
  }
  if (a.role == "responder") {
    if (a.list_b.empty()) throw UsageError("--role responder needs --b");
    auto t = open_network();
    const auto r = privmatch::run_responder(*t, load_items(a.list_b), o);
    row("peer_list_size", std::to_string(r.peer_list_size));
    row("received_result", r.received_result ? "true" : "false");
    row("learned_count", std::to_string(r.learned.size()));
    for (const auto& s : r.learned) row("learned", s);
    emit(a.out, h.text() + body, out);
    return kExitOk;
  }
  if (a.role != "both") throw UsageError("--role must be initiator, responder or both");
  if (a.list_a.empty() || a.list_b.empty()) throw UsageError("--role both needs --a and --b");
  const auto kind =
      a.transport == "two-process" ? privmatch::TransportKind::kTwoProcess : privmatch::TransportKind::kLoopback;
  if (a.transport != "two-process" && a.transport != "loopback")
    throw UsageError("--transport must be loopback or two-process");
  h.add("transport", a.transport);
  const auto run = privmatch::run_intersection(load_items(a.list_a), load_items(a.list_b), o, kind);
  row("intersection_count", std::to_string(run.initiator.intersection.size()));
  for (const auto& s : run.initiator.intersection) row("intersection", s);
  row("initiator_saw_peer_size", std::to_string(run.initiator.peer_list_size));
  row("responder_saw_peer_size", std::to_string(run.responder.peer_list_size));
  row("responder_received_result", run.responder.received_result ? "true" : "false");
  row("responder_learned_count", std::to_string(run.responder.learned.size()));
  row("transcript_sha256", to_hex(sha256(run.initiator.transcript)));
  emit(a.out, h.text() + body, out);
  if (!a.transcript.empty()) write_file(a.transcript, h.text() + format_transcript(run.initiator.transcript));
  return kExitOk;
}

// ------------------------------------------------------ anonymize / rumap

struct ReleaseArgs {
  std::string input;
  std::string method = "microaggregate";
  std::size_t k = 3;
  std::string stat = "mean";
  double lambda = 0.5;
  std::optional<std::uint64_t> seed;
  std::string grid;
  std::string out;
};

inline disclosure::ReleasePlan plan_from(const ReleaseArgs& a) {
  if (a.method == "microaggregate") return disclosure::ReleasePlan::microaggregation(a.k, disclosure::parse_stat(a.stat));
  if (a.method == "noise") {
    if (!a.seed) throw UsageError("--method noise requires --seed");
    return disclosure::ReleasePlan::noise(a.lambda, *a.seed);
  }
  throw UsageError("--method must be microaggregate or noise");
}

inline int run_anonymize(const ReleaseArgs& a, std::ostream& out) {
  const auto plan = plan_from(a);
  const auto t = disclosure::load_microtable(a.input);
  t.validate();
  const auto released = plan.apply(t);
  Header h{"anonymize", a.seed, {}};
  h.add("plan", plan.describe());
  h.add("risk", format_double(disclosure::reident_risk(t, released)));
  h.add("utility", format_double(disclosure::utility(t, released)));
  emit(a.out, h.text() + disclosure::format_microtable(released), out);
  return kExitOk;
}

inline int run_rumap(const ReleaseArgs& a, std::ostream& out) {
  disclosure::PlanFamily family;
  if (a.method == "microaggregate") {
    family.method = disclosure::ReleasePlan::Method::kMicroaggregate;
    family.stat = disclosure::parse_stat(a.stat);
  } else if (a.method == "noise") {
    if (!a.seed) throw UsageError("--method noise requires --seed");
    family.method = disclosure::ReleasePlan::Method::kNoise;
    family.seed = *a.seed;
  } else {
    throw UsageError("--method must be microaggregate or noise");
  }
  const auto grid = parse_double_list(a.grid, "--grid");
  const auto t = disclosure::load_microtable(a.input);
  t.validate();
  Header h{"rumap", a.seed, {}};
  h.add("method", a.method);
  h.add("grid", a.grid);
  if (a.method == "microaggregate") h.add("stat", a.stat);
  emit(a.out, h.text() + disclosure::format_ru(disclosure::ru_sweep(t, family, grid)), out);
  return kExitOk;
}

// ----------------------------------------------------------------- gate

struct GateArgs {
  std::string input, policy, queries, out, audit, anchor;
  bool append = false;
  bool wall_clock = false;
};

inline std::string anchor_path(const std::string& log, const std::string& given) {
  return given.empty() ? log + ".anchor" : given;
}

inline std::vector<std::string> load_log_lines(const std::string& path) {
  std::vector<std::string> lines;
  for (auto& l : read_lines(path)) {
    if (!l.empty() && l.back() == '\r') l.pop_back();
    if (!l.empty()) lines.push_back(l);
  }
  return lines;
}

inline int run_gate(const GateArgs& a, std::ostream& out) {
  const auto t = disclosure::load_microtable(a.input);
  t.validate();
  const auto policy = disclosure::parse_policy(KeyValueConfig::load(a.policy));
  const auto clock = a.wall_clock ? disclosure::AuditClock::kSystem : disclosure::AuditClock::kLogical;
  const std::string anchor_file = anchor_path(a.audit, a.anchor);
  disclosure::AuditLog log = [&] {
    if (!a.append || !std::filesystem::exists(a.audit)) return disclosure::AuditLog(clock);
    std::optional<disclosure::AuditAnchor> anchor;
    if (std::filesystem::exists(anchor_file)) anchor = disclosure::parse_anchor(read_file(anchor_file));
    return disclosure::AuditLog::from_lines(load_log_lines(a.audit), clock, anchor);
  }();

  Header h{"gate", std::nullopt, {}};
  h.add("policy", a.policy);
  h.add("levels", std::to_string(policy.levels.size()));
  h.add("clock", a.wall_clock ? "system" : "logical");
  std::string body = "query_id,actor,level,decision,plan_level,measured_risk,reason,response_digest\n";
  std::size_t released = 0, refused = 0;
  for (auto line : read_lines(a.queries)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty() || line.front() == '#') continue;
    const auto d = disclosure::gate_evaluate(line, policy, t, log);
    (d.released ? released : refused)++;
    body += csv_cell(d.query_id) + "," + csv_cell(d.actor) + "," + std::to_string(d.level) + "," +
            (d.released ? "release" : "refuse") + "," + (d.plan_level ? std::to_string(*d.plan_level) : "") + "," +
            (d.released ? format_double(d.measured_risk) : "") + "," + csv_cell(d.reason) + "," +
            d.response_digest + "\n";
  }
  emit(a.out, h.text() + body, out);
  write_file(a.audit, log.text());
  write_file(anchor_file, disclosure::format_anchor(log.anchor()));
  if (!a.out.empty()) out << "released=" << released << " refused=" << refused << " audit_entries=" << log.size() << "\n";
  return kExitOk;
}

struct AuditVerifyArgs {
  std::string log, anchor;
  bool no_anchor = false;
};

inline int run_audit_verify(const AuditVerifyArgs& a, std::ostream& out) {
  const auto lines = load_log_lines(a.log);
  std::optional<disclosure::AuditAnchor> anchor;
  const std::string anchor_file = anchor_path(a.log, a.anchor);
  if (!a.no_anchor && (!a.anchor.empty() || std::filesystem::exists(anchor_file)))
    anchor = disclosure::parse_anchor(read_file(anchor_file));
  const auto report = disclosure::verify_lines(lines, anchor);
  if (report.ok) {
    out << "ok entries=" << lines.size() << (anchor ? " anchored" : "") << "\n";
    return kExitOk;
  }
  out << "tampered seq=" << report.failing_index << " reason=" << report.reason << "\n";
  return kExitDomain;
}

// ------------------------------------------------------------- dispatch

inline int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"linkguard: record linkage, private matching and disclosure limitation toolkit", "linkguard"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  SynthArgs synth;
  std::optional<std::uint64_t> synth_seed;
  auto* s = app.add_subcommand("synth", "generate a synthetic linkage corpus or microtable");
  s->add_option("--kind", synth.kind, "pairs or micro")->check(CLI::IsMember({"pairs", "micro"}));
  s->add_option("--n", synth.n, "records per file")->check(CLI::Range(1, 10'000'000));
  s->add_option("--overlap", synth.overlap, "fraction of fileB that copies fileA")->check(CLI::Range(0.0, 1.0));
  s->add_option("--error-rate", synth.error_rate, "per-field edit probability")->check(CLI::Range(0.0, 1.0));
  s->add_option("--missing-rate", synth.missing_rate, "per-field blanking probability")->check(CLI::Range(0.0, 1.0));
  s->add_option("--seed", synth_seed, "RNG seed")->required();
  s->add_option("--out-dir", synth.out_dir, "output directory")->required();

  LinkArgs link;
  auto* l = app.add_subcommand("link", "probabilistic linkage of two files");
  l->add_option("--a", link.file_a, "file A (CSV)")->required()->check(CLI::ExistingFile);
  l->add_option("--b", link.file_b, "file B (CSV)")->required()->check(CLI::ExistingFile);
  l->add_option("--config", link.config, "linkage job file")->check(CLI::ExistingFile);
  l->add_option("--truth", link.truth, "true pairs for scoring")->check(CLI::ExistingFile);
  l->add_option("--out", link.out, "report path (default stdout)");
  l->add_option("--pairs", link.pairs, "link and possible pairs path");

  BaselineArgs base;
  auto* b = app.add_subcommand("baseline", "exact fixed-point distribution of a random matching");
  b->add_option("--n", base.n, "number of records")->required()->check(CLI::Range(1u, baseline::kDefaultTableCap));
  b->add_flag("--moments", base.moments, "emit mean and variance instead of the pmf");
  b->add_option("--out", base.out, "output path (default stdout)");

  PmatchArgs pm;
  std::optional<std::uint64_t> pm_seed;
  auto* p = app.add_subcommand("pmatch", "commutative-encryption private set intersection");
  p->add_option("--role", pm.role, "initiator, responder or both");
  p->add_option("--transport", pm.transport, "loopback or two-process (role both)");
  p->add_option("--a", pm.list_a, "initiator items, one per line")->check(CLI::ExistingFile);
  p->add_option("--b", pm.list_b, "responder items, one per line")->check(CLI::ExistingFile);
  p->add_option("--dictionary,--dict", pm.dictionary, "dictionary for the inflation demo")->check(CLI::ExistingFile);
  p->add_option("--listen", pm.listen, "host:port to accept one peer on");
  p->add_option("--connect", pm.connect, "host:port of the peer");
  p->add_option("--params", pm.params, "group parameter file")->check(CLI::ExistingFile);
  p->add_option("--bits", pm.bits, "modulus size when deriving the group")->check(CLI::Range(256u, 4096u));
  p->add_option("--group-label", pm.group_label, "seed label for group derivation");
  p->add_flag("--toy", pm.toy, "use the 23-element toy group (insecure)");
  p->add_flag("--honest", pm.honest, "initiator returns the result to the responder");
  p->add_flag("--no-shuffle", pm.no_shuffle, "responder keeps list order");
  p->add_option("--demo", pm.demo, "asymmetry or inflation");
  p->add_option("--seed", pm_seed, "RNG seed for keys and shuffle")->required();
  p->add_option("--out", pm.out, "output path (default stdout)");
  p->add_option("--transcript", pm.transcript, "initiator transcript path");

  ReleaseArgs anon;
  auto* an = app.add_subcommand("anonymize", "release a microtable through one method");
  an->add_option("--in", anon.input, "microtable CSV")->required()->check(CLI::ExistingFile);
  an->add_option("--method", anon.method, "microaggregate or noise");
  an->add_option("--k", anon.k, "group size")->check(CLI::Range(std::size_t{2}, std::size_t{1} << 32));
  an->add_option("--stat", anon.stat, "mean or sum")->check(CLI::IsMember({"mean", "sum"}));
  an->add_option("--lambda", anon.lambda, "noise scale in column sd units")->check(CLI::NonNegativeNumber);
  an->add_option("--seed", anon.seed, "RNG seed (noise)");
  an->add_option("--out", anon.out, "output path (default stdout)");

  ReleaseArgs ru;
  auto* r = app.add_subcommand("rumap", "risk-utility sweep over one method parameter");
  r->add_option("--in", ru.input, "microtable CSV")->required()->check(CLI::ExistingFile);
  r->add_option("--method", ru.method, "microaggregate or noise");
  r->add_option("--grid", ru.grid, "comma-separated parameter values")->required();
  r->add_option("--stat", ru.stat, "mean or sum")->check(CLI::IsMember({"mean", "sum"}));
  r->add_option("--seed", ru.seed, "RNG seed (noise)");
  r->add_option("--out", ru.out, "output path (default stdout)");

  GateArgs gate;
  auto* g = app.add_subcommand("gate", "replay a query log through the policy gate");
  g->add_option("--in", gate.input, "microtable CSV")->required()->check(CLI::ExistingFile);
  g->add_option("--policy", gate.policy, "policy file")->required()->check(CLI::ExistingFile);
  g->add_option("--queries", gate.queries, "query log, one query per line")->required()->check(CLI::ExistingFile);
  g->add_option("--out", gate.out, "decision path (default stdout)");
  g->add_option("--audit", gate.audit, "audit log path")->required();
  g->add_option("--anchor", gate.anchor, "anchor path (default <audit>.anchor)");
  g->add_flag("--append", gate.append, "continue an existing, verified audit log");
  g->add_flag("--wall-clock", gate.wall_clock, "stamp entries with system UTC time");

  AuditVerifyArgs av;
  auto* v = app.add_subcommand("audit-verify", "check an audit log's hash chain");
  v->add_option("--log", av.log, "audit log path")->required()->check(CLI::ExistingFile);
  v->add_option("--anchor", av.anchor, "anchor path (default <log>.anchor when present)")->check(CLI::ExistingFile);
  v->add_flag("--no-anchor", av.no_anchor, "ignore any anchor file");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    const auto subs = app.get_subcommands();
    err << (subs.empty() ? app.help() : subs.front()->help());
    return kExitUsage;
  }

  try {
    if (s->parsed()) {
      synth.seed = *synth_seed;
      return run_synth(synth, out);
    }
    if (l->parsed()) return run_link(link, out);
    if (b->parsed()) return run_baseline(base, out);
    if (p->parsed()) {
      pm.seed = *pm_seed;
      return run_pmatch(pm, out);
    }
    if (an->parsed()) return run_anonymize(anon, out);
    if (r->parsed()) return run_rumap(ru, out);
    if (g->parsed()) return run_gate(gate, out);
    if (v->parsed()) return run_audit_verify(av, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomain;
  }
  err << app.help();
  return kExitUsage;
}

}  // namespace linkguard::cli

#endif  // LINKGUARD_TOOLS_CLI_HPP_
