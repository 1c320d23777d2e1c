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

#include "cli.hpp"

#include <gtest/gtest.h>
#include <unistd.h>

#include <filesystem>
#include <map>
#include <sstream>

namespace linkguard::cli {
namespace {

namespace fs = std::filesystem;

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  Run r;
  r.code = dispatch(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("linkguard-cli-" + std::to_string(::getpid()) + "-" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  void write(const std::string& name, const std::string& text) const { write_file(path(name), text); }

  // Data rows of a CSV output, skipping the '#' block and the column header.
  static std::vector<std::vector<std::string>> rows(const std::string& text) {
    std::vector<std::vector<std::string>> out;
    std::istringstream in(text);
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      if (header) {
        header = false;
        continue;
      }
      out.push_back(split(line, ','));
    }
    return out;
  }

  static std::string value_of(const std::string& text, const std::string& key) {
    for (const auto& r : rows(text))
      if (r.size() >= 2 && r[0] == key) return r[1];
    return "";
  }

  fs::path dir_;
};

TEST_F(CliTest, BaselinePmfRowsSumToOne) {
  const auto r = run({"baseline", "--n", "4"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto table = rows(r.out);
  ASSERT_EQ(table.size(), 5u);  // r = 0..4
  // Fixed points of the 24 permutations of four items: 9, 8, 6, 0, 1.
  const double expected[] = {9.0 / 24, 8.0 / 24, 6.0 / 24, 0.0, 1.0 / 24};
  double total = 0.0;
  for (std::size_t i = 0; i < table.size(); ++i) {
    const double p = *parse_double(table[i][1]);
    EXPECT_DOUBLE_EQ(p, expected[i]);
    total += p;
  }
  EXPECT_NEAR(total, 1.0, 1e-15);
  EXPECT_NE(r.out.find("# command: baseline"), std::string::npos);
}

TEST_F(CliTest, BaselineMoments) {
  const auto r = run({"baseline", "--n", "30", "--moments"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(value_of(r.out, "mean"), "1");
  EXPECT_EQ(value_of(r.out, "variance"), "1");
}

TEST_F(CliTest, UsageErrorsExitTwo) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"baseline", "--n", "4", "--bogus"}).code, 2);
  EXPECT_EQ(run({"baseline", "--n", "0"}).code, 2);
  EXPECT_EQ(run({"synth", "--out-dir", path("x")}).code, 2);  // no --seed
  EXPECT_EQ(run({"link", "--a", path("missing.csv"), "--b", path("missing.csv")}).code, 2);
  const auto r = run({"frobnicate"});
  EXPECT_FALSE(r.err.empty());
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST_F(CliTest, StochasticPathsRequireSeed) {
  ASSERT_EQ(run({"synth", "--kind", "micro", "--n", "40", "--seed", "1", "--out-dir", path("m")}).code, 0);
  const auto t = path("m/microtable.csv");
  EXPECT_EQ(run({"anonymize", "--in", t, "--method", "noise"}).code, 2);
  EXPECT_EQ(run({"rumap", "--in", t, "--method", "noise", "--grid", "0,1"}).code, 2);
  EXPECT_EQ(run({"pmatch", "--a", t, "--b", t}).code, 2);
  EXPECT_EQ(run({"anonymize", "--in", t, "--method", "microaggregate", "--k", "4"}).code, 0);
}

TEST_F(CliTest, DomainErrorsExitOne) {
  write("bad.csv", "id,x\nr1,1\nr1,2\n");
  const auto r = run({"anonymize", "--in", path("bad.csv"), "--k", "2"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("duplicate id"), std::string::npos);
  write("one.csv", "id,x\nr1,1\n");
  EXPECT_EQ(run({"anonymize", "--in", path("one.csv"), "--k", "2"}).code, 1);
}

TEST_F(CliTest, LinkCleanCopyIsPerfect) {
  ASSERT_EQ(run({"synth", "--n", "300", "--seed", "11", "--out-dir", path("c")}).code, 0);
  const auto r = run({"link", "--a", path("c/file_a.csv"), "--b", path("c/file_b.csv"), "--truth",
                      path("c/truth.csv"), "--pairs", path("pairs.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(value_of(r.out, "precision"), "1");
  EXPECT_EQ(value_of(r.out, "recall"), "1");
  EXPECT_EQ(rows(read_file(path("pairs.csv"))).size(), 300u);
  EXPECT_EQ(value_of(r.out, "links"), "300");
}

TEST_F(CliTest, LinkWithConfigFile) {
  ASSERT_EQ(run({"synth", "--n", "200", "--seed", "3", "--out-dir", path("c")}).code, 0);
  write("job.conf", linkage::format_link_job(linkage::synthetic_link_job()));
  const auto r = run({"link", "--a", path("c/file_a.csv"), "--b", path("c/file_b.csv"), "--config", path("job.conf"),
                      "--truth", path("c/truth.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(value_of(r.out, "recall"), "1");
  write("broken.conf", "schema = id:text\nfeature.x = equality:nope\n");
  EXPECT_EQ(run({"link", "--a", path("c/file_a.csv"), "--b", path("c/file_b.csv"), "--config", path("broken.conf")})
                .code,
            1);
}

TEST_F(CliTest, PmatchLocalRunAndDemos) {
  write("a.txt", "alice\nbob\ncarol\n");
  write("b.txt", "carol\nalice\nzoe\n");
  write("dict.txt", "alice\ncarol\nzoe\nyann\n");
  auto r = run({"pmatch", "--a", path("a.txt"), "--b", path("b.txt"), "--seed", "4", "--bits", "256"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(value_of(r.out, "intersection_count"), "2");
  EXPECT_EQ(value_of(r.out, "responder_learned_count"), "0");
  r = run({"pmatch", "--demo", "asymmetry", "--a", path("a.txt"), "--b", path("b.txt"), "--seed", "4", "--bits",
           "256"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(value_of(r.out, "responder_knowledge_count"), "0");
  EXPECT_EQ(value_of(r.out, "honest_responder_learned_count"), "2");
  r = run({"pmatch", "--demo", "inflation", "--dictionary", path("dict.txt"), "--b", path("b.txt"), "--seed", "4",
           "--bits", "256"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(value_of(r.out, "recovery_rate"), "1");
  EXPECT_EQ(run({"pmatch", "--demo", "inflation", "--dict", path("dict.txt"), "--b", path("b.txt"), "--seed", "4",
                 "--bits", "256"}).out,
            r.out);
  EXPECT_EQ(run({"pmatch", "--a", path("a.txt"), "--b", path("b.txt"), "--seed", "4", "--demo", "x"}).code, 2);
}

TEST_F(CliTest, AuditVerifyReportsFailingSeq) {
  ASSERT_EQ(run({"synth", "--kind", "micro", "--n", "120", "--seed", "2", "--out-dir", path("m")}).code, 0);
  write("policy.conf", "levels = 2\nlevel.0.max_risk = 0\nlevel.0.method = microaggregate\nlevel.0.k = 5\n"
                       "level.1.max_risk = 1\nlevel.1.method = identity\n");
  write("q.txt", "q1,a,0,*,mean\nq2,a,1,age>30,rows\nq3,b,1,*,sum\nq4,b,0,age<50,mean\n");
  const auto g = run({"gate", "--in", path("m/microtable.csv"), "--policy", path("policy.conf"), "--queries",
                      path("q.txt"), "--audit", path("audit.log"), "--out", path("decisions.csv")});
  ASSERT_EQ(g.code, 0) << g.err;
  EXPECT_EQ(rows(read_file(path("decisions.csv"))).size(), 4u);
  auto ok = run({"audit-verify", "--log", path("audit.log")});
  EXPECT_EQ(ok.code, 0);
  EXPECT_EQ(ok.out, "ok entries=4 anchored\n");

  auto lines = read_lines(path("audit.log"));
  lines[1][20] = lines[1][20] == 'a' ? 'b' : 'a';
  std::string text;
  for (const auto& l : lines) text += l + "\n";
  write("audit.log", text);
  const auto bad = run({"audit-verify", "--log", path("audit.log")});
  EXPECT_EQ(bad.code, 1);
  EXPECT_EQ(bad.out.rfind("tampered seq=", 0), 0u) << bad.out;
}

TEST_F(CliTest, GateAppendContinuesChain) {
  ASSERT_EQ(run({"synth", "--kind", "micro", "--n", "60", "--seed", "2", "--out-dir", path("m")}).code, 0);
  write("policy.conf", "levels = 1\nlevel.0.max_risk = 1\nlevel.0.method = identity\n");
  write("q.txt", "q1,a,0,*,mean\n");
  const std::vector<std::string> args{"gate", "--in", path("m/microtable.csv"), "--policy", path("policy.conf"),
                                      "--queries", path("q.txt"), "--audit", path("audit.log"),
                                      "--out", path("d.csv"), "--append"};
  ASSERT_EQ(run(args).code, 0);
  ASSERT_EQ(run(args).code, 0);
  EXPECT_EQ(run({"audit-verify", "--log", path("audit.log")}).out, "ok entries=2 anchored\n");
  write("audit.log", "00\n");
  EXPECT_EQ(run(args).code, 1);  // refuses to extend an unverifiable log
}

// Every subcommand, run twice with the same arguments, writes the same bytes.
TEST_F(CliTest, EverySubcommandIsDeterministic) {
  write("a.txt", "alice\nbob\ncarol\ndave\n");
  write("b.txt", "carol\nerin\nalice\n");
  write("dict.txt", "alice\nbob\ncarol\nerin\n");
  write("policy.conf", "levels = 3\nlevel.0.max_risk = 0\nlevel.0.method = microaggregate\nlevel.0.k = 8\n"
                       "level.1.max_risk = 0.3\nlevel.1.method = noise\nlevel.1.lambda = 0.5\nlevel.1.seed = 3\n"
                       "level.2.max_risk = 1\nlevel.2.method = identity\n");
  write("q.txt", "q1,a,0,*,mean\nq2,a,1,age>30,rows\nq3,b,2,weight<70,sum\nq4,c,1,age<25&weight>60,rows\n");

  auto files_for = [&](const std::string& tag) {
    const std::string d = path(tag);
    fs::create_directories(d);
    std::vector<std::vector<std::string>> cmds = {
        {"synth", "--n", "150", "--error-rate", "0.2", "--seed", "9", "--out-dir", d + "/corpus"},
        {"synth", "--kind", "micro", "--n", "150", "--seed", "9", "--out-dir", d + "/micro"},
        {"link", "--a", d + "/corpus/file_a.csv", "--b", d + "/corpus/file_b.csv", "--truth",
         d + "/corpus/truth.csv", "--out", d + "/link.csv", "--pairs", d + "/pairs.csv"},
        {"baseline", "--n", "25", "--out", d + "/baseline.csv"},
        {"pmatch", "--a", path("a.txt"), "--b", path("b.txt"), "--seed", "6", "--bits", "256", "--out",
         d + "/pm.csv", "--transcript", d + "/pm_transcript.csv"},
        {"pmatch", "--a", path("a.txt"), "--b", path("b.txt"), "--seed", "6", "--bits", "256", "--transport",
         "two-process", "--out", d + "/pm2.csv", "--transcript", d + "/pm2_transcript.csv"},
        {"pmatch", "--demo", "asymmetry", "--a", path("a.txt"), "--b", path("b.txt"), "--seed", "6", "--bits", "256",
         "--out", d + "/asym.csv"},
        {"pmatch", "--demo", "inflation", "--dictionary", path("dict.txt"), "--b", path("b.txt"), "--seed", "6",
         "--bits", "256", "--out", d + "/infl.csv"},
        {"anonymize", "--in", d + "/micro/microtable.csv", "--k", "4", "--out", d + "/anon_k.csv"},
        {"anonymize", "--in", d + "/micro/microtable.csv", "--method", "noise", "--lambda", "0.5", "--seed", "5",
         "--out", d + "/anon_noise.csv"},
        {"rumap", "--in", d + "/micro/microtable.csv", "--grid", "2,4,8", "--out", d + "/ru_k.csv"},
        {"rumap", "--in", d + "/micro/microtable.csv", "--method", "noise", "--grid", "0,0.5,1", "--seed", "5",
         "--out", d + "/ru_noise.csv"},
        {"gate", "--in", d + "/micro/microtable.csv", "--policy", path("policy.conf"), "--queries", path("q.txt"),
         "--audit", d + "/audit.log", "--out", d + "/gate.csv"},
    };
    std::string stdout_text;
    for (const auto& c : cmds) {
      const auto r = run(c);
      EXPECT_EQ(r.code, 0) << c[0] << ": " << r.err;
      stdout_text += r.out;
    }
    const auto v = run({"audit-verify", "--log", d + "/audit.log"});
    EXPECT_EQ(v.code, 0);
    stdout_text += v.out;
    std::map<std::string, std::string> contents;
    for (const auto& e : fs::recursive_directory_iterator(d))
      if (e.is_regular_file()) contents[fs::relative(e.path(), d).string()] = read_file(e.path().string());
    contents["<stdout>"] = stdout_text;
    // Directory names differ between the two runs; compare with them removed.
    for (auto& [name, text] : contents) {
      for (auto at = text.find(d); at != std::string::npos; at = text.find(d)) text.replace(at, d.size(), "<dir>");
    }
    return contents;
  };

  const auto first = files_for("one");
  const auto second = files_for("two");
  ASSERT_EQ(first.size(), second.size());
  EXPECT_GE(first.size(), 20u);
  for (const auto& [name, text] : first) {
    ASSERT_TRUE(second.contains(name)) << name;
    EXPECT_EQ(text, second.at(name)) << name;
  }
}

TEST_F(CliTest, HeaderEchoesSeedAndParams) {
  ASSERT_EQ(run({"synth", "--kind", "micro", "--n", "30", "--seed", "77", "--out-dir", path("m")}).code, 0);
  const auto text = read_file(path("m/microtable.csv"));
  EXPECT_EQ(text.rfind("# linkguard ", 0), 0u);
  EXPECT_NE(text.find("# seed: 77\n"), std::string::npos);
  EXPECT_NE(text.find("# param n=30\n"), std::string::npos);
}

}  // namespace
}  // namespace linkguard::cli
