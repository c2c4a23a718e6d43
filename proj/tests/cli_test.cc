// Copyright 2026 The SafeTrend Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Drives the safetrend binary as a subprocess.

#include <sys/wait.h>

#include <algorithm>
#include <cstdio>
#include <string>

#include "absl/strings/str_cat.h"
#include "absl/strings/match.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"
#include "absl/strings/ascii.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "json.hpp"
#include "test_util.h"

namespace safetrend {
namespace {

using ::safetrend::testing::DataPath;
using ::safetrend::testing::ScratchDir;
using ::safetrend::testing::Slurp;
using ::testing::HasSubstr;

struct Outcome {
  int exit_code = -1;
  std::string out;
};

Outcome RunCli(const std::string& args) {
  const std::string cmd = absl::StrCat(SAFETREND_CLI_PATH, " ", args, " 2>/dev/null");
  Outcome o;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return o;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) o.out.append(buf, n);
  const int status = pclose(pipe);
  o.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return o;
}

std::string ExperimentArgs() {
  return absl::StrCat("--corpus ", DataPath("appendix_passages.txt").string(), " --idf ",
                      DataPath("idf_appendix.tsv").string(), " --stopwords ",
                      DataPath("stopwords_en.txt").string());
}

void WriteFile(const std::filesystem::path& p, const std::string& s) {
  FILE* f = std::fopen(p.c_str(), "w");
  std::fputs(s.c_str(), f);
  std::fclose(f);
}

TEST(CliTest, RunWritesTheFourOutputs) {
  const auto dir = ScratchDir("cli_run");
  const Outcome o = RunCli(absl::StrCat("run ", ExperimentArgs(), " --seed 3 --rounds 2 --out ",
                                     (dir / "out").string()));
  ASSERT_EQ(o.exit_code, 0) << o.out;
  EXPECT_THAT(o.out, HasSubstr("oracle match: yes"));
  for (const char* f : {"rankings.csv", "rankings.md", "transcript.jsonl", "meta.json"}) {
    EXPECT_TRUE(std::filesystem::exists(dir / "out" / f)) << f;
  }
  auto meta = nlohmann::json::parse(Slurp(dir / "out" / "meta.json"));
  EXPECT_EQ(meta["seed"], 3);
  EXPECT_EQ(meta["rounds"], 2);
}

TEST(CliTest, RunIsByteReproducible) {
  const auto dir = ScratchDir("cli_repro");
  for (const char* sub : {"a", "b"}) {
    ASSERT_EQ(RunCli(absl::StrCat("run ", ExperimentArgs(), " --seed 11 --agg mean --out ",
                               (dir / sub).string()))
                  .exit_code,
              0);
  }
  EXPECT_EQ(Slurp(dir / "a" / "rankings.csv"), Slurp(dir / "b" / "rankings.csv"));
  EXPECT_EQ(Slurp(dir / "a" / "transcript.jsonl"), Slurp(dir / "b" / "transcript.jsonl"));
}

TEST(CliTest, RunRequiresSeed) {
  const auto dir = ScratchDir("cli_noseed");
  EXPECT_EQ(RunCli(absl::StrCat("run ", ExperimentArgs(), " --out ", dir.string())).exit_code, 2);
}

TEST(CliTest, ConfigErrorsExitTwo) {
  const auto dir = ScratchDir("cli_config");
  const std::string out = " --out " + dir.string();
  EXPECT_EQ(RunCli(absl::StrCat("run ", ExperimentArgs(), " --seed 1 --agg median", out)).exit_code, 2);
  EXPECT_EQ(RunCli(absl::StrCat("run ", ExperimentArgs(), " --seed 1 --oov zero", out)).exit_code, 2);
  EXPECT_EQ(RunCli(absl::StrCat("run ", ExperimentArgs(), " --seed 1 --users 0", out)).exit_code, 2);
  EXPECT_EQ(RunCli(absl::StrCat("run ", ExperimentArgs(), " --seed 1 --share-range -1", out)).exit_code,
            2);
  EXPECT_EQ(RunCli(absl::StrCat("run --corpus /nonexistent --idf ",
                             DataPath("idf_appendix.tsv").string(), " --seed 1", out))
                .exit_code,
            2);
  EXPECT_EQ(RunCli("bogus").exit_code, 2);
  EXPECT_EQ(RunCli("").exit_code, 2);
}

TEST(CliTest, HelpAndVersionExitZero) {
  EXPECT_EQ(RunCli("--help").exit_code, 0);
  const Outcome v = RunCli("--version");
  EXPECT_EQ(v.exit_code, 0);
  EXPECT_THAT(v.out, HasSubstr("0.1.0"));
}

TEST(CliTest, CheckAgreesWithTheOracle) {
  const Outcome o = RunCli(absl::StrCat("check ", ExperimentArgs(), " --seed 0 --seeds 5"));
  EXPECT_EQ(o.exit_code, 0) << o.out;
  EXPECT_THAT(o.out, HasSubstr("5 seed(s), 0 mismatch(es)"));
}

TEST(CliTest, AggregateSumsVectors) {
  const auto dir = ScratchDir("cli_aggregate");
  WriteFile(dir / "v.csv", "0.2, 0.5\n# comment\n0.3,0.25\n\n0.5 0.25\n");
  const Outcome o = RunCli(absl::StrCat("aggregate --seed 4 --vectors ", (dir / "v.csv").string(),
                                     " --transcript ", (dir / "t.jsonl").string()));
  ASSERT_EQ(o.exit_code, 0);
  std::vector<std::string> fields = absl::StrSplit(absl::StripAsciiWhitespace(o.out), ',');
  ASSERT_EQ(fields.size(), 2u);
  EXPECT_NEAR(std::stod(fields[0]), 1.0, 1e-9);
  EXPECT_NEAR(std::stod(fields[1]), 1.0, 1e-9);
  const std::string transcript = Slurp(dir / "t.jsonl");
  EXPECT_EQ(std::count(transcript.begin(), transcript.end(), '\n'), 1 + 9 + 3);
}

TEST(CliTest, AggregateExitCodesForAttacks) {
  const auto dir = ScratchDir("cli_attack");
  WriteFile(dir / "v.csv", "0.2,0.5\n0.3,0.25\n0.5,0.25\n");
  const std::string base = absl::StrCat("aggregate --vectors ", (dir / "v.csv").string());
  EXPECT_EQ(RunCli(base + " --adversary inflate_coordinate --adversary-node 1 "
                       "--adversary-coordinate 1 --adversary-amount 1000")
                .exit_code,
            4);
  EXPECT_EQ(RunCli(base + " --adversary inflate_coordinate --adversary-amount 0.1").exit_code, 0);
  EXPECT_EQ(RunCli(base + " --adversary duplicate_share --adversary-node 2").exit_code, 3);
  EXPECT_EQ(RunCli(base + " --adversary premature_obfuscated").exit_code, 3);
  EXPECT_EQ(RunCli(base + " --adversary sneaky").exit_code, 2);
  WriteFile(dir / "bad.csv", "0.2,abc\n");
  EXPECT_EQ(RunCli(absl::StrCat("aggregate --vectors ", (dir / "bad.csv").string())).exit_code, 2);
}

TEST(CliTest, RankOrdersByPosterior) {
  const auto dir = ScratchDir("cli_rank");
  WriteFile(dir / "l.csv", "phloem,0.1,0.1\nproject,0.5,0.4\nxylem,0.0,0.0\n");
  const Outcome o = RunCli(absl::StrCat("rank --likelihood ", (dir / "l.csv").string(), " --idf ",
                                     DataPath("idf_appendix.tsv").string()));
  ASSERT_EQ(o.exit_code, 0);
  std::vector<std::string> lines = absl::StrSplit(o.out, '\n', absl::SkipEmpty());
  ASSERT_EQ(lines.size(), 4u);
  EXPECT_EQ(lines[0], "keyword,score,rank");
  // 0.9 * 3.1363 > 0.2 * 9.8125, and xylem scores 0.
  EXPECT_TRUE(absl::StartsWith(lines[1], "project,"));
  EXPECT_TRUE(absl::StartsWith(lines[2], "phloem,"));
  EXPECT_EQ(lines[3], "xylem,0,3");

  WriteFile(dir / "bad.csv", "nosuchword,0.5\n");
  EXPECT_EQ(RunCli(absl::StrCat("rank --likelihood ", (dir / "bad.csv").string(), " --idf ",
                             DataPath("idf_appendix.tsv").string()))
                .exit_code,
            2);
}

TEST(CliTest, VocabListsTokensWithDocumentFrequency) {
  const Outcome o = RunCli(absl::StrCat("vocab --corpus ", DataPath("appendix_passages.txt").string(),
                                     " --stopwords ", DataPath("stopwords_en.txt").string()));
  ASSERT_EQ(o.exit_code, 0);
  EXPECT_THAT(o.out, HasSubstr("\nphloem\t"));
  EXPECT_THAT(o.out, ::testing::Not(HasSubstr("\nthe\t")));
}

}  // namespace
}  // namespace safetrend
