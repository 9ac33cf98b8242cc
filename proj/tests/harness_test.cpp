// Copyright 2026 The GSFL Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "gsfl/harness.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>

#include "gsfl/errors.hpp"

namespace gsfl::harness {
namespace {

namespace fs = std::filesystem;

Errc error_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an error";
  return Errc::kInvalidArgument;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Scratch : public ::testing::Test {
 protected:
  void SetUp() override {
    dir = fs::temp_directory_path() /
          ("gsfl-harness-" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir);
  }
  void TearDown() override { fs::remove_all(dir); }

  RunConfig config(Mode mode) {
    RunConfig c;
    c.mode = mode;
    c.out = dir;
    return c;
  }

  fs::path dir;
};

TEST(Config, ValidateNamesTheField) {
  auto field_of = [](RunConfig c) {
    try {
      validate(c);
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::kConfigError);
      const std::string what = e.what();
      return what.substr(what.find(": ") + 2, what.find(':', what.find(": ") + 2) - what.find(": ") - 2);
    }
    return std::string("ok");
  };
  RunConfig c;
  EXPECT_EQ(field_of(c), "ok");
  c.n = 0;
  EXPECT_EQ(field_of(c), "n");
  c = {};
  c.m = 3;
  c.n = 4;
  EXPECT_EQ(field_of(c), "m");
  c = {};
  c.t = 0;
  EXPECT_EQ(field_of(c), "t");
  c = {};
  c.d = 0;
  EXPECT_EQ(field_of(c), "d");
  c = {};
  c.samples = 0;
  EXPECT_EQ(field_of(c), "samples");
  for (double eta : {0.0, -1.0, std::nan("")}) {
    c = {};
    c.eta = eta;
    EXPECT_EQ(field_of(c), "eta") << eta;
  }
  c = {};
  c.out = "";
  EXPECT_EQ(field_of(c), "out");
}

TEST(Config, ParsersRoundTripAndReject) {
  for (Mode m : {Mode::kSimulate, Mode::kCosts, Mode::kAttacks}) EXPECT_EQ(parse_mode(mode_name(m)), m);
  for (Format f : {Format::kCsv, Format::kJson, Format::kJsonl}) EXPECT_EQ(parse_format(format_name(f)), f);
  EXPECT_EQ(error_of([] { parse_mode("train"); }), Errc::kConfigError);
  EXPECT_EQ(error_of([] { parse_format("xml"); }), Errc::kConfigError);
}

TEST(Config, CurveProfile) {
  check_curve_profile(std::nullopt);
  check_curve_profile("bls12-381");
  EXPECT_EQ(error_of([] { check_curve_profile("bn254"); }), Errc::kConfigError);
  EXPECT_EQ(error_of([] { check_curve_profile(""); }), Errc::kConfigError);
}

TEST_F(Scratch, CostsReportCarriesTheReferenceGsflRow) {
  RunConfig c = config(Mode::kCosts);
  c.t = 1000;
  c.m = 200;
  c.n = 100;
  const RunReport r = run(c);
  EXPECT_EQ(r.exit_code, kExitOk);
  ASSERT_EQ(r.files.size(), 1u);
  const std::string csv = slurp(dir / "costs.csv");
  EXPECT_NE(csv.find("\nGSFL,1000,200,100,46605.029,690000,201800\n"), std::string::npos) << csv;
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 7);

  c.format = Format::kJson;
  run(c);
  const auto rows = nlohmann::json::parse(slurp(dir / "costs.json"));
  ASSERT_EQ(rows.size(), 6u);
  EXPECT_EQ(rows[5]["algorithm"], "GSFL");
  EXPECT_EQ(rows[5]["signaling_count"], 201800);

  c.format = Format::kJsonl;
  run(c);
  std::istringstream lines(slurp(dir / "costs.jsonl"));
  std::string line;
  int count = 0;
  while (std::getline(lines, line)) {
    EXPECT_TRUE(nlohmann::json::parse(line).contains("communication_bytes"));
    ++count;
  }
  EXPECT_EQ(count, 6);
}

TEST_F(Scratch, SimulateIsDeterministicApartFromWallClock) {
  RunConfig c = config(Mode::kSimulate);
  c.m = 6;
  c.n = 3;
  c.t = 2;
  c.seed = 7;
  const RunReport first = run(c);
  ASSERT_EQ(first.files.size(), 3u);
  const std::string transcript = slurp(dir / "transcript.jsonl");
  const std::string losses = slurp(dir / "losses.csv");
  run(c);
  EXPECT_EQ(slurp(dir / "transcript.jsonl"), transcript);
  EXPECT_EQ(slurp(dir / "losses.csv"), losses);
  EXPECT_EQ(losses.rfind("iteration,loss\n", 0), 0u);
  EXPECT_EQ(std::count(losses.begin(), losses.end(), '\n'), 4);  // header + t + 1
  const std::string timings = slurp(dir / "timings.csv");
  EXPECT_EQ(timings.rfind("role,wall_ms\nadmin,", 0), 0u) << timings;

  c.seed = 8;
  run(c);
  EXPECT_NE(slurp(dir / "transcript.jsonl"), transcript);
}

TEST_F(Scratch, InvalidConfigWritesNothing) {
  RunConfig c = config(Mode::kCosts);
  c.n = c.m + 1;
  EXPECT_EQ(error_of([&] { run(c); }), Errc::kConfigError);
  EXPECT_FALSE(fs::exists(dir));
}

TEST_F(Scratch, UnwritableOutputIsAnIoError) {
  fs::create_directories(dir);
  std::ofstream(dir / "blocker") << "x";
  RunConfig c = config(Mode::kCosts);
  c.out = dir / "blocker" / "nested";
  EXPECT_EQ(error_of([&] { run(c); }), Errc::kIoError);
}

TEST_F(Scratch, AttackModeReportsEveryScenario) {
  const RunReport r = run(config(Mode::kAttacks));
  EXPECT_EQ(r.exit_code, kExitOk);
  EXPECT_TRUE(r.failures.empty());
  const std::string csv = slurp(dir / "attacks.csv");
  EXPECT_EQ(csv.rfind("scenario,passed,checks,detail\n", 0), 0u);
  for (const char* name : {"curious-server", "inference-link", "selected-client-secrecy", "sybil",
                           "dos-reject", "intruder-channel"}) {
    EXPECT_NE(csv.find(std::string("\n") + name + ",true,"), std::string::npos) << name;
  }
}

TEST(Attacks, EveryScenarioPassesAndChecksSomething) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto results = run_attack_scenarios(seed);
    ASSERT_EQ(results.size(), 6u);
    for (const auto& s : results) {
      EXPECT_TRUE(s.passed) << s.name << " seed " << seed << ": " << s.detail;
      EXPECT_GT(s.checks, 5u) << s.name;
    }
  }
}

}  // namespace
}  // namespace gsfl::harness
