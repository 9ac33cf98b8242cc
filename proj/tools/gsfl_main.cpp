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

// Command-line front end: simulate a session, tabulate the cost model or run
// the attack scenarios, writing reports into --out.

#include <fmt/format.h>

#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "gsfl/errors.hpp"
#include "gsfl/harness.hpp"

namespace {

std::optional<std::string_view> curve_profile_from_env() {
  const char* v = std::getenv(std::string(gsfl::harness::kCurveProfileEnv).c_str());
  if (v == nullptr) return std::nullopt;
  return std::string_view(v);
}

}  // namespace

int main(int argc, char** argv) {
  using namespace gsfl::harness;

  RunConfig cfg;
  std::string mode = "simulate";
  std::string format = "csv";
  std::string out = cfg.out.string();

  CLI::App app{"Group-signature federated learning: simulation, cost model and attack suite"};
  app.add_option("--mode", mode, "simulate | costs | attacks")->capture_default_str();
  app.add_option("--m", cfg.m, "registered clients")->capture_default_str();
  app.add_option("--n", cfg.n, "clients selected per iteration")->capture_default_str();
  app.add_option("--t", cfg.t, "iterations")->capture_default_str();
  app.add_option("--seed", cfg.seed, "64-bit seed")->capture_default_str();
  app.add_option("--d", cfg.d, "model dimension")->capture_default_str();
  app.add_option("--samples", cfg.samples, "training samples per client")->capture_default_str();
  app.add_option("--eta", cfg.eta, "learning rate")->capture_default_str();
  app.add_option("--out", out, "output directory")->capture_default_str();
  app.add_option("--format", format, "csv | json | jsonl")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfigError;
  }

  try {
    check_curve_profile(curve_profile_from_env());
    cfg.mode = parse_mode(mode);
    cfg.format = parse_format(format);
    cfg.out = out;

    const RunReport report = run(cfg);
    for (const auto& f : report.files) std::cout << f.string() << "\n";
    for (const auto& name : report.failures) std::cerr << "FAIL " << name << "\n";
    return report.exit_code;
  } catch (const gsfl::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.code()) {
      case gsfl::Errc::kConfigError:
      case gsfl::Errc::kInvalidCounts:
      case gsfl::Errc::kInvalidArgument: return kExitConfigError;
      default: return kExitIoError;  // unwritable output or an internal failure
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIoError;
  }
}
