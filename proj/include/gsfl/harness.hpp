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

#pragma once

// Run configuration and report writing for the `gsfl` command-line tool,
// plus the attack scenario suite it runs.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gsfl::harness {

enum class Mode { kSimulate, kCosts, kAttacks };
enum class Format { kCsv, kJson, kJsonl };

inline constexpr int kExitOk = 0;
inline constexpr int kExitIoError = 1;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitAcceptanceFailure = 3;

/// Name of the environment variable that selects the curve profile.
inline constexpr std::string_view kCurveProfileEnv = "GSFL_CURVE_PROFILE";

std::string_view mode_name(Mode m);
std::string_view format_name(Format f);
/// File extension without the dot, e.g. "jsonl".
std::string_view extension(Format f);
/// Throw kConfigError naming the offending field.
Mode parse_mode(std::string_view s);
Format parse_format(std::string_view s);

struct RunConfig {
  Mode mode = Mode::kSimulate;
  std::size_t m = 20;
  std::size_t n = 10;
  std::size_t t = 5;
  std::uint64_t seed = 1;
  std::size_t d = 5;
  std::size_t samples = 50;
  double eta = 0.1;
  std::filesystem::path out = "gsfl-out";
  Format format = Format::kCsv;
};

/// Throws kConfigError when m >= n >= 1 fails or any other count is zero or
/// eta is not a positive finite number. The message starts with the field name.
void validate(const RunConfig& config);

/// Accepts an unset variable or the one supported profile. Throws
/// kConfigError otherwise.
void check_curve_profile(std::optional<std::string_view> value);

struct ScenarioResult {
  std::string name;
  bool passed = false;
  std::size_t checks = 0;  // assertions evaluated
  std::string detail;      // first failed assertion, or a one-line summary
};

/// The six attack scenarios, in a fixed order. Each builds its own small
/// group from `seed` and never throws: an unexpected exception fails it.
std::vector<ScenarioResult> run_attack_scenarios(std::uint64_t seed = 1);

ScenarioResult curious_server_scenario(std::uint64_t seed);
ScenarioResult inference_link_scenario(std::uint64_t seed);
ScenarioResult selected_client_secrecy_scenario(std::uint64_t seed);
ScenarioResult sybil_scenario(std::uint64_t seed);
ScenarioResult dos_reject_scenario(std::uint64_t seed);
ScenarioResult intruder_channel_scenario(std::uint64_t seed);

struct RunReport {
  int exit_code = kExitOk;
  std::vector<std::filesystem::path> files;  // in the order written
  std::vector<std::string> failures;         // failed scenario names
};

/// Runs the selected mode after validation and writes its reports under
/// `config.out` (created if missing). Throws kConfigError on a bad config
/// and kIoError when a report cannot be written.
///
///   simulate: transcript.jsonl, losses.csv, timings.<ext>
///   costs:    costs.<ext>
///   attacks:  attacks.<ext>; exit code 3 if any scenario fails
RunReport run(const RunConfig& config);

}  // namespace gsfl::harness
