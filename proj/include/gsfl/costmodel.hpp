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

// Analytic cost comparison between GSFL and five secure-aggregation baselines.
//
// All time arithmetic is integral, in thousandths of a millisecond, so totals
// such as 80.6 + 999 * 46.571 come out exact. Baselines are formulas only.

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gsfl::cost {

/// A duration in thousandths of a millisecond.
struct Millis {
  std::int64_t thousandths = 0;

  double ms() const { return static_cast<double>(thousandths) / 1000.0; }
  double seconds() const { return static_cast<double>(thousandths) / 1e6; }
  /// Fixed three decimals, e.g. "46605.029".
  std::string str() const;

  friend Millis operator+(Millis a, Millis b) { return {a.thousandths + b.thousandths}; }
  friend Millis operator*(std::int64_t k, Millis a) { return {k * a.thousandths}; }
  friend auto operator<=>(const Millis&, const Millis&) = default;
};

/// Per-operation costs. Defaults are the reference measurements the
/// comparison is built on; any of them may be overridden.
struct UnitCosts {
  Millis aes{161};
  Millis add_sub{1};
  Millis pairing{4510};
  Millis div{1220};
  Millis exp{1000};
  Millis hash{67};
  Millis mod{1240};
  Millis mul{612};
  Millis point_mul{1250};
  Millis rand{45};
  Millis xor_op{2};
};

/// Every intermediate term of the GSFL accounting.
struct GsflBreakdown {
  Millis admin;      // div + 3 exp + 2 rand
  Millis c3;         // exp + mul + add_sub
  Millis binding;    // 9 exp + 3 pairing + 4 mul
  Millis signing;    // 5 add_sub + 5 mul
  Millis challenge;  // hash
  Millis sig;
  Millis enc;        // 2 exp + mul
  Millis client;     // sig + enc
  Millis dec;        // 2 exp + mul + add_sub
  Millis ver_binding;  // 8 mul + 12 exp + 5 pairing + div
  Millis ver;          // ver_binding + hash
  Millis agg;          // add_sub + mul
  Millis server;       // dec + ver + agg
  Millis first_exact;  // admin + client + server
  Millis first;        // first_exact rounded to kFirstIterationQuantum
  Millis subsequent;   // enc + dec + ver + agg
};

/// Reference totals carry the first iteration at 0.1 ms resolution (80.604
/// is used as 80.6); gsfl_computation rounds the same way to match them.
inline constexpr Millis kFirstIterationQuantum{100};

GsflBreakdown gsfl_breakdown(const UnitCosts& u = {});

/// first + (t - 1) * subsequent. Throws kInvalidIterations for t = 0.
Millis gsfl_computation(std::uint64_t t, const UnitCosts& u = {});

enum class Algorithm { kRunhuaXu, kChai, kBonawitz, kSun, kXu, kGsfl };

inline constexpr std::array<Algorithm, 6> kAllAlgorithms = {
    Algorithm::kRunhuaXu, Algorithm::kChai, Algorithm::kBonawitz,
    Algorithm::kSun,      Algorithm::kXu,   Algorithm::kGsfl};

std::string_view algorithm_name(Algorithm a);
/// Accepts the names produced by algorithm_name. Throws kUnknownAlgorithm.
Algorithm parse_algorithm(std::string_view name);

/// Per-iteration formula times t for the five baselines. Pairwise key
/// agreement is charged n(n-1) exponentiations per iteration (Bonawitz, Xu)
/// or a hundredth of that (Sun). Throws kUnknownAlgorithm for kGsfl,
/// kInvalidIterations for t = 0 and kInvalidCounts for n = 0.
Millis baseline_computation(Algorithm alg, std::uint64_t t, std::uint64_t n, const UnitCosts& u = {});

/// Either of the two above.
Millis computation(Algorithm alg, std::uint64_t t, std::uint64_t n, const UnitCosts& u = {});

/// Bytes sent towards the server per iteration.
std::uint64_t communication_per_iteration(Algorithm alg);
/// Sun's amortized per-iteration bytes before rounding (362.7).
double sun_average_bytes_exact();
/// Throws kInvalidIterations for t = 0.
std::uint64_t communication(Algorithm alg, std::uint64_t t);

/// Message count for a session. Throws kInvalidIterations for t = 0 and
/// kInvalidCounts unless m >= n >= 1.
std::uint64_t signaling(Algorithm alg, std::uint64_t t, std::uint64_t m, std::uint64_t n);

struct MessageField {
  std::string_view name;
  std::uint32_t bits;
};

struct MessageSizeTable {
  std::array<MessageField, 7> fields;
  std::uint32_t total_bits;
  std::uint32_t bytes;   // floor(total_bits / 8)
  double exact_bytes;    // total_bits / 8
};

MessageSizeTable message_size_table();

struct CostReport {
  std::string algorithm;
  std::uint64_t t = 0, m = 0, n = 0;
  Millis computation;
  std::uint64_t communication_bytes = 0;
  std::uint64_t signaling_count = 0;
};

CostReport report(Algorithm alg, std::uint64_t t, std::uint64_t m, std::uint64_t n,
                  const UnitCosts& u = {});
std::vector<CostReport> compare_all(std::uint64_t t, std::uint64_t m, std::uint64_t n,
                                    const UnitCosts& u = {});

/// Header: algorithm,t,m,n,computation_ms,communication_bytes,signaling_count
std::string to_csv(std::span<const CostReport> rows);
/// Array of objects with the same keys.
std::string to_json(std::span<const CostReport> rows);

}  // namespace gsfl::cost
