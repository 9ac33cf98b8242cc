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

#include <array>
#include <cstdint>
#include <limits>
#include <span>
#include <string_view>

#include "gsfl/bytes.hpp"

namespace gsfl {

/// Seedable ChaCha20 keystream generator.
///
/// The same seed always yields the same stream, which is what the simulator
/// and the tests rely on. `from_entropy()` seeds from the operating system for
/// non-reproducible use. Satisfies UniformRandomBitGenerator.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(ByteView seed);
  static Rng from_u64(std::uint64_t seed);
  static Rng from_entropy();

  void fill(std::span<std::uint8_t> out);
  result_type operator()();

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  /// Uniform in [0, bound); bound must be positive.
  std::uint64_t uniform(std::uint64_t bound);
  /// Uniform double in [0, 1) with 53 random bits.
  double unit();
  /// Standard normal deviate (Box-Muller).
  double normal();

  /// Independent child stream, keyed by this stream's key and `label`.
  /// Does not advance the parent.
  Rng fork(std::string_view label) const;

 private:
  void refill();

  std::array<std::uint8_t, 32> key_{};
  std::uint64_t refills_ = 0;
  std::array<std::uint8_t, 1024> buf_{};
  std::size_t pos_ = buf_.size();
  bool has_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

}  // namespace gsfl
