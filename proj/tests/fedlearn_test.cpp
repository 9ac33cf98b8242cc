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

#include "gsfl/fedlearn.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gsfl/rng.hpp"

namespace gsfl::fl {
namespace {

Errc error_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an error";
  return Errc::kInvalidArgument;
}

// Straight loop over the definition, accumulated in long double.
std::vector<double> brute_force_average(const std::vector<ClientUpdate>& updates) {
  long double total = 0;
  for (const auto& u : updates) total += u.sample_count;
  std::vector<double> out(updates.front().weights.size());
  for (std::size_t j = 0; j < out.size(); ++j) {
    long double acc = 0;
    for (const auto& u : updates) acc += static_cast<long double>(u.sample_count) * u.weights[j];
    out[j] = static_cast<double>(acc / total);
  }
  return out;
}

std::vector<ClientUpdate> random_updates(Rng& rng, std::size_t k, std::size_t dim) {
  std::vector<ClientUpdate> ups(k);
  for (auto& u : ups) {
    u.sample_count = static_cast<std::uint32_t>(1 + rng.uniform(1000));
    u.weights.resize(dim);
    for (double& w : u.weights) w = rng.normal() * 10.0;
  }
  return ups;
}

TEST(Aggregate, SingleClientReturnsItsWeights) {
  ClientUpdate u{{1.5, -2.25, 3.0}, 7};
  EXPECT_EQ(aggregate(std::vector{u}).weights, u.weights);
}

TEST(Aggregate, EqualCountsGiveElementwiseMean) {
  std::vector<ClientUpdate> ups = {{{1.0, 4.0}, 5}, {{3.0, 8.0}, 5}};
  EXPECT_EQ(aggregate(ups).weights, (std::vector<double>{2.0, 6.0}));
}

TEST(Aggregate, ThreeClientsWeightedByCounts) {
  std::vector<ClientUpdate> ups = {{{1.0, 1.0}, 1}, {{2.0, 2.0}, 2}, {{3.0, 3.0}, 3}};
  for (double w : aggregate(ups).weights) EXPECT_NEAR(w, 14.0 / 6.0, 1e-12);
}

TEST(Aggregate, MatchesBruteForceOracle) {
  Rng rng = Rng::from_u64(5);
  for (int trial = 0; trial < 100; ++trial) {
    auto ups = random_updates(rng, 1 + rng.uniform(20), 1 + rng.uniform(16));
    const auto got = aggregate(ups).weights;
    const auto want = brute_force_average(ups);
    for (std::size_t j = 0; j < got.size(); ++j) {
      EXPECT_LE(std::abs(got[j] - want[j]), 1e-12 * std::max(1.0, std::abs(want[j])));
    }
    const auto p = aggregation_weights(ups);
    double sum = 0;
    for (double v : p) sum += v;
    EXPECT_NEAR(sum, 1.0, 1e-12);
  }
}

TEST(Aggregate, PermutationInvariantBitForBit) {
  Rng rng = Rng::from_u64(6);
  auto ups = random_updates(rng, 12, 8);
  const auto ref = aggregate(ups);
  for (int i = 0; i < 20; ++i) {
    std::shuffle(ups.begin(), ups.end(), rng);
    EXPECT_EQ(aggregate(ups), ref);
  }
}

TEST(Aggregate, Errors) {
  EXPECT_EQ(error_of([] { aggregate(std::vector<ClientUpdate>{}); }), Errc::kEmptyUpdateSet);
  std::vector<ClientUpdate> ups = {{{1.0}, 1}, {{1.0, 2.0}, 1}};
  EXPECT_EQ(error_of([&] { aggregate(ups); }), Errc::kDimensionMismatch);
}

TEST(LocalStep, HandComputedGradientForOnePoint) {
  // x = (2, -1), y = 3, w = (0.5, 4): residual = 1 - 4 - 3 = -6,
  // gradient = x * r = (-12, 6); eta = 0.25 gives w' = (3.5, 2.5).
  Dataset d{2, {2.0, -1.0}, {3.0}};
  ModelParams w{{0.5, 4.0}};
  EXPECT_EQ(gradient(w, d), (std::vector<double>{-12.0, 6.0}));
  ClientUpdate u = local_step(w, d, 0.25);
  EXPECT_NEAR(u.weights[0], 3.5, 1e-12);
  EXPECT_NEAR(u.weights[1], 2.5, 1e-12);
  EXPECT_EQ(u.sample_count, 1u);
  EXPECT_NEAR(loss(w, d), 18.0, 1e-12);
}

TEST(LocalStep, ZeroGradientLeavesModelUnchanged) {
  Dataset d{2, {1.0, 0.0, 0.0, 1.0}, {3.0, -2.0}};
  ModelParams w{{3.0, -2.0}};
  EXPECT_EQ(local_step(w, d, 0.1).weights, w.weights);
}

TEST(LocalStep, Preconditions) {
  Dataset d{2, {1.0, 0.0}, {3.0}};
  ModelParams w{{0.0, 0.0}};
  EXPECT_EQ(error_of([&] { local_step(w, d, 0.0); }), Errc::kInvalidArgument);
  EXPECT_EQ(error_of([&] { local_step(w, d, -1.0); }), Errc::kInvalidArgument);
  EXPECT_EQ(error_of([&] { local_step(ModelParams{{0.0}}, d, 0.1); }), Errc::kDimensionMismatch);
  EXPECT_EQ(error_of([&] { local_step(w, Dataset{2, {}, {}}, 0.1); }), Errc::kInvalidArgument);
}

TEST(Synthetic, DeterministicAndShaped) {
  auto a = make_synthetic(9, 3, 4, 10);
  auto b = make_synthetic(9, 3, 4, 10);
  ASSERT_EQ(a.size(), 3u);
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(a[k].features, b[k].features);
    EXPECT_EQ(a[k].targets, b[k].targets);
    EXPECT_EQ(a[k].rows(), 10u);
  }
  EXPECT_NE(a[0].features, a[1].features);
  EXPECT_EQ(make_synthetic(1, 1, 2, 3).size(), 1u);
  EXPECT_EQ(error_of([] { make_synthetic(1, 0, 2, 3); }), Errc::kInvalidArgument);
}

TEST(Synthetic, FedAvgReducesLoss) {
  auto data = make_synthetic(42, 20, 5, 50);
  ModelParams model{std::vector<double>(5, 0.0)};
  const double initial = global_loss(model, data);
  Rng rng = Rng::from_u64(42);
  std::vector<std::size_t> idx(20);
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  for (int t = 0; t < 20; ++t) {
    std::shuffle(idx.begin(), idx.end(), rng);
    std::vector<ClientUpdate> ups;
    for (std::size_t i = 0; i < 10; ++i) ups.push_back(local_step(model, data[idx[i]], 0.1));
    model = aggregate(ups);
  }
  EXPECT_LT(global_loss(model, data), 0.5 * initial);
}

TEST(Encoding, RoundTripAndLayout) {
  ClientUpdate u{{1.0, -0.5}, 300};
  Bytes b = encode_update(u);
  ASSERT_EQ(b.size(), 4u + 16u + 4u);
  EXPECT_EQ(to_hex(ByteView(b).first(4)), "02000000");
  EXPECT_EQ(to_hex(ByteView(b).subspan(4, 8)), "000000000000f03f");  // 1.0 little-endian
  EXPECT_EQ(to_hex(ByteView(b).last(4)), "2c010000");
  EXPECT_EQ(decode_update(b), u);
  b.pop_back();
  EXPECT_EQ(error_of([&] { decode_update(b); }), Errc::kMalformedMessage);
}

TEST(Encoding, LossCsv) {
  std::ostringstream out;
  std::vector<double> losses = {2.0, 0.5};
  write_loss_csv(out, losses);
  EXPECT_EQ(out.str(), "iteration,loss\n0,2\n1,0.5\n");
}

}  // namespace
}  // namespace gsfl::fl
