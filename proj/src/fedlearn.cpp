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

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <numeric>
#include <ostream>

#include <fmt/format.h>

#include "gsfl/rng.hpp"

namespace gsfl::fl {

namespace {

static_assert(std::endian::native == std::endian::little,
              "update encoding assumes a little-endian host");

void check_shapes(const ModelParams& model, const Dataset& data) {
  if (data.dim != model.weights.size() || data.features.size() != data.rows() * data.dim) {
    throw Error(Errc::kDimensionMismatch,
                fmt::format("model has {} weights, dataset has dim {}", model.weights.size(), data.dim));
  }
}

// Residuals r = Xw - y.
std::vector<double> residuals(const ModelParams& model, const Dataset& data) {
  std::vector<double> r(data.rows());
  for (std::size_t i = 0; i < data.rows(); ++i) {
    const double* row = data.features.data() + i * data.dim;
    r[i] = std::inner_product(row, row + data.dim, model.weights.begin(), 0.0) - data.targets[i];
  }
  return r;
}

template <typename T>
void put_le(Bytes& out, T v) {
  std::uint8_t raw[sizeof(T)];
  std::memcpy(raw, &v, sizeof(T));
  out.insert(out.end(), raw, raw + sizeof(T));
}

template <typename T>
T get_le(ByteView in, std::size_t offset) {
  T v;
  std::memcpy(&v, in.data() + offset, sizeof(T));
  return v;
}

}  // namespace

double loss(const ModelParams& model, const Dataset& data) {
  check_shapes(model, data);
  if (data.rows() == 0) throw Error(Errc::kInvalidArgument, "dataset is empty");
  const auto r = residuals(model, data);
  return std::inner_product(r.begin(), r.end(), r.begin(), 0.0) / (2.0 * static_cast<double>(data.rows()));
}

double global_loss(const ModelParams& model, std::span<const Dataset> datasets) {
  double total = 0.0;
  std::size_t rows = 0;
  for (const auto& d : datasets) {
    total += loss(model, d) * static_cast<double>(d.rows());
    rows += d.rows();
  }
  if (rows == 0) throw Error(Errc::kInvalidArgument, "no data");
  return total / static_cast<double>(rows);
}

std::vector<double> gradient(const ModelParams& model, const Dataset& data) {
  check_shapes(model, data);
  if (data.rows() == 0) throw Error(Errc::kInvalidArgument, "dataset is empty");
  const auto r = residuals(model, data);
  std::vector<double> g(data.dim, 0.0);
  for (std::size_t i = 0; i < data.rows(); ++i) {
    const double* row = data.features.data() + i * data.dim;
    for (std::size_t j = 0; j < data.dim; ++j) g[j] += row[j] * r[i];
  }
  for (double& v : g) v /= static_cast<double>(data.rows());
  return g;
}

ClientUpdate local_step(const ModelParams& model, const Dataset& data, double eta) {
  if (!(eta > 0.0) || !std::isfinite(eta)) {
    throw Error(Errc::kInvalidArgument, fmt::format("learning rate must be positive, got {}", eta));
  }
  const auto g = gradient(model, data);
  ClientUpdate u{model.weights, static_cast<std::uint32_t>(data.rows())};
  for (std::size_t j = 0; j < g.size(); ++j) {
    u.weights[j] -= eta * g[j];
    if (!std::isfinite(u.weights[j])) throw Error(Errc::kInvalidArgument, "local step diverged");
  }
  return u;
}

std::vector<double> aggregation_weights(std::span<const ClientUpdate> updates) {
  if (updates.empty()) throw Error(Errc::kEmptyUpdateSet, "no updates to aggregate");
  double total = 0.0;
  for (const auto& u : updates) {
    if (u.sample_count == 0) throw Error(Errc::kInvalidArgument, "update with zero samples");
    total += static_cast<double>(u.sample_count);
  }
  std::vector<double> p;
  p.reserve(updates.size());
  for (const auto& u : updates) p.push_back(static_cast<double>(u.sample_count) / total);
  return p;
}

ModelParams aggregate(std::span<const ClientUpdate> updates) {
  if (updates.empty()) throw Error(Errc::kEmptyUpdateSet, "no updates to aggregate");
  const std::size_t dim = updates.front().weights.size();
  for (const auto& u : updates) {
    if (u.weights.size() != dim) {
      throw Error(Errc::kDimensionMismatch,
                  fmt::format("update of dimension {} among dimension {}", u.weights.size(), dim));
    }
  }

  std::vector<std::pair<Bytes, const ClientUpdate*>> ordered;
  ordered.reserve(updates.size());
  for (const auto& u : updates) ordered.emplace_back(encode_update(u), &u);
  std::sort(ordered.begin(), ordered.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  std::vector<ClientUpdate> sorted;
  sorted.reserve(ordered.size());
  for (const auto& [_, u] : ordered) sorted.push_back(*u);
  const auto p = aggregation_weights(sorted);

  ModelParams out{std::vector<double>(dim, 0.0)};
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    for (std::size_t j = 0; j < dim; ++j) out.weights[j] += p[k] * sorted[k].weights[j];
  }
  return out;
}

std::vector<Dataset> make_synthetic(std::uint64_t seed, std::size_t clients, std::size_t dim,
                                    std::size_t samples_per_client) {
  if (clients == 0 || dim == 0 || samples_per_client == 0) {
    throw Error(Errc::kInvalidArgument, "synthetic task needs at least one client, feature and sample");
  }
  Rng base = Rng::from_u64(seed).fork("synthetic");
  Rng truth_rng = base.fork("truth");
  std::vector<double> w_star(dim);
  for (double& w : w_star) w = truth_rng.normal();

  std::vector<Dataset> out;
  out.reserve(clients);
  for (std::size_t k = 0; k < clients; ++k) {
    Rng rng = base.fork(fmt::format("client/{}", k));
    const double noise = 0.05 * static_cast<double>(1 + k % 4);
    Dataset d;
    d.dim = dim;
    d.features.resize(samples_per_client * dim);
    d.targets.resize(samples_per_client);
    for (std::size_t i = 0; i < samples_per_client; ++i) {
      double y = 0.0;
      for (std::size_t j = 0; j < dim; ++j) {
        const double x = rng.normal();
        d.features[i * dim + j] = x;
        y += x * w_star[j];
      }
      d.targets[i] = y + noise * rng.normal();
    }
    out.push_back(std::move(d));
  }
  return out;
}

Bytes encode_update(const ClientUpdate& update) {
  Bytes out;
  out.reserve(8 + 8 * update.weights.size());
  put_le(out, static_cast<std::uint32_t>(update.weights.size()));
  for (double w : update.weights) put_le(out, w);
  put_le(out, update.sample_count);
  return out;
}

ClientUpdate decode_update(ByteView bytes) {
  if (bytes.size() < 8) throw Error(Errc::kMalformedMessage, "update shorter than its header");
  const auto dim = get_le<std::uint32_t>(bytes, 0);
  if (bytes.size() != 8 + 8 * static_cast<std::size_t>(dim)) {
    throw Error(Errc::kMalformedMessage,
                fmt::format("update declares {} weights but has {} bytes", dim, bytes.size()));
  }
  ClientUpdate u;
  u.weights.resize(dim);
  for (std::size_t j = 0; j < dim; ++j) u.weights[j] = get_le<double>(bytes, 4 + 8 * j);
  u.sample_count = get_le<std::uint32_t>(bytes, 4 + 8 * static_cast<std::size_t>(dim));
  return u;
}

void write_loss_csv(std::ostream& out, std::span<const double> losses) {
  out << "iteration,loss\n";
  for (std::size_t i = 0; i < losses.size(); ++i) out << fmt::format("{},{:.17g}\n", i, losses[i]);
}

}  // namespace gsfl::fl
