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

// Federated averaging over a least-squares model.
//
// Each client holds a dataset (X, y), takes one full-batch gradient step from
// the current global weights, and reports its new weights with its sample
// count. The server combines reports with weights p_k = n_k / sum(n_j).

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "gsfl/bytes.hpp"

namespace gsfl::fl {

struct ModelParams {
  std::vector<double> weights;

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

struct ClientUpdate {
  std::vector<double> weights;
  std::uint32_t sample_count = 0;

  friend bool operator==(const ClientUpdate&, const ClientUpdate&) = default;
};

/// Row-major features with one target per row.
struct Dataset {
  std::size_t dim = 0;
  std::vector<double> features;  // rows * dim
  std::vector<double> targets;   // rows

  std::size_t rows() const { return targets.size(); }
};

/// (1/2N) * ||Xw - y||^2
double loss(const ModelParams& model, const Dataset& data);
/// Sample-weighted loss over the union of all datasets.
double global_loss(const ModelParams& model, std::span<const Dataset> datasets);
/// (1/N) * X^T (Xw - y)
std::vector<double> gradient(const ModelParams& model, const Dataset& data);

/// w - eta * gradient(w). Throws kInvalidArgument for eta <= 0, an empty
/// dataset or a non-finite result, and kDimensionMismatch when shapes differ.
ClientUpdate local_step(const ModelParams& model, const Dataset& data, double eta);

/// Weighted average. Updates are summed in the byte order of their encoding,
/// so the result does not depend on the order they arrived in.
/// Throws kEmptyUpdateSet and kDimensionMismatch.
ModelParams aggregate(std::span<const ClientUpdate> updates);

/// The aggregation weights p_k in input order.
std::vector<double> aggregation_weights(std::span<const ClientUpdate> updates);

/// Gaussian features, shared ground-truth weights, noise level varying by client.
/// Throws kInvalidArgument if any count is zero.
std::vector<Dataset> make_synthetic(std::uint64_t seed, std::size_t clients, std::size_t dim,
                                    std::size_t samples_per_client);

/// u32 LE dimension || dimension * f64 LE || u32 LE sample count
Bytes encode_update(const ClientUpdate& update);
/// Throws kMalformedMessage on any length mismatch.
ClientUpdate decode_update(ByteView bytes);

/// "iteration,loss" header then one row per entry, starting at iteration 0.
void write_loss_csv(std::ostream& out, std::span<const double> losses);

}  // namespace gsfl::fl
