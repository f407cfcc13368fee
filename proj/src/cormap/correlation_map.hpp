// SPDX-License-Identifier: Apache-2.0
//
// mcvst: MIMO-OFDM contextual video transmission link simulator
// Copyright (C) 2026 The mcvst authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

// Context-subcarrier correlation map.
//
// Context group i (m_c feature channels) and sampled subcarrier group j are
// embedded into a common unit sphere; the map entry is the temperature softmax
// of their cosine similarity over j:
//     m_ij = exp(sim_ij / tau) / sum_j exp(sim_ij / tau)

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "common/tensor.hpp"
#include "sampling/sampling.hpp"

namespace mcvst::cormap {

using CMatrix = Eigen::MatrixXcd;

struct MapConfig {
    std::size_t feature_channels = 64;  // L
    std::size_t context_group = 8;      // m_c
    std::size_t subcarrier_group = 8;   // m_h
    double temperature = 0.07;          // tau
    std::size_t embed_dim = 32;         // d_e

    std::size_t rows() const noexcept { return feature_channels / context_group; }
    std::size_t cols(std::size_t n_subcarriers) const noexcept { return n_subcarriers / subcarrier_group; }

    void validate(std::size_t n_subcarriers) const;
};

// Maps a raw real vector to a unit vector; a zero result maps to e_0.
class FeatureEmbedder {
public:
    virtual ~FeatureEmbedder() = default;
    virtual std::size_t input_dim() const = 0;
    virtual std::size_t output_dim() const = 0;
    virtual Eigen::VectorXd embed(std::span<const double> raw) const = 0;
};

// Fixed Gaussian projection W (d_e x n, entries N(0, 1/n)) followed by L2 normalization.
class ProjectionEmbedder final : public FeatureEmbedder {
public:
    ProjectionEmbedder(std::size_t input_dim, std::size_t output_dim, std::uint64_t seed);

    std::size_t input_dim() const override { return static_cast<std::size_t>(weights_.cols()); }
    std::size_t output_dim() const override { return static_cast<std::size_t>(weights_.rows()); }
    Eigen::VectorXd embed(std::span<const double> raw) const override;

private:
    Eigen::MatrixXd weights_;
};

Eigen::VectorXd normalize_or_basis(const Eigen::VectorXd& v);

struct Embedders {
    std::shared_ptr<const FeatureEmbedder> context;  // input m_c
    std::shared_ptr<const FeatureEmbedder> csi;      // input 2 * N_r * N_t

    static Embedders seeded(const MapConfig& config, std::size_t n_rx, std::size_t n_tx, std::uint64_t model_seed);
};

// Spatial mean of each channel in the group's m_c x H' x W' slab, then embed.
Eigen::VectorXd embed_context(const RealGrid& context, std::size_t group, std::size_t context_group,
                              const FeatureEmbedder& embedder);

// Interleaved (re, im) row-major flattening of h, then embed.
Eigen::VectorXd embed_csi(const CMatrix& h, const FeatureEmbedder& embedder);

struct CorrelationMap {
    std::uint64_t t = 0;
    Eigen::MatrixXd values;  // (L / m_c) x (N_s / m_h), row-stochastic

    std::size_t rows() const noexcept { return static_cast<std::size_t>(values.rows()); }
    std::size_t cols() const noexcept { return static_cast<std::size_t>(values.cols()); }
};

// Row-wise softmax of similarities / tau (max-subtracted).
Eigen::MatrixXd softmax_rows(const Eigen::MatrixXd& similarities, double temperature);

CorrelationMap build_map(const RealGrid& context, const sampling::SampledCsi& csi, const MapConfig& config,
                         const Embedders& embedders);

} // namespace mcvst::cormap
