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

#include "cormap/correlation_map.hpp"

#include <cmath>
#include <string>

#include "common/error.hpp"
#include "common/rng.hpp"

namespace mcvst::cormap {

void MapConfig::validate(std::size_t n_subcarriers) const
{
    require(feature_channels >= 1 && context_group >= 1 && subcarrier_group >= 1, ErrorCode::InvalidConfig,
            "map dimensions must be >= 1");
    if (feature_channels % context_group != 0)
        fail(ErrorCode::InvalidConfig, "context group " + std::to_string(context_group) + " does not divide " +
             std::to_string(feature_channels) + " feature channels");
    require(n_subcarriers % subcarrier_group == 0, ErrorCode::InvalidConfig,
            "subcarrier group does not divide the subcarrier count");
    require(temperature > 0.0 && std::isfinite(temperature), ErrorCode::InvalidConfig, "temperature must be > 0");
    require(embed_dim >= 1, ErrorCode::InvalidConfig, "embed_dim must be >= 1");
}

Eigen::VectorXd normalize_or_basis(const Eigen::VectorXd& v)
{
    const double norm = v.norm();
    if (!(norm > 0.0)) {
        Eigen::VectorXd e = Eigen::VectorXd::Zero(v.size());
        if (e.size() > 0)
            e(0) = 1.0;
        return e;
    }
    return v / norm;
}

ProjectionEmbedder::ProjectionEmbedder(std::size_t input_dim, std::size_t output_dim, std::uint64_t seed)
    : weights_(static_cast<Eigen::Index>(output_dim), static_cast<Eigen::Index>(input_dim))
{
    require(input_dim >= 1 && output_dim >= 1, ErrorCode::InvalidConfig, "embedder dimensions must be >= 1");
    Rng rng(seed);
    const double scale = 1.0 / std::sqrt(static_cast<double>(input_dim));
    for (Eigen::Index r = 0; r < weights_.rows(); ++r)
        for (Eigen::Index c = 0; c < weights_.cols(); ++c)
            weights_(r, c) = scale * rng.gaussian();
}

Eigen::VectorXd ProjectionEmbedder::embed(std::span<const double> raw) const
{
    if (raw.size() != input_dim())
        fail(ErrorCode::InvalidInput,
             "embedder expects " + std::to_string(input_dim()) + " inputs, got " + std::to_string(raw.size()));
    const Eigen::Map<const Eigen::VectorXd> x(raw.data(), static_cast<Eigen::Index>(raw.size()));
    require(x.allFinite(), ErrorCode::InvalidInput, "embedder input has non-finite entries");
    return normalize_or_basis(weights_ * x);
}

Embedders Embedders::seeded(const MapConfig& config, std::size_t n_rx, std::size_t n_tx, std::uint64_t model_seed)
{
    return {std::make_shared<ProjectionEmbedder>(config.context_group, config.embed_dim,
                                                 derive_seed(model_seed, Stream::ContextEmbedder)),
            std::make_shared<ProjectionEmbedder>(2 * n_rx * n_tx, config.embed_dim,
                                                 derive_seed(model_seed, Stream::CsiEmbedder))};
}

Eigen::VectorXd embed_context(const RealGrid& context, std::size_t group, std::size_t context_group,
                              const FeatureEmbedder& embedder)
{
    if (!(context_group >= 1 && (group + 1) * context_group <= context.channels()))
        fail(ErrorCode::InvalidInput, "context group " + std::to_string(group) + " is out of range");
    const std::size_t plane = context.height() * context.width();
    std::vector<double> pooled(context_group, 0.0);
    for (std::size_t k = 0; k < context_group; ++k) {
        const std::size_t c = group * context_group + k;
        double sum = 0.0;
        for (std::size_t h = 0; h < context.height(); ++h)
            for (std::size_t w = 0; w < context.width(); ++w)
                sum += context(c, h, w);
        pooled[k] = plane > 0 ? sum / static_cast<double>(plane) : 0.0;
    }
    return embedder.embed(pooled);
}

Eigen::VectorXd embed_csi(const CMatrix& h, const FeatureEmbedder& embedder)
{
    require(h.allFinite(), ErrorCode::InvalidInput, "CSI matrix has non-finite entries");
    std::vector<double> flat;
    flat.reserve(static_cast<std::size_t>(2 * h.size()));
    for (Eigen::Index r = 0; r < h.rows(); ++r)
        for (Eigen::Index c = 0; c < h.cols(); ++c) {
            flat.push_back(h(r, c).real());
            flat.push_back(h(r, c).imag());
        }
    return embedder.embed(flat);
}

Eigen::MatrixXd softmax_rows(const Eigen::MatrixXd& similarities, double temperature)
{
    require(temperature > 0.0 && std::isfinite(temperature), ErrorCode::InvalidInput, "temperature must be > 0");
    Eigen::MatrixXd out(similarities.rows(), similarities.cols());
    for (Eigen::Index i = 0; i < similarities.rows(); ++i) {
        const double peak = similarities.row(i).maxCoeff();
        double total = 0.0;
        for (Eigen::Index j = 0; j < similarities.cols(); ++j) {
            out(i, j) = std::exp((similarities(i, j) - peak) / temperature);
            total += out(i, j);
        }
        out.row(i) /= total;
    }
    return out;
}

CorrelationMap build_map(const RealGrid& context, const sampling::SampledCsi& csi, const MapConfig& config,
                         const Embedders& embedders)
{
    require(embedders.context && embedders.csi, ErrorCode::InvalidInput, "embedders are not set");
    if (context.channels() != config.feature_channels)
        fail(ErrorCode::InvalidInput, "context has " + std::to_string(context.channels()) + " channels, map expects " +
             std::to_string(config.feature_channels));
    require(config.context_group >= 1 && config.feature_channels % config.context_group == 0,
            ErrorCode::InvalidInput, "context group does not divide the feature channels");
    require(!csi.entries.empty(), ErrorCode::InvalidInput, "sampled CSI is empty");
    require(config.temperature > 0.0, ErrorCode::InvalidInput, "temperature must be > 0");
    require(embedders.context->output_dim() == embedders.csi->output_dim(), ErrorCode::InvalidInput,
            "embedders disagree on the embedding dimension");

    const auto rows = static_cast<Eigen::Index>(config.rows());
    const auto cols = static_cast<Eigen::Index>(csi.entries.size());
    const auto dim = static_cast<Eigen::Index>(embedders.csi->output_dim());

    Eigen::MatrixXd ctx(rows, dim);
    for (Eigen::Index i = 0; i < rows; ++i)
        ctx.row(i) = embed_context(context, static_cast<std::size_t>(i), config.context_group, *embedders.context);
    Eigen::MatrixXd chn(cols, dim);
    for (Eigen::Index j = 0; j < cols; ++j)
        chn.row(j) = embed_csi(csi.entries[static_cast<std::size_t>(j)], *embedders.csi);

    // Unit vectors: cosine similarity is the inner product.
    return {csi.t, softmax_rows(ctx * chn.transpose(), config.temperature)};
}

} // namespace mcvst::cormap
