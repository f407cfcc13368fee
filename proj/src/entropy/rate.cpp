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

#include "entropy/rate.hpp"

#include <cmath>
#include <numeric>

#include "common/error.hpp"
#include "entropy/checkerboard.hpp"

namespace mcvst::entropy {

namespace {

double neg_log2_sum(std::span<const double> probs)
{
    double bits = 0.0;
    for (double p : probs) {
        if (!(p > 0.0 && p <= 1.0))
            fail(ErrorCode::Internal, "probability outside (0, 1] reached the rate accountant");
        bits -= std::log2(p);
    }
    return bits;
}

} // namespace

std::vector<std::size_t> pass_elements(const Shape3& shape, std::size_t group, std::size_t context_group,
                                       bool anchors)
{
    require(context_group >= 1 && (group + 1) * context_group <= shape.channels, ErrorCode::InvalidInput,
            "group index out of range");
    std::vector<std::size_t> out;
    for (std::size_t c = group * context_group; c < (group + 1) * context_group; ++c)
        for (std::size_t h = 0; h < shape.height; ++h)
            for (std::size_t w = 0; w < shape.width; ++w)
                if (is_anchor(h, w) == anchors)
                    out.push_back((c * shape.height + h) * shape.width + w);
    return out;
}

double group_rate(std::span<const double> anchor_probs, std::span<const double> non_anchor_probs, double eta)
{
    require(eta >= 0.0 && std::isfinite(eta), ErrorCode::InvalidInput, "eta must be non-negative");
    return eta * (neg_log2_sum(anchor_probs) + neg_log2_sum(non_anchor_probs));
}

double group_rate(std::span<const double> probs, double eta)
{
    return group_rate(probs, {}, eta);
}

double total_rate(std::span<const double> group_rates)
{
    for (double k : group_rates)
        require(k >= 0.0, ErrorCode::InvalidInput, "group rates must be non-negative");
    return std::accumulate(group_rates.begin(), group_rates.end(), 0.0);
}

double transmission_cost(double k_c, double k_v, double k_cz, double k_vz)
{
    require(k_c >= 0.0 && k_v >= 0.0 && k_cz >= 0.0 && k_vz >= 0.0, ErrorCode::InvalidInput,
            "bandwidth cost components must be non-negative");
    return k_c + k_v + k_cz + k_vz;
}

double cbr(std::span<const double> frame_costs, std::size_t frames, std::size_t height, std::size_t width)
{
    require(frames >= 1 && height >= 1 && width >= 1, ErrorCode::InvalidInput, "CBR denominator is zero");
    const double total = std::accumulate(frame_costs.begin(), frame_costs.end(), 0.0);
    return total / (static_cast<double>(frames) * static_cast<double>(height) * static_cast<double>(width) * 3.0);
}

double diagnostic_loss(double k_t, double lambda, double distortion_received, double distortion_lossless)
{
    return k_t + lambda * (distortion_received + distortion_lossless);
}

void RateReport::close()
{
    k_t = transmission_cost(k_c, k_v, k_cz, k_vz);
}

} // namespace mcvst::entropy
