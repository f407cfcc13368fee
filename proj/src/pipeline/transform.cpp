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

#include "pipeline/transform.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <tuple>

#include "common/error.hpp"
#include "common/rng.hpp"

namespace mcvst::pipeline {

namespace {

// Orthonormal luma / two chroma-difference rotation.
const double kColour[3][3] = {
    {1.0 / std::numbers::sqrt3, 1.0 / std::numbers::sqrt3, 1.0 / std::numbers::sqrt3},
    {1.0 / std::numbers::sqrt2, 0.0, -1.0 / std::numbers::sqrt2},
    {1.0 / std::sqrt(6.0), -2.0 / std::sqrt(6.0), 1.0 / std::sqrt(6.0)},
};

} // namespace

std::size_t reflect_index(std::size_t i, std::size_t n) noexcept
{
    const std::size_t m = i % (2 * n);
    return m < n ? m : 2 * n - 1 - m;
}

BlockTransform::BlockTransform(std::size_t block, std::size_t channels, std::uint64_t seed)
    : block_(block), channels_(channels)
{
    require(block >= 1, ErrorCode::InvalidConfig, "transform block must be >= 1");
    require(channels >= 3 * block * block, ErrorCode::InvalidConfig,
            "feature channels must be at least 3 * block^2 for a lossless transform");

    const double b = static_cast<double>(block);
    dct_.resize(block * block);
    for (std::size_t u = 0; u < block; ++u)
        for (std::size_t i = 0; i < block; ++i) {
            const double alpha = u == 0 ? std::sqrt(1.0 / b) : std::sqrt(2.0 / b);
            dct_[u * block + i] = alpha * std::cos(std::numbers::pi * (2.0 * static_cast<double>(i) + 1.0) *
                                                   static_cast<double>(u) / (2.0 * b));
        }

    const std::size_t n = 3 * block * block;
    order_.resize(n);
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    auto key = [&](std::size_t id) {
        const std::size_t colour = id / (block * block);
        const std::size_t u = (id / block) % block;
        const std::size_t v = id % block;
        return std::make_tuple(u + v, colour, u);
    };
    std::stable_sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t c) { return key(a) < key(c); });

    Rng rng(derive_seed(seed, Stream::Transform));
    sign_.resize(n);
    for (auto& s : sign_)
        s = (rng.next_u64() >> 63) ? -1.0 : 1.0;
}

Shape3 BlockTransform::feature_shape(std::size_t height, std::size_t width) const
{
    return {channels_, (height + block_ - 1) / block_, (width + block_ - 1) / block_};
}

RealGrid BlockTransform::encode(const RealGrid& frame) const
{
    require(frame.channels() == 3, ErrorCode::InvalidInput, "frames must have 3 colour channels");
    require(frame.height() >= 1 && frame.width() >= 1, ErrorCode::InvalidInput, "frame is empty");
    const std::size_t H = frame.height();
    const std::size_t W = frame.width();
    const std::size_t B = block_;
    RealGrid out(feature_shape(H, W));
    std::vector<double> pix(3 * B * B);
    std::vector<double> tmp(B * B);
    std::vector<double> coef(3 * B * B);

    for (std::size_t bh = 0; bh < out.height(); ++bh)
        for (std::size_t bw = 0; bw < out.width(); ++bw) {
            // Colour rotation on the reflect-padded block.
            for (std::size_t i = 0; i < B; ++i)
                for (std::size_t j = 0; j < B; ++j) {
                    const std::size_t h = reflect_index(bh * B + i, H);
                    const std::size_t w = reflect_index(bw * B + j, W);
                    const double rgb[3] = {frame(0, h, w), frame(1, h, w), frame(2, h, w)};
                    for (std::size_t k = 0; k < 3; ++k)
                        pix[(k * B + i) * B + j] =
                            kColour[k][0] * rgb[0] + kColour[k][1] * rgb[1] + kColour[k][2] * rgb[2];
                }
            // Separable 2-D DCT per colour plane.
            for (std::size_t k = 0; k < 3; ++k) {
                const double* p = &pix[k * B * B];
                for (std::size_t u = 0; u < B; ++u)
                    for (std::size_t j = 0; j < B; ++j) {
                        double acc = 0.0;
                        for (std::size_t i = 0; i < B; ++i)
                            acc += dct_[u * B + i] * p[i * B + j];
                        tmp[u * B + j] = acc;
                    }
                for (std::size_t u = 0; u < B; ++u)
                    for (std::size_t v = 0; v < B; ++v) {
                        double acc = 0.0;
                        for (std::size_t j = 0; j < B; ++j)
                            acc += dct_[v * B + j] * tmp[u * B + j];
                        coef[(k * B + u) * B + v] = acc;
                    }
            }
            for (std::size_t ch = 0; ch < order_.size(); ++ch)
                out(ch, bh, bw) = sign_[ch] * coef[order_[ch]];
        }
    return out;
}

RealGrid BlockTransform::decode(const RealGrid& features, std::size_t height, std::size_t width) const
{
    require(features.shape() == feature_shape(height, width), ErrorCode::InvalidInput,
            "feature grid does not match the requested frame size");
    const std::size_t B = block_;
    RealGrid out(3, height, width);
    std::vector<double> coef(3 * B * B);
    std::vector<double> tmp(B * B);
    std::vector<double> pix(3 * B * B);

    for (std::size_t bh = 0; bh < features.height(); ++bh)
        for (std::size_t bw = 0; bw < features.width(); ++bw) {
            for (std::size_t ch = 0; ch < order_.size(); ++ch)
                coef[order_[ch]] = sign_[ch] * features(ch, bh, bw);
            for (std::size_t k = 0; k < 3; ++k) {
                const double* c = &coef[k * B * B];
                for (std::size_t u = 0; u < B; ++u)
                    for (std::size_t j = 0; j < B; ++j) {
                        double acc = 0.0;
                        for (std::size_t v = 0; v < B; ++v)
                            acc += dct_[v * B + j] * c[u * B + v];
                        tmp[u * B + j] = acc;
                    }
                for (std::size_t i = 0; i < B; ++i)
                    for (std::size_t j = 0; j < B; ++j) {
                        double acc = 0.0;
                        for (std::size_t u = 0; u < B; ++u)
                            acc += dct_[u * B + i] * tmp[u * B + j];
                        pix[(k * B + i) * B + j] = acc;
                    }
            }
            // Inverse colour rotation is the transpose; padding rows are dropped.
            for (std::size_t i = 0; i < B; ++i)
                for (std::size_t j = 0; j < B; ++j) {
                    const std::size_t h = bh * B + i;
                    const std::size_t w = bw * B + j;
                    if (h >= height || w >= width)
                        continue;
                    for (std::size_t rgb = 0; rgb < 3; ++rgb) {
                        double acc = 0.0;
                        for (std::size_t k = 0; k < 3; ++k)
                            acc += kColour[k][rgb] * pix[(k * B + i) * B + j];
                        out(rgb, h, w) = acc;
                    }
                }
        }
    return out;
}

} // namespace mcvst::pipeline
