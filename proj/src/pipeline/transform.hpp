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

// Deterministic stand-in for a learned analysis/synthesis pair.
//
// Each B x B x 3 pixel block goes through an orthonormal colour rotation and
// an orthonormal B x B DCT-II. The 3 B^2 coefficients are ordered from low to
// high spatial frequency (colour interleaved), given seeded signs and placed
// in the first 3 B^2 of L feature channels; the remaining channels stay zero.
// The whole map is an isometry, so decode(encode(x)) = x up to rounding.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "common/tensor.hpp"

namespace mcvst::pipeline {

class BlockTransform {
public:
    // Throws Error(InvalidConfig) unless block >= 1 and channels >= 3 * block^2.
    BlockTransform(std::size_t block, std::size_t channels, std::uint64_t seed);

    std::size_t block() const noexcept { return block_; }
    std::size_t channels() const noexcept { return channels_; }

    // Feature grid shape for an H x W frame (reflect-padded up to a multiple of the block).
    Shape3 feature_shape(std::size_t height, std::size_t width) const;

    // frame: 3 x H x W. Throws Error(InvalidInput) on a wrong channel count or empty frame.
    RealGrid encode(const RealGrid& frame) const;
    // Exact transpose of encode on the padded frame, cropped to height x width.
    RealGrid decode(const RealGrid& features, std::size_t height, std::size_t width) const;

    // Feature channel k carries coefficient order()[k] = (colour * B + u) * B + v, for k < 3 B^2.
    const std::vector<std::size_t>& order() const noexcept { return order_; }

private:
    std::size_t block_;
    std::size_t channels_;
    std::vector<double> dct_;  // B x B, row u = basis function u
    std::vector<std::size_t> order_;
    std::vector<double> sign_;
};

// Mirror index into [0, n) with edge repetition (… 1 0 | 0 1 … n-1 | n-1 n-2 …).
std::size_t reflect_index(std::size_t i, std::size_t n) noexcept;

} // namespace mcvst::pipeline
