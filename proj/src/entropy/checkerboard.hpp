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

#include <cstddef>
#include <vector>

#include "common/error.hpp"
#include "common/tensor.hpp"

namespace mcvst::entropy {

// Anchors sit where (h + w) is even.
constexpr bool is_anchor(std::size_t h, std::size_t w) noexcept
{
    return ((h + w) & 1u) == 0;
}

// Both grids keep the full shape; positions of the other parity hold T{}.
template <typename T>
struct CheckerboardSplit {
    Grid3<T> anchors;
    Grid3<T> non_anchors;
};

template <typename T>
CheckerboardSplit<T> checkerboard_split(const Grid3<T>& values)
{
    CheckerboardSplit<T> out{Grid3<T>(values.shape()), Grid3<T>(values.shape())};
    for (std::size_t c = 0; c < values.channels(); ++c)
        for (std::size_t h = 0; h < values.height(); ++h)
            for (std::size_t w = 0; w < values.width(); ++w)
                (is_anchor(h, w) ? out.anchors : out.non_anchors)(c, h, w) = values(c, h, w);
    return out;
}

template <typename T>
Grid3<T> checkerboard_merge(const CheckerboardSplit<T>& split)
{
    require(split.anchors.shape() == split.non_anchors.shape(), ErrorCode::InvalidInput,
            "checkerboard halves have different shapes");
    Grid3<T> out(split.anchors.shape());
    for (std::size_t c = 0; c < out.channels(); ++c)
        for (std::size_t h = 0; h < out.height(); ++h)
            for (std::size_t w = 0; w < out.width(); ++w)
                out(c, h, w) = is_anchor(h, w) ? split.anchors(c, h, w) : split.non_anchors(c, h, w);
    return out;
}

// Flat indices of one coding pass: channels [group * m_c, (group + 1) * m_c),
// positions of the requested parity, in (c, h, w) raster order.
std::vector<std::size_t> pass_elements(const Shape3& shape, std::size_t group, std::size_t context_group,
                                       bool anchors);

} // namespace mcvst::entropy
