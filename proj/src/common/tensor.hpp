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
#include <cstdint>
#include <span>
#include <vector>

namespace mcvst {

struct Shape3 {
    std::size_t channels = 0;
    std::size_t height = 0;
    std::size_t width = 0;

    std::size_t size() const noexcept { return channels * height * width; }
    friend bool operator==(const Shape3&, const Shape3&) = default;
};

// Dense channel-major C x H x W grid.
template <typename T>
class Grid3 {
public:
    Grid3() = default;
    explicit Grid3(Shape3 shape, T fill = T{}) : shape_(shape), data_(shape.size(), fill) {}
    Grid3(std::size_t c, std::size_t h, std::size_t w, T fill = T{})
        : Grid3(Shape3{c, h, w}, fill) {}

    const Shape3& shape() const noexcept { return shape_; }
    std::size_t channels() const noexcept { return shape_.channels; }
    std::size_t height() const noexcept { return shape_.height; }
    std::size_t width() const noexcept { return shape_.width; }
    std::size_t size() const noexcept { return data_.size(); }

    std::size_t index(std::size_t c, std::size_t h, std::size_t w) const noexcept
    {
        return (c * shape_.height + h) * shape_.width + w;
    }

    T& operator()(std::size_t c, std::size_t h, std::size_t w) noexcept { return data_[index(c, h, w)]; }
    const T& operator()(std::size_t c, std::size_t h, std::size_t w) const noexcept
    {
        return data_[index(c, h, w)];
    }

    std::span<T> values() noexcept { return data_; }
    std::span<const T> values() const noexcept { return data_; }

    friend bool operator==(const Grid3&, const Grid3&) = default;

private:
    Shape3 shape_;
    std::vector<T> data_;
};

using RealGrid = Grid3<double>;
using IntGrid = Grid3<std::int32_t>;

} // namespace mcvst
