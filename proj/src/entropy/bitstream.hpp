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

// Latent bitstream container:
//
//   "MCVSTBS1"                 8 bytes
//   L, H', W'                  u32 LE each
//   kind                       1 byte (0 context, 1 motion, 2 hyper-context, 3 hyper-motion)
//   payload:
//     n_segments               u32 LE
//     segment lengths          n_segments x u32 LE
//     segment bytes            concatenated
//
// Each segment is one independently flushed range-coder stream. Main latents
// use one segment per context group, hyper latents a single segment.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "common/tensor.hpp"

namespace mcvst::entropy {

enum class StreamKind : std::uint8_t {
    Context = 0,
    Motion = 1,
    HyperContext = 2,
    HyperMotion = 3,
};

inline constexpr std::array<char, 8> kContainerMagic{'M', 'C', 'V', 'S', 'T', 'B', 'S', '1'};
// Magic + shape + kind + segment count.
inline constexpr std::size_t kContainerFixedBytes = 8 + 12 + 1 + 4;

struct Container {
    StreamKind kind = StreamKind::Context;
    Shape3 shape;
    std::vector<std::vector<std::uint8_t>> segments;

    friend bool operator==(const Container&, const Container&) = default;
};

// Everything up to and including the segment length table.
std::vector<std::uint8_t> container_header(const Container& c);
std::vector<std::uint8_t> serialize(const Container& c);

struct ContainerHeader {
    StreamKind kind;
    Shape3 shape;
    std::vector<std::uint32_t> segment_lengths;
    std::size_t header_bytes;
};

// Throws Error(Decoding) on a bad magic, unknown kind or truncated table.
ContainerHeader parse_header(std::span<const std::uint8_t> bytes);
// Throws Error(Decoding) unless the bytes hold exactly one container.
Container parse(std::span<const std::uint8_t> bytes);

} // namespace mcvst::entropy
