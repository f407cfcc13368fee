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

// Frame packing. A frame carries four latent containers as a sequence of
// pieces, each followed by its CRC-32 (little endian):
//
//   [headers of hyper-context, context, hyper-motion, motion]
//   [hyper-context segment] [hyper-motion segment]
//   [context segments 0 .. G-1] [motion segments 0 .. G-1]
//
// The receiver knows G and the latent shape, so header sizes are implied.
// A bad header CRC loses the frame; a bad segment CRC loses that segment only.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "entropy/bitstream.hpp"
#include "entropy/latent_codec.hpp"

namespace mcvst::pipeline {

std::uint32_t crc32(std::span<const std::uint8_t> data);

struct FrameStreams {
    entropy::Container context;
    entropy::Container hyper_context;
    entropy::Container motion;
    entropy::Container hyper_motion;
};

std::vector<std::uint8_t> pack_frame(const FrameStreams& streams);

struct UnpackedFrame {
    bool header_ok = false;
    entropy::ReceivedLatent context;
    entropy::ReceivedLatent motion;
    std::size_t lost_pieces = 0;
    std::size_t total_pieces = 0;
};

// Never throws on corrupted content; damage shows up as lost pieces.
UnpackedFrame unpack_frame(std::span<const std::uint8_t> bytes, const Shape3& latent_shape, std::size_t n_groups,
                           std::size_t hyper_block);

// MSB-first within each byte.
std::vector<std::uint8_t> bytes_to_bits(std::span<const std::uint8_t> bytes);
// Trailing bits beyond a whole byte are ignored.
std::vector<std::uint8_t> bits_to_bytes(std::span<const std::uint8_t> bits);

} // namespace mcvst::pipeline
