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

// Channel trace file:
//   "MCVST01\0"
//   u32 LE  N_r, N_t, N_s, T
//   T * N_s * N_r * N_t complex entries, each as two LE float64 (re, im);
//   symbol-major, then subcarrier, then row-major within each matrix.

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "channel/channel_sim.hpp"

namespace mcvst::channel {

inline constexpr char kTraceMagic[8] = {'M', 'C', 'V', 'S', 'T', '0', '1', '\0'};

struct ChannelTrace {
    std::uint32_t n_rx = 0;
    std::uint32_t n_tx = 0;
    std::uint32_t n_subcarriers = 0;
    std::vector<ChannelRealization> symbols;
};

std::vector<std::uint8_t> encode_trace(const ChannelTrace& trace);
ChannelTrace decode_trace(std::span<const std::uint8_t> data);

void write_trace(const std::filesystem::path& path, const ChannelTrace& trace);
ChannelTrace read_trace(const std::filesystem::path& path);

// Records n_symbols realizations starting from the current one; the channel
// is left at the first symbol not recorded.
ChannelTrace record_trace(TdlChannel& channel, std::size_t n_symbols);

} // namespace mcvst::channel
