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

// Radio side of a frame: channel sources, QAM codewords and the mapping of
// codeword symbols onto (OFDM symbol, subcarrier, stream) slots.
//
// Symbol j goes to slot j mod S on use j / S, where S is the number of active
// slots in the frame, enumerated OFDM symbol, then subcarrier, then stream.
// Every subcarrier is precoded and equalized with the SVD of its group's
// sampled representative while the true per-subcarrier channel is applied.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "channel/channel_sim.hpp"
#include "channel/trace.hpp"
#include "common/rng.hpp"
#include "precoding/precoding.hpp"
#include "sampling/sampling.hpp"

namespace mcvst::pipeline {

class ChannelSource {
public:
    virtual ~ChannelSource() = default;
    virtual std::uint64_t symbol_index() const = 0;
    virtual channel::ChannelRealization current() const = 0;
    virtual void step() = 0;
};

class LiveChannel final : public ChannelSource {
public:
    explicit LiveChannel(channel::ChannelConfig config) : channel_(std::move(config)) {}
    std::uint64_t symbol_index() const override { return channel_.symbol_index(); }
    channel::ChannelRealization current() const override { return channel_.current(); }
    void step() override { channel_.step(); }

private:
    channel::TdlChannel channel_;
};

// Replays a recorded trace; stepping past its end throws Error(InvalidInput).
class TraceChannel final : public ChannelSource {
public:
    explicit TraceChannel(channel::ChannelTrace trace);
    std::uint64_t symbol_index() const override { return index_; }
    channel::ChannelRealization current() const override;
    void step() override;

private:
    channel::ChannelTrace trace_;
    std::uint64_t index_ = 0;
};

enum class PowerAllocation { Equal, Waterfilling };

struct LinkConfig {
    std::size_t n_streams = 2;         // requested streams per subcarrier
    PowerAllocation power = PowerAllocation::Equal;
    std::size_t max_uses = 4096;       // codeword symbols per slot and frame
    unsigned qam_order = 4;
    std::size_t symbols_per_frame = 1; // OFDM symbols per frame
};

// One OFDM symbol's worth of per-subcarrier links.
struct SymbolLinks {
    std::uint64_t t = 0;
    channel::ChannelRealization realization;
    sampling::SampledCsi sampled;
    std::vector<precoding::EqualizedLink> links;  // per subcarrier
    std::vector<std::vector<double>> power;       // per subcarrier, per active stream
};

struct FrameLinks {
    std::vector<SymbolLinks> symbols;
    std::size_t slots() const;
};

// Reads symbols_per_frame realizations, samples and pushes each into the CSI
// history, builds the links and advances the channel once per OFDM symbol.
FrameLinks acquire_frame_links(ChannelSource& source, sampling::CsiHistory& history, const LinkConfig& config,
                               const precoding::NoiseConfig& noise);

struct Codeword {
    std::vector<std::complex<double>> symbols;
    std::size_t bits = 0;  // payload bits before padding to whole symbols
};

// Gray QAM with zero padding to a whole number of symbols.
Codeword modulate(std::span<const std::uint8_t> bits, const precoding::QamModem& modem);
std::vector<std::uint8_t> demodulate(std::span<const std::complex<double>> symbols, std::size_t n_bits,
                                     const precoding::QamModem& modem);

struct LinkUsage {
    std::size_t symbols = 0;
    std::size_t slots = 0;
    std::size_t uses = 0;  // channel uses per slot
};

// Returns the equalized received symbols. Throws Error(Capacity) if the
// codeword needs more than max_uses per slot.
std::vector<std::complex<double>> transmit_codeword(const Codeword& codeword, const FrameLinks& links,
                                                    const LinkConfig& config, const precoding::NoiseConfig& noise,
                                                    Rng& rng, LinkUsage* usage = nullptr);

} // namespace mcvst::pipeline
