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

#include "pipeline/link.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "common/error.hpp"

namespace mcvst::pipeline {

TraceChannel::TraceChannel(channel::ChannelTrace trace) : trace_(std::move(trace))
{
    require(!trace_.symbols.empty(), ErrorCode::InvalidInput, "channel trace is empty");
}

channel::ChannelRealization TraceChannel::current() const
{
    if (index_ >= trace_.symbols.size())
        fail(ErrorCode::InvalidInput, "channel trace exhausted at symbol " + std::to_string(index_));
    channel::ChannelRealization r = trace_.symbols[index_];
    r.t = index_;
    return r;
}

void TraceChannel::step()
{
    ++index_;
}

std::size_t FrameLinks::slots() const
{
    std::size_t n = 0;
    for (const auto& s : symbols)
        for (const auto& p : s.power)
            n += p.size();
    return n;
}

FrameLinks acquire_frame_links(ChannelSource& source, sampling::CsiHistory& history, const LinkConfig& config,
                               const precoding::NoiseConfig& noise)
{
    require(config.symbols_per_frame >= 1, ErrorCode::InvalidConfig, "symbols_per_frame must be >= 1");
    require(config.n_streams >= 1, ErrorCode::InvalidConfig, "n_streams must be >= 1");
    const auto& schedule = history.schedule();
    FrameLinks out;
    for (std::size_t s = 0; s < config.symbols_per_frame; ++s) {
        SymbolLinks sym;
        sym.t = source.symbol_index();
        sym.realization = source.current();
        require(sym.realization.freq_response.size() == schedule.n_subcarriers(), ErrorCode::InvalidInput,
                "channel subcarrier count does not match the sampling schedule");
        sym.sampled = sampling::sample(sym.realization, schedule, sym.t);
        history.push(sym.sampled);

        std::vector<precoding::SvdTriple> svds;
        svds.reserve(schedule.n_groups());
        for (const auto& h : sym.sampled.entries)
            svds.push_back(precoding::svd_decompose(h));

        for (std::size_t k = 0; k < schedule.n_subcarriers(); ++k) {
            const auto& svd = svds[schedule.group_of(k)];
            const std::size_t r = std::min(config.n_streams, svd.rank());
            std::vector<double> power(r, 1.0);
            if (config.power == PowerAllocation::Waterfilling && noise.sigma2 > 0.0 && r > 0) {
                std::vector<double> gains(r);
                for (std::size_t q = 0; q < r; ++q)
                    gains[q] = svd.s(static_cast<Eigen::Index>(q)) * svd.s(static_cast<Eigen::Index>(q));
                power = precoding::waterfilling(gains, static_cast<double>(r), noise.sigma2);
                // Gains are descending, so the powered streams form a prefix.
                while (!power.empty() && power.back() <= 0.0)
                    power.pop_back();
            }
            sym.links.push_back(precoding::equalized_link(sym.realization.freq_response[k], svd, power.size()));
            sym.power.push_back(std::move(power));
        }
        out.symbols.push_back(std::move(sym));
        source.step();
    }
    return out;
}

Codeword modulate(std::span<const std::uint8_t> bits, const precoding::QamModem& modem)
{
    const std::size_t m = modem.bits_per_symbol();
    std::vector<std::uint8_t> padded(bits.begin(), bits.end());
    padded.resize((bits.size() + m - 1) / m * m, 0);
    Codeword cw;
    cw.bits = bits.size();
    cw.symbols = modem.map(padded);
    return cw;
}

std::vector<std::uint8_t> demodulate(std::span<const std::complex<double>> symbols, std::size_t n_bits,
                                     const precoding::QamModem& modem)
{
    std::vector<std::uint8_t> bits = modem.demap(symbols);
    require(bits.size() >= n_bits, ErrorCode::InvalidInput, "too few symbols for the requested bit count");
    bits.resize(n_bits);
    return bits;
}

std::vector<std::complex<double>> transmit_codeword(const Codeword& codeword, const FrameLinks& links,
                                                    const LinkConfig& config, const precoding::NoiseConfig& noise,
                                                    Rng& rng, LinkUsage* usage)
{
    const std::size_t n = codeword.symbols.size();
    const std::size_t slots = links.slots();
    if (n > 0 && slots == 0)
        fail(ErrorCode::Capacity, "required " + std::to_string(n) + " symbols, available 0 (no active streams)");
    const std::size_t uses = slots == 0 ? 0 : (n + slots - 1) / slots;
    if (uses > config.max_uses)
        fail(ErrorCode::Capacity, "required " + std::to_string(n) + " symbols, available " +
                                      std::to_string(slots * config.max_uses) + " (" + std::to_string(slots) +
                                      " slots x " + std::to_string(config.max_uses) + " uses)");
    if (usage)
        *usage = {n, slots, uses};

    std::vector<std::complex<double>> received(n);
    std::size_t slot_base = 0;
    for (const auto& sym : links.symbols)
        for (std::size_t k = 0; k < sym.links.size(); ++k) {
            const auto& power = sym.power[k];
            const std::size_t r = power.size();
            if (r == 0)
                continue;
            precoding::CVector x(static_cast<Eigen::Index>(r));
            for (std::size_t u = 0; u < uses; ++u) {
                const std::size_t first = u * slots + slot_base;
                if (first >= n)
                    break;
                for (std::size_t q = 0; q < r; ++q) {
                    const std::size_t j = first + q;
                    x(static_cast<Eigen::Index>(q)) = j < n ? std::sqrt(power[q]) * codeword.symbols[j] : 0.0;
                }
                const precoding::CVector y = precoding::apply_link(sym.links[k], x, noise, rng);
                for (std::size_t q = 0; q < r && first + q < n; ++q)
                    received[first + q] = y(static_cast<Eigen::Index>(q)) / std::sqrt(power[q]);
            }
            slot_base += r;
        }
    return received;
}

} // namespace mcvst::pipeline
