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

#include "channel/trace.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>

#include "common/bytes.hpp"
#include "common/error.hpp"

namespace mcvst::channel {

std::vector<std::uint8_t> encode_trace(const ChannelTrace& trace)
{
    std::vector<std::uint8_t> out(std::begin(kTraceMagic), std::end(kTraceMagic));
    bytes::put_u32(out, trace.n_rx);
    bytes::put_u32(out, trace.n_tx);
    bytes::put_u32(out, trace.n_subcarriers);
    bytes::put_u32(out, static_cast<std::uint32_t>(trace.symbols.size()));
    out.reserve(out.size() + trace.symbols.size() * trace.n_subcarriers * trace.n_rx * trace.n_tx * 16);
    for (const auto& symbol : trace.symbols) {
        require(symbol.freq_response.size() == trace.n_subcarriers, ErrorCode::InvalidInput,
                "trace symbol has wrong subcarrier count");
        for (const auto& h : symbol.freq_response) {
            require(h.rows() == trace.n_rx && h.cols() == trace.n_tx, ErrorCode::InvalidInput,
                    "trace matrix has wrong shape");
            for (Eigen::Index r = 0; r < h.rows(); ++r)
                for (Eigen::Index c = 0; c < h.cols(); ++c) {
                    bytes::put_f64(out, h(r, c).real());
                    bytes::put_f64(out, h(r, c).imag());
                }
        }
    }
    return out;
}

ChannelTrace decode_trace(std::span<const std::uint8_t> data)
{
    bytes::Reader reader(data);
    auto magic = reader.take(sizeof(kTraceMagic));
    require(std::equal(magic.begin(), magic.end(), std::begin(kTraceMagic),
                       [](std::uint8_t a, char b) { return a == static_cast<std::uint8_t>(b); }),
            ErrorCode::Decoding, "bad channel trace magic");
    ChannelTrace trace;
    trace.n_rx = reader.u32();
    trace.n_tx = reader.u32();
    trace.n_subcarriers = reader.u32();
    const std::uint32_t n_symbols = reader.u32();
    // Checked product so that hostile headers cannot wrap around to a small size.
    std::uint64_t expected = 16;
    for (std::uint64_t f : {std::uint64_t{n_symbols}, std::uint64_t{trace.n_subcarriers}, std::uint64_t{trace.n_rx},
                            std::uint64_t{trace.n_tx}}) {
        require(f == 0 || expected <= reader.remaining() / f, ErrorCode::Decoding,
                "channel trace payload size mismatch");
        expected *= f;
    }
    require(reader.remaining() == expected, ErrorCode::Decoding, "channel trace payload size mismatch");

    trace.symbols.reserve(n_symbols);
    for (std::uint32_t t = 0; t < n_symbols; ++t) {
        ChannelRealization symbol;
        symbol.t = t;
        symbol.freq_response.reserve(trace.n_subcarriers);
        for (std::uint32_t i = 0; i < trace.n_subcarriers; ++i) {
            CMatrix h(trace.n_rx, trace.n_tx);
            for (Eigen::Index r = 0; r < h.rows(); ++r)
                for (Eigen::Index c = 0; c < h.cols(); ++c) {
                    const double re = reader.f64();
                    const double im = reader.f64();
                    h(r, c) = {re, im};
                }
            symbol.freq_response.push_back(std::move(h));
        }
        trace.symbols.push_back(std::move(symbol));
    }
    return trace;
}

void write_trace(const std::filesystem::path& path, const ChannelTrace& trace)
{
    const auto data = encode_trace(trace);
    std::ofstream out(path, std::ios::binary);
    require(static_cast<bool>(out), ErrorCode::Io, "cannot open " + path.string() + " for writing");
    out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
    require(static_cast<bool>(out), ErrorCode::Io, "failed writing " + path.string());
}

ChannelTrace read_trace(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    require(static_cast<bool>(in), ErrorCode::Io, "cannot open " + path.string());
    std::vector<std::uint8_t> data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return decode_trace(data);
}

ChannelTrace record_trace(TdlChannel& channel, std::size_t n_symbols)
{
    const auto& cfg = channel.config();
    ChannelTrace trace{static_cast<std::uint32_t>(cfg.n_rx), static_cast<std::uint32_t>(cfg.n_tx),
                       static_cast<std::uint32_t>(cfg.n_subcarriers), {}};
    trace.symbols.reserve(n_symbols);
    for (std::size_t k = 0; k < n_symbols; ++k) {
        trace.symbols.push_back(channel.current());
        channel.step();
    }
    return trace;
}

} // namespace mcvst::channel
