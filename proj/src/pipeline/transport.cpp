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

#include "pipeline/transport.hpp"

#include <zlib.h>

#include <algorithm>
#include <optional>

#include "common/bytes.hpp"
#include "common/error.hpp"

namespace mcvst::pipeline {

using entropy::Container;
using entropy::StreamKind;

namespace {

void put_piece(std::vector<std::uint8_t>& out, std::span<const std::uint8_t> piece)
{
    out.insert(out.end(), piece.begin(), piece.end());
    bytes::put_u32(out, crc32(piece));
}

// Reads a piece of known length and checks its CRC; advances past it either way.
std::optional<std::vector<std::uint8_t>> take_piece(std::span<const std::uint8_t> data, std::size_t& pos,
                                                    std::size_t length)
{
    if (pos > data.size() || data.size() - pos < length + 4) {
        pos = data.size();
        return std::nullopt;
    }
    const auto piece = data.subspan(pos, length);
    bytes::Reader r(data.subspan(pos + length, 4));
    pos += length + 4;
    if (r.u32() != crc32(piece))
        return std::nullopt;
    return std::vector<std::uint8_t>(piece.begin(), piece.end());
}

} // namespace

std::uint32_t crc32(std::span<const std::uint8_t> data)
{
    uLong crc = ::crc32(0L, Z_NULL, 0);
    std::size_t pos = 0;
    while (pos < data.size()) {
        const auto n = static_cast<uInt>(std::min<std::size_t>(data.size() - pos, 1u << 30));
        crc = ::crc32(crc, data.data() + pos, n);
        pos += n;
    }
    return static_cast<std::uint32_t>(crc);
}

std::vector<std::uint8_t> pack_frame(const FrameStreams& s)
{
    require(s.hyper_context.segments.size() == 1 && s.hyper_motion.segments.size() == 1, ErrorCode::Encoding,
            "hyper streams must hold one segment");
    std::vector<std::uint8_t> header;
    for (const Container* c : {&s.hyper_context, &s.context, &s.hyper_motion, &s.motion}) {
        const auto h = entropy::container_header(*c);
        header.insert(header.end(), h.begin(), h.end());
    }
    std::vector<std::uint8_t> out;
    put_piece(out, header);
    put_piece(out, s.hyper_context.segments.front());
    put_piece(out, s.hyper_motion.segments.front());
    for (const auto& seg : s.context.segments)
        put_piece(out, seg);
    for (const auto& seg : s.motion.segments)
        put_piece(out, seg);
    return out;
}

UnpackedFrame unpack_frame(std::span<const std::uint8_t> data, const Shape3& latent_shape, std::size_t n_groups,
                           std::size_t hyper_block)
{
    const Shape3 hs = entropy::hyper_shape(latent_shape, hyper_block);
    UnpackedFrame out;
    out.total_pieces = 3 + 2 * n_groups;
    out.context.shape = latent_shape;
    out.motion.shape = latent_shape;
    out.context.groups.assign(n_groups, std::nullopt);
    out.motion.groups.assign(n_groups, std::nullopt);

    const std::size_t hyper_header = entropy::kContainerFixedBytes + 4;
    const std::size_t main_header = entropy::kContainerFixedBytes + 4 * n_groups;
    std::size_t pos = 0;
    const auto header = take_piece(data, pos, 2 * (hyper_header + main_header));
    if (!header) {
        out.lost_pieces = out.total_pieces;
        return out;
    }

    // Segment lengths from the four headers, checked against what the receiver expects.
    std::vector<std::uint32_t> lengths[4];
    const StreamKind kinds[4] = {StreamKind::HyperContext, StreamKind::Context, StreamKind::HyperMotion,
                                 StreamKind::Motion};
    std::size_t off = 0;
    for (int k = 0; k < 4; ++k) {
        const bool hyper = k % 2 == 0;
        const std::size_t size = hyper ? hyper_header : main_header;
        try {
            const auto h = entropy::parse_header(std::span<const std::uint8_t>(*header).subspan(off, size));
            if (h.kind != kinds[k] || h.shape != (hyper ? hs : latent_shape) ||
                h.segment_lengths.size() != (hyper ? 1 : n_groups))
                throw Error(ErrorCode::Decoding, "unexpected container header");
            lengths[k] = h.segment_lengths;
        } catch (const Error&) {
            out.lost_pieces = out.total_pieces;
            return out;
        }
        off += size;
    }
    out.header_ok = true;

    auto take = [&](std::uint32_t len) {
        auto piece = take_piece(data, pos, len);
        if (!piece)
            ++out.lost_pieces;
        return piece;
    };
    out.context.hyper = take(lengths[0][0]);
    out.motion.hyper = take(lengths[2][0]);
    for (std::size_t g = 0; g < n_groups; ++g)
        out.context.groups[g] = take(lengths[1][g]);
    for (std::size_t g = 0; g < n_groups; ++g)
        out.motion.groups[g] = take(lengths[3][g]);
    return out;
}

std::vector<std::uint8_t> bytes_to_bits(std::span<const std::uint8_t> data)
{
    std::vector<std::uint8_t> bits;
    bits.reserve(8 * data.size());
    for (std::uint8_t b : data)
        for (int i = 7; i >= 0; --i)
            bits.push_back(static_cast<std::uint8_t>((b >> i) & 1u));
    return bits;
}

std::vector<std::uint8_t> bits_to_bytes(std::span<const std::uint8_t> bits)
{
    std::vector<std::uint8_t> out(bits.size() / 8, 0);
    for (std::size_t k = 0; k < out.size() * 8; ++k)
        if (bits[k] & 1u)
            out[k / 8] = static_cast<std::uint8_t>(out[k / 8] | (0x80u >> (k % 8)));
    return out;
}

} // namespace mcvst::pipeline
