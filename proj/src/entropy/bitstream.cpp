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

#include "entropy/bitstream.hpp"

#include <algorithm>
#include <limits>

#include "common/bytes.hpp"
#include "common/error.hpp"

namespace mcvst::entropy {

namespace {

std::uint32_t to_u32(std::size_t v, const char* what)
{
    require(v <= std::numeric_limits<std::uint32_t>::max(), ErrorCode::Encoding, what);
    return static_cast<std::uint32_t>(v);
}

} // namespace

std::vector<std::uint8_t> container_header(const Container& c)
{
    std::vector<std::uint8_t> out(kContainerMagic.begin(), kContainerMagic.end());
    bytes::put_u32(out, to_u32(c.shape.channels, "channel count does not fit 32 bits"));
    bytes::put_u32(out, to_u32(c.shape.height, "height does not fit 32 bits"));
    bytes::put_u32(out, to_u32(c.shape.width, "width does not fit 32 bits"));
    out.push_back(static_cast<std::uint8_t>(c.kind));
    bytes::put_u32(out, to_u32(c.segments.size(), "too many segments"));
    for (const auto& seg : c.segments)
        bytes::put_u32(out, to_u32(seg.size(), "segment too long"));
    return out;
}

std::vector<std::uint8_t> serialize(const Container& c)
{
    std::vector<std::uint8_t> out = container_header(c);
    for (const auto& seg : c.segments)
        out.insert(out.end(), seg.begin(), seg.end());
    return out;
}

ContainerHeader parse_header(std::span<const std::uint8_t> data)
{
    bytes::Reader r(data);
    const auto magic = r.take(kContainerMagic.size());
    require(std::equal(magic.begin(), magic.end(), kContainerMagic.begin()), ErrorCode::Decoding,
            "bad bitstream magic");
    ContainerHeader h{};
    h.shape.channels = r.u32();
    h.shape.height = r.u32();
    h.shape.width = r.u32();
    const std::uint8_t kind = r.u8();
    require(kind <= 3, ErrorCode::Decoding, "unknown stream kind");
    h.kind = static_cast<StreamKind>(kind);
    const std::uint32_t n = r.u32();
    require(r.remaining() / 4 >= n, ErrorCode::Decoding, "segment table truncated");
    h.segment_lengths.reserve(n);
    for (std::uint32_t k = 0; k < n; ++k)
        h.segment_lengths.push_back(r.u32());
    h.header_bytes = r.position();
    return h;
}

Container parse(std::span<const std::uint8_t> data)
{
    const ContainerHeader h = parse_header(data);
    bytes::Reader r(data.subspan(h.header_bytes));
    Container c;
    c.kind = h.kind;
    c.shape = h.shape;
    for (std::uint32_t len : h.segment_lengths) {
        const auto s = r.take(len);
        c.segments.emplace_back(s.begin(), s.end());
    }
    require(r.remaining() == 0, ErrorCode::Decoding, "trailing bytes after bitstream container");
    return c;
}

} // namespace mcvst::entropy
