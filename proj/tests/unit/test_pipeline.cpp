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

#include <doctest.h>

#include <cmath>
#include <memory>

#include "channel/trace.hpp"
#include "common/error.hpp"
#include "common/rng.hpp"
#include "pipeline/link.hpp"
#include "pipeline/pipeline.hpp"
#include "pipeline/source.hpp"
#include "pipeline/transform.hpp"
#include "pipeline/transport.hpp"

using namespace mcvst;
using namespace mcvst::pipeline;

namespace {

Frame random_frame(Rng& rng, std::size_t h, std::size_t w)
{
    Frame f(3, h, w);
    for (double& v : f.values())
        v = rng.uniform();
    return f;
}

double energy(const RealGrid& g)
{
    double e = 0.0;
    for (double v : g.values())
        e += v * v;
    return e;
}

PipelineConfig clean_config()
{
    PipelineConfig p;
    p.map.subcarrier_group = 1;
    p.quant_step = 1.0 / 64.0;
    return p;
}

Session make_session(const PipelineConfig& p, double snr_db, std::uint64_t seed)
{
    const auto noise = std::isinf(snr_db) ? precoding::NoiseConfig::noiseless()
                                          : precoding::NoiseConfig::from_snr_db(snr_db);
    return Session(p, make_live_channel(p, seed), noise, seed);
}

} // namespace

TEST_CASE("block transform")
{
    const BlockTransform t(4, 64, 5);
    Rng rng(1);
    SUBCASE("isometry and inverse")
    {
        const Frame x = random_frame(rng, 16, 12);
        const RealGrid f = t.encode(x);
        CHECK(f.shape() == Shape3{64, 4, 3});
        CHECK(std::abs(energy(f) - energy(x)) < 1e-10 * energy(x));
        const Frame y = t.decode(f, 16, 12);
        CHECK(mse(x, y) < 1e-28);
    }
    SUBCASE("zeros map to zeros and unused channels stay empty")
    {
        CHECK(energy(t.encode(Frame(3, 8, 8, 0.0))) == 0.0);
        const RealGrid f = t.encode(random_frame(rng, 8, 8));
        for (std::size_t c = 48; c < 64; ++c)
            for (std::size_t h = 0; h < 2; ++h)
                for (std::size_t w = 0; w < 2; ++w)
                    CHECK(f(c, h, w) == 0.0);
    }
    SUBCASE("a flat frame lands in the lowest channels")
    {
        const RealGrid f = t.encode(Frame(3, 4, 4, 0.5));
        double low = 0.0;
        for (std::size_t c = 0; c < 3; ++c)
            low += f(c, 0, 0) * f(c, 0, 0);
        CHECK(std::abs(low - energy(f)) < 1e-12);
    }
    SUBCASE("sizes that are not a multiple of the block")
    {
        const Frame x = random_frame(rng, 10, 7);
        CHECK(t.feature_shape(10, 7) == Shape3{64, 3, 2});
        CHECK(mse(x, t.decode(t.encode(x), 10, 7)) < 1e-28);
    }
    CHECK_THROWS_AS(BlockTransform(4, 47, 1), Error);
    CHECK_THROWS_AS(t.encode(RealGrid(2, 4, 4)), Error);
    CHECK(reflect_index(0, 4) == 0);
    CHECK(reflect_index(5, 4) == 2);
}

TEST_CASE("motion and context")
{
    RealGrid f(1, 1, 2), r(1, 1, 2);
    f(0, 0, 0) = 3.0;
    f(0, 0, 1) = -1.0;
    r(0, 0, 0) = 1.0;
    r(0, 0, 1) = 1.0;
    const auto mc = motion_context_split(f, r);
    CHECK(mc.motion(0, 0, 0) == 2.0);
    CHECK(mc.motion(0, 0, 1) == -2.0);
    CHECK(mc.context == r);
    CHECK(combine(mc.motion, mc.context) == f);
    CHECK_THROWS_AS(motion_context_split(f, RealGrid(1, 2, 1)), Error);
}

TEST_CASE("rate weights")
{
    cormap::CorrelationMap m{0, Eigen::MatrixXd(2, 2)};
    m.values << 0.75, 0.25, 0.5, 0.5;
    CHECK(rate_weights(m, EtaPolicy::Map) == std::vector<double>{1.75, 1.5});
    CHECK(rate_weights(m, EtaPolicy::Unit) == std::vector<double>{1.0, 1.0});
}

TEST_CASE("modulation helpers")
{
    const precoding::QamModem qpsk(4);
    const precoding::QamModem qam16(16);
    CHECK(modulate({}, qpsk).symbols.empty());
    const std::vector<std::uint8_t> bits{1, 0, 1, 1, 0};
    const auto cw = modulate(bits, qam16);
    CHECK(cw.symbols.size() == 2);
    CHECK(cw.bits == 5);
    CHECK(demodulate(cw.symbols, cw.bits, qam16) == bits);
    CHECK(modulate(bits, qpsk).symbols.size() == 3);
    CHECK_THROWS_AS(demodulate(cw.symbols, 9, qam16), Error);

    const std::vector<std::uint8_t> bytes{0xA5, 0x01};
    const auto b = bytes_to_bits(bytes);
    CHECK(b.size() == 16);
    CHECK(b[0] == 1);
    CHECK(b[1] == 0);
    CHECK(b[15] == 1);
    CHECK(bits_to_bytes(b) == bytes);
}

TEST_CASE("transport framing")
{
    using entropy::Container;
    using entropy::StreamKind;
    const Shape3 shape{16, 2, 2};
    const Shape3 hs = entropy::hyper_shape(shape, 8);
    FrameStreams s{Container{StreamKind::Context, shape, {{1, 2}, {3}}},
                   Container{StreamKind::HyperContext, hs, {{4, 5, 6}}},
                   Container{StreamKind::Motion, shape, {{7}, {}}},
                   Container{StreamKind::HyperMotion, hs, {{8}}}};
    const auto bytes = pack_frame(s);

    const auto ok = unpack_frame(bytes, shape, 2, 8);
    CHECK(ok.header_ok);
    CHECK(ok.lost_pieces == 0);
    CHECK(ok.total_pieces == 7);
    CHECK(*ok.context.hyper == std::vector<std::uint8_t>{4, 5, 6});
    CHECK(*ok.context.groups[1] == std::vector<std::uint8_t>{3});
    CHECK(ok.motion.groups[1]->empty());

    SUBCASE("a damaged segment is lost alone")
    {
        auto bad = bytes;
        bad[bytes.size() - 9] ^= 0x10;  // motion group 0 payload, then two CRCs
        const auto u = unpack_frame(bad, shape, 2, 8);
        CHECK(u.header_ok);
        CHECK(u.lost_pieces == 1);
        CHECK_FALSE(u.motion.groups[0].has_value());
        CHECK(u.motion.groups[1].has_value());
        CHECK(u.context.groups[0].has_value());
    }
    SUBCASE("a damaged header loses the frame")
    {
        auto bad = bytes;
        bad[3] ^= 0x01;
        const auto u = unpack_frame(bad, shape, 2, 8);
        CHECK_FALSE(u.header_ok);
        CHECK(u.lost_pieces == u.total_pieces);
    }
    SUBCASE("truncation loses the tail")
    {
        const auto u = unpack_frame(std::span(bytes).first(bytes.size() - 3), shape, 2, 8);
        CHECK(u.header_ok);
        CHECK(u.lost_pieces == 1);
    }
    CHECK(unpack_frame({}, shape, 2, 8).lost_pieces == 7);
    const std::vector<std::uint8_t> check{'1', '2', '3', '4', '5', '6', '7', '8', '9'};
    CHECK(crc32(check) == 0xCBF43926u);
}

TEST_CASE("trace channel")
{
    channel::ChannelConfig c;
    c.n_tx = c.n_rx = 2;
    c.n_subcarriers = 8;
    c.tap_delays = {0};
    c.tap_powers = {1.0};
    channel::TdlChannel live(c);
    auto trace = channel::record_trace(live, 3);
    TraceChannel src(trace);
    CHECK(src.current().t == 0);
    src.step();
    src.step();
    CHECK(src.symbol_index() == 2);
    CHECK_NOTHROW(src.current());
    src.step();
    CHECK_THROWS_AS(src.current(), Error);
    CHECK_THROWS_AS(TraceChannel(channel::ChannelTrace{}), Error);
}

TEST_CASE("noiseless matched link is near lossless")
{
    const auto p = clean_config();
    auto session = make_session(p, std::numeric_limits<double>::infinity(), 3);
    const auto gop = synthetic_gop(3, 32, 32, 3);
    const auto results = session.run_gop(gop);
    for (const auto& r : results) {
        CHECK_FALSE(r.metrics.frame_error);
        CHECK(r.metrics.bit_errors == 0);
        CHECK(r.metrics.psnr_db >= 40.0);
        CHECK(r.reconstruction == r.encoder_reconstruction);
        CHECK(r.metrics.context_groups_decoded == 8);
        CHECK(r.metrics.motion_groups_decoded == 8);
        CHECK(r.metrics.k_t == doctest::Approx(r.metrics.k_c + r.metrics.k_v + r.metrics.k_cz + r.metrics.k_vz));
        CHECK(r.metrics.cbr == doctest::Approx(r.metrics.channel_uses / (32.0 * 32.0 * 3.0)));
        for (double e : r.metrics.eta) {
            CHECK(e > 1.0);
            CHECK(e <= 2.0);
        }
    }
    CHECK(session.channel_symbol_index() == 3 * p.link.symbols_per_frame);
    CHECK(session.frames_done() == 3);
}

TEST_CASE("static scene codes motion cheaper than the intra frame")
{
    auto p = clean_config();
    p.quant_step = 1.0 / 16.0;
    auto session = make_session(p, std::numeric_limits<double>::infinity(), 4);
    const auto results = session.run_gop(synthetic_gop(3, 32, 32, 4, true));
    CHECK(results[1].metrics.k_v + results[1].metrics.k_vz < results[0].metrics.k_v + results[0].metrics.k_vz);
    CHECK(results[2].metrics.k_t < results[0].metrics.k_t);
}

TEST_CASE("session determinism and seeding")
{
    auto p = clean_config();
    p.map.subcarrier_group = 8;
    p.link.symbols_per_frame = 2;
    const auto gop = synthetic_gop(2, 16, 16, 9);
    auto a = make_session(p, 6.0, 9).run_gop(gop);
    auto b = make_session(p, 6.0, 9).run_gop(gop);
    auto c = make_session(p, 6.0, 10).run_gop(gop);
    REQUIRE(a.size() == 2);
    bool differs = false;
    for (std::size_t k = 0; k < 2; ++k) {
        CHECK(a[k].reconstruction == b[k].reconstruction);
        CHECK(a[k].metrics.bit_errors == b[k].metrics.bit_errors);
        CHECK(a[k].metrics.k_t == b[k].metrics.k_t);
        differs = differs || a[k].metrics.bit_errors != c[k].metrics.bit_errors;
    }
    CHECK(differs);
}

TEST_CASE("low SNR degrades the reconstruction")
{
    const auto p = clean_config();
    const auto gop = synthetic_gop(2, 16, 16, 2);
    const auto bad = make_session(p, -5.0, 2).run_gop(gop);
    const auto good = make_session(p, std::numeric_limits<double>::infinity(), 2).run_gop(gop);
    CHECK(bad[0].metrics.frame_error);
    CHECK(bad[0].metrics.mse > good[0].metrics.mse);
    for (const auto& r : bad)
        for (double v : r.reconstruction.values()) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
}

TEST_CASE("capacity and input errors")
{
    auto p = clean_config();
    p.link.max_uses = 1;
    auto s = make_session(p, 10.0, 1);
    try {
        s.run_frame(synthetic_gop(1, 32, 32, 1)[0]);
        FAIL("expected a capacity error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Capacity);
    }

    auto ok = make_session(clean_config(), 10.0, 1);
    Frame bad(3, 8, 8, 0.5);
    bad(1, 2, 2) = 1.5;
    CHECK_THROWS_AS(ok.run_frame(bad), Error);
    CHECK_THROWS_AS(ok.run_frame(Frame(1, 8, 8)), Error);
    ok.run_frame(Frame(3, 8, 8, 0.5));
    CHECK_THROWS_AS(ok.run_frame(Frame(3, 8, 16, 0.5)), Error);
    CHECK_THROWS_AS(ok.run_gop({}), Error);
}

TEST_CASE("synthetic source")
{
    const auto gop = synthetic_gop(3, 20, 24, 1);
    REQUIRE(gop.size() == 3);
    for (const auto& f : gop)
        CHECK_NOTHROW(validate_frame(f));
    CHECK_FALSE(gop[0] == gop[1]);
    CHECK(synthetic_gop(3, 20, 24, 1) == gop);
    const auto still = synthetic_gop(2, 8, 8, 1, true);
    CHECK(still[0] == still[1]);
    CHECK(std::isinf(psnr_db(0.0)));
    CHECK(psnr_db(0.01) == doctest::Approx(20.0));
}
