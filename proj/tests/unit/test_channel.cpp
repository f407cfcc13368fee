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
#include <numbers>

#include "channel/channel_sim.hpp"
#include "channel/trace.hpp"
#include "common/error.hpp"
#include "common/rng.hpp"
#include "oracles.hpp"

using namespace mcvst;
using namespace mcvst::channel;

namespace {

ChannelConfig small_config(std::size_t n = 8)
{
    ChannelConfig c;
    c.n_tx = 2;
    c.n_rx = 2;
    c.n_subcarriers = n;
    c.tap_delays = {0, 1, 3};
    c.tap_powers = {0.5, 0.3, 0.2};
    return c;
}

ErrorCode code_of(auto&& f)
{
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::Internal;
}

} // namespace

TEST_CASE("bessel J0 agrees with a trapezoid integral")
{
    for (double x : {0.0, 0.1, 0.6, 1.0, 2.404825557695773, 3.7, 7.5, 15.0})
        CHECK(bessel_j0(x) == doctest::Approx(oracle::j0_trapezoid(x)).epsilon(1e-12));
}

TEST_CASE("doppler coefficient")
{
    SUBCASE("a static terminal gives rho = 1")
    {
        CHECK(doppler_coefficient(0.0, 2.6e9, 1e-3) == 1.0);
    }
    SUBCASE("the first J0 zero gives rho = 0")
    {
        const double zero = 2.404825557695773;
        CHECK(std::abs(oracle::j0_series(zero)) < 1e-12);
        const double fc = 2.6e9;
        const double ts = 1e-3;
        const double speed = zero / (2.0 * std::numbers::pi * ts) * kSpeedOfLight / fc;
        CHECK(std::abs(doppler_coefficient(speed, fc, ts)) < 1e-9);
    }
    SUBCASE("40 km/h at 2.6 GHz")
    {
        CHECK(std::abs(doppler_frequency(40.0 / 3.6, 2.6e9) - 96.3) < 0.1);
    }
    SUBCASE("invalid parameters")
    {
        CHECK(code_of([] { doppler_coefficient(-1.0, 2.6e9, 1e-3); }) == ErrorCode::InvalidConfig);
        CHECK(code_of([] { doppler_coefficient(1.0, 0.0, 1e-3); }) == ErrorCode::InvalidConfig);
        CHECK(code_of([] { doppler_coefficient(1.0, 2.6e9, 0.0); }) == ErrorCode::InvalidConfig);
    }
}

TEST_CASE("frequency response")
{
    Rng rng(11);
    auto random_matrix = [&](int r, int c) {
        CMatrix m(r, c);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < c; ++j)
                m(i, j) = rng.complex_gaussian(1.0);
        return m;
    };

    SUBCASE("one tap at delay 0 is flat")
    {
        const std::vector<CMatrix> taps{random_matrix(3, 2)};
        const std::vector<std::size_t> delays{0};
        for (const auto& h : freq_response(taps, delays, 16))
            CHECK((h - taps[0]).norm() == 0.0);
    }
    SUBCASE("taps at 0 and N/2 alternate between sum and difference")
    {
        const std::vector<CMatrix> taps{random_matrix(2, 2), random_matrix(2, 2)};
        const std::vector<std::size_t> delays{0, 8};
        const auto h = freq_response(taps, delays, 16);
        for (std::size_t i = 0; i < 16; ++i) {
            const CMatrix expect = i % 2 == 0 ? CMatrix(taps[0] + taps[1]) : CMatrix(taps[0] - taps[1]);
            CHECK((h[i] - expect).norm() < 1e-14);
        }
    }
    SUBCASE("random three-tap channel matches a naive DFT")
    {
        const std::vector<CMatrix> taps{random_matrix(2, 3), random_matrix(2, 3), random_matrix(2, 3)};
        const std::vector<std::size_t> delays{0, 3, 5};
        const auto h = freq_response(taps, delays, 8);
        const auto ref = oracle::naive_dft(taps, delays, 8);
        for (std::size_t i = 0; i < 8; ++i)
            CHECK((h[i] - ref[i]).norm() < 1e-10);
    }
    SUBCASE("delays beyond the DFT size are rejected")
    {
        const std::vector<CMatrix> taps{random_matrix(1, 1)};
        const std::vector<std::size_t> delays{8};
        CHECK(code_of([&] { freq_response(taps, delays, 8); }) == ErrorCode::InvalidConfig);
    }
}

TEST_CASE("tapped delay line evolution")
{
    SUBCASE("rho = 1 freezes the channel")
    {
        TdlChannel ch(small_config(), 1.0);
        const auto first = ch.current();
        for (int t = 0; t < 5; ++t) {
            const auto next = ch.step();
            for (std::size_t i = 0; i < first.freq_response.size(); ++i)
                CHECK((next.freq_response[i] - first.freq_response[i]).norm() == 0.0);
        }
    }
    SUBCASE("rho = 0 gives uncorrelated symbols")
    {
        ChannelConfig c = small_config();
        c.n_tx = c.n_rx = 1;
        c.tap_delays = {0};
        c.tap_powers = {1.0};
        TdlChannel ch(c, 0.0);
        std::complex<double> prev = ch.tap_gains()[0](0, 0);
        std::complex<double> cross = 0.0;
        double power = 0.0;
        const int n = 100000;
        for (int t = 0; t < n; ++t) {
            ch.step();
            const auto g = ch.tap_gains()[0](0, 0);
            cross += g * std::conj(prev);
            power += std::norm(prev);
            prev = g;
        }
        CHECK(std::abs(cross) / power < 0.02);
    }
    SUBCASE("a single tap at delay 0 is flat at every symbol")
    {
        ChannelConfig c = small_config();
        c.tap_delays = {0};
        c.tap_powers = {1.0};
        TdlChannel ch(c);
        for (int t = 0; t < 3; ++t) {
            const auto r = ch.step();
            for (const auto& h : r.freq_response)
                CHECK((h - r.freq_response[0]).norm() == 0.0);
        }
    }
    SUBCASE("tap power follows the profile")
    {
        ChannelConfig c = small_config();
        TdlChannel ch(c, 0.0);
        std::vector<double> acc(3, 0.0);
        const int n = 20000;
        for (int t = 0; t < n; ++t) {
            for (std::size_t l = 0; l < 3; ++l)
                acc[l] += ch.tap_gains()[l].squaredNorm() / 4.0;
            ch.step();
        }
        for (std::size_t l = 0; l < 3; ++l)
            CHECK(acc[l] / n == doctest::Approx(c.tap_powers[l]).epsilon(0.03));
    }
    SUBCASE("symbol index and seeding")
    {
        TdlChannel a(small_config());
        TdlChannel b(small_config());
        CHECK(a.symbol_index() == 0);
        a.step();
        a.step();
        CHECK(a.symbol_index() == 2);
        CHECK(a.current().t == 2);
        b.step();
        b.step();
        CHECK((a.tap_gains()[1] - b.tap_gains()[1]).norm() == 0.0);
    }
    SUBCASE("configuration invariants")
    {
        auto bad = [](auto mutate) {
            ChannelConfig c = small_config();
            mutate(c);
            return code_of([&] { c.validate(); });
        };
        CHECK(bad([](ChannelConfig& c) { c.tap_powers = {0.5, 0.5}; }) == ErrorCode::InvalidConfig);
        CHECK(bad([](ChannelConfig& c) { c.tap_powers = {0.5, 0.3, 0.3}; }) == ErrorCode::InvalidConfig);
        CHECK(bad([](ChannelConfig& c) { c.tap_delays = {0, 3, 1}; }) == ErrorCode::InvalidConfig);
        CHECK(bad([](ChannelConfig& c) { c.tap_delays = {0, 1, 8}; }) == ErrorCode::InvalidConfig);
        CHECK(bad([](ChannelConfig& c) { c.n_tx = 0; }) == ErrorCode::InvalidConfig);
        CHECK(bad([](ChannelConfig& c) { c.speed_mps = -1; }) == ErrorCode::InvalidConfig);
        CHECK(code_of([] { TdlChannel(small_config(), 1.5); }) == ErrorCode::InvalidConfig);
    }
}

TEST_CASE("channel traces")
{
    TdlChannel ch(small_config());
    const ChannelTrace trace = record_trace(ch, 5);
    CHECK(trace.symbols.size() == 5);
    CHECK(ch.symbol_index() == 5);

    const auto bytes = encode_trace(trace);
    CHECK(bytes.size() == 8 + 16 + 5 * 8 * 2 * 2 * 16);
    const ChannelTrace back = decode_trace(bytes);
    REQUIRE(back.symbols.size() == 5);
    CHECK(back.n_rx == 2);
    CHECK(back.n_tx == 2);
    CHECK(back.n_subcarriers == 8);
    for (std::size_t t = 0; t < 5; ++t)
        for (std::size_t i = 0; i < 8; ++i)
            CHECK((back.symbols[t].freq_response[i] - trace.symbols[t].freq_response[i]).norm() == 0.0);

    SUBCASE("corrupt headers and truncation are decoding errors")
    {
        auto bad_magic = bytes;
        bad_magic[0] = 'X';
        CHECK(code_of([&] { decode_trace(bad_magic); }) == ErrorCode::Decoding);
        auto truncated = bytes;
        truncated.pop_back();
        CHECK(code_of([&] { decode_trace(truncated); }) == ErrorCode::Decoding);
        CHECK(code_of([&] { decode_trace(std::span<const std::uint8_t>()); }) == ErrorCode::Decoding);
    }
    SUBCASE("missing files are I/O errors")
    {
        CHECK(code_of([] { read_trace("/nonexistent/dir/trace.bin"); }) == ErrorCode::Io);
    }
}
