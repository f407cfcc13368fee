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
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include "mcvst/mcvst.h"

namespace {

struct Config {
    mcvst_config* ptr = nullptr;
    ~Config() { mcvst_config_free(ptr); }
};

std::string take(mcvst_buffer& b)
{
    std::string s(reinterpret_cast<const char*>(b.data), b.size);
    mcvst_buffer_free(&b);
    return s;
}

Config tiny()
{
    Config c;
    const std::string text = "sweep.snr_db = 30, 0\nsweep.frames = 2\nsource.width = 16\nsource.height = 16\n";
    REQUIRE(mcvst_config_parse(text.data(), text.size(), &c.ptr) == MCVST_OK);
    return c;
}

} // namespace

TEST_CASE("status names and errors")
{
    CHECK(std::string(mcvst_status_name(MCVST_OK)) == "ok");
    CHECK(std::string(mcvst_status_name(MCVST_ERR_INVALID_CONFIG)) == "invalid_config");
    CHECK(std::string(mcvst_status_name(static_cast<mcvst_status>(15))) == "unknown");
    CHECK(std::strlen(mcvst_version()) > 0);

    mcvst_config* c = nullptr;
    const char* bad = "sampling.m_h = 3\n";
    CHECK(mcvst_config_parse(bad, std::strlen(bad), &c) == MCVST_ERR_INVALID_CONFIG);
    CHECK(c == nullptr);
    CHECK(std::string(mcvst_last_error()).find("line 1") != std::string::npos);
    CHECK(mcvst_config_parse(nullptr, 4, &c) == MCVST_ERR_INVALID_ARGUMENT);
    CHECK(mcvst_config_parse(nullptr, 0, &c) == MCVST_OK);
    mcvst_config_free(c);
    c = nullptr;
    CHECK(mcvst_config_default(nullptr) == MCVST_ERR_INVALID_ARGUMENT);
    CHECK(mcvst_config_load("/nonexistent/x.conf", &c) == MCVST_ERR_IO);
    mcvst_config_free(nullptr);
    mcvst_buffer_free(nullptr);
}

TEST_CASE("config handle")
{
    Config c;
    REQUIRE(mcvst_config_default(&c.ptr) == MCVST_OK);
    mcvst_buffer b{};
    REQUIRE(mcvst_config_get(c.ptr, "sampling.m_h", &b) == MCVST_OK);
    CHECK(take(b) == "8");
    CHECK(mcvst_config_set(c.ptr, "sampling.m_h", "4") == MCVST_OK);
    REQUIRE(mcvst_config_get(c.ptr, "sampling.m_h", &b) == MCVST_OK);
    CHECK(take(b) == "4");
    CHECK(mcvst_config_set(c.ptr, "sampling.m_h", "5") == MCVST_ERR_INVALID_CONFIG);
    REQUIRE(mcvst_config_get(c.ptr, "sampling.m_h", &b) == MCVST_OK);
    CHECK(take(b) == "4");
    CHECK(mcvst_config_set(c.ptr, "no.such", "1") == MCVST_ERR_INVALID_CONFIG);
    CHECK(mcvst_config_get(c.ptr, "no.such", &b) == MCVST_ERR_INVALID_ARGUMENT);

    REQUIRE(mcvst_config_to_text(c.ptr, &b) == MCVST_OK);
    const std::string text = take(b);
    Config d;
    REQUIRE(mcvst_config_parse(text.data(), text.size(), &d.ptr) == MCVST_OK);
    REQUIRE(mcvst_config_to_text(d.ptr, &b) == MCVST_OK);
    CHECK(take(b) == text);

    uint64_t seed = 0;
    CHECK(mcvst_config_seed(c.ptr, &seed) == MCVST_OK);
    CHECK(seed == 1);
    const uint64_t flag = 77;
    CHECK(mcvst_resolve_seed(c.ptr, &flag, &seed) == MCVST_OK);
    CHECK(seed == 77);
}

TEST_CASE("experiments through the C interface")
{
    auto c = tiny();
    mcvst_buffer a{}, b{};
    REQUIRE(mcvst_sweep(c.ptr, 3, &a) == MCVST_OK);
    REQUIRE(mcvst_sweep(c.ptr, 3, &b) == MCVST_OK);
    const auto sa = take(a);
    CHECK(sa == take(b));
    CHECK(sa.rfind("snr_db,seed,frame,", 0) == 0);
    CHECK(std::count(sa.begin(), sa.end(), '\n') == 5);

    REQUIRE(mcvst_simulate(c.ptr, 3, 30.0, &a) == MCVST_OK);
    CHECK(std::count(a.data, a.data + a.size, '\n') == 3);
    mcvst_buffer_free(&a);
    CHECK(a.data == nullptr);

    int ok = 0;
    REQUIRE(mcvst_coverage(c.ptr, &ok, &a) == MCVST_OK);
    CHECK(ok == 1);
    CHECK(take(a).find("t=7:") != std::string::npos);

    char digest[17] = {};
    REQUIRE(mcvst_codec_selftest(c.ptr, 3, &ok, &a, digest) == MCVST_OK);
    CHECK(ok == 1);
    CHECK(std::strlen(digest) == 16);
    mcvst_buffer_free(&a);
}

TEST_CASE("channel handle")
{
    auto c = tiny();
    mcvst_channel* ch = nullptr;
    REQUIRE(mcvst_channel_create(c.ptr, 4, &ch) == MCVST_OK);
    std::vector<double> h0(128), h1(128);
    CHECK(mcvst_channel_response(ch, 0, h0.data(), h0.size()) == MCVST_OK);
    CHECK(mcvst_channel_response(ch, 0, h0.data(), 127) == MCVST_ERR_INVALID_ARGUMENT);
    CHECK(mcvst_channel_response(ch, 64, h0.data(), 128) == MCVST_ERR_INVALID_ARGUMENT);
    CHECK(mcvst_channel_step(ch) == MCVST_OK);
    uint64_t t = 0;
    CHECK(mcvst_channel_symbol_index(ch, &t) == MCVST_OK);
    CHECK(t == 1);
    CHECK(mcvst_channel_response(ch, 0, h1.data(), h1.size()) == MCVST_OK);
    CHECK(h0 != h1);
    mcvst_channel_free(ch);

    const auto path = (std::filesystem::temp_directory_path() / "mcvst_capi_trace.bin").string();
    CHECK(mcvst_trace_export(c.ptr, 4, 5, path.c_str()) == MCVST_OK);
    CHECK(std::filesystem::file_size(path) == 8 + 16 + 5 * 8 * 8 * 64 * 16);
    std::filesystem::remove(path);
}

TEST_CASE("numerics")
{
    double rho = 0.0;
    CHECK(mcvst_doppler_coefficient(0.0, 2.6e9, 1e-3, &rho) == MCVST_OK);
    CHECK(rho == 1.0);
    CHECK(mcvst_doppler_coefficient(-1.0, 2.6e9, 1e-3, &rho) != MCVST_OK);

    size_t idx[8] = {};
    size_t count = 0;
    CHECK(mcvst_sampled_indices(8, 4, 1, idx, 8, &count) == MCVST_OK);
    CHECK(count == 2);
    CHECK(idx[0] == 1);
    CHECK(idx[1] == 5);
    CHECK(mcvst_sampled_indices(64, 8, 0, idx, 7, &count) == MCVST_ERR_INVALID_ARGUMENT);
    CHECK(count == 8);

    const double costs[] = {6802.8};
    double r = 0.0;
    CHECK(mcvst_cbr(costs, 1, 256, 256, &r) == MCVST_OK);
    CHECK(r == 6802.8 / (256.0 * 256.0 * 3.0));

    const double gains[] = {4.0, 1.0};
    double p[2] = {};
    CHECK(mcvst_waterfilling(gains, 2, 1.0, 1.0, p) == MCVST_OK);
    CHECK(p[0] == doctest::Approx(0.875));
    CHECK(p[1] == doctest::Approx(0.125));

    const int64_t sym[] = {0, 3, -2, 7};
    const double mu[] = {0.0, 2.5, -1.0, 0.0};
    const double b[] = {1.0, 0.5, 2.0, 3.0};
    mcvst_buffer enc{};
    REQUIRE(mcvst_laplace_encode(sym, mu, b, 4, &enc) == MCVST_OK);
    int64_t out[4] = {};
    CHECK(mcvst_laplace_decode(enc.data, enc.size, mu, b, 4, out) == MCVST_OK);
    CHECK(std::equal(sym, sym + 4, out));
    mcvst_buffer_free(&enc);
    double bits = 0.0;
    CHECK(mcvst_laplace_bits(sym, mu, b, 4, &bits) == MCVST_OK);
    CHECK(bits > 0.0);
    const double zero_scale[] = {0.0, 1.0, 1.0, 1.0};
    CHECK(mcvst_laplace_bits(sym, mu, zero_scale, 4, &bits) == MCVST_ERR_INVALID_PARAMS);
}
