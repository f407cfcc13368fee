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

#include "common/error.hpp"
#include "common/rng.hpp"
#include "cormap/correlation_map.hpp"
#include "oracles.hpp"

using namespace mcvst;
using namespace mcvst::cormap;

namespace {

RealGrid random_context(Rng& rng, std::size_t c, std::size_t h, std::size_t w)
{
    RealGrid g(c, h, w);
    for (double& v : g.values())
        v = rng.gaussian();
    return g;
}

sampling::SampledCsi random_csi(Rng& rng, std::size_t groups, int nr, int nt)
{
    sampling::SampledCsi s;
    for (std::size_t g = 0; g < groups; ++g) {
        CMatrix h(nr, nt);
        for (int i = 0; i < nr; ++i)
            for (int j = 0; j < nt; ++j)
                h(i, j) = rng.complex_gaussian(1.0);
        s.entries.push_back(h);
        s.positions.push_back(g);
    }
    return s;
}

} // namespace

TEST_CASE("embedders")
{
    const ProjectionEmbedder e(8, 16, 99);
    Rng rng(1);
    SUBCASE("zero input maps to e0")
    {
        const std::vector<double> zero(8, 0.0);
        const auto v = e.embed(zero);
        CHECK(v(0) == 1.0);
        CHECK(v.tail(15).norm() == 0.0);
    }
    SUBCASE("unit norm and positive-scale invariance")
    {
        for (int trial = 0; trial < 100; ++trial) {
            std::vector<double> x(8);
            for (double& v : x)
                v = rng.gaussian();
            const auto a = e.embed(x);
            CHECK(std::abs(a.norm() - 1.0) < 1e-12);
            const double c = std::exp(4.0 * rng.gaussian());
            for (double& v : x)
                v *= c;
            CHECK((e.embed(x) - a).cwiseAbs().maxCoeff() < 1e-12);
        }
    }
    SUBCASE("input validation")
    {
        const std::vector<double> short_input(7, 1.0);
        CHECK_THROWS_AS(e.embed(short_input), Error);
        std::vector<double> nan_input(8, 1.0);
        nan_input[3] = std::nan("");
        CHECK_THROWS_AS(e.embed(nan_input), Error);
    }
    SUBCASE("context embedding pools each channel")
    {
        RealGrid ctx(16, 2, 2, 0.0);
        for (std::size_t h = 0; h < 2; ++h)
            for (std::size_t w = 0; w < 2; ++w)
                ctx(9, h, w) = static_cast<double>(h + w);
        std::vector<double> pooled(8, 0.0);
        pooled[1] = 1.0;
        CHECK((embed_context(ctx, 1, 8, e) - e.embed(pooled)).norm() < 1e-15);
        CHECK_THROWS_AS(embed_context(ctx, 2, 8, e), Error);
    }
}

TEST_CASE("softmax rows")
{
    SUBCASE("two-entry row against the closed form")
    {
        Eigen::MatrixXd s(1, 2);
        s << 1.0, -1.0;
        const auto m = softmax_rows(s, 1.0);
        const auto ref = oracle::softmax({1.0, -1.0}, 1.0);
        CHECK(std::abs(m(0, 0) - ref[0]) < 1e-15);
        CHECK(std::abs(m(0, 1) - ref[1]) < 1e-15);
        CHECK(m(0, 0) == doctest::Approx(0.8808).epsilon(1e-4));
        CHECK(m(0, 1) == doctest::Approx(0.1192).epsilon(1e-3));
    }
    SUBCASE("large logits do not overflow")
    {
        Eigen::MatrixXd s(1, 3);
        s << 1000.0, 999.0, -1000.0;
        const auto m = softmax_rows(s, 0.01);
        CHECK(m.allFinite());
        CHECK(std::abs(m.row(0).sum() - 1.0) < 1e-12);
    }
    CHECK_THROWS_AS(softmax_rows(Eigen::MatrixXd::Zero(1, 1), 0.0), Error);
}

TEST_CASE("correlation map")
{
    MapConfig cfg;  // L = 64, m_c = 8, m_h = 8
    const auto emb = Embedders::seeded(cfg, 8, 8, 2024);
    Rng rng(17);

    SUBCASE("default shapes give an 8 x 8 row-stochastic map")
    {
        const auto m = build_map(random_context(rng, 64, 4, 4), random_csi(rng, 8, 8, 8), cfg, emb);
        CHECK(m.rows() == 8);
        CHECK(m.cols() == 8);
        for (Eigen::Index i = 0; i < 8; ++i) {
            CHECK(std::abs(m.values.row(i).sum() - 1.0) < 1e-12);
            CHECK(m.values.row(i).minCoeff() >= 0.0);
        }
    }
    SUBCASE("identical CSI gives uniform rows")
    {
        auto csi = random_csi(rng, 1, 8, 8);
        for (int g = 1; g < 8; ++g) {
            csi.entries.push_back(csi.entries[0]);
            csi.positions.push_back(static_cast<std::size_t>(g) * 8);
        }
        const auto m = build_map(random_context(rng, 64, 4, 4), csi, cfg, emb);
        CHECK((m.values.array() - 1.0 / 8.0).abs().maxCoeff() < 1e-15);
    }
    SUBCASE("very high temperature approaches uniform")
    {
        MapConfig hot = cfg;
        hot.temperature = 1e6;
        const auto m = build_map(random_context(rng, 64, 4, 4), random_csi(rng, 8, 8, 8), hot, emb);
        CHECK((m.values.array() - 1.0 / 8.0).abs().maxCoeff() < 1e-6);
    }
    SUBCASE("scaling a context group leaves the map unchanged")
    {
        const auto ctx = random_context(rng, 64, 4, 4);
        const auto csi = random_csi(rng, 8, 8, 8);
        auto scaled = ctx;
        for (std::size_t c = 8; c < 16; ++c)
            for (std::size_t h = 0; h < 4; ++h)
                for (std::size_t w = 0; w < 4; ++w)
                    scaled(c, h, w) *= 37.5;
        const auto a = build_map(ctx, csi, cfg, emb);
        const auto b = build_map(scaled, csi, cfg, emb);
        CHECK((a.values - b.values).cwiseAbs().maxCoeff() < 1e-12);
    }
    SUBCASE("the map depends on the CSI")
    {
        const auto ctx = random_context(rng, 64, 4, 4);
        const auto a = build_map(ctx, random_csi(rng, 8, 8, 8), cfg, emb);
        const auto b = build_map(ctx, random_csi(rng, 8, 8, 8), cfg, emb);
        CHECK((a.values - b.values).norm() > 1e-6);
    }
    SUBCASE("shape errors")
    {
        CHECK_THROWS_AS(build_map(random_context(rng, 32, 4, 4), random_csi(rng, 8, 8, 8), cfg, emb), Error);
        CHECK_THROWS_AS(build_map(random_context(rng, 64, 4, 4), sampling::SampledCsi{}, cfg, emb), Error);
        MapConfig bad = cfg;
        bad.context_group = 7;
        CHECK_THROWS_AS(bad.validate(64), Error);
        bad = cfg;
        bad.subcarrier_group = 3;
        CHECK_THROWS_AS(bad.validate(64), Error);
    }
}
