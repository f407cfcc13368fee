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
#include <numeric>

#include "common/error.hpp"
#include "common/rng.hpp"
#include "entropy/bitstream.hpp"
#include "entropy/checkerboard.hpp"
#include "entropy/latent_codec.hpp"
#include "entropy/likelihood.hpp"
#include "entropy/range_coder.hpp"
#include "entropy/rate.hpp"
#include "entropy/references.hpp"
#include "oracles.hpp"

using namespace mcvst;
using namespace mcvst::entropy;

namespace {

// Uniform model over {0, 1, 2, 3}.
class QuarterModel final : public SymbolModel {
public:
    QuarterModel() { freeze(); }
    std::int64_t lo() const override { return 0; }
    std::int64_t hi() const override { return 3; }
    double edge_cdf(std::int64_t n) const override { return std::clamp(static_cast<double>(n), 0.0, 4.0) / 4.0; }
    double mass(std::int64_t) const override { return 0.25; }
};

IntGrid laplace_latent(Rng& rng, const Shape3& shape, double b)
{
    IntGrid g(shape);
    for (auto& v : g.values()) {
        const double u = rng.uniform() - 0.5;
        v = static_cast<std::int32_t>(std::lround(-b * std::copysign(std::log1p(-2.0 * std::abs(u)), u)));
    }
    return g;
}

MapWindow uniform_window(std::size_t rows, std::size_t cols)
{
    MapWindow w;
    w.indices = {0};
    w.maps = {Eigen::MatrixXd::Constant(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols),
                                        1.0 / static_cast<double>(cols))};
    return w;
}

LatentCodec small_codec(std::size_t channels, std::uint64_t seed)
{
    return LatentCodec(std::make_shared<AffinePredictor>(8, 8, seed), HyperDensity::seeded(channels, seed + 1),
                       LatentCodecConfig{8, 4});
}

double container_bits(const Container& c)
{
    double bits = 0.0;
    for (const auto& s : c.segments)
        bits += 8.0 * static_cast<double>(s.size());
    return bits;
}

double neg_log2(const std::vector<double>& p)
{
    double s = 0.0;
    for (double v : p)
        s -= std::log2(v);
    return s;
}

} // namespace

TEST_CASE("quantization")
{
    CHECK(quantize(0.5) == 1);
    CHECK(quantize(-0.5) == -1);
    CHECK(quantize(1.49) == 1);
    CHECK(quantize(-2.51) == -3);
    CHECK_THROWS_AS(quantize(std::nan("")), Error);
    CHECK_THROWS_AS(quantize(1e12), Error);
    RealGrid x(1, 1, 2);
    x(0, 0, 0) = 0.3;
    x(0, 0, 1) = -0.3;
    const auto q = quantize(x, 0.25);
    CHECK(q(0, 0, 0) == 1);
    CHECK(q(0, 0, 1) == -1);
}

TEST_CASE("discretized Laplace")
{
    CHECK(laplace_box_prob(0, 0.0, 1.0) == doctest::Approx(0.393469).epsilon(1e-6));
    SUBCASE("closed form agreement")
    {
        Rng rng(5);
        for (int trial = 0; trial < 200; ++trial) {
            const double mu = 10.0 * rng.gaussian();
            const double b = 0.05 + 5.0 * rng.uniform();
            for (std::int64_t n = std::llround(mu) - 10; n <= std::llround(mu) + 10; ++n)
                CHECK(std::abs(laplace_box_mass(n, mu, b) - oracle::laplace_box(n, mu, b)) < 1e-13);
        }
    }
    SUBCASE("sums to one and is symmetric about an integer mean")
    {
        double total = 0.0;
        for (std::int64_t n = -1000; n <= 1000; ++n)
            total += laplace_box_mass(n, 0.0, 3.0);
        CHECK(std::abs(total - 1.0) < 1e-12);
        for (std::int64_t n = 1; n < 50; ++n)
            CHECK(laplace_box_mass(n, 2.0, 1.7) == doctest::Approx(laplace_box_mass(4 - n, 2.0, 1.7)).epsilon(1e-14));
    }
    SUBCASE("far tails stay positive and floored")
    {
        CHECK(laplace_box_mass(400, 0.0, 1.0) > 0.0);
        CHECK(laplace_box_prob(100000, 0.0, 1.0) == kProbFloor);
        CHECK_THROWS_AS(laplace_box_prob(0, 0.0, 0.0), Error);
    }
}

TEST_CASE("hyper density")
{
    const auto mix = LogisticMixture::logistic(0.7, 2.5);
    for (std::int64_t n = -20; n <= 20; ++n)
        CHECK(std::abs(mix.box_mass(n) - oracle::logistic_box(n, 0.7, 2.5)) < 1e-14);
    double total = 0.0;
    for (std::int64_t n = -2000; n <= 2000; ++n)
        total += mix.box_mass(n);
    CHECK(std::abs(total - 1.0) < 1e-12);

    LogisticMixture bad{{0.5, 0.6}, {0.0, 1.0}, {1.0, 1.0}};
    CHECK_THROWS_AS(bad.validate(), Error);
    bad = {{1.0}, {0.0}, {-1.0}};
    CHECK_THROWS_AS(bad.validate(), Error);

    const auto psi = HyperDensity::seeded(4, 9);
    REQUIRE(psi.channels.size() == 4);
    IntGrid z(4, 1, 1, 0);
    const auto p = hyper_likelihood(z, psi);
    for (std::size_t c = 0; c < 4; ++c)
        CHECK(p[c] == doctest::Approx(psi.channels[c].box_mass(0)).epsilon(1e-15));
}

TEST_CASE("rate bookkeeping")
{
    const std::vector<double> half(10, 0.5);
    CHECK(group_rate(half, 1.0) == doctest::Approx(10.0).epsilon(1e-15));
    CHECK(group_rate(half, 0.0) == 0.0);
    CHECK(group_rate(half, 2.0) == doctest::Approx(20.0).epsilon(1e-15));
    CHECK(group_rate(half, half, 1.0) == doctest::Approx(20.0).epsilon(1e-15));
    CHECK_THROWS_AS(group_rate(half, -1.0), Error);

    CHECK(transmission_cost(1, 2, 3, 4) == 10.0);
    CHECK_THROWS_AS(transmission_cost(1, -2, 3, 4), Error);

    const std::vector<double> zero{0.0, 0.0};
    CHECK(cbr(zero, 2, 8, 8) == 0.0);
    const std::vector<double> k{100.0, 250.0};
    const std::vector<double> k2{200.0, 500.0};
    CHECK(cbr(k2, 2, 8, 8) == 2.0 * cbr(k, 2, 8, 8));
    CHECK(cbr(k, 2, 8, 8) == oracle::cbr_exact(k, 2, 8, 8));
    CHECK_THROWS_AS(cbr(k, 0, 8, 8), Error);

    // One 256 x 256 frame at the reference operating point.
    const std::vector<double> frame{6802.8};
    CHECK(cbr(frame, 1, 256, 256) == doctest::Approx(0.0346008).epsilon(1e-6));
    const std::vector<double> inverted{0.0347 * 256 * 256 * 3};
    CHECK(std::abs(cbr(inverted, 1, 256, 256) - 0.0347) < 1e-15);

    RateReport r;
    r.k_c = 1;
    r.k_v = 2;
    r.k_cz = 3;
    r.k_vz = 4;
    r.close();
    CHECK(r.k_t == 10.0);
}

TEST_CASE("range coder")
{
    SUBCASE("empty stream")
    {
        const auto bytes = range_encode({}, {});
        CHECK(range_decode(bytes, {}).empty());
    }
    SUBCASE("uniform quarter symbols cost two bits each")
    {
        const QuarterModel model;
        Rng rng(3);
        std::vector<std::int64_t> s(10000);
        for (auto& v : s)
            v = static_cast<std::int64_t>(rng.uniform() * 4.0);
        const std::vector<const SymbolModel*> models(s.size(), &model);
        const auto bytes = range_encode(s, models);
        const double bits = 8.0 * static_cast<double>(bytes.size());
        CHECK(bits >= 20000.0 - 8.0);
        CHECK(bits <= 20128.0);
        CHECK(estimated_bits(s, models) == doctest::Approx(20000.0).epsilon(1e-12));
        CHECK(range_decode(bytes, models) == s);
    }
    SUBCASE("Laplace symbols round trip near the ideal length")
    {
        Rng rng(11);
        std::vector<LaplaceModel> store;
        std::vector<std::int64_t> s;
        for (int k = 0; k < 20000; ++k) {
            const double mu = 3.0 * rng.gaussian();
            const double b = 0.1 + 4.0 * rng.uniform();
            store.emplace_back(mu, b);
            const double u = rng.uniform() - 0.5;
            s.push_back(std::llround(mu - b * std::copysign(std::log1p(-2.0 * std::abs(u)), u)));
        }
        std::vector<const SymbolModel*> models;
        for (const auto& m : store)
            models.push_back(&m);
        const auto bytes = range_encode(s, models);
        CHECK(range_decode(bytes, models) == s);
        const double ideal = estimated_bits(s, models);
        CHECK(std::abs(8.0 * static_cast<double>(bytes.size()) - ideal) <= 64.0 + 1e-3 * ideal);
    }
    SUBCASE("out of support")
    {
        const QuarterModel model;
        RangeEncoder enc;
        CHECK_THROWS_AS(enc.encode(4, model), Error);
    }
    SUBCASE("cumulative table is strictly increasing and complete")
    {
        const LaplaceModel m(0.3, 0.01);
        CHECK(m.cumulative(m.lo()) == 0);
        CHECK(m.cumulative(m.hi() + 1) == kTotalFreq);
        for (std::int64_t n = m.lo(); n <= m.hi(); ++n)
            CHECK(m.cumulative(n + 1) > m.cumulative(n));
    }
}

TEST_CASE("reference windows")
{
    CHECK(reference_indices(8, 8) == std::vector<std::uint64_t>{8});
    CHECK(reference_indices(11, 8) == std::vector<std::uint64_t>{8, 9, 10, 11});
    CHECK(reference_indices(0, 8) == std::vector<std::uint64_t>{0});
    CHECK(reference_indices(7, 8).size() == 8);
    CHECK_THROWS_AS(reference_indices(3, 0), Error);

    MapHistory history(4);
    for (std::uint64_t t : {8u, 9u, 11u})
        history.push({t, Eigen::MatrixXd::Constant(2, 2, static_cast<double>(t))});
    CHECK_THROWS_AS(history.push({10, Eigen::MatrixXd::Zero(2, 2)}), Error);
    const auto w = build_reference_window(history, 11, 8);
    CHECK(w.indices == std::vector<std::uint64_t>{8, 9, 11});
    CHECK(w.missing == 1);
    CHECK(w.mean()(0, 0) == doctest::Approx(28.0 / 3.0));
    CHECK_THROWS_AS(MapWindow{}.mean(), Error);
}

TEST_CASE("checkerboard")
{
    IntGrid g(2, 3, 3);
    std::iota(g.values().begin(), g.values().end(), 1);
    const auto split = checkerboard_split(g);
    CHECK(split.anchors(0, 0, 0) == 1);
    CHECK(split.anchors(0, 0, 1) == 0);
    CHECK(split.non_anchors(0, 0, 1) == 2);
    CHECK(checkerboard_merge(split) == g);

    const Shape3 s{16, 3, 3};
    const auto a = pass_elements(s, 1, 8, true);
    const auto n = pass_elements(s, 1, 8, false);
    CHECK(a.size() == 8 * 5);
    CHECK(n.size() == 8 * 4);
    CHECK(a.front() == 8 * 9);
    CHECK_THROWS_AS(pass_elements(s, 2, 8, true), Error);

    const IntGrid values(1, 2, 2, 7);
    CausalView view(values);
    CHECK_THROWS_AS(view.at(0, 0, 0), Error);
    view.reveal(0);
    CHECK(view.at(0, 0, 0) == 7);
    CHECK_FALSE(view.known(0, 1, 1));
}

TEST_CASE("parameter predictor")
{
    const AffinePredictor pred(8, 8, 42);
    GroupReferences refs;
    refs.context_group = 8;
    refs.phi_m = Eigen::VectorXd::Zero(16);
    refs.phi_ch = RealGrid(2, 2, 2, 0.0);
    refs.phi_z = RealGrid(8, 2, 2, 0.0);

    const auto zero = pred.predict_anchor(refs);
    for (std::size_t k = 0; k < zero.mu.size(); ++k) {
        CHECK(zero.mu[k] == 0.0);
        CHECK(zero.scale[k] == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    }
    CHECK_THROWS_AS(pred.predict_non_anchor(refs), Error);

    refs.phi_m(3) = 1.0;
    const auto moved = pred.predict_anchor(refs);
    CHECK(moved.mu != zero.mu);
    CHECK(moved.scale != zero.scale);
    CHECK(AffinePredictor(8, 8, 42).predict_anchor(refs).mu == moved.mu);

    refs.phi_lc = RealGrid(16, 2, 2, 0.0);
    CHECK_THROWS_AS(pred.predict_anchor(refs), Error);
    CHECK_NOTHROW(pred.predict_non_anchor(refs));

    refs.phi_m = Eigen::VectorXd::Zero(15);
    CHECK_THROWS_AS(pred.predict_non_anchor(refs), Error);
    CHECK(softplus(800.0) == 800.0);
    CHECK(softplus(-800.0) >= 0.0);
}

TEST_CASE("bitstream container")
{
    Container c{StreamKind::Motion, {16, 4, 4}, {{1, 2, 3}, {}, {9}}};
    const auto bytes = serialize(c);
    CHECK(bytes.size() == kContainerFixedBytes + 3 * 4 + 4);
    CHECK(parse(bytes) == c);
    const auto h = parse_header(bytes);
    CHECK(h.segment_lengths == std::vector<std::uint32_t>{3, 0, 1});
    CHECK(h.header_bytes == container_header(c).size());

    auto bad = bytes;
    bad[0] = 'X';
    CHECK_THROWS_AS(parse(bad), Error);
    bad = bytes;
    bad[20] = 9;  // kind
    CHECK_THROWS_AS(parse(bad), Error);
    bad = bytes;
    bad.pop_back();
    CHECK_THROWS_AS(parse(bad), Error);
    bad = bytes;
    bad.push_back(0);
    CHECK_THROWS_AS(parse(bad), Error);
    CHECK_THROWS_AS(parse(std::vector<std::uint8_t>{}), Error);
}

TEST_CASE("latent codec")
{
    const auto codec = small_codec(16, 7);
    const auto window = uniform_window(2, 8);
    Rng rng(23);
    const auto latent = laplace_latent(rng, {16, 8, 8}, 2.0);

    const auto enc = codec.encode(latent, window, StreamKind::Context);
    CHECK(enc.main.segments.size() == 2);
    CHECK(enc.hyper.segments.size() == 1);
    CHECK(enc.hyper.kind == StreamKind::HyperContext);
    CHECK(enc.z.shape() == hyper_shape(latent.shape(), 4));

    SUBCASE("lossless round trip")
    {
        const auto dec = codec.decode(enc.main, enc.hyper, window);
        CHECK(dec.complete(2));
        CHECK(dec.values == latent);
        CHECK(dec.z == enc.z);
    }
    SUBCASE("coded length tracks the model probabilities")
    {
        const double ideal = neg_log2(enc.hyper_probs);
        CHECK(std::abs(container_bits(enc.hyper) - ideal) <= 64.0 + 1e-3 * ideal);
        double main_ideal = 0.0;
        for (std::size_t g = 0; g < 2; ++g)
            main_ideal += neg_log2(enc.anchor_probs[g]) + neg_log2(enc.non_anchor_probs[g]);
        CHECK(std::abs(container_bits(enc.main) - main_ideal) <= 2 * 64.0 + 1e-3 * main_ideal);
    }
    SUBCASE("deterministic")
    {
        const auto again = codec.encode(latent, window, StreamKind::Context);
        CHECK(again.main == enc.main);
        CHECK(again.hyper == enc.hyper);
    }
    SUBCASE("a lost group stops decoding there")
    {
        ReceivedLatent rx{latent.shape(), enc.hyper.segments[0], {enc.main.segments[0], std::nullopt}};
        const auto dec = codec.decode(rx, window);
        CHECK(dec.hyper_ok);
        CHECK(dec.groups_decoded == 1);
        CHECK_FALSE(dec.complete(2));
        for (std::size_t h = 0; h < 8; ++h)
            for (std::size_t w = 0; w < 8; ++w) {
                CHECK(dec.values(3, h, w) == latent(3, h, w));
                CHECK(dec.values(12, h, w) == 0);
            }
    }
    SUBCASE("a lost hyper segment loses everything")
    {
        ReceivedLatent rx{latent.shape(), std::nullopt, {enc.main.segments[0], enc.main.segments[1]}};
        const auto dec = codec.decode(rx, window);
        CHECK_FALSE(dec.hyper_ok);
        CHECK(dec.groups_decoded == 0);
    }
    SUBCASE("the window is part of the model")
    {
        auto other = window;
        other.maps[0](0, 0) = 0.9;
        other.maps[0](0, 1) = 0.9 - 1.0 / 8.0 * 2.0;
        const auto a = codec.encode(latent, other, StreamKind::Context);
        CHECK_FALSE(a.main == enc.main);
    }
    SUBCASE("shape checks")
    {
        CHECK_THROWS_AS(codec.encode(IntGrid(12, 8, 8), window, StreamKind::Context), Error);
        CHECK_THROWS_AS(codec.encode(latent, MapWindow{}, StreamKind::Context), Error);
        CHECK_THROWS_AS(small_codec(12, 1).encode(IntGrid(12, 8, 8), window, StreamKind::Context), Error);
    }
}
