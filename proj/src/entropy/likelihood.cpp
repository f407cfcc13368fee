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

#include "entropy/likelihood.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "common/error.hpp"
#include "common/rng.hpp"

namespace mcvst::entropy {

std::int32_t quantize(double x)
{
    require(std::isfinite(x), ErrorCode::InvalidInput, "cannot quantize a non-finite value");
    const double r = std::round(x);
    require(std::abs(r) <= static_cast<double>(std::numeric_limits<std::int32_t>::max()), ErrorCode::InvalidInput,
            "quantized value out of 32-bit range");
    return static_cast<std::int32_t>(r);
}

IntGrid quantize(const RealGrid& x)
{
    return quantize(x, 1.0);
}

IntGrid quantize(const RealGrid& x, double step)
{
    require(step > 0.0 && std::isfinite(step), ErrorCode::InvalidInput, "quantization step must be positive");
    IntGrid out(x.shape());
    auto src = x.values();
    auto dst = out.values();
    for (std::size_t k = 0; k < src.size(); ++k)
        dst[k] = quantize(src[k] / step);
    return out;
}

double laplace_cdf(double x, double mu, double b)
{
    const double d = (x - mu) / b;
    return d < 0.0 ? 0.5 * std::exp(d) : 1.0 - 0.5 * std::exp(-d);
}

double laplace_box_mass(std::int64_t n, double mu, double b)
{
    const double lo = (static_cast<double>(n) - 0.5 - mu) / b;
    const double hi = (static_cast<double>(n) + 0.5 - mu) / b;
    if (hi <= 0.0)  // entirely left of the mode
        return 0.5 * (std::exp(hi) - std::exp(lo));
    if (lo >= 0.0)  // entirely right of the mode
        return 0.5 * (std::exp(-lo) - std::exp(-hi));
    return 1.0 - 0.5 * std::exp(lo) - 0.5 * std::exp(-hi);
}

double laplace_box_prob(std::int64_t n, double mu, double b)
{
    if (!(b >= kScaleFloor && std::isfinite(b)))
        fail(ErrorCode::InvalidParams, "Laplace scale " + std::to_string(b) + " is below the floor");
    require(std::isfinite(mu), ErrorCode::InvalidParams, "Laplace mean is not finite");
    return std::max(laplace_box_mass(n, mu, b), kProbFloor);
}

namespace {

double sigmoid(double x)
{
    if (x >= 0.0)
        return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

} // namespace

void LogisticMixture::validate() const
{
    require(!weights.empty() && weights.size() == locations.size() && weights.size() == scales.size(),
            ErrorCode::InvalidParams, "mixture parameter lengths differ");
    double total = 0.0;
    for (std::size_t k = 0; k < weights.size(); ++k) {
        require(weights[k] > 0.0 && std::isfinite(weights[k]), ErrorCode::InvalidParams,
                "mixture weights must be positive");
        require(std::isfinite(locations[k]), ErrorCode::InvalidParams, "mixture locations must be finite");
        require(scales[k] > 0.0 && std::isfinite(scales[k]), ErrorCode::InvalidParams,
                "mixture scales must be positive");
        total += weights[k];
    }
    require(std::abs(total - 1.0) <= 1e-12, ErrorCode::InvalidParams, "mixture weights must sum to 1");
}

double LogisticMixture::cdf(double x) const
{
    double f = 0.0;
    for (std::size_t k = 0; k < weights.size(); ++k)
        f += weights[k] * sigmoid((x - locations[k]) / scales[k]);
    return f;
}

double LogisticMixture::survival(double x) const
{
    double s = 0.0;
    for (std::size_t k = 0; k < weights.size(); ++k)
        s += weights[k] * sigmoid(-(x - locations[k]) / scales[k]);
    return s;
}

double LogisticMixture::box_mass(std::int64_t n) const
{
    const double lo = static_cast<double>(n) - 0.5;
    const double hi = static_cast<double>(n) + 0.5;
    double p = 0.0;
    // Per component, difference the tail that is small at this point.
    for (std::size_t k = 0; k < weights.size(); ++k) {
        const double a = (lo - locations[k]) / scales[k];
        const double c = (hi - locations[k]) / scales[k];
        const double part = a >= 0.0 ? sigmoid(-a) - sigmoid(-c) : sigmoid(c) - sigmoid(a);
        p += weights[k] * part;
    }
    return p;
}

double LogisticMixture::center() const
{
    const auto k = static_cast<std::size_t>(std::max_element(weights.begin(), weights.end()) - weights.begin());
    return locations[k];
}

double LogisticMixture::spread() const
{
    double lo = locations[0];
    double hi = locations[0];
    double s = 0.0;
    for (std::size_t k = 0; k < weights.size(); ++k) {
        lo = std::min(lo, locations[k]);
        hi = std::max(hi, locations[k]);
        s = std::max(s, scales[k]);
    }
    return (hi - lo) + s;
}

HyperDensity HyperDensity::seeded(std::size_t n_channels, std::uint64_t seed)
{
    Rng rng(seed);
    HyperDensity psi;
    psi.channels.reserve(n_channels);
    for (std::size_t c = 0; c < n_channels; ++c)
        psi.channels.push_back(LogisticMixture::logistic(0.0, 2.0 + 4.0 * rng.uniform()));
    return psi;
}

void HyperDensity::validate() const
{
    require(!channels.empty(), ErrorCode::InvalidParams, "hyper density has no channels");
    for (const auto& ch : channels)
        ch.validate();
}

std::vector<double> hyper_likelihood(const IntGrid& z, const HyperDensity& psi)
{
    psi.validate();
    if (z.channels() != psi.channels.size())
        fail(ErrorCode::InvalidParams, "hyper latent has " + std::to_string(z.channels()) + " channels, density has " +
             std::to_string(psi.channels.size()));
    std::vector<double> out;
    out.reserve(z.size());
    for (std::size_t c = 0; c < z.channels(); ++c)
        for (std::size_t h = 0; h < z.height(); ++h)
            for (std::size_t w = 0; w < z.width(); ++w)
                out.push_back(std::max(psi.channels[c].box_mass(z(c, h, w)), kProbFloor));
    return out;
}

} // namespace mcvst::entropy
