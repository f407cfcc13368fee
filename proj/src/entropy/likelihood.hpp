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

#pragma once

// Discretized likelihoods. Every model is a continuous density convolved with
// U(-1/2, 1/2), so the mass of integer n is CDF(n + 1/2) - CDF(n - 1/2).

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "common/tensor.hpp"

namespace mcvst::entropy {

inline constexpr double kScaleFloor = 1e-6;
inline constexpr double kProbFloor = 0x1p-64;

// Round half away from zero. Throws Error(InvalidInput) on non-finite or
// out-of-range values.
std::int32_t quantize(double x);
IntGrid quantize(const RealGrid& x);
// Element-wise quantize(x / step).
IntGrid quantize(const RealGrid& x, double step);

double laplace_cdf(double x, double mu, double b);

// Unfloored F(n + 1/2) - F(n - 1/2), evaluated on the tail that avoids cancellation.
double laplace_box_mass(std::int64_t n, double mu, double b);

// laplace_box_mass floored at kProbFloor. Throws Error(InvalidParams) if b < kScaleFloor.
double laplace_box_prob(std::int64_t n, double mu, double b);

// Monotone CDF built from K logistic components,
//     F(x) = sum_k w_k / (1 + exp(-(x - loc_k) / s_k)).
struct LogisticMixture {
    std::vector<double> weights;
    std::vector<double> locations;
    std::vector<double> scales;

    static LogisticMixture logistic(double location, double scale) { return {{1.0}, {location}, {scale}}; }

    // Throws Error(InvalidParams).
    void validate() const;
    double cdf(double x) const;
    double survival(double x) const;
    double box_mass(std::int64_t n) const;
    // Location of the heaviest component, used to centre coding supports.
    double center() const;
    double spread() const;
};

// Per-channel factorized density for a hyper latent (one mixture per channel).
struct HyperDensity {
    std::vector<LogisticMixture> channels;

    // Default: single logistic per channel, location 0, scale in [2, 6) from the seed.
    static HyperDensity seeded(std::size_t n_channels, std::uint64_t seed);

    void validate() const;
};

// P(z_j) for every element of z, using the density of the element's channel,
// floored at kProbFloor.
std::vector<double> hyper_likelihood(const IntGrid& z, const HyperDensity& psi);

} // namespace mcvst::entropy
