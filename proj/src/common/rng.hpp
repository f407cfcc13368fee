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

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>

namespace mcvst {

// Stream identifiers for seed splitting. Values are stable; new streams get new ids.
enum class Stream : std::uint64_t {
    Channel = 1,
    Noise = 2,
    ContextEmbedder = 3,
    CsiEmbedder = 4,
    Predictor = 5,
    HyperDensity = 6,
    Source = 7,
    Transform = 8,
    Selftest = 9,
};

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept
{
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// child = mix64(root + 0x9E3779B97F4A7C15 * (stream + 1))
constexpr std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream) noexcept
{
    return mix64(root + 0x9E3779B97F4A7C15ULL * (stream + 1));
}

constexpr std::uint64_t derive_seed(std::uint64_t root, Stream stream) noexcept
{
    return derive_seed(root, static_cast<std::uint64_t>(stream));
}

// mt19937_64 is fully specified by the standard; the distributions below are
// spelled out instead of using <random>'s implementation-defined ones so that
// sequences are identical across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Uniform on (0, 1].
    double uniform_open0() { return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53; }

    // Standard normal, Box-Muller with cached second variate.
    double gaussian()
    {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double radius = std::sqrt(-2.0 * std::log(uniform_open0()));
        const double angle = 2.0 * std::numbers::pi * uniform();
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

    // Circularly-symmetric complex Gaussian with E|z|^2 = variance.
    std::complex<double> complex_gaussian(double variance)
    {
        const double s = std::sqrt(variance / 2.0);
        const double re = gaussian();
        const double im = gaussian();
        return {s * re, s * im};
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace mcvst
