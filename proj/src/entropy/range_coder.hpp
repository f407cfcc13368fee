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

// Byte-oriented range coder with a 64-bit low register and carry propagation
// into the emitted bytes.
//
// Symbol models are integer CDFs over a finite support [lo, hi], frozen to
// kPrecisionBits-bit cumulative frequencies by
//     q(n) = floor(G(n) * (M - S)) + (n - lo),   M = 2^kPrecisionBits,
// where S = hi - lo + 1 and G(n) = (F(n - 1/2) - F(lo - 1/2)) / (F(hi + 1/2) - F(lo - 1/2)).
// Every symbol in the support gets frequency >= 1. The stream is flushed with
// the shortest value inside the final interval and trailing zero bytes are
// dropped; the decoder reads zeros past the end.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "entropy/likelihood.hpp"

namespace mcvst::entropy {

inline constexpr unsigned kPrecisionBits = 24;
inline constexpr std::uint32_t kTotalFreq = 1u << kPrecisionBits;
// Supports wider than this are clipped so that S <= M / 2.
inline constexpr std::int64_t kMaxSupport = std::int64_t{1} << (kPrecisionBits - 1);

class SymbolModel {
public:
    virtual ~SymbolModel() = default;
    virtual std::int64_t lo() const = 0;
    virtual std::int64_t hi() const = 0;
    // Continuous CDF at x = n - 1/2.
    virtual double edge_cdf(std::int64_t n) const = 0;
    // Unquantized, unfloored model probability of n (for rate estimates).
    virtual double mass(std::int64_t n) const = 0;

    bool contains(std::int64_t n) const { return n >= lo() && n <= hi(); }
    // q(n) for lo <= n <= hi + 1.
    std::uint32_t cumulative(std::int64_t n) const;

protected:
    // Caches F(lo - 1/2) and the support mass; call once lo/hi are final.
    void freeze();

private:
    double edge_lo_ = 0.0;
    double support_mass_ = 0.0;
};

// Laplace(mu, b) on [round(mu) - R, round(mu) + R], R = ceil(32 b) + 16.
class LaplaceModel final : public SymbolModel {
public:
    LaplaceModel(double mu, double b);

    std::int64_t lo() const override { return lo_; }
    std::int64_t hi() const override { return hi_; }
    double edge_cdf(std::int64_t n) const override;
    double mass(std::int64_t n) const override;

    double mu() const noexcept { return mu_; }
    double scale() const noexcept { return b_; }

private:
    double mu_;
    double b_;
    std::int64_t lo_;
    std::int64_t hi_;
};

// Logistic mixture on [round(center) - R, round(center) + R], R = ceil(40 spread) + 16.
class MixtureModel final : public SymbolModel {
public:
    explicit MixtureModel(const LogisticMixture& density);

    std::int64_t lo() const override { return lo_; }
    std::int64_t hi() const override { return hi_; }
    double edge_cdf(std::int64_t n) const override;
    double mass(std::int64_t n) const override;

private:
    const LogisticMixture* density_;
    std::int64_t lo_;
    std::int64_t hi_;
};

class RangeEncoder {
public:
    // Throws Error(Encoding) if the symbol is outside the model's support.
    void encode(std::int64_t symbol, const SymbolModel& model);
    void encode_frequency(std::uint32_t cum, std::uint32_t freq);

    // Flushes and returns the payload. The encoder is left empty.
    std::vector<std::uint8_t> finish();

private:
    void carry();

    std::uint64_t low_ = 0;
    std::uint64_t range_ = ~std::uint64_t{0};
    std::vector<std::uint8_t> out_;
};

class RangeDecoder {
public:
    explicit RangeDecoder(std::span<const std::uint8_t> payload);

    std::int64_t decode(const SymbolModel& model);

    // Bytes consumed beyond the payload (zero padding).
    std::size_t overrun() const noexcept { return pos_ > data_.size() ? pos_ - data_.size() : 0; }

private:
    std::uint8_t next_byte();

    std::span<const std::uint8_t> data_;
    std::size_t pos_ = 0;
    std::uint64_t value_ = 0;
    std::uint64_t range_ = ~std::uint64_t{0};
};

// One model per symbol.
std::vector<std::uint8_t> range_encode(std::span<const std::int64_t> symbols,
                                       std::span<const SymbolModel* const> models);
std::vector<std::int64_t> range_decode(std::span<const std::uint8_t> payload,
                                       std::span<const SymbolModel* const> models);

// Sum of -log2(max(mass, kProbFloor)) over the symbols.
double estimated_bits(std::span<const std::int64_t> symbols, std::span<const SymbolModel* const> models);

} // namespace mcvst::entropy
