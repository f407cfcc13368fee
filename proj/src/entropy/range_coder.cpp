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

#include "entropy/range_coder.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "common/error.hpp"

namespace mcvst::entropy {

namespace {

constexpr std::uint64_t kTop = std::uint64_t{1} << 56;

std::int64_t clamp_center(double x)
{
    constexpr double limit = 0x1p52;
    return static_cast<std::int64_t>(std::round(std::clamp(x, -limit, limit)));
}

std::int64_t half_width(double spread, double multiplier)
{
    const double r = std::ceil(multiplier * spread) + 16.0;
    return static_cast<std::int64_t>(std::min(r, static_cast<double>(kMaxSupport / 2 - 1)));
}

} // namespace

void SymbolModel::freeze()
{
    edge_lo_ = edge_cdf(lo());
    support_mass_ = edge_cdf(hi() + 1) - edge_lo_;
}

std::uint32_t SymbolModel::cumulative(std::int64_t n) const
{
    const std::int64_t first = lo();
    const std::int64_t last = hi();
    if (n <= first)
        return 0;
    if (n > last)
        return kTotalFreq;
    const auto support = static_cast<std::uint64_t>(last - first + 1);
    double g;
    if (support_mass_ > 0.0)
        g = std::clamp((edge_cdf(n) - edge_lo_) / support_mass_, 0.0, 1.0);
    else
        g = static_cast<double>(n - first) / static_cast<double>(support);
    const double spread = static_cast<double>(kTotalFreq - support);
    const auto base = static_cast<std::uint64_t>(std::floor(g * spread));
    return static_cast<std::uint32_t>(base + static_cast<std::uint64_t>(n - first));
}

LaplaceModel::LaplaceModel(double mu, double b) : mu_(mu), b_(b)
{
    require(std::isfinite(mu), ErrorCode::InvalidParams, "Laplace mean is not finite");
    if (!(b >= kScaleFloor && std::isfinite(b)))
        fail(ErrorCode::InvalidParams, "Laplace scale " + std::to_string(b) + " is below the floor");
    const std::int64_t center = clamp_center(mu);
    const std::int64_t r = half_width(b, 32.0);
    lo_ = center - r;
    hi_ = center + r;
    freeze();
}

double LaplaceModel::edge_cdf(std::int64_t n) const
{
    return laplace_cdf(static_cast<double>(n) - 0.5, mu_, b_);
}

double LaplaceModel::mass(std::int64_t n) const
{
    return laplace_box_mass(n, mu_, b_);
}

MixtureModel::MixtureModel(const LogisticMixture& density) : density_(&density)
{
    density.validate();
    const std::int64_t center = clamp_center(density.center());
    const std::int64_t r = half_width(density.spread(), 40.0);
    lo_ = center - r;
    hi_ = center + r;
    freeze();
}

double MixtureModel::edge_cdf(std::int64_t n) const
{
    return density_->cdf(static_cast<double>(n) - 0.5);
}

double MixtureModel::mass(std::int64_t n) const
{
    return density_->box_mass(n);
}

void RangeEncoder::carry()
{
    for (auto it = out_.rbegin(); it != out_.rend(); ++it)
        if (++*it != 0)
            return;
    // The coded value is always < 1, so a carry cannot leave the buffer.
    fail(ErrorCode::Internal, "range coder carry overflow");
}

void RangeEncoder::encode_frequency(std::uint32_t cum, std::uint32_t freq)
{
    require(freq > 0 && std::uint64_t{cum} + freq <= kTotalFreq, ErrorCode::Encoding, "invalid frequency interval");
    const std::uint64_t r = range_ >> kPrecisionBits;
    const std::uint64_t add = r * cum;
    low_ += add;
    if (low_ < add)
        carry();
    range_ = r * freq;
    while (range_ < kTop) {
        out_.push_back(static_cast<std::uint8_t>(low_ >> 56));
        low_ <<= 8;
        range_ <<= 8;
    }
}

void RangeEncoder::encode(std::int64_t symbol, const SymbolModel& model)
{
    if (!model.contains(symbol))
        fail(ErrorCode::Encoding, "symbol " + std::to_string(symbol) + " outside model support [" +
                                      std::to_string(model.lo()) + ", " + std::to_string(model.hi()) + "]");
    const std::uint32_t cum = model.cumulative(symbol);
    encode_frequency(cum, model.cumulative(symbol + 1) - cum);
}

std::vector<std::uint8_t> RangeEncoder::finish()
{
    // Round low up to a multiple of 2^56; range >= 2^56 keeps it in the interval.
    const std::uint64_t rem = low_ & (kTop - 1);
    std::uint64_t v = low_;
    if (rem != 0) {
        v = (low_ - rem) + kTop;
        if (v == 0)
            carry();
    }
    out_.push_back(static_cast<std::uint8_t>(v >> 56));
    while (!out_.empty() && out_.back() == 0)
        out_.pop_back();

    std::vector<std::uint8_t> result = std::move(out_);
    out_.clear();
    low_ = 0;
    range_ = ~std::uint64_t{0};
    return result;
}

RangeDecoder::RangeDecoder(std::span<const std::uint8_t> payload) : data_(payload)
{
    for (int i = 0; i < 8; ++i)
        value_ = (value_ << 8) | next_byte();
}

std::uint8_t RangeDecoder::next_byte()
{
    const std::uint8_t b = pos_ < data_.size() ? data_[pos_] : 0;
    ++pos_;
    return b;
}

std::int64_t RangeDecoder::decode(const SymbolModel& model)
{
    const std::uint64_t r = range_ >> kPrecisionBits;
    const std::uint64_t target = std::min<std::uint64_t>(value_ / r, kTotalFreq - 1);

    std::int64_t lo = model.lo();
    std::int64_t hi = model.hi();
    while (lo < hi) {
        const std::int64_t mid = lo + (hi - lo + 1) / 2;
        if (model.cumulative(mid) <= target)
            lo = mid;
        else
            hi = mid - 1;
    }
    const std::uint32_t cum = model.cumulative(lo);
    const std::uint32_t freq = model.cumulative(lo + 1) - cum;

    value_ -= r * cum;
    range_ = r * freq;
    while (range_ < kTop) {
        value_ = (value_ << 8) | next_byte();
        range_ <<= 8;
    }
    return lo;
}

std::vector<std::uint8_t> range_encode(std::span<const std::int64_t> symbols,
                                       std::span<const SymbolModel* const> models)
{
    require(symbols.size() == models.size(), ErrorCode::InvalidInput, "one model per symbol is required");
    RangeEncoder enc;
    for (std::size_t k = 0; k < symbols.size(); ++k)
        enc.encode(symbols[k], *models[k]);
    return enc.finish();
}

std::vector<std::int64_t> range_decode(std::span<const std::uint8_t> payload,
                                       std::span<const SymbolModel* const> models)
{
    RangeDecoder dec(payload);
    std::vector<std::int64_t> out;
    out.reserve(models.size());
    for (const SymbolModel* m : models)
        out.push_back(dec.decode(*m));
    return out;
}

double estimated_bits(std::span<const std::int64_t> symbols, std::span<const SymbolModel* const> models)
{
    require(symbols.size() == models.size(), ErrorCode::InvalidInput, "one model per symbol is required");
    double bits = 0.0;
    for (std::size_t k = 0; k < symbols.size(); ++k)
        bits -= std::log2(std::max(models[k]->mass(symbols[k]), kProbFloor));
    return bits;
}

} // namespace mcvst::entropy
