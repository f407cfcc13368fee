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

#include "channel/channel_sim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "common/error.hpp"

namespace mcvst::channel {

void ChannelConfig::validate() const
{
    require(n_tx >= 1 && n_rx >= 1 && n_subcarriers >= 1, ErrorCode::InvalidConfig,
            "antenna and subcarrier counts must be >= 1");
    require(!tap_delays.empty(), ErrorCode::InvalidConfig, "at least one tap is required");
    require(tap_delays.size() == tap_powers.size(), ErrorCode::InvalidConfig,
            "tap_delays and tap_powers must have equal length");
    for (std::size_t l = 0; l < tap_delays.size(); ++l) {
        if (tap_delays[l] >= n_subcarriers)
            fail(ErrorCode::InvalidConfig, "tap delay " + std::to_string(tap_delays[l]) + " must be < n_subcarriers");
        if (l > 0)
            require(tap_delays[l] > tap_delays[l - 1], ErrorCode::InvalidConfig,
                    "tap delays must be strictly increasing");
        require(tap_powers[l] > 0.0 && std::isfinite(tap_powers[l]), ErrorCode::InvalidConfig,
                "tap powers must be positive");
    }
    const double total = std::accumulate(tap_powers.begin(), tap_powers.end(), 0.0);
    require(std::abs(total - 1.0) <= 1e-12, ErrorCode::InvalidConfig, "tap powers must sum to 1");
    require(carrier_freq_hz > 0.0 && std::isfinite(carrier_freq_hz), ErrorCode::InvalidConfig,
            "carrier frequency must be positive");
    require(speed_mps >= 0.0 && std::isfinite(speed_mps), ErrorCode::InvalidConfig,
            "speed must be non-negative");
    require(symbol_duration_s > 0.0 && std::isfinite(symbol_duration_s), ErrorCode::InvalidConfig,
            "symbol duration must be positive");
}

double bessel_j0(double x)
{
    return std::cyl_bessel_j(0.0, std::abs(x));
}

double doppler_frequency(double speed_mps, double carrier_freq_hz)
{
    return speed_mps * carrier_freq_hz / kSpeedOfLight;
}

double doppler_coefficient(double speed_mps, double carrier_freq_hz, double symbol_duration_s)
{
    require(speed_mps >= 0.0 && std::isfinite(speed_mps), ErrorCode::InvalidConfig,
            "speed must be non-negative");
    require(carrier_freq_hz > 0.0 && std::isfinite(carrier_freq_hz), ErrorCode::InvalidConfig,
            "carrier frequency must be positive");
    require(symbol_duration_s > 0.0 && std::isfinite(symbol_duration_s), ErrorCode::InvalidConfig,
            "symbol duration must be positive");
    const double fd = doppler_frequency(speed_mps, carrier_freq_hz);
    return std::clamp(bessel_j0(2.0 * std::numbers::pi * fd * symbol_duration_s), 0.0, 1.0);
}

std::vector<CMatrix> freq_response(std::span<const CMatrix> tap_gains,
                                   std::span<const std::size_t> tap_delays,
                                   std::size_t n_subcarriers)
{
    require(tap_gains.size() == tap_delays.size() && !tap_gains.empty(), ErrorCode::InvalidConfig,
            "tap gain and delay counts differ");
    require(n_subcarriers >= 1, ErrorCode::InvalidConfig, "n_subcarriers must be >= 1");
    for (std::size_t d : tap_delays)
        require(d < n_subcarriers, ErrorCode::InvalidConfig, "tap delay must be < n_subcarriers");

    const auto rows = tap_gains.front().rows();
    const auto cols = tap_gains.front().cols();

    // twiddle[k] = exp(-j 2 pi k / N_s)
    std::vector<std::complex<double>> twiddle(n_subcarriers);
    for (std::size_t k = 0; k < n_subcarriers; ++k) {
        const double phase = -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n_subcarriers);
        twiddle[k] = {std::cos(phase), std::sin(phase)};
    }

    std::vector<CMatrix> out(n_subcarriers, CMatrix::Zero(rows, cols));
    for (std::size_t i = 0; i < n_subcarriers; ++i) {
        for (std::size_t l = 0; l < tap_gains.size(); ++l)
            out[i] += twiddle[(i * tap_delays[l]) % n_subcarriers] * tap_gains[l];
    }
    return out;
}

TdlChannel::TdlChannel(ChannelConfig config)
    : TdlChannel(config, doppler_coefficient(config.speed_mps, config.carrier_freq_hz, config.symbol_duration_s))
{
}

TdlChannel::TdlChannel(ChannelConfig config, double rho)
    : config_(std::move(config)), rho_(rho), innovation_(std::sqrt(1.0 - rho * rho)), rng_(config_.seed)
{
    config_.validate();
    require(rho >= 0.0 && rho <= 1.0, ErrorCode::InvalidConfig, "correlation coefficient must be in [0, 1]");
    const auto nr = static_cast<Eigen::Index>(config_.n_rx);
    const auto nt = static_cast<Eigen::Index>(config_.n_tx);
    taps_.reserve(config_.tap_powers.size());
    for (double power : config_.tap_powers) {
        CMatrix g(nr, nt);
        for (Eigen::Index c = 0; c < nt; ++c)
            for (Eigen::Index r = 0; r < nr; ++r)
                g(r, c) = rng_.complex_gaussian(power);
        taps_.push_back(std::move(g));
    }
}

ChannelRealization TdlChannel::current() const
{
    return {t_, freq_response(taps_, config_.tap_delays, config_.n_subcarriers)};
}

ChannelRealization TdlChannel::step()
{
    for (std::size_t l = 0; l < taps_.size(); ++l) {
        const double power = config_.tap_powers[l];
        CMatrix& g = taps_[l];
        for (Eigen::Index c = 0; c < g.cols(); ++c)
            for (Eigen::Index r = 0; r < g.rows(); ++r)
                g(r, c) = rho_ * g(r, c) + innovation_ * rng_.complex_gaussian(power);
    }
    ++t_;
    return current();
}

} // namespace mcvst::channel
