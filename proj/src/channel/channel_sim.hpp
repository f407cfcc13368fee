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

// Tapped-delay-line MIMO channel with AR(1) Doppler-correlated taps.
//
// Each tap l carries an N_r x N_t gain matrix G_l. Between OFDM symbols,
//     G_t = rho * G_{t-1} + sqrt(1 - rho^2) * W,   W ~ CN(0, tap_powers[l])
// with rho = J0(2 pi f_d T_s). The per-subcarrier response is the DFT of the
// taps, H_i = sum_l G_l exp(-j 2 pi i d_l / N_s).

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "common/rng.hpp"

namespace mcvst::channel {

using CMatrix = Eigen::MatrixXcd;

inline constexpr double kSpeedOfLight = 299'792'458.0;

struct ChannelConfig {
    std::size_t n_tx = 8;
    std::size_t n_rx = 8;
    std::size_t n_subcarriers = 64;
    std::vector<std::size_t> tap_delays{0, 2, 5, 9};
    std::vector<double> tap_powers{0.5, 0.25, 0.15, 0.10};
    double carrier_freq_hz = 2.6e9;
    double speed_mps = 40.0 / 3.6;
    double symbol_duration_s = 1e-3;
    std::uint64_t seed = 1;

    // Throws Error(InvalidConfig) listing the first violated invariant.
    void validate() const;
};

double bessel_j0(double x);

// f_d = v * f_c / c
double doppler_frequency(double speed_mps, double carrier_freq_hz);

// rho = J0(2 pi f_d T_s) clamped to [0, 1]. speed 0 gives a static channel.
double doppler_coefficient(double speed_mps, double carrier_freq_hz, double symbol_duration_s);

struct ChannelRealization {
    std::uint64_t t = 0;
    std::vector<CMatrix> freq_response;
};

// Direct evaluation with exact integer phase reduction (i * d mod N_s).
std::vector<CMatrix> freq_response(std::span<const CMatrix> tap_gains,
                                   std::span<const std::size_t> tap_delays,
                                   std::size_t n_subcarriers);

class TdlChannel {
public:
    explicit TdlChannel(ChannelConfig config);
    // Bypasses the Doppler model, for controlled experiments.
    TdlChannel(ChannelConfig config, double rho);

    const ChannelConfig& config() const noexcept { return config_; }
    double rho() const noexcept { return rho_; }
    std::uint64_t symbol_index() const noexcept { return t_; }
    const std::vector<CMatrix>& tap_gains() const noexcept { return taps_; }

    // Realization at the current symbol index (t = 0 right after construction).
    ChannelRealization current() const;

    // Advances one OFDM symbol and returns the new realization.
    ChannelRealization step();

private:
    ChannelConfig config_;
    double rho_;
    double innovation_;
    std::uint64_t t_ = 0;
    Rng rng_;
    std::vector<CMatrix> taps_;
};

} // namespace mcvst::channel
