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

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "common/rng.hpp"

namespace mcvst::precoding {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

// Singular values below this fraction of the largest one deactivate a stream.
inline constexpr double kRankThreshold = 1e-8;

// h = u * diag(s) * v^H, s descending. Phase convention: the largest-magnitude
// entry of every column of v is real and positive (first index wins ties);
// the matching column of u carries the same rotation.
struct SvdTriple {
    CMatrix u;
    Eigen::VectorXd s;
    CMatrix v;

    // Streams whose singular value exceeds kRankThreshold * s_max.
    std::size_t rank() const;
};

SvdTriple svd_decompose(const CMatrix& h);

struct NoiseConfig {
    double snr_db = std::numeric_limits<double>::infinity();
    double sigma2 = 0.0;

    // sigma2 = 1 / 10^(snr_db / 10) for unit reference signal power.
    static NoiseConfig from_snr_db(double snr_db);
    static NoiseConfig noiseless() { return {}; }
};

// Precomputed per-subcarrier equalization: y = A x + B n with
// A = L^-1 U_s^H H V_s and B = L^-1 U_s^H restricted to the active streams.
struct EqualizedLink {
    CMatrix gain;        // r x r
    CMatrix noise_map;   // r x N_r
    CMatrix precoder;    // N_t x r, columns of V_s
};

EqualizedLink equalized_link(const CMatrix& h_true, const SvdTriple& svd_sampled, std::size_t streams);

// y = L_s^-1 U_s^H (h_true V_s x + n), n ~ CN(0, sigma2 I) in the receive-antenna domain.
CVector transmit_equalize(const CVector& x, const CMatrix& h_true, const SvdTriple& svd_sampled,
                          const NoiseConfig& noise, Rng& rng);

// Same law through a precomputed link; allows several channel uses per subcarrier.
CVector apply_link(const EqualizedLink& link, const CVector& x, const NoiseConfig& noise, Rng& rng);

// p_k = max(0, mu - sigma2 / g_k) with sum p_k = total_power. Non-positive gains
// never receive power.
std::vector<double> waterfilling(std::span<const double> gains, double total_power, double sigma2);

// Gray-mapped square QAM, unit average energy. Bits are 0/1 bytes; within a
// symbol the first half of the bits selects the in-phase level (MSB first),
// the second half the quadrature level.
class QamModem {
public:
    explicit QamModem(unsigned order);

    unsigned order() const noexcept { return order_; }
    unsigned bits_per_symbol() const noexcept { return bits_per_symbol_; }

    std::vector<std::complex<double>> map(std::span<const std::uint8_t> bits) const;
    std::vector<std::uint8_t> demap(std::span<const std::complex<double>> symbols) const;

    std::complex<double> point(unsigned label) const { return constellation_[label]; }

private:
    unsigned order_;
    unsigned bits_per_symbol_;
    unsigned bits_per_axis_;
    unsigned levels_per_axis_;
    double scale_;
    std::vector<std::complex<double>> constellation_;

    double level(unsigned gray) const;
    unsigned decide(double amplitude) const;
};

} // namespace mcvst::precoding
