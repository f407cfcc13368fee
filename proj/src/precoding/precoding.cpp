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

#include "precoding/precoding.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/SVD>

#include "common/error.hpp"

namespace mcvst::precoding {

namespace {

// Rotates column k so its largest-magnitude entry is real positive; returns the
// applied unit factor.
std::complex<double> normalize_column_phase(CMatrix& m, Eigen::Index k)
{
    Eigen::Index arg = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        const double mag = std::abs(m(i, k));
        if (mag > best) {
            best = mag;
            arg = i;
        }
    }
    if (best <= 0.0)
        return {1.0, 0.0};
    const std::complex<double> rot = std::conj(m(arg, k)) / best;
    m.col(k) *= rot;
    m(arg, k) = {std::abs(m(arg, k)), 0.0};
    return rot;
}

} // namespace

std::size_t SvdTriple::rank() const
{
    if (s.size() == 0 || s(0) <= 0.0)
        return 0;
    const double threshold = kRankThreshold * s(0);
    std::size_t r = 0;
    while (r < static_cast<std::size_t>(s.size()) && s(static_cast<Eigen::Index>(r)) > threshold)
        ++r;
    return r;
}

SvdTriple svd_decompose(const CMatrix& h)
{
    require(h.size() > 0, ErrorCode::InvalidInput, "empty channel matrix");
    require(h.allFinite(), ErrorCode::InvalidInput, "channel matrix has non-finite entries");

    Eigen::JacobiSVD<CMatrix> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
    SvdTriple out{svd.matrixU(), svd.singularValues(), svd.matrixV()};

    const Eigen::Index paired = out.s.size();
    for (Eigen::Index k = 0; k < out.v.cols(); ++k) {
        const auto rot = normalize_column_phase(out.v, k);
        if (k < paired)
            out.u.col(k) *= rot;
    }
    for (Eigen::Index k = paired; k < out.u.cols(); ++k)
        normalize_column_phase(out.u, k);
    return out;
}

NoiseConfig NoiseConfig::from_snr_db(double snr_db)
{
    require(!std::isnan(snr_db), ErrorCode::InvalidConfig, "SNR must be a number");
    return {snr_db, std::pow(10.0, -snr_db / 10.0)};
}

EqualizedLink equalized_link(const CMatrix& h_true, const SvdTriple& svd_sampled, std::size_t streams)
{
    require(h_true.rows() == svd_sampled.u.rows() && h_true.cols() == svd_sampled.v.rows(),
            ErrorCode::InvalidInput, "channel and sampled SVD dimensions differ");
    require(streams <= static_cast<std::size_t>(svd_sampled.s.size()), ErrorCode::InvalidInput,
            "more streams than min(N_r, N_t)");
    const double threshold = kRankThreshold * (svd_sampled.s.size() > 0 ? svd_sampled.s(0) : 0.0);
    for (std::size_t k = 0; k < streams; ++k) {
        const double sk = svd_sampled.s(static_cast<Eigen::Index>(k));
        if (!(sk > threshold))
            throw RankDeficientError(k, "stream " + std::to_string(k) + " singular value " + std::to_string(sk) +
                                            " is below the rank threshold");
    }
    const auto r = static_cast<Eigen::Index>(streams);
    EqualizedLink link;
    link.precoder = svd_sampled.v.leftCols(r);
    const Eigen::VectorXd inv_s = svd_sampled.s.head(r).cwiseInverse();
    link.noise_map = inv_s.asDiagonal() * svd_sampled.u.leftCols(r).adjoint();
    link.gain = link.noise_map * h_true * link.precoder;
    return link;
}

CVector apply_link(const EqualizedLink& link, const CVector& x, const NoiseConfig& noise, Rng& rng)
{
    require(x.size() == link.gain.cols(), ErrorCode::InvalidInput, "stream vector length mismatch");
    CVector y = link.gain * x;
    if (noise.sigma2 > 0.0) {
        CVector n(link.noise_map.cols());
        for (Eigen::Index i = 0; i < n.size(); ++i)
            n(i) = rng.complex_gaussian(noise.sigma2);
        y += link.noise_map * n;
    }
    return y;
}

CVector transmit_equalize(const CVector& x, const CMatrix& h_true, const SvdTriple& svd_sampled,
                          const NoiseConfig& noise, Rng& rng)
{
    require(x.allFinite(), ErrorCode::InvalidInput, "non-finite transmit symbols");
    return apply_link(equalized_link(h_true, svd_sampled, static_cast<std::size_t>(x.size())), x, noise, rng);
}

std::vector<double> waterfilling(std::span<const double> gains, double total_power, double sigma2)
{
    require(total_power > 0.0 && std::isfinite(total_power), ErrorCode::InvalidInput, "total power must be positive");
    require(sigma2 > 0.0 && std::isfinite(sigma2), ErrorCode::InvalidInput, "noise variance must be positive");

    std::vector<std::size_t> active;
    for (std::size_t k = 0; k < gains.size(); ++k)
        if (gains[k] > 0.0)
            active.push_back(k);
    require(!active.empty(), ErrorCode::InvalidInput, "waterfilling needs at least one positive gain");

    // Sort by noise level sigma2 / g ascending, i.e. by gain descending.
    std::stable_sort(active.begin(), active.end(), [&](std::size_t a, std::size_t b) { return gains[a] > gains[b]; });

    // Work with noise levels relative to the strongest stream,
    //     d_k = sigma2 / g_k - sigma2 / g_0 = sigma2 (g_0 - g_k) / (g_0 g_k),
    // and the water level w = mu - sigma2 / g_0. Every quantity then stays
    // below total_power, which avoids cancellation when all gains are tiny.
    const double g0 = gains[active[0]];
    auto excess = [&](std::size_t k) { return sigma2 * ((g0 - gains[active[k]]) / g0) / gains[active[k]]; };
    double excess_sum = 0.0;
    double w = 0.0;
    std::size_t used = 0;
    for (std::size_t k = 0; k < active.size(); ++k) {
        excess_sum += excess(k);
        w = (total_power + excess_sum) / static_cast<double>(k + 1);
        used = k + 1;
        if (k + 1 == active.size() || w <= excess(k + 1))
            break;
    }

    std::vector<double> power(gains.size(), 0.0);
    for (std::size_t k = 0; k < used; ++k)
        power[active[k]] = std::max(0.0, w - excess(k));
    return power;
}

QamModem::QamModem(unsigned order) : order_(order)
{
    if (!(order == 4 || order == 16 || order == 64))
        fail(ErrorCode::InvalidConfig, "unsupported QAM order " + std::to_string(order) + " (expected 4, 16 or 64)");
    bits_per_symbol_ = static_cast<unsigned>(std::countr_zero(order));
    bits_per_axis_ = bits_per_symbol_ / 2;
    levels_per_axis_ = 1u << bits_per_axis_;
    scale_ = std::sqrt(2.0 * (order - 1) / 3.0);

    constellation_.resize(order);
    for (unsigned label = 0; label < order; ++label)
        constellation_[label] = {level(label >> bits_per_axis_), level(label & (levels_per_axis_ - 1))};
}

// Gray label -> amplitude; label 0 sits at the most positive level.
double QamModem::level(unsigned gray) const
{
    unsigned index = gray;
    for (unsigned shift = gray >> 1; shift != 0; shift >>= 1)
        index ^= shift;
    return (static_cast<double>(levels_per_axis_ - 1) - 2.0 * index) / scale_;
}

unsigned QamModem::decide(double amplitude) const
{
    const double pos = (static_cast<double>(levels_per_axis_ - 1) - amplitude * scale_) / 2.0;
    const double clamped = std::clamp(std::round(pos), 0.0, static_cast<double>(levels_per_axis_ - 1));
    const auto index = static_cast<unsigned>(clamped);
    return index ^ (index >> 1);
}

std::vector<std::complex<double>> QamModem::map(std::span<const std::uint8_t> bits) const
{
    require(bits.size() % bits_per_symbol_ == 0, ErrorCode::InvalidInput,
            "bit count must be a multiple of log2(order)");
    std::vector<std::complex<double>> out;
    out.reserve(bits.size() / bits_per_symbol_);
    for (std::size_t i = 0; i < bits.size(); i += bits_per_symbol_) {
        unsigned label = 0;
        for (unsigned b = 0; b < bits_per_symbol_; ++b) {
            require(bits[i + b] <= 1, ErrorCode::InvalidInput, "bits must be 0 or 1");
            label = (label << 1) | bits[i + b];
        }
        out.push_back(constellation_[label]);
    }
    return out;
}

std::vector<std::uint8_t> QamModem::demap(std::span<const std::complex<double>> symbols) const
{
    std::vector<std::uint8_t> out;
    out.reserve(symbols.size() * bits_per_symbol_);
    for (const auto& y : symbols) {
        const unsigned label = (decide(y.real()) << bits_per_axis_) | decide(y.imag());
        for (unsigned b = bits_per_symbol_; b-- > 0;)
            out.push_back(static_cast<std::uint8_t>((label >> b) & 1u));
    }
    return out;
}

} // namespace mcvst::precoding
