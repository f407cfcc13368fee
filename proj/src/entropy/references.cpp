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

#include "entropy/references.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "common/error.hpp"
#include "common/rng.hpp"
#include "entropy/checkerboard.hpp"

namespace mcvst::entropy {

std::vector<std::uint64_t> reference_indices(std::uint64_t t, std::uint64_t period)
{
    require(period >= 1, ErrorCode::InvalidArgument, "reference period must be >= 1");
    std::vector<std::uint64_t> out;
    for (std::uint64_t k = t - t % period; k <= t; ++k)
        out.push_back(k);
    return out;
}

MapHistory::MapHistory(std::size_t capacity) : capacity_(capacity)
{
    require(capacity >= 1, ErrorCode::InvalidArgument, "map history capacity must be >= 1");
}

void MapHistory::push(cormap::CorrelationMap map)
{
    if (!maps_.empty() && map.t <= maps_.rbegin()->first)
        fail(ErrorCode::Ordering, "map index " + std::to_string(map.t) + " does not follow " +
                                      std::to_string(maps_.rbegin()->first));
    const std::uint64_t t = map.t;
    maps_.emplace(t, std::move(map));
    while (maps_.size() > capacity_)
        maps_.erase(maps_.begin());
}

const cormap::CorrelationMap* MapHistory::find(std::uint64_t t) const
{
    const auto it = maps_.find(t);
    return it == maps_.end() ? nullptr : &it->second;
}

Eigen::MatrixXd MapWindow::mean() const
{
    require(!maps.empty(), ErrorCode::InvalidRefs, "map reference window is empty");
    Eigen::MatrixXd acc = maps.front();
    for (std::size_t k = 1; k < maps.size(); ++k) {
        require(maps[k].rows() == acc.rows() && maps[k].cols() == acc.cols(), ErrorCode::InvalidRefs,
                "maps in the reference window differ in shape");
        acc += maps[k];
    }
    return acc / static_cast<double>(maps.size());
}

MapWindow build_reference_window(const MapHistory& history, std::uint64_t t, std::uint64_t period)
{
    MapWindow out;
    out.t = t;
    for (std::uint64_t k : reference_indices(t, period)) {
        if (const auto* m = history.find(k)) {
            out.indices.push_back(k);
            out.maps.push_back(m->values);
        } else {
            ++out.missing;
        }
    }
    return out;
}

CausalView::CausalView(const IntGrid& values) : values_(&values), known_(values.size(), 0) {}

std::int32_t CausalView::at(std::size_t c, std::size_t h, std::size_t w) const
{
    const std::size_t k = values_->index(c, h, w);
    if (!known_[k])
        fail(ErrorCode::Internal, "causality violation: latent element (" + std::to_string(c) + ", " +
                                      std::to_string(h) + ", " + std::to_string(w) + ") read before decoding");
    return values_->values()[k];
}

bool CausalView::known(std::size_t c, std::size_t h, std::size_t w) const noexcept
{
    return known_[values_->index(c, h, w)] != 0;
}

void CausalView::reveal_all() noexcept
{
    std::fill(known_.begin(), known_.end(), std::uint8_t{1});
}

GroupReferences make_references(const CausalView& latent, const IntGrid& hyper, std::size_t hyper_block,
                                const MapWindow& window, std::size_t group, std::size_t context_group,
                                bool non_anchor_pass)
{
    const Shape3& s = latent.shape();
    require(context_group >= 1 && s.channels % context_group == 0 && (group + 1) * context_group <= s.channels,
            ErrorCode::InvalidRefs, "group index out of range");
    require(hyper_block >= 1 && hyper.channels() == s.channels &&
                hyper.height() == (s.height + hyper_block - 1) / hyper_block &&
                hyper.width() == (s.width + hyper_block - 1) / hyper_block,
            ErrorCode::InvalidRefs, "hyper latent shape does not match the latent");

    GroupReferences refs;
    refs.group = group;
    refs.context_group = context_group;

    // Map reference: only rows <= i are touched.
    const Eigen::MatrixXd m = window.mean();
    require(group < static_cast<std::size_t>(m.rows()), ErrorCode::InvalidRefs,
            "map has fewer rows than context groups");
    const auto i = static_cast<Eigen::Index>(group);
    const Eigen::Index cols = m.cols();
    refs.phi_m.resize(2 * cols);
    refs.phi_m.head(cols) = m.row(i).transpose();
    refs.phi_m.tail(cols) = m.topRows(i + 1).colwise().mean().transpose();

    // Causal context from the previous group.
    refs.phi_ch = RealGrid(2, s.height, s.width);
    if (group > 0) {
        const std::size_t c0 = (group - 1) * context_group;
        for (std::size_t h = 0; h < s.height; ++h)
            for (std::size_t w = 0; w < s.width; ++w) {
                double sum = 0.0;
                double abs_sum = 0.0;
                for (std::size_t c = c0; c < c0 + context_group; ++c) {
                    const double v = latent.at(c, h, w);
                    sum += v;
                    abs_sum += std::abs(v);
                }
                refs.phi_ch(0, h, w) = sum / static_cast<double>(context_group);
                refs.phi_ch(1, h, w) = abs_sum / static_cast<double>(context_group);
            }
    }

    const std::size_t c_first = group * context_group;
    refs.phi_z = RealGrid(context_group, s.height, s.width);
    for (std::size_t c = 0; c < context_group; ++c)
        for (std::size_t h = 0; h < s.height; ++h)
            for (std::size_t w = 0; w < s.width; ++w)
                refs.phi_z(c, h, w) = hyper(c_first + c, h / hyper_block, w / hyper_block);

    if (non_anchor_pass) {
        RealGrid lc(2 * context_group, s.height, s.width);
        for (std::size_t c = 0; c < context_group; ++c)
            for (std::size_t h = 0; h < s.height; ++h)
                for (std::size_t w = 0; w < s.width; ++w) {
                    if (is_anchor(h, w))
                        continue;
                    double sum = 0.0;
                    double abs_sum = 0.0;
                    int n = 0;
                    auto take = [&](std::size_t hh, std::size_t ww) {
                        const double v = latent.at(c_first + c, hh, ww);
                        sum += v;
                        abs_sum += std::abs(v);
                        ++n;
                    };
                    if (h > 0) take(h - 1, w);
                    if (h + 1 < s.height) take(h + 1, w);
                    if (w > 0) take(h, w - 1);
                    if (w + 1 < s.width) take(h, w + 1);
                    if (n > 0) {
                        lc(2 * c, h, w) = sum / n;
                        lc(2 * c + 1, h, w) = abs_sum / n;
                    }
                }
        refs.phi_lc = std::move(lc);
    }
    return refs;
}

double softplus(double x) noexcept
{
    // log(1 + e^x) without overflow.
    return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

AffinePredictor::AffinePredictor(std::size_t context_group, std::size_t map_cols, std::uint64_t seed,
                                 double scale_floor)
    : context_group_(context_group), map_cols_(map_cols), scale_floor_(scale_floor)
{
    require(context_group >= 1 && map_cols >= 1, ErrorCode::InvalidConfig, "predictor dimensions must be >= 1");
    require(scale_floor > 0.0, ErrorCode::InvalidConfig, "scale floor must be positive");
    Rng rng(derive_seed(seed, Stream::Predictor));
    const auto n = static_cast<Eigen::Index>(context_group);
    const auto k = static_cast<Eigen::Index>(2 * map_cols);
    auto draw = [&](Eigen::Index rows, Eigen::Index cols, double sd) {
        Eigen::MatrixXd w(rows, cols);
        for (Eigen::Index r = 0; r < rows; ++r)
            for (Eigen::Index c = 0; c < cols; ++c)
                w(r, c) = sd * rng.gaussian();
        return w;
    };
    mu_m_ = draw(n, k, 0.02);
    scale_m_ = draw(n, k, 0.2);
    mu_ch_ = draw(n, 2, 0.05);
    scale_ch_ = draw(n, 2, 0.05);
}

EntropyParams AffinePredictor::predict_anchor(const GroupReferences& refs) const
{
    require(!refs.phi_lc.has_value(), ErrorCode::InvalidRefs, "anchor pass must not use the anchor reference");
    return predict(refs);
}

EntropyParams AffinePredictor::predict_non_anchor(const GroupReferences& refs) const
{
    require(refs.phi_lc.has_value(), ErrorCode::InvalidRefs, "non-anchor pass requires the anchor reference");
    return predict(refs);
}

EntropyParams AffinePredictor::predict(const GroupReferences& refs) const
{
    require(refs.context_group == context_group_, ErrorCode::InvalidRefs, "group width mismatch");
    require(static_cast<std::size_t>(refs.phi_m.size()) == 2 * map_cols_, ErrorCode::InvalidRefs,
            "map reference has the wrong length");
    const Shape3 slab{context_group_, refs.phi_z.height(), refs.phi_z.width()};
    require(refs.phi_z.shape() == slab, ErrorCode::InvalidRefs, "hyper reference has the wrong shape");
    require(refs.phi_ch.shape() == Shape3{2, slab.height, slab.width}, ErrorCode::InvalidRefs,
            "context reference has the wrong shape");
    const RealGrid* lc = refs.phi_lc ? &*refs.phi_lc : nullptr;
    if (lc)
        require(lc->shape() == Shape3{2 * context_group_, slab.height, slab.width}, ErrorCode::InvalidRefs,
                "anchor reference has the wrong shape");

    const Eigen::VectorXd mu_from_map = mu_m_ * refs.phi_m;
    const Eigen::VectorXd pre_from_map = scale_m_ * refs.phi_m;

    EntropyParams out;
    out.mu.resize(slab.size());
    out.scale.resize(slab.size());
    std::size_t k = 0;
    for (std::size_t c = 0; c < slab.channels; ++c) {
        const auto ci = static_cast<Eigen::Index>(c);
        for (std::size_t h = 0; h < slab.height; ++h)
            for (std::size_t w = 0; w < slab.width; ++w, ++k) {
                const double ch_mean = refs.phi_ch(0, h, w);
                const double ch_abs = refs.phi_ch(1, h, w);
                double mu = mu_from_map(ci) + mu_ch_(ci, 0) * ch_mean + mu_ch_(ci, 1) * ch_abs;
                double pre = pre_from_map(ci) + scale_ch_(ci, 0) * ch_mean + scale_ch_(ci, 1) * ch_abs +
                             kHyperWeight * refs.phi_z(c, h, w);
                if (lc) {
                    mu += kAnchorMeanWeight * (*lc)(2 * c, h, w);
                    pre += kAnchorAbsWeight * (*lc)(2 * c + 1, h, w);
                }
                out.mu[k] = mu;
                out.scale[k] = std::max(softplus(pre), scale_floor_);
            }
    }
    return out;
}

} // namespace mcvst::entropy
