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

// Reference features for the grouped checkerboard entropy model and the
// parameter predictor that turns them into Laplace (mu, b).
//
// Coding order: context groups i = 0, 1, ... of m_c channels; inside a group,
// anchors first, then non-anchors. The references for group i may only read
//   - the map window (maps at t_p and t, rows <= i),
//   - decoded latent values of groups < i,
//   - the hyper latent,
//   - decoded anchors of group i (non-anchor pass only).
// CausalView enforces the latent part of this at run time.

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "common/tensor.hpp"
#include "cormap/correlation_map.hpp"

namespace mcvst::entropy {

// t_p U {t} with t_p = [t - (t mod period), ..., t - 1], ascending.
std::vector<std::uint64_t> reference_indices(std::uint64_t t, std::uint64_t period);

// Maps keyed by frame index; keeps the most recent `capacity` entries.
class MapHistory {
public:
    explicit MapHistory(std::size_t capacity);

    // Throws Error(Ordering) unless map.t is larger than every stored index.
    void push(cormap::CorrelationMap map);
    const cormap::CorrelationMap* find(std::uint64_t t) const;
    std::size_t size() const noexcept { return maps_.size(); }
    void clear() { maps_.clear(); }

private:
    std::size_t capacity_;
    std::map<std::uint64_t, cormap::CorrelationMap> maps_;
};

struct MapWindow {
    std::uint64_t t = 0;
    std::vector<std::uint64_t> indices;  // present maps, ascending
    std::size_t missing = 0;             // requested but not in history
    std::vector<Eigen::MatrixXd> maps;

    bool empty() const noexcept { return maps.empty(); }
    // Element-wise mean; throws Error(InvalidRefs) if the window is empty.
    Eigen::MatrixXd mean() const;
};

// m_s = Con(m_{t_p}, m_t); entries absent from the history are skipped and counted.
MapWindow build_reference_window(const MapHistory& history, std::uint64_t t, std::uint64_t period);

// Read access to a latent under decoding; reading an undecoded element throws
// Error(Internal) so that a causality slip cannot go unnoticed.
class CausalView {
public:
    explicit CausalView(const IntGrid& values);

    const Shape3& shape() const noexcept { return values_->shape(); }
    std::int32_t at(std::size_t c, std::size_t h, std::size_t w) const;
    bool known(std::size_t c, std::size_t h, std::size_t w) const noexcept;
    void reveal(std::size_t flat_index) noexcept { known_[flat_index] = 1; }
    void reveal_all() noexcept;

private:
    const IntGrid* values_;
    std::vector<std::uint8_t> known_;
};

struct GroupReferences {
    std::size_t group = 0;
    std::size_t context_group = 0;   // m_c
    Eigen::VectorXd phi_m;           // [window-mean row i, mean of window-mean rows <= i]
    RealGrid phi_ch;                 // 2 x H' x W': mean and mean |.| of group i - 1 (zeros for i = 0)
    RealGrid phi_z;                  // m_c x H' x W': hyper value covering each element
    std::optional<RealGrid> phi_lc;  // 2 m_c x H' x W': mean and mean |.| of the 4-neighbour anchors
    std::vector<double> side_info;   // opaque rate-adaptive terms, unused by the default predictor
};

// Builds the references for one pass. Throws Error(InvalidRefs) on an empty window.
GroupReferences make_references(const CausalView& latent, const IntGrid& hyper, std::size_t hyper_block,
                                const MapWindow& window, std::size_t group, std::size_t context_group,
                                bool non_anchor_pass);

// Per-element Laplace parameters over the group's m_c x H' x W' slab
// (channel-major, same order as Grid3).
struct EntropyParams {
    std::vector<double> mu;
    std::vector<double> scale;
};

double softplus(double x) noexcept;

class ParamPredictor {
public:
    virtual ~ParamPredictor() = default;
    // Throws Error(InvalidRefs) if phi_lc is present or a reference is malformed.
    virtual EntropyParams predict_anchor(const GroupReferences& refs) const = 0;
    // Throws Error(InvalidRefs) if phi_lc is absent or a reference is malformed.
    virtual EntropyParams predict_non_anchor(const GroupReferences& refs) const = 0;
};

// Sum of per-reference affine maps with zero bias:
//   mu  = a_m[c] . phi_m + a_ch[c] . phi_ch + 0.5 * lc_mean
//   pre = b_m[c] . phi_m + b_ch[c] . phi_ch + 0.5 * z + 0.1 * lc_abs
//   b   = max(softplus(pre), scale_floor)
// a_m ~ N(0, 0.02^2), b_m ~ N(0, 0.2^2), a_ch, b_ch ~ N(0, 0.05^2), drawn from the seed.
class AffinePredictor final : public ParamPredictor {
public:
    static constexpr double kHyperWeight = 0.5;
    static constexpr double kAnchorMeanWeight = 0.5;
    static constexpr double kAnchorAbsWeight = 0.1;

    AffinePredictor(std::size_t context_group, std::size_t map_cols, std::uint64_t seed,
                    double scale_floor = 1e-6);

    EntropyParams predict_anchor(const GroupReferences& refs) const override;
    EntropyParams predict_non_anchor(const GroupReferences& refs) const override;

private:
    EntropyParams predict(const GroupReferences& refs) const;

    std::size_t context_group_;
    std::size_t map_cols_;
    double scale_floor_;
    Eigen::MatrixXd mu_m_;     // m_c x 2 cols
    Eigen::MatrixXd scale_m_;  // m_c x 2 cols
    Eigen::MatrixXd mu_ch_;    // m_c x 2
    Eigen::MatrixXd scale_ch_; // m_c x 2
};

} // namespace mcvst::entropy
