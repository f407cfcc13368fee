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

#include "entropy/latent_codec.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "common/error.hpp"
#include "entropy/checkerboard.hpp"
#include "entropy/range_coder.hpp"

namespace mcvst::entropy {

struct LatentCodec::BlockCost {
    std::int64_t infeasible = 0;  // symbols outside the coding support
    double bits = 0.0;

    bool operator<(const BlockCost& o) const noexcept
    {
        return infeasible != o.infeasible ? infeasible < o.infeasible : bits < o.bits;
    }
};

namespace {

std::size_t block_of(const Shape3& hs, std::size_t block, std::size_t c, std::size_t h, std::size_t w)
{
    return (c * hs.height + h / block) * hs.width + w / block;
}

} // namespace

Shape3 hyper_shape(const Shape3& latent, std::size_t hyper_block)
{
    require(hyper_block >= 1, ErrorCode::InvalidConfig, "hyper block must be >= 1");
    return {latent.channels, (latent.height + hyper_block - 1) / hyper_block,
            (latent.width + hyper_block - 1) / hyper_block};
}

StreamKind hyper_kind(StreamKind main_kind)
{
    switch (main_kind) {
    case StreamKind::Context: return StreamKind::HyperContext;
    case StreamKind::Motion: return StreamKind::HyperMotion;
    default: fail(ErrorCode::InvalidArgument, "hyper streams have no hyper stream of their own");
    }
}

LatentCodec::LatentCodec(std::shared_ptr<const ParamPredictor> predictor, HyperDensity psi,
                         LatentCodecConfig config)
    : predictor_(std::move(predictor)), psi_(std::move(psi)), config_(config)
{
    require(predictor_ != nullptr, ErrorCode::InvalidArgument, "predictor is null");
    require(config_.context_group >= 1 && config_.hyper_block >= 1, ErrorCode::InvalidConfig,
            "group width and hyper block must be >= 1");
    psi_.validate();
}

void LatentCodec::check_shape(const Shape3& shape) const
{
    require(shape.channels == psi_.channels.size(), ErrorCode::InvalidInput,
            "latent channel count does not match the hyper density");
    require(shape.channels % config_.context_group == 0, ErrorCode::InvalidInput,
            "latent channel count is not a multiple of the group width");
    require(shape.height >= 1 && shape.width >= 1, ErrorCode::InvalidInput, "latent is empty");
}

EntropyParams LatentCodec::predict(const CausalView& view, const IntGrid& z, const MapWindow& window,
                                   std::size_t group, bool non_anchor) const
{
    const GroupReferences refs =
        make_references(view, z, config_.hyper_block, window, group, config_.context_group, non_anchor);
    return non_anchor ? predictor_->predict_non_anchor(refs) : predictor_->predict_anchor(refs);
}

void LatentCodec::evaluate(const IntGrid& latent, const IntGrid& z, const MapWindow& window,
                           std::vector<BlockCost>& cost) const
{
    const Shape3& s = latent.shape();
    const Shape3 hs = z.shape();
    const std::size_t slab = config_.context_group * s.height * s.width;
    cost.assign(hs.size(), BlockCost{});

    // The search only needs costs, so every element is visible from the start;
    // the references still read exactly what the coder will have.
    CausalView view(latent);
    view.reveal_all();
    for (std::size_t g = 0; g < s.channels / config_.context_group; ++g) {
        for (bool non_anchor : {false, true}) {
            const EntropyParams p = predict(view, z, window, g, non_anchor);
            for (std::size_t idx : pass_elements(s, g, config_.context_group, !non_anchor)) {
                const std::size_t local = idx - g * slab;
                const std::size_t c = idx / (s.height * s.width);
                const std::size_t h = (idx / s.width) % s.height;
                const std::size_t w = idx % s.width;
                BlockCost& bc = cost[block_of(hs, config_.hyper_block, c, h, w)];
                const LaplaceModel model(p.mu[local], p.scale[local]);
                const std::int64_t n = latent.values()[idx];
                if (!model.contains(n))
                    ++bc.infeasible;
                else
                    bc.bits -= std::log2(laplace_box_prob(n, p.mu[local], p.scale[local]));
            }
        }
    }
    for (std::size_t c = 0; c < hs.channels; ++c)
        for (std::size_t k = 0; k < hs.height * hs.width; ++k) {
            const std::size_t b = c * hs.height * hs.width + k;
            cost[b].bits -= std::log2(std::max(psi_.channels[c].box_mass(z.values()[b]), kProbFloor));
        }
}

EncodedLatent LatentCodec::encode(const IntGrid& latent, const MapWindow& window, StreamKind kind) const
{
    const Shape3& s = latent.shape();
    check_shape(s);
    const Shape3 hs = hyper_shape(s, config_.hyper_block);
    const std::size_t n_groups = s.channels / config_.context_group;
    const std::size_t per_channel = hs.height * hs.width;

    std::vector<MixtureModel> hyper_models;
    hyper_models.reserve(hs.channels);
    for (const auto& mix : psi_.channels)
        hyper_models.emplace_back(mix);

    // Per-block integer ternary search on (infeasible, bits), then a +-2 sweep.
    std::vector<std::int64_t> lo(hs.size());
    std::vector<std::int64_t> hi(hs.size());
    for (std::size_t b = 0; b < hs.size(); ++b) {
        lo[b] = hyper_models[b / per_channel].lo();
        hi[b] = hyper_models[b / per_channel].hi();
    }
    IntGrid z1(hs);
    IntGrid z2(hs);
    std::vector<BlockCost> c1;
    std::vector<BlockCost> c2;
    for (;;) {
        bool open = false;
        for (std::size_t b = 0; b < hs.size(); ++b) {
            const std::int64_t span = hi[b] - lo[b];
            open = open || span > 2;
            z1.values()[b] = static_cast<std::int32_t>(span > 2 ? lo[b] + span / 3 : lo[b]);
            z2.values()[b] = static_cast<std::int32_t>(span > 2 ? hi[b] - span / 3 : lo[b]);
        }
        if (!open)
            break;
        evaluate(latent, z1, window, c1);
        evaluate(latent, z2, window, c2);
        for (std::size_t b = 0; b < hs.size(); ++b) {
            if (hi[b] - lo[b] <= 2)
                continue;
            if (c1[b] < c2[b])
                hi[b] = z2.values()[b] - 1;
            else
                lo[b] = z1.values()[b] + 1;
        }
    }
    IntGrid z(hs);
    std::vector<BlockCost> best(hs.size(), BlockCost{std::numeric_limits<std::int64_t>::max(), 0.0});
    for (int d = -2; d <= 2; ++d) {
        for (std::size_t b = 0; b < hs.size(); ++b) {
            const auto& m = hyper_models[b / per_channel];
            const std::int64_t mid = (lo[b] + hi[b]) / 2 + d;
            z1.values()[b] = static_cast<std::int32_t>(std::clamp<std::int64_t>(mid, m.lo(), m.hi()));
        }
        evaluate(latent, z1, window, c1);
        for (std::size_t b = 0; b < hs.size(); ++b)
            if (c1[b] < best[b]) {
                best[b] = c1[b];
                z.values()[b] = z1.values()[b];
            }
    }
    for (std::size_t b = 0; b < hs.size(); ++b)
        if (best[b].infeasible > 0)
            fail(ErrorCode::Encoding, "latent values exceed the widest coding support in hyper block " +
                                          std::to_string(b));

    EncodedLatent out;
    out.z = z;
    out.hyper.kind = hyper_kind(kind);
    out.hyper.shape = hs;
    {
        RangeEncoder enc;
        for (std::size_t b = 0; b < hs.size(); ++b) {
            const auto& m = hyper_models[b / per_channel];
            enc.encode(z.values()[b], m);
            out.hyper_probs.push_back(std::max(m.mass(z.values()[b]), kProbFloor));
        }
        out.hyper.segments.push_back(enc.finish());
    }

    out.main.kind = kind;
    out.main.shape = s;
    out.anchor_probs.resize(n_groups);
    out.non_anchor_probs.resize(n_groups);
    const std::size_t slab = config_.context_group * s.height * s.width;
    CausalView view(latent);
    for (std::size_t g = 0; g < n_groups; ++g) {
        RangeEncoder enc;
        for (bool non_anchor : {false, true}) {
            const EntropyParams p = predict(view, z, window, g, non_anchor);
            const auto elements = pass_elements(s, g, config_.context_group, !non_anchor);
            auto& probs = non_anchor ? out.non_anchor_probs[g] : out.anchor_probs[g];
            probs.reserve(elements.size());
            for (std::size_t idx : elements) {
                const std::size_t local = idx - g * slab;
                const std::int64_t n = latent.values()[idx];
                enc.encode(n, LaplaceModel(p.mu[local], p.scale[local]));
                probs.push_back(laplace_box_prob(n, p.mu[local], p.scale[local]));
            }
            for (std::size_t idx : elements)
                view.reveal(idx);
        }
        out.main.segments.push_back(enc.finish());
    }
    return out;
}

DecodedLatent LatentCodec::decode(const ReceivedLatent& received, const MapWindow& window) const
{
    const Shape3& s = received.shape;
    check_shape(s);
    const Shape3 hs = hyper_shape(s, config_.hyper_block);
    const std::size_t n_groups = s.channels / config_.context_group;
    const std::size_t per_channel = hs.height * hs.width;
    require(received.groups.size() == n_groups, ErrorCode::Decoding, "segment count does not match the group count");

    DecodedLatent out;
    out.values = IntGrid(s);
    out.z = IntGrid(hs);
    if (!received.hyper)
        return out;
    {
        RangeDecoder dec(*received.hyper);
        for (std::size_t c = 0; c < hs.channels; ++c) {
            const MixtureModel m(psi_.channels[c]);
            for (std::size_t k = 0; k < per_channel; ++k)
                out.z.values()[c * per_channel + k] = static_cast<std::int32_t>(dec.decode(m));
        }
    }
    out.hyper_ok = true;

    const std::size_t slab = config_.context_group * s.height * s.width;
    CausalView view(out.values);
    for (std::size_t g = 0; g < n_groups; ++g) {
        if (!received.groups[g])
            break;
        RangeDecoder dec(*received.groups[g]);
        for (bool non_anchor : {false, true}) {
            const EntropyParams p = predict(view, out.z, window, g, non_anchor);
            const auto elements = pass_elements(s, g, config_.context_group, !non_anchor);
            for (std::size_t idx : elements) {
                const std::size_t local = idx - g * slab;
                const std::int64_t n = dec.decode(LaplaceModel(p.mu[local], p.scale[local]));
                require(n >= std::numeric_limits<std::int32_t>::min() && n <= std::numeric_limits<std::int32_t>::max(),
                        ErrorCode::Decoding, "decoded symbol out of range");
                out.values.values()[idx] = static_cast<std::int32_t>(n);
            }
            for (std::size_t idx : elements)
                view.reveal(idx);
        }
        ++out.groups_decoded;
    }
    return out;
}

DecodedLatent LatentCodec::decode(const Container& main, const Container& hyper, const MapWindow& window) const
{
    require(hyper.segments.size() == 1, ErrorCode::Decoding, "hyper stream must hold one segment");
    require(hyper.shape == hyper_shape(main.shape, config_.hyper_block), ErrorCode::Decoding,
            "hyper stream shape does not match the latent");
    ReceivedLatent r;
    r.shape = main.shape;
    r.hyper = hyper.segments.front();
    for (const auto& seg : main.segments)
        r.groups.emplace_back(seg);
    return decode(r, window);
}

} // namespace mcvst::entropy
