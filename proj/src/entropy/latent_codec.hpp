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

// Two-pass grouped checkerboard coder for one integer latent plus its hyper
// latent.
//
// The hyper latent z holds one integer per (channel, hyper_block x hyper_block
// spatial block). The encoder picks each z to minimise the block's total code
// length (main symbols + z itself) by searching the hyper support through the
// predictor, so any ParamPredictor works without an analysis transform.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "common/tensor.hpp"
#include "entropy/bitstream.hpp"
#include "entropy/likelihood.hpp"
#include "entropy/references.hpp"

namespace mcvst::entropy {

struct LatentCodecConfig {
    std::size_t context_group = 8;  // m_c
    std::size_t hyper_block = 8;
};

Shape3 hyper_shape(const Shape3& latent, std::size_t hyper_block);
StreamKind hyper_kind(StreamKind main_kind);

struct EncodedLatent {
    Container main;   // one segment per context group
    Container hyper;  // one segment
    IntGrid z;
    // Floored model probabilities of every coded symbol, in coding order.
    std::vector<std::vector<double>> anchor_probs;
    std::vector<std::vector<double>> non_anchor_probs;
    std::vector<double> hyper_probs;
};

// What reached the decoder; nullopt marks a lost segment.
struct ReceivedLatent {
    Shape3 shape;
    std::optional<std::vector<std::uint8_t>> hyper;
    std::vector<std::optional<std::vector<std::uint8_t>>> groups;
};

struct DecodedLatent {
    IntGrid values;  // groups that were not decoded stay zero
    IntGrid z;
    bool hyper_ok = false;
    std::size_t groups_decoded = 0;  // decoding stops at the first lost group

    bool complete(std::size_t n_groups) const noexcept { return hyper_ok && groups_decoded == n_groups; }
};

class LatentCodec {
public:
    LatentCodec(std::shared_ptr<const ParamPredictor> predictor, HyperDensity psi, LatentCodecConfig config);

    // Throws Error(Encoding) if some block cannot be covered by any hyper value.
    EncodedLatent encode(const IntGrid& latent, const MapWindow& window, StreamKind kind) const;

    DecodedLatent decode(const ReceivedLatent& received, const MapWindow& window) const;
    // Error-free path.
    DecodedLatent decode(const Container& main, const Container& hyper, const MapWindow& window) const;

    const LatentCodecConfig& config() const noexcept { return config_; }
    const HyperDensity& hyper_density() const noexcept { return psi_; }

private:
    struct BlockCost;
    void evaluate(const IntGrid& latent, const IntGrid& z, const MapWindow& window,
                  std::vector<BlockCost>& cost) const;
    EntropyParams predict(const CausalView& view, const IntGrid& z, const MapWindow& window, std::size_t group,
                          bool non_anchor) const;
    void check_shape(const Shape3& shape) const;

    std::shared_ptr<const ParamPredictor> predictor_;
    HyperDensity psi_;
    LatentCodecConfig config_;
};

} // namespace mcvst::entropy
