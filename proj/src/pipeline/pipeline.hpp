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

// End-to-end frame transmission.
//
// Per frame t:
//   1. read symbols_per_frame channel symbols, feed the sampled CSI back
//   2. f_t = T(x_t); c_t = f_{t-1} (0 for t = 0); v_t = f_t - c_t; quantize both with step q
//   3. m_t from the dequantized context and the first symbol's sampled CSI
//   4. code c and v with the map-window references and their own hyperpriors
//   5. pack, QAM-map, send over the per-group precoded links, demap, unpack
//   6. decode what survived, conceal the rest, f^ = q (v~ + c~), x^ = T^-1(f^)
// Maps and eta are side information shared by both ends.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "channel/channel_sim.hpp"
#include "common/rng.hpp"
#include "common/tensor.hpp"
#include "cormap/correlation_map.hpp"
#include "entropy/latent_codec.hpp"
#include "entropy/references.hpp"
#include "pipeline/link.hpp"
#include "pipeline/source.hpp"
#include "pipeline/transform.hpp"
#include "pipeline/transport.hpp"
#include "sampling/sampling.hpp"

namespace mcvst::pipeline {

enum class EtaPolicy { Map, Unit };

struct PipelineConfig {
    channel::ChannelConfig channel;
    LinkConfig link;
    cormap::MapConfig map;           // map.subcarrier_group is m_h
    double quant_step = 1.0 / 16.0;  // q
    double scale_floor = 1e-6;
    double lambda = 0.015;           // diagnostic loss weight only
    EtaPolicy eta = EtaPolicy::Map;
    std::uint64_t model_seed = 2024;
    std::size_t transform_block = 4;
    std::size_t hyper_block = 8;

    // Throws Error(InvalidConfig).
    void validate() const;
    std::size_t map_period() const noexcept { return channel.n_subcarriers / map.subcarrier_group; }
};

// v = f - f_ref, c = f_ref. Throws Error(InvalidInput) on a shape mismatch.
struct MotionContext {
    RealGrid motion;
    RealGrid context;
};
MotionContext motion_context_split(const RealGrid& f, const RealGrid& f_ref);
RealGrid combine(const RealGrid& motion, const RealGrid& context);

// Per-group rate weights from a map row: 1 + max_j m_ij, or all ones.
std::vector<double> rate_weights(const cormap::CorrelationMap& map, EtaPolicy policy);

struct FrameMetrics {
    std::uint64_t frame = 0;
    double mse = 0.0;
    double psnr_db = 0.0;
    double k_c = 0.0;
    double k_v = 0.0;
    double k_cz = 0.0;
    double k_vz = 0.0;
    double k_t = 0.0;
    double channel_uses = 0.0;  // k_t / log2(QAM order)
    double cbr = 0.0;           // channel_uses / (H W 3)
    double diagnostic_loss = 0.0;
    double mse_lossless = 0.0;  // against the encoder-side reconstruction
    bool frame_error = false;
    std::size_t bit_errors = 0;
    std::size_t payload_bits = 0;
    std::size_t lost_pieces = 0;
    std::size_t context_groups_decoded = 0;
    std::size_t motion_groups_decoded = 0;
    std::vector<double> eta;
};

struct FrameResult {
    Frame reconstruction;          // decoder output x^
    Frame encoder_reconstruction;  // x-bar, error-free decoder output
    FrameMetrics metrics;
};

// Shared, immutable model parts (everything fixed by model_seed and the config).
struct Models {
    BlockTransform transform;
    cormap::Embedders embedders;
    std::shared_ptr<const entropy::ParamPredictor> predictor;
    entropy::LatentCodec context_codec;
    entropy::LatentCodec motion_codec;

    static std::shared_ptr<const Models> build(const PipelineConfig& config);
};

class Session {
public:
    // noise: per-run noise; seed drives the noise stream.
    Session(PipelineConfig config, std::unique_ptr<ChannelSource> channel, precoding::NoiseConfig noise,
            std::uint64_t seed, std::shared_ptr<const Models> models = nullptr);

    FrameResult run_frame(const Frame& frame);
    std::vector<FrameResult> run_gop(const std::vector<Frame>& gop);

    std::uint64_t frames_done() const noexcept { return frame_; }
    std::uint64_t channel_symbol_index() const { return channel_->symbol_index(); }
    const PipelineConfig& config() const noexcept { return config_; }
    const Models& models() const noexcept { return *models_; }

private:
    PipelineConfig config_;
    std::shared_ptr<const Models> models_;
    std::unique_ptr<ChannelSource> channel_;
    precoding::NoiseConfig noise_;
    Rng noise_rng_;
    precoding::QamModem modem_;
    sampling::CsiHistory csi_history_;
    entropy::MapHistory map_history_;
    std::uint64_t frame_ = 0;
    std::size_t height_ = 0;
    std::size_t width_ = 0;
    std::optional<RealGrid> prev_features_;  // encoder side, original
    std::optional<RealGrid> prev_decoded_;   // decoder side
};

// Live channel with seed-derived channel state; noise from snr_db.
std::unique_ptr<ChannelSource> make_live_channel(const PipelineConfig& config, std::uint64_t seed);

} // namespace mcvst::pipeline
