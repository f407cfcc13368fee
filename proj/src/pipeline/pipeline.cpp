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

#include "pipeline/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "common/error.hpp"
#include "entropy/likelihood.hpp"
#include "entropy/rate.hpp"

namespace mcvst::pipeline {

namespace {

// Largest |value| / q we accept; keeps every latent inside the widest hyper-coded support.
constexpr double kMaxQuantizedMagnitude = 1200.0;

RealGrid dequantize(const IntGrid& q, double step)
{
    RealGrid out(q.shape());
    for (std::size_t k = 0; k < q.size(); ++k)
        out.values()[k] = step * static_cast<double>(q.values()[k]);
    return out;
}

void clip_unit(Frame& f)
{
    for (double& v : f.values())
        v = std::clamp(v, 0.0, 1.0);
}

double group_sum(const std::vector<std::vector<double>>& a, const std::vector<std::vector<double>>& na,
                 const std::vector<double>& eta)
{
    double k = 0.0;
    std::vector<double> rates;
    for (std::size_t g = 0; g < a.size(); ++g)
        rates.push_back(entropy::group_rate(a[g], na[g], eta[g]));
    k = entropy::total_rate(rates);
    return k;
}

} // namespace

void PipelineConfig::validate() const
{
    channel.validate();
    map.validate(channel.n_subcarriers);
    require(link.qam_order == 4 || link.qam_order == 16 || link.qam_order == 64, ErrorCode::InvalidConfig,
            "QAM order must be 4, 16 or 64");
    require(link.n_streams >= 1 && link.n_streams <= std::min(channel.n_rx, channel.n_tx), ErrorCode::InvalidConfig,
            "n_streams must be in [1, min(n_rx, n_tx)]");
    require(link.symbols_per_frame >= 1, ErrorCode::InvalidConfig, "symbols_per_frame must be >= 1");
    require(link.max_uses >= 1, ErrorCode::InvalidConfig, "max_uses must be >= 1");
    require(quant_step >= 1.0 / 64.0 && quant_step <= 1.0, ErrorCode::InvalidConfig,
            "quant_step must be in [1/64, 1]");
    require(scale_floor >= entropy::kScaleFloor && scale_floor < 1.0, ErrorCode::InvalidConfig,
            "scale_floor must be in [1e-6, 1)");
    require(lambda >= 0.0 && std::isfinite(lambda), ErrorCode::InvalidConfig, "lambda must be >= 0");
    require(transform_block >= 1 && map.feature_channels >= 3 * transform_block * transform_block,
            ErrorCode::InvalidConfig, "feature_channels must be at least 3 * block^2");
    require(hyper_block >= 1, ErrorCode::InvalidConfig, "hyper block must be >= 1");
}

MotionContext motion_context_split(const RealGrid& f, const RealGrid& f_ref)
{
    require(f.shape() == f_ref.shape(), ErrorCode::InvalidInput, "feature and reference shapes differ");
    MotionContext out{RealGrid(f.shape()), f_ref};
    for (std::size_t k = 0; k < f.size(); ++k)
        out.motion.values()[k] = f.values()[k] - f_ref.values()[k];
    return out;
}

RealGrid combine(const RealGrid& motion, const RealGrid& context)
{
    require(motion.shape() == context.shape(), ErrorCode::InvalidInput, "motion and context shapes differ");
    RealGrid out(motion.shape());
    for (std::size_t k = 0; k < out.size(); ++k)
        out.values()[k] = motion.values()[k] + context.values()[k];
    return out;
}

std::vector<double> rate_weights(const cormap::CorrelationMap& map, EtaPolicy policy)
{
    std::vector<double> eta(map.rows(), 1.0);
    if (policy == EtaPolicy::Map)
        for (std::size_t i = 0; i < map.rows(); ++i)
            eta[i] = 1.0 + map.values.row(static_cast<Eigen::Index>(i)).maxCoeff();
    return eta;
}

std::shared_ptr<const Models> Models::build(const PipelineConfig& config)
{
    config.validate();
    const std::size_t L = config.map.feature_channels;
    const std::uint64_t hyper_root = derive_seed(config.model_seed, Stream::HyperDensity);
    auto predictor = std::make_shared<entropy::AffinePredictor>(
        config.map.context_group, config.map_period(), config.model_seed, config.scale_floor);
    const entropy::LatentCodecConfig codec{config.map.context_group, config.hyper_block};
    return std::make_shared<const Models>(Models{
        BlockTransform(config.transform_block, L, config.model_seed),
        cormap::Embedders::seeded(config.map, config.channel.n_rx, config.channel.n_tx, config.model_seed),
        predictor,
        entropy::LatentCodec(predictor, entropy::HyperDensity::seeded(L, derive_seed(hyper_root, 0)), codec),
        entropy::LatentCodec(predictor, entropy::HyperDensity::seeded(L, derive_seed(hyper_root, 1)), codec),
    });
}

std::unique_ptr<ChannelSource> make_live_channel(const PipelineConfig& config, std::uint64_t seed)
{
    channel::ChannelConfig c = config.channel;
    c.seed = derive_seed(seed, Stream::Channel);
    return std::make_unique<LiveChannel>(std::move(c));
}

Session::Session(PipelineConfig config, std::unique_ptr<ChannelSource> channel, precoding::NoiseConfig noise,
                 std::uint64_t seed, std::shared_ptr<const Models> models)
    : config_(std::move(config)),
      models_(models ? std::move(models) : Models::build(config_)),
      channel_(std::move(channel)),
      noise_(noise),
      noise_rng_(derive_seed(seed, Stream::Noise)),
      modem_(config_.link.qam_order),
      csi_history_(sampling::SamplingSchedule(config_.channel.n_subcarriers, config_.map.subcarrier_group)),
      map_history_(config_.map_period())
{
    config_.validate();
    require(channel_ != nullptr, ErrorCode::InvalidArgument, "channel source is null");
    require(noise_.sigma2 >= 0.0 && std::isfinite(noise_.sigma2), ErrorCode::InvalidConfig,
            "noise variance must be finite and >= 0");
}

FrameResult Session::run_frame(const Frame& x)
{
    validate_frame(x);
    if (frame_ == 0) {
        height_ = x.height();
        width_ = x.width();
    }
    require(x.height() == height_ && x.width() == width_, ErrorCode::InvalidInput,
            "frame size changed within the GoP");

    const auto& m = *models_;
    const double q = config_.quant_step;
    const std::size_t n_groups = config_.map.rows();

    // 1. Channel symbols for this frame; CSI feedback happens before transmission.
    const FrameLinks links = acquire_frame_links(*channel_, csi_history_, config_.link, noise_);

    // 2. Analysis, motion/context split, quantization.
    const RealGrid f = m.transform.encode(x);
    const RealGrid f_ref = prev_features_ ? *prev_features_ : RealGrid(f.shape());
    const MotionContext mc = motion_context_split(f, f_ref);
    for (double v : mc.motion.values())
        require(std::abs(v) / q <= kMaxQuantizedMagnitude, ErrorCode::Encoding,
                "feature magnitude too large for quant_step");
    const IntGrid v_q = entropy::quantize(mc.motion, q);
    const IntGrid c_q = entropy::quantize(mc.context, q);
    const RealGrid v_hat = dequantize(v_q, q);
    const RealGrid c_hat = dequantize(c_q, q);

    // 3. Correlation map from the dequantized context and the first symbol's sampled CSI.
    cormap::CorrelationMap map = cormap::build_map(c_hat, links.symbols.front().sampled, config_.map, m.embedders);
    map.t = frame_;
    const std::vector<double> eta = rate_weights(map, config_.eta);
    map_history_.push(map);
    const entropy::MapWindow window = entropy::build_reference_window(map_history_, frame_, config_.map_period());

    // 4. Entropy coding.
    const entropy::EncodedLatent enc_c = m.context_codec.encode(c_q, window, entropy::StreamKind::Context);
    const entropy::EncodedLatent enc_v = m.motion_codec.encode(v_q, window, entropy::StreamKind::Motion);

    FrameMetrics met;
    met.frame = frame_;
    met.eta = eta;
    met.k_c = group_sum(enc_c.anchor_probs, enc_c.non_anchor_probs, eta);
    met.k_v = group_sum(enc_v.anchor_probs, enc_v.non_anchor_probs, eta);
    met.k_cz = entropy::group_rate(enc_c.hyper_probs, 1.0);
    met.k_vz = entropy::group_rate(enc_v.hyper_probs, 1.0);
    met.k_t = entropy::transmission_cost(met.k_c, met.k_v, met.k_cz, met.k_vz);
    met.channel_uses = met.k_t / std::log2(static_cast<double>(config_.link.qam_order));
    const double uses_one[] = {met.channel_uses};
    met.cbr = entropy::cbr(uses_one, 1, height_, width_);

    // Encoder-side reconstruction.
    FrameResult out;
    out.encoder_reconstruction = m.transform.decode(combine(v_hat, c_hat), height_, width_);
    clip_unit(out.encoder_reconstruction);

    // 5. Transport over the radio link.
    const std::vector<std::uint8_t> payload =
        pack_frame({enc_c.main, enc_c.hyper, enc_v.main, enc_v.hyper});
    const std::vector<std::uint8_t> bits = bytes_to_bits(payload);
    const Codeword cw = modulate(bits, modem_);
    const auto received = transmit_codeword(cw, links, config_.link, noise_, noise_rng_);
    const std::vector<std::uint8_t> rx_bits = demodulate(received, bits.size(), modem_);
    met.payload_bits = bits.size();
    for (std::size_t k = 0; k < bits.size(); ++k)
        met.bit_errors += bits[k] != rx_bits[k];

    // 6. Decode what survived.
    const UnpackedFrame rx = unpack_frame(bits_to_bytes(rx_bits), f.shape(), n_groups, config_.hyper_block);
    met.lost_pieces = rx.lost_pieces;
    entropy::DecodedLatent dec_c;
    entropy::DecodedLatent dec_v;
    // A corrupted segment that slips past its CRC may still fail to parse; treat it as lost.
    if (rx.header_ok) {
        try {
            dec_c = m.context_codec.decode(rx.context, window);
        } catch (const Error&) {
            dec_c = {};
        }
        try {
            dec_v = m.motion_codec.decode(rx.motion, window);
        } catch (const Error&) {
            dec_v = {};
        }
    }
    met.context_groups_decoded = rx.header_ok && dec_c.hyper_ok ? dec_c.groups_decoded : 0;
    met.motion_groups_decoded = rx.header_ok && dec_v.hyper_ok ? dec_v.groups_decoded : 0;

    // Concealment per context group. Without any decoded history the fallback is mid-grey.
    RealGrid fallback;
    if (prev_decoded_) {
        fallback = *prev_decoded_;
    } else {
        Frame grey(3, height_, width_, 0.5);
        fallback = m.transform.encode(grey);
    }
    RealGrid f_hat(f.shape());
    const std::size_t slab = config_.map.context_group * f.height() * f.width();
    for (std::size_t g = 0; g < n_groups; ++g) {
        const bool c_ok = g < met.context_groups_decoded;
        const bool v_ok = g < met.motion_groups_decoded;
        for (std::size_t k = g * slab; k < (g + 1) * slab; ++k) {
            const double cv = c_ok ? q * static_cast<double>(dec_c.values.values()[k]) : 0.0;
            const double vv = v_ok ? q * static_cast<double>(dec_v.values.values()[k]) : 0.0;
            double value;
            if (c_ok && v_ok)
                value = vv + cv;
            else if (v_ok)
                value = vv + fallback.values()[k];
            else if (c_ok && prev_decoded_)
                value = cv;
            else
                value = fallback.values()[k];
            f_hat.values()[k] = value;
        }
    }
    out.reconstruction = m.transform.decode(f_hat, height_, width_);
    clip_unit(out.reconstruction);

    met.frame_error = met.bit_errors > 0 || rx.lost_pieces > 0;
    met.mse = mse(x, out.reconstruction);
    met.psnr_db = psnr_db(met.mse);
    met.mse_lossless = mse(x, out.encoder_reconstruction);
    met.diagnostic_loss = entropy::diagnostic_loss(met.k_t, config_.lambda, met.mse, met.mse_lossless);
    out.metrics = std::move(met);

    prev_features_ = f;
    prev_decoded_ = std::move(f_hat);
    ++frame_;
    return out;
}

std::vector<FrameResult> Session::run_gop(const std::vector<Frame>& gop)
{
    require(!gop.empty(), ErrorCode::InvalidInput, "GoP is empty");
    std::vector<FrameResult> out;
    out.reserve(gop.size());
    for (const auto& x : gop)
        out.push_back(run_frame(x));
    return out;
}

} // namespace mcvst::pipeline
