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

#include "pipeline/source.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "common/error.hpp"
#include "common/rng.hpp"

namespace mcvst::pipeline {

namespace {

struct Blob {
    double y, x;    // centre, pixels
    double vy, vx;  // pixels per frame
    double radius;
    double colour[3];
    double strength;
};

} // namespace

std::vector<Frame> synthetic_gop(std::size_t frames, std::size_t height, std::size_t width, std::uint64_t seed,
                                 bool static_scene)
{
    require(frames >= 1, ErrorCode::InvalidInput, "a GoP needs at least one frame");
    require(height >= 1 && width >= 1, ErrorCode::InvalidInput, "frame size must be positive");
    Rng rng(derive_seed(seed, Stream::Source));
    const double H = static_cast<double>(height);
    const double W = static_cast<double>(width);

    double base[3];
    double grad_y[3];
    double grad_x[3];
    for (int k = 0; k < 3; ++k) {
        base[k] = 0.3 + 0.4 * rng.uniform();
        grad_y[k] = 0.3 * (rng.uniform() - 0.5);
        grad_x[k] = 0.3 * (rng.uniform() - 0.5);
    }
    const double tex_freq = 2.0 + 4.0 * rng.uniform();
    const double tex_amp = 0.04;

    std::vector<Blob> blobs(3);
    for (auto& b : blobs) {
        b.y = H * rng.uniform();
        b.x = W * rng.uniform();
        b.vy = static_scene ? 0.0 : 3.0 * (rng.uniform() - 0.5);
        b.vx = static_scene ? 0.0 : 3.0 * (rng.uniform() - 0.5);
        b.radius = std::min(H, W) * (0.08 + 0.12 * rng.uniform());
        for (double& c : b.colour)
            c = rng.uniform();
        b.strength = 0.5 + 0.4 * rng.uniform();
    }

    std::vector<Frame> gop;
    gop.reserve(frames);
    for (std::size_t t = 0; t < frames; ++t) {
        Frame f(3, height, width);
        const double tt = static_cast<double>(t);
        for (std::size_t h = 0; h < height; ++h)
            for (std::size_t w = 0; w < width; ++w) {
                const double y = static_cast<double>(h);
                const double x = static_cast<double>(w);
                const double tex = tex_amp * std::sin(2.0 * std::numbers::pi * tex_freq * (x + 0.5 * y) / W);
                for (int k = 0; k < 3; ++k) {
                    double v = base[k] + grad_y[k] * (y / H - 0.5) + grad_x[k] * (x / W - 0.5) + tex;
                    for (const auto& b : blobs) {
                        const double dy = y - (b.y + b.vy * tt);
                        const double dx = x - (b.x + b.vx * tt);
                        const double a = b.strength * std::exp(-(dy * dy + dx * dx) / (2.0 * b.radius * b.radius));
                        v = (1.0 - a) * v + a * b.colour[k];
                    }
                    f(static_cast<std::size_t>(k), h, w) = std::clamp(v, 0.0, 1.0);
                }
            }
        gop.push_back(std::move(f));
    }
    return gop;
}

void validate_frame(const Frame& frame)
{
    require(frame.channels() == 3 && frame.height() >= 1 && frame.width() >= 1, ErrorCode::InvalidInput,
            "frames must be 3 x H x W");
    for (double v : frame.values())
        require(std::isfinite(v) && v >= 0.0 && v <= 1.0, ErrorCode::InvalidInput,
                "frame values must be finite and in [0, 1]");
}

double mse(const Frame& a, const Frame& b)
{
    require(a.shape() == b.shape(), ErrorCode::InvalidInput, "frames differ in shape");
    require(a.size() > 0, ErrorCode::InvalidInput, "frames are empty");
    double acc = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double d = a.values()[k] - b.values()[k];
        acc += d * d;
    }
    return acc / static_cast<double>(a.size());
}

double psnr_db(double mse_value)
{
    if (mse_value <= 0.0)
        return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(1.0 / mse_value);
}

} // namespace mcvst::pipeline
