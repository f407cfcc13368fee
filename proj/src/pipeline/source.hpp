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
#include <vector>

#include "common/tensor.hpp"

namespace mcvst::pipeline {

using Frame = RealGrid;  // 3 x H x W, values in [0, 1]

// T frames of a smooth colour gradient with a few soft blobs drifting across
// it. With static_scene every frame is identical.
std::vector<Frame> synthetic_gop(std::size_t frames, std::size_t height, std::size_t width, std::uint64_t seed,
                                 bool static_scene = false);

// Throws Error(InvalidInput) unless the frame is 3 x H x W with finite values in [0, 1].
void validate_frame(const Frame& frame);

double mse(const Frame& a, const Frame& b);
// 10 log10(1 / mse); +inf for identical frames.
double psnr_db(double mse);

} // namespace mcvst::pipeline
