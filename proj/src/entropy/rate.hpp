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

// Bandwidth-cost bookkeeping. Costs are in bits (log base 2) scaled by the
// per-group rate adjustment eta.

#include <cstddef>
#include <span>
#include <vector>

namespace mcvst::entropy {

// k = -eta * (sum log2 P_anchor + sum log2 P_non_anchor)
double group_rate(std::span<const double> anchor_probs, std::span<const double> non_anchor_probs, double eta);
double group_rate(std::span<const double> probs, double eta);

// Sum over groups.
double total_rate(std::span<const double> group_rates);

// k_t = k_c + k_v + k_cz + k_vz; throws Error(InvalidInput) on a negative component.
double transmission_cost(double k_c, double k_v, double k_cz, double k_vz);

// (sum_t k_t) / (T * H * W * 3)
double cbr(std::span<const double> frame_costs, std::size_t frames, std::size_t height, std::size_t width);

// k_t + lambda * (D(x, x_hat) + D(x, x_bar)), reporting only.
double diagnostic_loss(double k_t, double lambda, double distortion_received, double distortion_lossless);

struct RateReport {
    double k_c = 0.0;
    double k_v = 0.0;
    double k_cz = 0.0;
    double k_vz = 0.0;
    double k_t = 0.0;
    std::vector<double> eta;
    double cbr = 0.0;

    // Fills k_t from the four components.
    void close();
};

} // namespace mcvst::entropy
