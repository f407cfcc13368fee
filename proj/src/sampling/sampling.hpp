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

// Recursive subcarrier sampling.
//
// N_s subcarriers form N_s / m_h groups of m_h adjacent subcarriers. At OFDM
// symbol t every group feeds back the subcarrier at relative offset t mod m_h,
// so m_h consecutive symbols visit every subcarrier exactly once.

#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "channel/channel_sim.hpp"

namespace mcvst::sampling {

using CMatrix = Eigen::MatrixXcd;

class SamplingSchedule {
public:
    SamplingSchedule(std::size_t n_subcarriers, std::size_t group_size);

    std::size_t n_subcarriers() const noexcept { return n_subcarriers_; }
    std::size_t group_size() const noexcept { return group_size_; }
    std::size_t n_groups() const noexcept { return n_subcarriers_ / group_size_; }

    std::size_t offset(std::uint64_t t) const noexcept { return static_cast<std::size_t>(t % group_size_); }
    std::size_t group_of(std::size_t subcarrier) const noexcept { return subcarrier / group_size_; }

    // [g * m_h + (t mod m_h)] for g = 0 .. n_groups - 1
    std::vector<std::size_t> sampled_indices(std::uint64_t t) const;

private:
    std::size_t n_subcarriers_;
    std::size_t group_size_;
};

struct SampledCsi {
    std::uint64_t t = 0;
    std::vector<CMatrix> entries;
    std::vector<std::size_t> positions;
};

SampledCsi sample(const channel::ChannelRealization& realization, const SamplingSchedule& schedule,
                  std::uint64_t t);

struct HistorySlot {
    std::uint64_t t = 0;
    std::size_t position = 0;
    CMatrix csi;
};

// One entry per (group, offset); nullopt while the offset has not been seen.
struct AssembledCsi {
    std::vector<std::vector<std::optional<HistorySlot>>> groups;

    std::size_t present_offsets() const;
};

class CsiHistory {
public:
    explicit CsiHistory(SamplingSchedule schedule) : schedule_(schedule) {}

    const SamplingSchedule& schedule() const noexcept { return schedule_; }
    std::size_t size() const noexcept { return ring_.size(); }
    const std::deque<SampledCsi>& records() const noexcept { return ring_; }

    // Keeps the last m_h records. Throws Error(Ordering) unless t strictly increases.
    void push(SampledCsi sampled);

    // Most recent sample at each offset of each group.
    AssembledCsi assemble() const;

    // push then assemble.
    AssembledCsi push_and_assemble(SampledCsi sampled);

private:
    SamplingSchedule schedule_;
    std::deque<SampledCsi> ring_;
};

} // namespace mcvst::sampling
