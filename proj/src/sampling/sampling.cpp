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

#include "sampling/sampling.hpp"

#include <string>

#include "common/error.hpp"

namespace mcvst::sampling {

SamplingSchedule::SamplingSchedule(std::size_t n_subcarriers, std::size_t group_size)
    : n_subcarriers_(n_subcarriers), group_size_(group_size)
{
    require(n_subcarriers >= 1 && group_size >= 1, ErrorCode::InvalidConfig,
            "subcarrier count and group size must be >= 1");
    if (n_subcarriers % group_size != 0)
        fail(ErrorCode::InvalidConfig, "group size " + std::to_string(group_size) + " does not divide " +
                                           std::to_string(n_subcarriers) + " subcarriers");
}

std::vector<std::size_t> SamplingSchedule::sampled_indices(std::uint64_t t) const
{
    std::vector<std::size_t> out(n_groups());
    const std::size_t off = offset(t);
    for (std::size_t g = 0; g < out.size(); ++g)
        out[g] = g * group_size_ + off;
    return out;
}

SampledCsi sample(const channel::ChannelRealization& realization, const SamplingSchedule& schedule,
                  std::uint64_t t)
{
    if (realization.freq_response.size() != schedule.n_subcarriers())
        fail(ErrorCode::InvalidInput, "realization has " + std::to_string(realization.freq_response.size()) +
                                          " subcarriers, schedule expects " +
                                          std::to_string(schedule.n_subcarriers()));
    SampledCsi out;
    out.t = t;
    out.positions = schedule.sampled_indices(t);
    out.entries.reserve(out.positions.size());
    for (std::size_t pos : out.positions)
        out.entries.push_back(realization.freq_response[pos]);
    return out;
}

std::size_t AssembledCsi::present_offsets() const
{
    std::size_t n = 0;
    for (const auto& group : groups)
        for (const auto& slot : group)
            n += slot.has_value();
    return n;
}

void CsiHistory::push(SampledCsi sampled)
{
    require(sampled.entries.size() == schedule_.n_groups() && sampled.positions.size() == schedule_.n_groups(),
            ErrorCode::InvalidInput, "sampled CSI group count does not match the schedule");
    if (!ring_.empty())
        if (sampled.t <= ring_.back().t)
            fail(ErrorCode::Ordering, "CSI history push out of order: t=" + std::to_string(sampled.t) +
                 " after t=" + std::to_string(ring_.back().t));
    ring_.push_back(std::move(sampled));
    while (ring_.size() > schedule_.group_size())
        ring_.pop_front();
}

AssembledCsi CsiHistory::assemble() const
{
    const std::size_t mh = schedule_.group_size();
    AssembledCsi out;
    out.groups.assign(schedule_.n_groups(), std::vector<std::optional<HistorySlot>>(mh));
    // Oldest first, so later records overwrite earlier ones at the same offset.
    for (const auto& record : ring_) {
        for (std::size_t g = 0; g < record.entries.size(); ++g) {
            const std::size_t pos = record.positions[g];
            out.groups[g][pos % mh] = HistorySlot{record.t, pos, record.entries[g]};
        }
    }
    return out;
}

AssembledCsi CsiHistory::push_and_assemble(SampledCsi sampled)
{
    push(std::move(sampled));
    return assemble();
}

} // namespace mcvst::sampling
