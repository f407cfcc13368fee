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

// Experiment drivers behind the command-line tool and the C API.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "channel/trace.hpp"
#include "config/config.hpp"
#include "pipeline/pipeline.hpp"

namespace mcvst::config {

inline constexpr const char* kCsvHeader = "snr_db,seed,frame,mse,psnr_db,k_c,k_v,k_cz,k_vz,k_t,cbr,frame_error";

struct CsvRow {
    double snr_db = 0.0;
    std::uint64_t seed = 0;
    std::uint64_t frame = 0;
    pipeline::FrameMetrics metrics;
};

// Header plus rows sorted by (snr_db, seed, frame).
std::string to_csv(std::vector<CsvRow> rows);

// Opens io.trace_path when set; checks its dimensions against the config.
std::optional<channel::ChannelTrace> load_configured_trace(const ExperimentConfig& config);

// One GoP of sweep.frames synthetic frames at one SNR. A trace, when given,
// replaces the live channel and is replayed from its first symbol.
std::vector<CsvRow> run_gop(const ExperimentConfig& config, double snr_db, std::uint64_t seed,
                            const std::shared_ptr<const pipeline::Models>& models = nullptr,
                            const std::optional<channel::ChannelTrace>& trace = std::nullopt);

// simulate: one GoP at snr_db.
std::vector<CsvRow> simulate(const ExperimentConfig& config, std::uint64_t seed, double snr_db);

// sweep: every SNR in sweep.snr_db times seeds seed, seed + 1, ..., seed + sweep.seeds - 1.
std::vector<CsvRow> sweep(const ExperimentConfig& config, std::uint64_t seed);

struct CoverageReport {
    std::vector<std::vector<std::size_t>> indices;  // per symbol t = 0 .. m_h - 1
    bool partition = false;                         // every window of m_h symbols covers each index once
    std::string text;
};

// Indices for the first m_h symbols, plus an exhaustive check of every start
// offset in [0, 2 m_h).
CoverageReport coverage(const ExperimentConfig& config);

struct SelftestCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct SelftestReport {
    std::vector<SelftestCheck> checks;
    std::string digest;  // FNV-1a 64 of every produced bitstream, hex
    bool passed() const;
    std::string text() const;
};

// Range-coder and latent-codec round trips, rate consistency and a repeat run
// for determinism.
SelftestReport codec_selftest(const ExperimentConfig& config, std::uint64_t seed);

// Records the live channel of the given seed.
channel::ChannelTrace export_trace(const ExperimentConfig& config, std::uint64_t seed, std::size_t n_symbols);

} // namespace mcvst::config
