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

// Experiment configuration in a plain key-value format:
//
//     # comment
//     section.key = value
//
// One assignment per line. Lists are comma-separated. Unknown keys, type
// errors and invariant violations are all collected, each with its line.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "common/error.hpp"
#include "pipeline/pipeline.hpp"

namespace mcvst::config {

struct SweepConfig {
    std::vector<double> snr_db{0, 2, 4, 6, 8, 10, 12, 14};
    std::size_t seeds = 1;   // seed values seed, seed + 1, ...
    std::size_t frames = 4;  // GoP length T
    std::uint64_t seed = 1;
};

struct SourceConfig {
    std::size_t width = 64;
    std::size_t height = 64;
};

struct IoConfig {
    std::string trace_path;
    std::string output_path;
};

struct ExperimentConfig {
    pipeline::PipelineConfig pipeline;
    std::vector<double> lambda_set{0.015, 0.06, 0.12, 0.20, 0.32};
    SweepConfig sweep;
    SourceConfig source;
    IoConfig io;

    // Cross-field checks; throws ConfigError.
    void validate() const;
};

struct ConfigIssue {
    std::size_t line = 0;  // 0 for whole-config checks
    std::string key;       // empty for syntax errors
    std::string message;
};

class ConfigError : public Error {
public:
    explicit ConfigError(std::vector<ConfigIssue> issues);
    const std::vector<ConfigIssue>& issues() const noexcept { return issues_; }

private:
    std::vector<ConfigIssue> issues_;
};

// Empty text gives the defaults. Throws ConfigError listing every problem.
ExperimentConfig parse_config(std::string_view text);
// Throws Error(Io) if the file cannot be read.
ExperimentConfig load_config(const std::filesystem::path& path);

// Every key with its current value, in parse_config's format.
std::string format_config(const ExperimentConfig& config);

// Flag, then the MCVST_SEED environment variable, then the config.
std::uint64_t resolve_seed(std::optional<std::uint64_t> flag, const char* env, std::uint64_t config_seed);

// Parses "0,4,8" style lists. Throws Error(InvalidArgument).
std::vector<double> parse_number_list(std::string_view text);

} // namespace mcvst::config
