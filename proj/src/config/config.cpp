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

#include "config/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "config/format.hpp"

namespace mcvst::config {

namespace {

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_list(std::string_view s)
{
    std::vector<std::string_view> out;
    if (trim(s).empty())
        return out;
    std::size_t pos = 0;
    while (true) {
        const auto comma = s.find(',', pos);
        out.push_back(trim(s.substr(pos, comma == std::string_view::npos ? comma : comma - pos)));
        if (comma == std::string_view::npos)
            break;
        pos = comma + 1;
    }
    return out;
}

// Each parser throws std::string on a type error.
std::uint64_t to_u64(std::string_view s)
{
    std::uint64_t v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || p != s.data() + s.size())
        throw std::string("expected a non-negative integer, got '" + std::string(s) + "'");
    return v;
}

std::size_t to_size(std::string_view s)
{
    return static_cast<std::size_t>(to_u64(s));
}

double to_double(std::string_view s)
{
    double v = 0.0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || p != s.data() + s.size() || !std::isfinite(v))
        throw std::string("expected a finite number, got '" + std::string(s) + "'");
    return v;
}

std::vector<double> to_doubles(std::string_view s)
{
    std::vector<double> out;
    for (auto item : split_list(s))
        out.push_back(to_double(item));
    if (out.empty())
        throw std::string("expected a non-empty number list");
    return out;
}

std::vector<std::size_t> to_sizes(std::string_view s)
{
    std::vector<std::size_t> out;
    for (auto item : split_list(s))
        out.push_back(to_size(item));
    if (out.empty())
        throw std::string("expected a non-empty integer list");
    return out;
}

template <typename T>
std::string join(const std::vector<T>& v)
{
    std::string out;
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (k)
            out += ", ";
        if constexpr (std::is_floating_point_v<T>)
            out += format_number(v[k]);
        else
            out += std::to_string(v[k]);
    }
    return out;
}

struct Key {
    const char* name;
    std::function<void(ExperimentConfig&, std::string_view)> set;
    std::function<std::string(const ExperimentConfig&)> get;
};

#define MCVST_SIZE_KEY(key, field)                                                                   \
    Key{key, [](ExperimentConfig& c, std::string_view v) { c.field = to_size(v); },                 \
        [](const ExperimentConfig& c) { return std::to_string(c.field); }}
#define MCVST_DOUBLE_KEY(key, field)                                                                 \
    Key{key, [](ExperimentConfig& c, std::string_view v) { c.field = to_double(v); },               \
        [](const ExperimentConfig& c) { return format_number(c.field); }}

const std::vector<Key>& keys()
{
    static const std::vector<Key> table = {
        MCVST_SIZE_KEY("mimo.n_tx", pipeline.channel.n_tx),
        MCVST_SIZE_KEY("mimo.n_rx", pipeline.channel.n_rx),
        MCVST_SIZE_KEY("mimo.n_streams", pipeline.link.n_streams),
        Key{"mimo.power_allocation",
            [](ExperimentConfig& c, std::string_view v) {
                if (v == "equal")
                    c.pipeline.link.power = pipeline::PowerAllocation::Equal;
                else if (v == "waterfilling")
                    c.pipeline.link.power = pipeline::PowerAllocation::Waterfilling;
                else
                    throw std::string("expected 'equal' or 'waterfilling', got '" + std::string(v) + "'");
            },
            [](const ExperimentConfig& c) {
                return std::string(c.pipeline.link.power == pipeline::PowerAllocation::Equal ? "equal"
                                                                                             : "waterfilling");
            }},
        MCVST_SIZE_KEY("mimo.max_uses", pipeline.link.max_uses),

        MCVST_SIZE_KEY("channel.n_subcarriers", pipeline.channel.n_subcarriers),
        Key{"channel.tap_delays",
            [](ExperimentConfig& c, std::string_view v) { c.pipeline.channel.tap_delays = to_sizes(v); },
            [](const ExperimentConfig& c) { return join(c.pipeline.channel.tap_delays); }},
        Key{"channel.tap_powers",
            [](ExperimentConfig& c, std::string_view v) { c.pipeline.channel.tap_powers = to_doubles(v); },
            [](const ExperimentConfig& c) { return join(c.pipeline.channel.tap_powers); }},
        MCVST_DOUBLE_KEY("channel.carrier_freq_hz", pipeline.channel.carrier_freq_hz),
        MCVST_DOUBLE_KEY("channel.speed_mps", pipeline.channel.speed_mps),
        MCVST_DOUBLE_KEY("channel.symbol_duration_s", pipeline.channel.symbol_duration_s),
        MCVST_SIZE_KEY("channel.symbols_per_frame", pipeline.link.symbols_per_frame),

        MCVST_SIZE_KEY("sampling.m_h", pipeline.map.subcarrier_group),

        MCVST_SIZE_KEY("map.feature_channels", pipeline.map.feature_channels),
        MCVST_SIZE_KEY("map.m_c", pipeline.map.context_group),
        MCVST_DOUBLE_KEY("map.temperature", pipeline.map.temperature),
        MCVST_SIZE_KEY("map.embed_dim", pipeline.map.embed_dim),

        Key{"codec.qam_order",
            [](ExperimentConfig& c, std::string_view v) {
                c.pipeline.link.qam_order = static_cast<unsigned>(std::min<std::uint64_t>(to_u64(v), 1u << 20));
            },
            [](const ExperimentConfig& c) { return std::to_string(c.pipeline.link.qam_order); }},
        MCVST_DOUBLE_KEY("codec.quant_step", pipeline.quant_step),
        MCVST_DOUBLE_KEY("codec.scale_floor", pipeline.scale_floor),
        MCVST_DOUBLE_KEY("codec.lambda", pipeline.lambda),
        Key{"codec.lambda_set", [](ExperimentConfig& c, std::string_view v) { c.lambda_set = to_doubles(v); },
            [](const ExperimentConfig& c) { return join(c.lambda_set); }},
        Key{"codec.eta_policy",
            [](ExperimentConfig& c, std::string_view v) {
                if (v == "map")
                    c.pipeline.eta = pipeline::EtaPolicy::Map;
                else if (v == "unit")
                    c.pipeline.eta = pipeline::EtaPolicy::Unit;
                else
                    throw std::string("expected 'map' or 'unit', got '" + std::string(v) + "'");
            },
            [](const ExperimentConfig& c) {
                return std::string(c.pipeline.eta == pipeline::EtaPolicy::Map ? "map" : "unit");
            }},
        Key{"codec.model_seed", [](ExperimentConfig& c, std::string_view v) { c.pipeline.model_seed = to_u64(v); },
            [](const ExperimentConfig& c) { return std::to_string(c.pipeline.model_seed); }},

        Key{"sweep.snr_db", [](ExperimentConfig& c, std::string_view v) { c.sweep.snr_db = to_doubles(v); },
            [](const ExperimentConfig& c) { return join(c.sweep.snr_db); }},
        MCVST_SIZE_KEY("sweep.seeds", sweep.seeds),
        MCVST_SIZE_KEY("sweep.frames", sweep.frames),
        Key{"sweep.seed", [](ExperimentConfig& c, std::string_view v) { c.sweep.seed = to_u64(v); },
            [](const ExperimentConfig& c) { return std::to_string(c.sweep.seed); }},

        MCVST_SIZE_KEY("source.width", source.width),
        MCVST_SIZE_KEY("source.height", source.height),

        Key{"io.trace_path", [](ExperimentConfig& c, std::string_view v) { c.io.trace_path = std::string(v); },
            [](const ExperimentConfig& c) { return c.io.trace_path; }},
        Key{"io.output_path", [](ExperimentConfig& c, std::string_view v) { c.io.output_path = std::string(v); },
            [](const ExperimentConfig& c) { return c.io.output_path; }},
    };
    return table;
}

#undef MCVST_SIZE_KEY
#undef MCVST_DOUBLE_KEY

const Key* find_key(std::string_view name)
{
    for (const auto& k : keys())
        if (name == k.name)
            return &k;
    return nullptr;
}

// Per-field and cross-field invariants. line_of maps a key to the line that set it.
std::vector<ConfigIssue> check(const ExperimentConfig& c, const std::function<std::size_t(const char*)>& line_of)
{
    std::vector<ConfigIssue> out;
    auto expect = [&](bool ok, const char* key, const std::string& msg) {
        if (!ok)
            out.push_back({line_of(key), key, std::string(key) + ": " + msg});
    };
    const auto& p = c.pipeline;
    const auto& ch = p.channel;
    expect(ch.n_tx >= 1, "mimo.n_tx", "must be >= 1");
    expect(ch.n_rx >= 1, "mimo.n_rx", "must be >= 1");
    expect(p.link.n_streams >= 1 && p.link.n_streams <= std::min(ch.n_tx, ch.n_rx), "mimo.n_streams",
           "must be in [1, min(n_tx, n_rx)]");
    expect(p.link.max_uses >= 1, "mimo.max_uses", "must be >= 1");
    expect(ch.n_subcarriers >= 1, "channel.n_subcarriers", "must be >= 1");
    expect(ch.tap_delays.size() == ch.tap_powers.size(), "channel.tap_powers",
           "must have as many entries as channel.tap_delays");
    for (std::size_t l = 0; l < ch.tap_delays.size(); ++l) {
        expect(ch.tap_delays[l] < ch.n_subcarriers, "channel.tap_delays", "every delay must be < n_subcarriers");
        expect(l == 0 || ch.tap_delays[l] > ch.tap_delays[l - 1], "channel.tap_delays",
               "delays must be strictly increasing");
    }
    bool powers_positive = true;
    for (double w : ch.tap_powers)
        powers_positive = powers_positive && w > 0.0;
    expect(powers_positive, "channel.tap_powers", "every power must be > 0");
    const double total = std::accumulate(ch.tap_powers.begin(), ch.tap_powers.end(), 0.0);
    expect(std::abs(total - 1.0) <= 1e-12, "channel.tap_powers", "powers must sum to 1");
    expect(ch.carrier_freq_hz > 0.0, "channel.carrier_freq_hz", "must be > 0");
    expect(ch.speed_mps >= 0.0, "channel.speed_mps", "must be >= 0");
    expect(ch.symbol_duration_s > 0.0, "channel.symbol_duration_s", "must be > 0");
    expect(p.link.symbols_per_frame >= 1, "channel.symbols_per_frame", "must be >= 1");

    const auto& m = p.map;
    expect(m.subcarrier_group >= 1 && ch.n_subcarriers % std::max<std::size_t>(m.subcarrier_group, 1) == 0,
           "sampling.m_h", "must divide channel.n_subcarriers (" + std::to_string(ch.n_subcarriers) + ")");
    expect(m.feature_channels >= 3 * p.transform_block * p.transform_block, "map.feature_channels",
           "must be >= " + std::to_string(3 * p.transform_block * p.transform_block));
    expect(m.context_group >= 1 && m.feature_channels % std::max<std::size_t>(m.context_group, 1) == 0, "map.m_c",
           "must divide map.feature_channels (" + std::to_string(m.feature_channels) + ")");
    expect(m.temperature > 0.0, "map.temperature", "must be > 0");
    expect(m.embed_dim >= 1, "map.embed_dim", "must be >= 1");

    expect(p.link.qam_order == 4 || p.link.qam_order == 16 || p.link.qam_order == 64, "codec.qam_order",
           "must be 4, 16 or 64");
    expect(p.quant_step >= 1.0 / 64.0 && p.quant_step <= 1.0, "codec.quant_step", "must be in [1/64, 1]");
    expect(p.scale_floor >= 1e-6 && p.scale_floor < 1.0, "codec.scale_floor", "must be in [1e-6, 1)");
    expect(p.lambda >= 0.0, "codec.lambda", "must be >= 0");
    bool lambdas_ok = true;
    for (double l : c.lambda_set)
        lambdas_ok = lambdas_ok && l >= 0.0;
    expect(lambdas_ok, "codec.lambda_set", "every entry must be >= 0");

    expect(!c.sweep.snr_db.empty(), "sweep.snr_db", "must not be empty");
    expect(c.sweep.seeds >= 1, "sweep.seeds", "must be >= 1");
    expect(c.sweep.frames >= 1, "sweep.frames", "must be >= 1");
    expect(c.source.width >= 1 && c.source.width <= 4096, "source.width", "must be in [1, 4096]");
    expect(c.source.height >= 1 && c.source.height <= 4096, "source.height", "must be in [1, 4096]");

    // Backstop for anything the module validators know about and the list above does not.
    if (out.empty()) {
        try {
            p.validate();
        } catch (const Error& e) {
            out.push_back({0, {}, e.what()});
        }
    }
    return out;
}

std::string render(const std::vector<ConfigIssue>& issues)
{
    std::string msg = std::to_string(issues.size()) + " configuration error(s)";
    for (const auto& i : issues)
        msg += "; " + (i.line ? "line " + std::to_string(i.line) + ": " : std::string()) + i.message;
    return msg;
}

} // namespace

ConfigError::ConfigError(std::vector<ConfigIssue> issues)
    : Error(ErrorCode::InvalidConfig, render(issues)), issues_(std::move(issues))
{
}

void ExperimentConfig::validate() const
{
    auto issues = check(*this, [](const char*) { return std::size_t{0}; });
    if (!issues.empty())
        throw ConfigError(std::move(issues));
}

ExperimentConfig parse_config(std::string_view text)
{
    ExperimentConfig cfg;
    std::vector<ConfigIssue> issues;
    std::map<std::string, std::size_t, std::less<>> seen;
    std::set<std::string> unparsed;  // keys whose value failed to parse keep their default

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;

        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            issues.push_back({line_no, {}, "expected 'section.key = value'"});
            continue;
        }
        const std::string_view name = trim(line.substr(0, eq));
        const std::string_view value = trim(line.substr(eq + 1));
        const Key* key = find_key(name);
        if (!key) {
            issues.push_back({line_no, {}, "unknown key '" + std::string(name) + "'"});
            continue;
        }
        if (const auto it = seen.find(name); it != seen.end()) {
            issues.push_back({line_no, std::string(name),
                              std::string(name) + ": already set on line " + std::to_string(it->second)});
            continue;
        }
        seen.emplace(std::string(name), line_no);
        try {
            key->set(cfg, value);
        } catch (const std::string& msg) {
            issues.push_back({line_no, std::string(name), std::string(name) + ": " + msg});
            unparsed.insert(std::string(name));
        }
    }

    // Invariant findings about a key that failed to parse would only restate that failure.
    for (auto& issue : check(cfg, [&](const char* k) {
             const auto it = seen.find(k);
             return it == seen.end() ? std::size_t{0} : it->second;
         }))
        if (!unparsed.count(issue.key))
            issues.push_back(std::move(issue));
    if (!issues.empty()) {
        std::stable_sort(issues.begin(), issues.end(),
                         [](const ConfigIssue& a, const ConfigIssue& b) { return a.line < b.line; });
        throw ConfigError(std::move(issues));
    }
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        fail(ErrorCode::Io, "cannot open config file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string format_config(const ExperimentConfig& config)
{
    std::string out;
    for (const auto& k : keys())
        out += std::string(k.name) + " = " + k.get(config) + "\n";
    return out;
}

std::uint64_t resolve_seed(std::optional<std::uint64_t> flag, const char* env, std::uint64_t config_seed)
{
    if (flag)
        return *flag;
    if (env && *env) {
        try {
            return to_u64(trim(env));
        } catch (const std::string& msg) {
            fail(ErrorCode::InvalidArgument, "MCVST_SEED: " + msg);
        }
    }
    return config_seed;
}

std::vector<double> parse_number_list(std::string_view text)
{
    try {
        return to_doubles(text);
    } catch (const std::string& msg) {
        fail(ErrorCode::InvalidArgument, msg);
    }
}

} // namespace mcvst::config
