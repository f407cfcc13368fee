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

#include "mcvst/mcvst.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <optional>
#include <string>
#include <vector>

#include "channel/channel_sim.hpp"
#include "channel/trace.hpp"
#include "common/error.hpp"
#include "config/config.hpp"
#include "config/experiments.hpp"
#include "entropy/range_coder.hpp"
#include "entropy/rate.hpp"
#include "precoding/precoding.hpp"
#include "sampling/sampling.hpp"

struct mcvst_config {
    mcvst::config::ExperimentConfig value;
};

struct mcvst_channel {
    mcvst::channel::TdlChannel value;
    mcvst::channel::ChannelRealization current;
};

namespace {

using mcvst::ErrorCode;

thread_local std::string g_last_error;

mcvst_status record(mcvst_status status, const std::string& message)
{
    g_last_error = message;
    return status;
}

// Runs f and maps every exception to a status; nothing escapes the C boundary.
template <typename F>
mcvst_status guarded(F&& f) noexcept
{
    try {
        f();
        return MCVST_OK;
    } catch (const mcvst::Error& e) {
        return record(static_cast<mcvst_status>(static_cast<int>(e.code())), e.what());
    } catch (const std::bad_alloc&) {
        return record(MCVST_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return record(MCVST_ERR_INTERNAL, e.what());
    } catch (...) {
        return record(MCVST_ERR_INTERNAL, "unknown error");
    }
}

void need(const void* p, const char* what)
{
    if (!p)
        mcvst::fail(ErrorCode::InvalidArgument, std::string(what) + " is null");
}

void fill(mcvst_buffer* out, const void* data, std::size_t size)
{
    auto* mem = static_cast<std::uint8_t*>(std::malloc(size + 1));
    if (!mem)
        throw std::bad_alloc();
    if (size)
        std::memcpy(mem, data, size);
    mem[size] = 0;
    out->data = mem;
    out->size = size;
}

void fill(mcvst_buffer* out, const std::string& text)
{
    fill(out, text.data(), text.size());
}

std::vector<mcvst::entropy::LaplaceModel> laplace_models(const double* mu, const double* scale, std::size_t n)
{
    std::vector<mcvst::entropy::LaplaceModel> models;
    models.reserve(n);
    for (std::size_t k = 0; k < n; ++k)
        models.emplace_back(mu[k], scale[k]);
    return models;
}

std::vector<const mcvst::entropy::SymbolModel*> pointers(const std::vector<mcvst::entropy::LaplaceModel>& models)
{
    std::vector<const mcvst::entropy::SymbolModel*> out;
    out.reserve(models.size());
    for (const auto& m : models)
        out.push_back(&m);
    return out;
}

} // namespace

extern "C" {

const char* mcvst_version(void)
{
    return "0.1.0";
}

const char* mcvst_status_name(mcvst_status status)
{
    if (status == MCVST_OK)
        return "ok";
    return mcvst::error_code_name(static_cast<ErrorCode>(static_cast<int>(status)));
}

const char* mcvst_last_error(void)
{
    return g_last_error.c_str();
}

void mcvst_buffer_free(mcvst_buffer* buffer)
{
    if (!buffer)
        return;
    std::free(buffer->data);
    buffer->data = nullptr;
    buffer->size = 0;
}

mcvst_status mcvst_config_default(mcvst_config** out)
{
    return guarded([&] {
        need(out, "out");
        *out = new mcvst_config{};
    });
}

mcvst_status mcvst_config_parse(const char* text, size_t length, mcvst_config** out)
{
    return guarded([&] {
        need(out, "out");
        if (length)
            need(text, "text");
        auto cfg = mcvst::config::parse_config(std::string_view(text ? text : "", length));
        *out = new mcvst_config{std::move(cfg)};
    });
}

mcvst_status mcvst_config_load(const char* path, mcvst_config** out)
{
    return guarded([&] {
        need(path, "path");
        need(out, "out");
        auto cfg = mcvst::config::load_config(path);
        *out = new mcvst_config{std::move(cfg)};
    });
}

mcvst_status mcvst_config_set(mcvst_config* config, const char* key, const char* value)
{
    return guarded([&] {
        need(config, "config");
        need(key, "key");
        need(value, "value");
        // Re-parse the full text with the one line replaced so every check runs again.
        const std::string text = mcvst::config::format_config(config->value);
        const std::string prefix = std::string(key) + " = ";
        std::string edited;
        bool found = false;
        std::size_t pos = 0;
        while (pos < text.size()) {
            const std::size_t nl = text.find('\n', pos);
            std::string line = text.substr(pos, nl - pos);
            if (line.compare(0, prefix.size(), prefix) == 0) {
                line = prefix + value;
                found = true;
            }
            edited += line + "\n";
            pos = nl + 1;
        }
        if (!found)
            mcvst::fail(ErrorCode::InvalidConfig, "unknown key '" + std::string(key) + "'");
        config->value = mcvst::config::parse_config(edited);
    });
}

mcvst_status mcvst_config_to_text(const mcvst_config* config, mcvst_buffer* out)
{
    return guarded([&] {
        need(config, "config");
        need(out, "out");
        fill(out, mcvst::config::format_config(config->value));
    });
}

mcvst_status mcvst_config_get(const mcvst_config* config, const char* key, mcvst_buffer* value)
{
    return guarded([&] {
        need(config, "config");
        need(key, "key");
        need(value, "value");
        const std::string text = mcvst::config::format_config(config->value);
        const std::string prefix = std::string(key) + " = ";
        std::size_t pos = 0;
        while (pos < text.size()) {
            const std::size_t nl = text.find('\n', pos);
            if (text.compare(pos, prefix.size(), prefix) == 0) {
                fill(value, text.substr(pos + prefix.size(), nl - pos - prefix.size()));
                return;
            }
            pos = nl + 1;
        }
        mcvst::fail(ErrorCode::InvalidArgument, "unknown key '" + std::string(key) + "'");
    });
}

mcvst_status mcvst_resolve_seed(const mcvst_config* config, const uint64_t* flag, uint64_t* seed)
{
    return guarded([&] {
        need(config, "config");
        need(seed, "seed");
        *seed = mcvst::config::resolve_seed(flag ? std::optional<std::uint64_t>(*flag) : std::nullopt,
                                            std::getenv("MCVST_SEED"), config->value.sweep.seed);
    });
}

mcvst_status mcvst_config_seed(const mcvst_config* config, uint64_t* seed)
{
    return guarded([&] {
        need(config, "config");
        need(seed, "seed");
        *seed = config->value.sweep.seed;
    });
}

void mcvst_config_free(mcvst_config* config)
{
    delete config;
}

mcvst_status mcvst_simulate(const mcvst_config* config, uint64_t seed, double snr_db, mcvst_buffer* csv)
{
    return guarded([&] {
        need(config, "config");
        need(csv, "csv");
        fill(csv, mcvst::config::to_csv(mcvst::config::simulate(config->value, seed, snr_db)));
    });
}

mcvst_status mcvst_sweep(const mcvst_config* config, uint64_t seed, mcvst_buffer* csv)
{
    return guarded([&] {
        need(config, "config");
        need(csv, "csv");
        fill(csv, mcvst::config::to_csv(mcvst::config::sweep(config->value, seed)));
    });
}

mcvst_status mcvst_coverage(const mcvst_config* config, int* partition_ok, mcvst_buffer* report)
{
    return guarded([&] {
        need(config, "config");
        const auto rep = mcvst::config::coverage(config->value);
        if (partition_ok)
            *partition_ok = rep.partition ? 1 : 0;
        if (report)
            fill(report, rep.text);
    });
}

mcvst_status mcvst_codec_selftest(const mcvst_config* config, uint64_t seed, int* passed, mcvst_buffer* report,
                                  char digest[17])
{
    return guarded([&] {
        need(config, "config");
        const auto rep = mcvst::config::codec_selftest(config->value, seed);
        if (passed)
            *passed = rep.passed() ? 1 : 0;
        if (report)
            fill(report, rep.text());
        if (digest) {
            std::memset(digest, 0, 17);
            std::memcpy(digest, rep.digest.data(), std::min<std::size_t>(rep.digest.size(), 16));
        }
    });
}

mcvst_status mcvst_channel_create(const mcvst_config* config, uint64_t seed, mcvst_channel** out)
{
    return guarded([&] {
        need(config, "config");
        need(out, "out");
        config->value.validate();
        auto c = config->value.pipeline.channel;
        c.seed = mcvst::derive_seed(seed, mcvst::Stream::Channel);
        auto* ch = new mcvst_channel{mcvst::channel::TdlChannel(std::move(c)), {}};
        ch->current = ch->value.current();
        *out = ch;
    });
}

mcvst_status mcvst_channel_step(mcvst_channel* channel)
{
    return guarded([&] {
        need(channel, "channel");
        channel->current = channel->value.step();
    });
}

mcvst_status mcvst_channel_symbol_index(const mcvst_channel* channel, uint64_t* index)
{
    return guarded([&] {
        need(channel, "channel");
        need(index, "index");
        *index = channel->value.symbol_index();
    });
}

mcvst_status mcvst_channel_response(const mcvst_channel* channel, size_t subcarrier, double* out, size_t capacity)
{
    return guarded([&] {
        need(channel, "channel");
        need(out, "out");
        const auto& resp = channel->current.freq_response;
        if (subcarrier >= resp.size())
            mcvst::fail(ErrorCode::InvalidArgument, "subcarrier out of range");
        const auto& h = resp[subcarrier];
        const auto rows = static_cast<std::size_t>(h.rows());
        const auto cols = static_cast<std::size_t>(h.cols());
        if (capacity < 2 * rows * cols)
            mcvst::fail(ErrorCode::InvalidArgument, "output capacity too small");
        for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t c = 0; c < cols; ++c) {
                const auto v = h(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
                out[2 * (r * cols + c)] = v.real();
                out[2 * (r * cols + c) + 1] = v.imag();
            }
    });
}

void mcvst_channel_free(mcvst_channel* channel)
{
    delete channel;
}

mcvst_status mcvst_trace_export(const mcvst_config* config, uint64_t seed, size_t n_symbols, const char* path)
{
    return guarded([&] {
        need(config, "config");
        need(path, "path");
        mcvst::channel::write_trace(path, mcvst::config::export_trace(config->value, seed, n_symbols));
    });
}

mcvst_status mcvst_doppler_coefficient(double speed_mps, double carrier_freq_hz, double symbol_duration_s,
                                       double* rho)
{
    return guarded([&] {
        need(rho, "rho");
        *rho = mcvst::channel::doppler_coefficient(speed_mps, carrier_freq_hz, symbol_duration_s);
    });
}

mcvst_status mcvst_sampled_indices(size_t n_subcarriers, size_t m_h, uint64_t t, size_t* out, size_t capacity,
                                   size_t* count)
{
    return guarded([&] {
        const mcvst::sampling::SamplingSchedule schedule(n_subcarriers, m_h);
        const auto idx = schedule.sampled_indices(t);
        if (count)
            *count = idx.size();
        if (capacity < idx.size())
            mcvst::fail(ErrorCode::InvalidArgument, "output capacity too small");
        need(out, "out");
        std::copy(idx.begin(), idx.end(), out);
    });
}

mcvst_status mcvst_cbr(const double* frame_costs, size_t frames, size_t height, size_t width, double* out)
{
    return guarded([&] {
        need(out, "out");
        if (frames)
            need(frame_costs, "frame_costs");
        *out = mcvst::entropy::cbr(std::span<const double>(frame_costs, frames), frames, height, width);
    });
}

mcvst_status mcvst_waterfilling(const double* gains, size_t n, double total_power, double sigma2, double* power)
{
    return guarded([&] {
        if (n) {
            need(gains, "gains");
            need(power, "power");
        }
        const auto p = mcvst::precoding::waterfilling(std::span<const double>(gains, n), total_power, sigma2);
        std::copy(p.begin(), p.end(), power);
    });
}

mcvst_status mcvst_laplace_encode(const int64_t* symbols, const double* mu, const double* scale, size_t n,
                                  mcvst_buffer* out)
{
    return guarded([&] {
        need(out, "out");
        if (n) {
            need(symbols, "symbols");
            need(mu, "mu");
            need(scale, "scale");
        }
        const auto models = laplace_models(mu, scale, n);
        const auto bytes = mcvst::entropy::range_encode(std::span<const std::int64_t>(symbols, n), pointers(models));
        fill(out, bytes.data(), bytes.size());
    });
}

mcvst_status mcvst_laplace_decode(const uint8_t* data, size_t size, const double* mu, const double* scale, size_t n,
                                  int64_t* symbols)
{
    return guarded([&] {
        if (size)
            need(data, "data");
        if (n) {
            need(symbols, "symbols");
            need(mu, "mu");
            need(scale, "scale");
        }
        const auto models = laplace_models(mu, scale, n);
        const auto out = mcvst::entropy::range_decode(std::span<const std::uint8_t>(data, size), pointers(models));
        std::copy(out.begin(), out.end(), symbols);
    });
}

mcvst_status mcvst_laplace_bits(const int64_t* symbols, const double* mu, const double* scale, size_t n, double* bits)
{
    return guarded([&] {
        need(bits, "bits");
        if (n) {
            need(symbols, "symbols");
            need(mu, "mu");
            need(scale, "scale");
        }
        const auto models = laplace_models(mu, scale, n);
        *bits = mcvst::entropy::estimated_bits(std::span<const std::int64_t>(symbols, n), pointers(models));
    });
}

} // extern "C"
