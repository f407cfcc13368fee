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

// Command-line front end. Everything goes through the C API.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "mcvst/mcvst.h"

namespace {

// Carries a failed status out to main, which prints the error line.
struct Failure {
    mcvst_status status;
    std::string message;
};

void check(mcvst_status s)
{
    if (s != MCVST_OK)
        throw Failure{s, mcvst_last_error()};
}

class Config {
public:
    explicit Config(const std::string& path)
    {
        check(path.empty() ? mcvst_config_default(&c_) : mcvst_config_load(path.c_str(), &c_));
    }
    ~Config() { mcvst_config_free(c_); }
    Config(const Config&) = delete;
    Config& operator=(const Config&) = delete;

    mcvst_config* get() const { return c_; }
    void set(const char* key, const std::string& value) { check(mcvst_config_set(c_, key, value.c_str())); }
    std::string value(const char* key) const
    {
        mcvst_buffer b{};
        check(mcvst_config_get(c_, key, &b));
        std::string out(reinterpret_cast<const char*>(b.data), b.size);
        mcvst_buffer_free(&b);
        return out;
    }

private:
    mcvst_config* c_ = nullptr;
};

std::string take(mcvst_buffer& b)
{
    std::string out(reinterpret_cast<const char*>(b.data), b.size);
    mcvst_buffer_free(&b);
    return out;
}

void emit(const std::string& text, const std::string& path)
{
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    out << text;
    out.close();
    if (!out)
        throw Failure{MCVST_ERR_IO, "cannot write " + path};
}

struct Common {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::optional<std::size_t> frames;
};

void add_common(CLI::App* sub, Common& c, bool with_out = true)
{
    sub->add_option("--config", c.config, "key-value config file")->check(CLI::ExistingFile);
    sub->add_option("--seed", c.seed, "run seed (overrides MCVST_SEED and sweep.seed)");
    if (with_out)
        sub->add_option("--out", c.out, "output path (default: io.output_path, else stdout)");
}

std::uint64_t seed_of(const Config& cfg, const Common& c)
{
    std::uint64_t seed = 0;
    const std::uint64_t flag = c.seed.value_or(0);
    check(mcvst_resolve_seed(cfg.get(), c.seed ? &flag : nullptr, &seed));
    return seed;
}

std::string out_path(const Config& cfg, const Common& c)
{
    return c.out.empty() ? cfg.value("io.output_path") : c.out;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"mcvst: MIMO-OFDM contextual video transmission simulator"};
    app.require_subcommand(1);
    app.set_version_flag("--version", mcvst_version());

    Common sim;
    std::optional<double> sim_snr;
    auto* simulate = app.add_subcommand("simulate", "run one GoP and write per-frame CSV");
    add_common(simulate, sim);
    simulate->add_option("--snr-db", sim_snr, "SNR in dB (default: first sweep.snr_db entry)");
    simulate->add_option("--frames", sim.frames, "GoP length")->check(CLI::PositiveNumber);

    Common swp;
    std::string swp_snr;
    auto* sweep = app.add_subcommand("sweep", "run every SNR x seed and write aggregate CSV");
    add_common(sweep, swp);
    sweep->add_option("--snr-db", swp_snr, "comma-separated SNR list in dB");
    sweep->add_option("--frames", swp.frames, "GoP length")->check(CLI::PositiveNumber);

    Common cov;
    auto* coverage = app.add_subcommand("coverage", "print the subcarrier sampling audit");
    add_common(coverage, cov);

    Common st;
    auto* selftest = app.add_subcommand("codec-selftest", "entropy codec round-trip and rate checks");
    selftest->alias("codec_selftest");
    add_common(selftest, st);

    Common tr;
    std::size_t tr_symbols = 0;
    auto* trace = app.add_subcommand("trace", "channel trace tools");
    trace->require_subcommand(1);
    auto* trace_export = trace->add_subcommand("export", "record the live channel to a trace file");
    add_common(trace_export, tr, false);
    trace_export->add_option("--out", tr.out, "trace file")->required();
    trace_export->add_option("--symbols", tr_symbols, "symbols to record (default: frames x symbols_per_frame)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: code=" << mcvst_status_name(MCVST_ERR_INVALID_ARGUMENT) << " message=" << e.what()
                  << "\n";
        return MCVST_ERR_INVALID_ARGUMENT;
    }

    try {
        if (simulate->parsed()) {
            Config cfg(sim.config);
            if (sim.frames)
                cfg.set("sweep.frames", std::to_string(*sim.frames));
            double snr = 0.0;
            if (sim_snr) {
                snr = *sim_snr;
            } else {
                const std::string list = cfg.value("sweep.snr_db");
                snr = std::stod(list.substr(0, list.find(',')));
            }
            mcvst_buffer csv{};
            check(mcvst_simulate(cfg.get(), seed_of(cfg, sim), snr, &csv));
            emit(take(csv), out_path(cfg, sim));
        } else if (sweep->parsed()) {
            Config cfg(swp.config);
            if (swp.frames)
                cfg.set("sweep.frames", std::to_string(*swp.frames));
            if (!swp_snr.empty())
                cfg.set("sweep.snr_db", swp_snr);
            mcvst_buffer csv{};
            check(mcvst_sweep(cfg.get(), seed_of(cfg, swp), &csv));
            emit(take(csv), out_path(cfg, swp));
        } else if (coverage->parsed()) {
            Config cfg(cov.config);
            int ok = 0;
            mcvst_buffer report{};
            check(mcvst_coverage(cfg.get(), &ok, &report));
            emit(take(report), cov.out);
            if (!ok)
                throw Failure{MCVST_ERR_SELFTEST_FAILED, "sampling schedule does not partition the subcarriers"};
        } else if (selftest->parsed()) {
            Config cfg(st.config);
            int passed = 0;
            mcvst_buffer report{};
            char digest[17] = {};
            check(mcvst_codec_selftest(cfg.get(), seed_of(cfg, st), &passed, &report, digest));
            emit(take(report), st.out);
            if (!passed)
                throw Failure{MCVST_ERR_SELFTEST_FAILED, "codec self-test failed"};
        } else if (trace_export->parsed()) {
            Config cfg(tr.config);
            std::size_t n = tr_symbols;
            if (n == 0)
                n = std::stoull(cfg.value("sweep.frames")) * std::stoull(cfg.value("channel.symbols_per_frame"));
            check(mcvst_trace_export(cfg.get(), seed_of(cfg, tr), n, tr.out.c_str()));
        }
    } catch (const Failure& f) {
        std::cerr << "error: code=" << mcvst_status_name(f.status) << " message=" << f.message << "\n";
        return static_cast<int>(f.status);
    } catch (const std::exception& e) {
        std::cerr << "error: code=" << mcvst_status_name(MCVST_ERR_INTERNAL) << " message=" << e.what() << "\n";
        return MCVST_ERR_INTERNAL;
    }
    return 0;
}
