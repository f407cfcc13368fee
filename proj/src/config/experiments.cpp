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

#include "config/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <tuple>

#include "common/error.hpp"
#include "common/rng.hpp"
#include "config/format.hpp"
#include "entropy/latent_codec.hpp"
#include "entropy/range_coder.hpp"
#include "sampling/sampling.hpp"

namespace mcvst::config {

namespace {

class Fnv1a {
public:
    void add(std::span<const std::uint8_t> bytes)
    {
        for (std::uint8_t b : bytes) {
            h_ ^= b;
            h_ *= 0x100000001B3ULL;
        }
    }
    std::string hex() const
    {
        char buf[17];
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h_));
        return buf;
    }

private:
    std::uint64_t h_ = 0xCBF29CE484222325ULL;
};

} // namespace

std::string to_csv(std::vector<CsvRow> rows)
{
    std::sort(rows.begin(), rows.end(), [](const CsvRow& a, const CsvRow& b) {
        return std::tie(a.snr_db, a.seed, a.frame) < std::tie(b.snr_db, b.seed, b.frame);
    });
    std::string out = std::string(kCsvHeader) + "\n";
    for (const auto& r : rows) {
        const auto& m = r.metrics;
        out += format_number(r.snr_db) + ',' + std::to_string(r.seed) + ',' + std::to_string(r.frame) + ',' +
               format_number(m.mse) + ',' + format_number(m.psnr_db) + ',' + format_number(m.k_c) + ',' +
               format_number(m.k_v) + ',' + format_number(m.k_cz) + ',' + format_number(m.k_vz) + ',' +
               format_number(m.k_t) + ',' + format_number(m.cbr) + ',' + (m.frame_error ? "1" : "0") + '\n';
    }
    return out;
}

std::optional<channel::ChannelTrace> load_configured_trace(const ExperimentConfig& config)
{
    if (config.io.trace_path.empty())
        return std::nullopt;
    channel::ChannelTrace trace = channel::read_trace(config.io.trace_path);
    const auto& ch = config.pipeline.channel;
    require(trace.n_rx == ch.n_rx && trace.n_tx == ch.n_tx && trace.n_subcarriers == ch.n_subcarriers,
            ErrorCode::InvalidInput, "trace dimensions do not match mimo.n_rx, mimo.n_tx, channel.n_subcarriers");
    return trace;
}

std::vector<CsvRow> run_gop(const ExperimentConfig& config, double snr_db, std::uint64_t seed,
                            const std::shared_ptr<const pipeline::Models>& models,
                            const std::optional<channel::ChannelTrace>& trace)
{
    const auto& p = config.pipeline;
    std::unique_ptr<pipeline::ChannelSource> source;
    if (trace)
        source = std::make_unique<pipeline::TraceChannel>(*trace);
    else
        source = pipeline::make_live_channel(p, seed);
    pipeline::Session session(p, std::move(source), precoding::NoiseConfig::from_snr_db(snr_db), seed,
                              models ? models : pipeline::Models::build(p));
    const auto gop = pipeline::synthetic_gop(config.sweep.frames, config.source.height, config.source.width, seed);
    std::vector<CsvRow> rows;
    for (auto& r : session.run_gop(gop))
        rows.push_back({snr_db, seed, r.metrics.frame, std::move(r.metrics)});
    return rows;
}

std::vector<CsvRow> simulate(const ExperimentConfig& config, std::uint64_t seed, double snr_db)
{
    config.validate();
    return run_gop(config, snr_db, seed, nullptr, load_configured_trace(config));
}

std::vector<CsvRow> sweep(const ExperimentConfig& config, std::uint64_t seed)
{
    config.validate();
    const auto models = pipeline::Models::build(config.pipeline);
    const auto trace = load_configured_trace(config);
    std::vector<CsvRow> rows;
    for (double snr : config.sweep.snr_db)
        for (std::size_t s = 0; s < config.sweep.seeds; ++s) {
            auto cell = run_gop(config, snr, seed + s, models, trace);
            rows.insert(rows.end(), cell.begin(), cell.end());
        }
    return rows;
}

CoverageReport coverage(const ExperimentConfig& config)
{
    config.validate();
    const std::size_t n = config.pipeline.channel.n_subcarriers;
    const std::size_t m_h = config.pipeline.map.subcarrier_group;
    const sampling::SamplingSchedule schedule(n, m_h);

    CoverageReport rep;
    for (std::uint64_t t = 0; t < m_h; ++t)
        rep.indices.push_back(schedule.sampled_indices(t));

    rep.partition = true;
    for (std::uint64_t t0 = 0; t0 < 2 * m_h; ++t0) {
        std::vector<int> hits(n, 0);
        for (std::uint64_t t = t0; t < t0 + m_h; ++t)
            for (std::size_t i : schedule.sampled_indices(t))
                ++hits[i];
        rep.partition = rep.partition && std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; });
    }

    for (std::size_t t = 0; t < rep.indices.size(); ++t) {
        rep.text += "t=" + std::to_string(t) + ":";
        for (std::size_t i : rep.indices[t])
            rep.text += " " + std::to_string(i);
        rep.text += "\n";
    }
    rep.text += "partition: " + std::string(rep.partition ? "ok" : "FAILED") + " (" + std::to_string(m_h) +
                " consecutive symbols cover 0.." + std::to_string(n - 1) + " exactly once, start offsets 0.." +
                std::to_string(2 * m_h - 1) + ")\n";
    return rep;
}

bool SelftestReport::passed() const
{
    return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

std::string SelftestReport::text() const
{
    std::string out;
    for (const auto& c : checks)
        out += std::string(c.passed ? "PASS " : "FAIL ") + c.name + ": " + c.detail + "\n";
    out += "digest: " + digest + "\n";
    out += std::string("result: ") + (passed() ? "pass" : "fail") + "\n";
    return out;
}

namespace {

struct CodecRun {
    std::vector<SelftestCheck> checks;
    std::string digest;
};

// Codes a synthetic GoP error-free through the configured models.
CodecRun run_codec_checks(const ExperimentConfig& config, std::uint64_t seed)
{
    const auto& p = config.pipeline;
    const auto models = pipeline::Models::build(p);
    Fnv1a digest;
    CodecRun run;

    // Range coder on random Laplace symbols.
    {
        Rng rng(derive_seed(seed, Stream::Selftest));
        const std::size_t n = 20000;
        std::vector<entropy::LaplaceModel> models_l;
        std::vector<std::int64_t> symbols;
        models_l.reserve(n);
        for (std::size_t k = 0; k < n; ++k) {
            const double mu = 20.0 * rng.uniform() - 10.0;
            const double b = 0.05 + 8.0 * rng.uniform();
            models_l.emplace_back(mu, b);
            // Inverse-CDF draw, then clamped into the support.
            const double u = rng.uniform() - 0.5;
            const double x = mu - b * (u < 0 ? -1.0 : 1.0) * std::log(1.0 - 2.0 * std::abs(u));
            symbols.push_back(std::clamp<std::int64_t>(std::llround(x), models_l.back().lo(), models_l.back().hi()));
        }
        std::vector<const entropy::SymbolModel*> ptrs;
        for (const auto& m : models_l)
            ptrs.push_back(&m);
        const auto bytes = entropy::range_encode(symbols, ptrs);
        const auto back = entropy::range_decode(bytes, ptrs);
        digest.add(bytes);
        const double est = entropy::estimated_bits(symbols, ptrs);
        const double measured = 8.0 * static_cast<double>(bytes.size());
        run.checks.push_back({"range_roundtrip", back == symbols, std::to_string(n) + " symbols"});
        run.checks.push_back({"range_rate", std::abs(measured - est) <= 64.0 + 1e-3 * est,
                              "measured " + format_number(measured) + " bits, model " + format_number(est)});
    }

    // Latent codec on the configured source, with a map window from a live channel.
    {
        const std::size_t T = std::max<std::size_t>(config.sweep.frames, 2);
        const auto gop = pipeline::synthetic_gop(T, config.source.height, config.source.width, seed);
        auto source = pipeline::make_live_channel(p, seed);
        sampling::SamplingSchedule schedule(p.channel.n_subcarriers, p.map.subcarrier_group);
        entropy::MapHistory history(p.map_period());
        std::optional<RealGrid> prev;
        bool roundtrip = true;
        double worst_gap = 0.0;
        bool rate_ok = true;
        std::size_t segments = 0;
        for (std::size_t t = 0; t < T; ++t) {
            const RealGrid f = models->transform.encode(gop[t]);
            const RealGrid ref = prev ? *prev : RealGrid(f.shape());
            const auto mc = pipeline::motion_context_split(f, ref);
            const IntGrid v = entropy::quantize(mc.motion, p.quant_step);
            const IntGrid c = entropy::quantize(mc.context, p.quant_step);
            RealGrid c_hat(c.shape());
            for (std::size_t k = 0; k < c.size(); ++k)
                c_hat.values()[k] = p.quant_step * c.values()[k];
            const auto sampled = sampling::sample(source->current(), schedule, t);
            auto map = cormap::build_map(c_hat, sampled, p.map, models->embedders);
            map.t = t;
            history.push(map);
            const auto window = entropy::build_reference_window(history, t, p.map_period());

            const std::pair<const entropy::LatentCodec*, const IntGrid*> jobs[] = {
                {&models->context_codec, &c}, {&models->motion_codec, &v}};
            const entropy::StreamKind kinds[] = {entropy::StreamKind::Context, entropy::StreamKind::Motion};
            for (int j = 0; j < 2; ++j) {
                const auto enc = jobs[j].first->encode(*jobs[j].second, window, kinds[j]);
                const auto dec = jobs[j].first->decode(enc.main, enc.hyper, window);
                roundtrip = roundtrip && dec.values == *jobs[j].second && dec.z == enc.z;
                digest.add(entropy::serialize(enc.main));
                digest.add(entropy::serialize(enc.hyper));
                // Each segment is flushed on its own; compare it to its own model cost.
                for (std::size_t g = 0; g < enc.main.segments.size(); ++g) {
                    double est = 0.0;
                    for (double pr : enc.anchor_probs[g])
                        est -= std::log2(pr);
                    for (double pr : enc.non_anchor_probs[g])
                        est -= std::log2(pr);
                    const double gap = 8.0 * static_cast<double>(enc.main.segments[g].size()) - est;
                    worst_gap = std::max(worst_gap, std::abs(gap));
                    rate_ok = rate_ok && std::abs(gap) <= 64.0 + 1e-3 * est;
                    ++segments;
                }
                double est_z = 0.0;
                for (double pr : enc.hyper_probs)
                    est_z -= std::log2(pr);
                const double gap_z = 8.0 * static_cast<double>(enc.hyper.segments.front().size()) - est_z;
                worst_gap = std::max(worst_gap, std::abs(gap_z));
                rate_ok = rate_ok && std::abs(gap_z) <= 64.0 + 1e-3 * est_z;
                ++segments;
            }
            prev = f;
            source->step();
        }
        run.checks.push_back({"latent_roundtrip", roundtrip, std::to_string(T) + " frames, context and motion"});
        run.checks.push_back({"latent_rate", rate_ok,
                              std::to_string(segments) + " segments, worst gap " + format_number(worst_gap) +
                                  " bits"});
    }
    run.digest = digest.hex();
    return run;
}

} // namespace

SelftestReport codec_selftest(const ExperimentConfig& config, std::uint64_t seed)
{
    config.validate();
    SelftestReport rep;
    const CodecRun first = run_codec_checks(config, seed);
    const CodecRun second = run_codec_checks(config, seed);
    rep.checks = first.checks;
    rep.checks.push_back({"determinism", first.digest == second.digest, "two runs, digest " + second.digest});
    rep.digest = first.digest;
    return rep;
}

channel::ChannelTrace export_trace(const ExperimentConfig& config, std::uint64_t seed, std::size_t n_symbols)
{
    config.validate();
    require(n_symbols >= 1, ErrorCode::InvalidArgument, "trace needs at least one symbol");
    channel::ChannelConfig c = config.pipeline.channel;
    c.seed = derive_seed(seed, Stream::Channel);
    channel::TdlChannel ch(std::move(c));
    return channel::record_trace(ch, n_symbols);
}

} // namespace mcvst::config
