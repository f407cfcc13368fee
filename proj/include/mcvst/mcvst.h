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

#ifndef MCVST_MCVST_H
#define MCVST_MCVST_H

/* C interface to the mcvst simulator.
 *
 * Every function that can fail returns an mcvst_status. On failure a
 * description is available from mcvst_last_error() on the same thread until
 * the next failing call. Objects are opaque and released with their _free
 * function; buffers filled by the library are released with
 * mcvst_buffer_free. Handles are not synchronized: use one per thread.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(MCVST_BUILDING_LIBRARY)
#    define MCVST_API __declspec(dllexport)
#  else
#    define MCVST_API __declspec(dllimport)
#  endif
#else
#  define MCVST_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mcvst_status {
    MCVST_OK = 0,
    MCVST_ERR_INVALID_ARGUMENT = 1,
    MCVST_ERR_INVALID_CONFIG = 2,
    MCVST_ERR_INVALID_INPUT = 3,
    MCVST_ERR_INVALID_PARAMS = 4,
    MCVST_ERR_INVALID_REFS = 5,
    MCVST_ERR_RANK_DEFICIENT = 6,
    MCVST_ERR_ORDERING = 7,
    MCVST_ERR_CAPACITY = 8,
    MCVST_ERR_ENCODING = 9,
    MCVST_ERR_DECODING = 10,
    MCVST_ERR_IO = 11,
    MCVST_ERR_SELFTEST_FAILED = 12,
    MCVST_ERR_INTERNAL = 13
} mcvst_status;

typedef struct mcvst_buffer {
    uint8_t* data; /* NUL-terminated when it holds text */
    size_t size;   /* excludes the terminator */
} mcvst_buffer;

typedef struct mcvst_config mcvst_config;
typedef struct mcvst_channel mcvst_channel;

MCVST_API const char* mcvst_version(void);
MCVST_API const char* mcvst_status_name(mcvst_status status);
MCVST_API const char* mcvst_last_error(void);
MCVST_API void mcvst_buffer_free(mcvst_buffer* buffer);

/* Configuration ---------------------------------------------------------- */

MCVST_API mcvst_status mcvst_config_default(mcvst_config** out);
/* text need not be NUL-terminated. */
MCVST_API mcvst_status mcvst_config_parse(const char* text, size_t length, mcvst_config** out);
MCVST_API mcvst_status mcvst_config_load(const char* path, mcvst_config** out);
/* Sets one key as if it appeared in the file; the config is unchanged on failure. */
MCVST_API mcvst_status mcvst_config_set(mcvst_config* config, const char* key, const char* value);
MCVST_API mcvst_status mcvst_config_to_text(const mcvst_config* config, mcvst_buffer* out);
/* Current value of one key, formatted as in the config file. */
MCVST_API mcvst_status mcvst_config_get(const mcvst_config* config, const char* key, mcvst_buffer* value);
MCVST_API mcvst_status mcvst_config_seed(const mcvst_config* config, uint64_t* seed);
/* Run seed: *flag when flag is non-null, else the MCVST_SEED environment
 * variable when set, else sweep.seed. */
MCVST_API mcvst_status mcvst_resolve_seed(const mcvst_config* config, const uint64_t* flag, uint64_t* seed);
MCVST_API void mcvst_config_free(mcvst_config* config);

/* Experiments ------------------------------------------------------------ */

/* One GoP at snr_db; per-frame CSV. */
MCVST_API mcvst_status mcvst_simulate(const mcvst_config* config, uint64_t seed, double snr_db, mcvst_buffer* csv);
/* Every configured SNR and seed; CSV rows sorted by (snr_db, seed, frame). */
MCVST_API mcvst_status mcvst_sweep(const mcvst_config* config, uint64_t seed, mcvst_buffer* csv);
MCVST_API mcvst_status mcvst_coverage(const mcvst_config* config, int* partition_ok, mcvst_buffer* report);
/* digest receives 16 hex digits and a terminator. A failed check is reported
 * through passed, not through the status. */
MCVST_API mcvst_status mcvst_codec_selftest(const mcvst_config* config, uint64_t seed, int* passed,
                                            mcvst_buffer* report, char digest[17]);

/* Channel ---------------------------------------------------------------- */

MCVST_API mcvst_status mcvst_channel_create(const mcvst_config* config, uint64_t seed, mcvst_channel** out);
MCVST_API mcvst_status mcvst_channel_step(mcvst_channel* channel);
MCVST_API mcvst_status mcvst_channel_symbol_index(const mcvst_channel* channel, uint64_t* index);
/* Writes the n_rx x n_tx response of one subcarrier, row-major, as interleaved
 * (re, im) pairs; capacity counts doubles and must be >= 2 n_rx n_tx. */
MCVST_API mcvst_status mcvst_channel_response(const mcvst_channel* channel, size_t subcarrier, double* out,
                                              size_t capacity);
MCVST_API void mcvst_channel_free(mcvst_channel* channel);

/* Records n_symbols symbols of the live channel for seed into a trace file. */
MCVST_API mcvst_status mcvst_trace_export(const mcvst_config* config, uint64_t seed, size_t n_symbols,
                                          const char* path);

/* Numerics --------------------------------------------------------------- */

MCVST_API mcvst_status mcvst_doppler_coefficient(double speed_mps, double carrier_freq_hz,
                                                 double symbol_duration_s, double* rho);
/* Indices fed back at symbol t; count receives n_subcarriers / m_h. */
MCVST_API mcvst_status mcvst_sampled_indices(size_t n_subcarriers, size_t m_h, uint64_t t, size_t* out,
                                             size_t capacity, size_t* count);
/* sum(costs) / (frames * height * width * 3) */
MCVST_API mcvst_status mcvst_cbr(const double* frame_costs, size_t frames, size_t height, size_t width,
                                 double* out);
MCVST_API mcvst_status mcvst_waterfilling(const double* gains, size_t n, double total_power, double sigma2,
                                          double* power);

/* Range coding with explicit per-symbol Laplace parameters. */
MCVST_API mcvst_status mcvst_laplace_encode(const int64_t* symbols, const double* mu, const double* scale, size_t n,
                                            mcvst_buffer* out);
MCVST_API mcvst_status mcvst_laplace_decode(const uint8_t* data, size_t size, const double* mu, const double* scale,
                                            size_t n, int64_t* symbols);
/* Model code length in bits, sum of -log2 P. */
MCVST_API mcvst_status mcvst_laplace_bits(const int64_t* symbols, const double* mu, const double* scale, size_t n,
                                          double* bits);

#ifdef __cplusplus
}
#endif

#endif /* MCVST_MCVST_H */
