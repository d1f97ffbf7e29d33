/*
 * Copyright 2026 The sis Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to the spectral interference simulator.
 *
 * Objects are opaque handles created by *_load / *_build / *_from_* and
 * released with the matching *_free. Every fallible call returns a
 * sis_status; on failure sis_last_error() describes the problem (per
 * thread, valid until the next failing call on that thread). Strings
 * returned through char** are heap-allocated; release them with
 * sis_string_free().
 */
#ifndef SIS_SIS_H
#define SIS_SIS_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(SIS_BUILDING_LIBRARY)
#    define SIS_API __declspec(dllexport)
#  else
#    define SIS_API __declspec(dllimport)
#  endif
#else
#  define SIS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sis_status {
  SIS_OK = 0,
  SIS_ERR_VALIDATION = 1,
  SIS_ERR_NUMERICAL = 2,
  SIS_ERR_IO = 3,
  SIS_ERR_INTERNAL = 4
} sis_status;

typedef struct sis_complex {
  double re;
  double im;
} sis_complex;

/* Output formats for artifact-writing calls; combine with |. */
enum {
  SIS_FORMAT_CSV = 1u,
  SIS_FORMAT_JSON = 2u,
  SIS_FORMAT_SVG = 4u,
  SIS_FORMAT_ALL = 7u
};

typedef struct sis_config sis_config;
typedef struct sis_sweep sis_sweep;
typedef struct sis_jsa sis_jsa;
typedef struct sis_state sis_state;

SIS_API const char* sis_version(void);
SIS_API const char* sis_last_error(void);
SIS_API void sis_string_free(char* s);

/* Scenario configuration (JSON document). */
SIS_API sis_status sis_config_load(const char* path, sis_config** out);
SIS_API sis_status sis_config_parse(const char* json, sis_config** out);
/* "dotted.path=value", e.g. "detection.efficiencies.s2=0.5". */
SIS_API sis_status sis_config_override(sis_config* cfg, const char* assignment);
SIS_API sis_status sis_config_set_seed(sis_config* cfg, uint64_t seed);
SIS_API sis_status sis_config_set_shots(sis_config* cfg, uint64_t shots);
SIS_API sis_status sis_config_to_json(const sis_config* cfg, char** out);
SIS_API void sis_config_free(sis_config* cfg);

/* Phase-sweep specification: {"swept_pump_index", "phase_grid", "base"}. */
SIS_API sis_status sis_sweep_load(const char* path, sis_sweep** out);
SIS_API sis_status sis_sweep_parse(const char* json, sis_sweep** out);
/* Paths address the sweep document, e.g. "base.gain=0.05". */
SIS_API sis_status sis_sweep_override(sis_sweep* sweep, const char* assignment);
SIS_API sis_status sis_sweep_set_seed(sis_sweep* sweep, uint64_t seed);
SIS_API sis_status sis_sweep_set_shots(sis_sweep* sweep, uint64_t shots);
SIS_API void sis_sweep_free(sis_sweep* sweep);

/* Joint spectral amplitude. */
SIS_API sis_status sis_jsa_build(const sis_config* cfg, sis_jsa** out);
SIS_API sis_status sis_jsa_three_pump(sis_complex a1, sis_complex a2, sis_complex a3,
                                      sis_jsa** out);
SIS_API size_t sis_jsa_rows(const sis_jsa* jsa);
SIS_API size_t sis_jsa_cols(const sis_jsa* jsa);
SIS_API sis_status sis_jsa_entry(const sis_jsa* jsa, size_t row, size_t col, sis_complex* out);
SIS_API sis_status sis_jsa_to_json(const sis_jsa* jsa, char** out);
SIS_API sis_status sis_jsa_to_csv(const sis_jsa* jsa, char** out);
SIS_API void sis_jsa_free(sis_jsa* jsa);

/* Gaussian pair state. Channel labels are "i1", "i2", ... and "s1", ... */
SIS_API sis_status sis_state_from_jsa(const sis_jsa* jsa, double gain, sis_state** out);
SIS_API double sis_state_norm_constant(const sis_state* state);
/* Writes up to `capacity` Schmidt values; *count receives the total. */
SIS_API sis_status sis_state_schmidt_values(const sis_state* state, double* values,
                                            size_t capacity, size_t* count);
SIS_API sis_status sis_state_n_pair_amplitude(const sis_state* state, const char* const* idlers,
                                              const char* const* signals, size_t n_pairs,
                                              sis_complex* out);
SIS_API sis_status sis_state_n_pair_probability(const sis_state* state, const char* const* idlers,
                                                const char* const* signals, size_t n_pairs,
                                                double* out);
SIS_API void sis_state_free(sis_state* state);

/* Permanent of an n x n row-major matrix. */
SIS_API sis_status sis_permanent(const sis_complex* entries, size_t n, sis_complex* out);

/* Pipelines. Artifacts are staged and renamed into out_dir only on success.
 * summary (optional, may be NULL) receives a JSON report. */
SIS_API sis_status sis_write_jsa(const sis_config* cfg, const char* out_dir, unsigned formats,
                                 char** summary);
SIS_API sis_status sis_run_scenario(const sis_config* cfg, const char* out_dir, int exact_only,
                                    unsigned formats, char** summary);
SIS_API sis_status sis_run_sweep(const sis_sweep* sweep, const char* out_dir, int exact_only,
                                 unsigned formats, char** summary);
/* *passed is 1 iff the largest relative deviation is below tolerance. */
SIS_API sis_status sis_verify_oracle(const sis_config* cfg, double tolerance, double* max_deviation,
                                     int* passed, char** summary);

#ifdef __cplusplus
}
#endif

#endif /* SIS_SIS_H */
