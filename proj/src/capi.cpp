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

#include "sis/sis.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <memory>
#include <new>
#include <sstream>
#include <string>

#include "json.hpp"
#include "sis/frequency_grid.hpp"
#include "sis/gaussian_state.hpp"
#include "sis/permanent.hpp"
#include "sis/scenario.hpp"

struct sis_config {
  std::string document;
  sis::ScenarioConfig parsed;
};

struct sis_sweep {
  std::string document;
  sis::SweepSpec parsed;
};

struct sis_jsa {
  sis::JsaMatrix value;
};

struct sis_state {
  sis::GaussianPairState value;
};

namespace {

thread_local std::string g_last_error;

sis_status fail(sis_status status, const std::string& msg) {
  g_last_error = msg;
  return status;
}

template <typename F>
sis_status guarded(F&& f) {
  try {
    f();
    return SIS_OK;
  } catch (const sis::Error& e) {
    switch (e.kind()) {
      case sis::ErrorKind::Validation: return fail(SIS_ERR_VALIDATION, e.what());
      case sis::ErrorKind::Numerical: return fail(SIS_ERR_NUMERICAL, e.what());
      case sis::ErrorKind::Io: return fail(SIS_ERR_IO, e.what());
    }
    return fail(SIS_ERR_INTERNAL, e.what());
  } catch (const std::bad_alloc&) {
    return fail(SIS_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(SIS_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(SIS_ERR_INTERNAL, "unknown error");
  }
}

char* duplicate(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void require(const void* p, const char* what) {
  if (!p) throw sis::validation_error(std::string(what) + " is null");
}

std::string read_file(const char* path) {
  require(path, "path");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw sis::Error(sis::ErrorKind::Io, std::string("cannot read ") + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::vector<std::string> labels(const char* const* raw, std::size_t n, const char* what) {
  require(raw, what);
  std::vector<std::string> out;
  for (std::size_t k = 0; k < n; ++k) {
    require(raw[k], what);
    out.emplace_back(raw[k]);
  }
  return out;
}

sis::OutcomePattern make_pattern(const char* const* idlers, const char* const* signals,
                                 std::size_t n) {
  return sis::OutcomePattern{labels(idlers, n, "idlers"), labels(signals, n, "signals")};
}

std::string with_number(const std::string& doc, const char* key, std::uint64_t v) {
  return sis::apply_override(doc, std::string(key) + "=" + std::to_string(v));
}

}  // namespace

extern "C" {

const char* sis_version(void) { return "1.0.0"; }

const char* sis_last_error(void) { return g_last_error.c_str(); }

void sis_string_free(char* s) { std::free(s); }

sis_status sis_config_parse(const char* json, sis_config** out) {
  return guarded([&] {
    require(json, "json");
    require(out, "out");
    auto cfg = std::make_unique<sis_config>();
    cfg->document = json;
    cfg->parsed = sis::parse_scenario_config(cfg->document);
    *out = cfg.release();
  });
}

sis_status sis_config_load(const char* path, sis_config** out) {
  return guarded([&] {
    require(out, "out");
    auto cfg = std::make_unique<sis_config>();
    cfg->document = read_file(path);
    try {
      cfg->parsed = sis::parse_scenario_config(cfg->document);
    } catch (const sis::Error& e) {
      throw sis::Error(e.kind(), std::string(path) + ": " + e.what());
    }
    *out = cfg.release();
  });
}

sis_status sis_config_override(sis_config* cfg, const char* assignment) {
  return guarded([&] {
    require(cfg, "config");
    require(assignment, "assignment");
    std::string doc = sis::apply_override(cfg->document, assignment);
    cfg->parsed = sis::parse_scenario_config(doc);
    cfg->document = std::move(doc);
  });
}

sis_status sis_config_set_seed(sis_config* cfg, uint64_t seed) {
  return guarded([&] {
    require(cfg, "config");
    std::string doc = with_number(cfg->document, "seed", seed);
    cfg->parsed = sis::parse_scenario_config(doc);
    cfg->document = std::move(doc);
  });
}

sis_status sis_config_set_shots(sis_config* cfg, uint64_t shots) {
  return guarded([&] {
    require(cfg, "config");
    std::string doc = with_number(cfg->document, "shots", shots);
    cfg->parsed = sis::parse_scenario_config(doc);
    cfg->document = std::move(doc);
  });
}

sis_status sis_config_to_json(const sis_config* cfg, char** out) {
  return guarded([&] {
    require(cfg, "config");
    require(out, "out");
    *out = duplicate(sis::scenario_config_to_json(cfg->parsed));
  });
}

void sis_config_free(sis_config* cfg) { delete cfg; }

sis_status sis_sweep_parse(const char* json, sis_sweep** out) {
  return guarded([&] {
    require(json, "json");
    require(out, "out");
    auto sweep = std::make_unique<sis_sweep>();
    sweep->document = json;
    sweep->parsed = sis::parse_sweep_spec(sweep->document);
    *out = sweep.release();
  });
}

sis_status sis_sweep_load(const char* path, sis_sweep** out) {
  return guarded([&] {
    require(out, "out");
    auto sweep = std::make_unique<sis_sweep>();
    sweep->document = read_file(path);
    try {
      sweep->parsed = sis::parse_sweep_spec(sweep->document);
    } catch (const sis::Error& e) {
      throw sis::Error(e.kind(), std::string(path) + ": " + e.what());
    }
    *out = sweep.release();
  });
}

sis_status sis_sweep_override(sis_sweep* sweep, const char* assignment) {
  return guarded([&] {
    require(sweep, "sweep");
    require(assignment, "assignment");
    std::string doc = sis::apply_override(sweep->document, assignment);
    sweep->parsed = sis::parse_sweep_spec(doc);
    sweep->document = std::move(doc);
  });
}

sis_status sis_sweep_set_seed(sis_sweep* sweep, uint64_t seed) {
  return guarded([&] {
    require(sweep, "sweep");
    std::string doc = with_number(sweep->document, "base.seed", seed);
    sweep->parsed = sis::parse_sweep_spec(doc);
    sweep->document = std::move(doc);
  });
}

sis_status sis_sweep_set_shots(sis_sweep* sweep, uint64_t shots) {
  return guarded([&] {
    require(sweep, "sweep");
    std::string doc = with_number(sweep->document, "base.shots", shots);
    sweep->parsed = sis::parse_sweep_spec(doc);
    sweep->document = std::move(doc);
  });
}

void sis_sweep_free(sis_sweep* sweep) { delete sweep; }

sis_status sis_jsa_build(const sis_config* cfg, sis_jsa** out) {
  return guarded([&] {
    require(cfg, "config");
    require(out, "out");
    *out = new sis_jsa{sis::build_jsa(cfg->parsed.pump_spectrum(), cfg->parsed.grid)};
  });
}

sis_status sis_jsa_three_pump(sis_complex a1, sis_complex a2, sis_complex a3, sis_jsa** out) {
  return guarded([&] {
    require(out, "out");
    *out = new sis_jsa{sis::three_pump_matrix({a1.re, a1.im}, {a2.re, a2.im}, {a3.re, a3.im})};
  });
}

size_t sis_jsa_rows(const sis_jsa* jsa) { return jsa ? jsa->value.rows() : 0; }

size_t sis_jsa_cols(const sis_jsa* jsa) { return jsa ? jsa->value.cols() : 0; }

sis_status sis_jsa_entry(const sis_jsa* jsa, size_t row, size_t col, sis_complex* out) {
  return guarded([&] {
    require(jsa, "jsa");
    require(out, "out");
    if (row >= jsa->value.rows() || col >= jsa->value.cols()) {
      throw sis::validation_error("jsa entry out of range");
    }
    const sis::Complex z = jsa->value(row, col);
    *out = sis_complex{z.real(), z.imag()};
  });
}

sis_status sis_jsa_to_json(const sis_jsa* jsa, char** out) {
  return guarded([&] {
    require(jsa, "jsa");
    require(out, "out");
    *out = duplicate(sis::jsa_to_json(jsa->value));
  });
}

sis_status sis_jsa_to_csv(const sis_jsa* jsa, char** out) {
  return guarded([&] {
    require(jsa, "jsa");
    require(out, "out");
    *out = duplicate(sis::jsa_to_csv(jsa->value));
  });
}

void sis_jsa_free(sis_jsa* jsa) { delete jsa; }

sis_status sis_state_from_jsa(const sis_jsa* jsa, double gain, sis_state** out) {
  return guarded([&] {
    require(jsa, "jsa");
    require(out, "out");
    *out = new sis_state{sis::from_jsa(jsa->value, gain)};
  });
}

double sis_state_norm_constant(const sis_state* state) {
  return state ? state->value.norm_constant : 0.0;
}

sis_status sis_state_schmidt_values(const sis_state* state, double* values, size_t capacity,
                                    size_t* count) {
  return guarded([&] {
    require(state, "state");
    require(count, "count");
    const auto& sv = state->value.schmidt_values;
    *count = sv.size();
    if (capacity > 0) require(values, "values");
    for (std::size_t k = 0; k < sv.size() && k < capacity; ++k) values[k] = sv[k];
  });
}

sis_status sis_state_n_pair_amplitude(const sis_state* state, const char* const* idlers,
                                      const char* const* signals, size_t n_pairs,
                                      sis_complex* out) {
  return guarded([&] {
    require(state, "state");
    require(out, "out");
    const sis::Complex a = sis::n_pair_amplitude(state->value, make_pattern(idlers, signals, n_pairs));
    *out = sis_complex{a.real(), a.imag()};
  });
}

sis_status sis_state_n_pair_probability(const sis_state* state, const char* const* idlers,
                                        const char* const* signals, size_t n_pairs, double* out) {
  return guarded([&] {
    require(state, "state");
    require(out, "out");
    *out = sis::n_pair_probability(state->value, make_pattern(idlers, signals, n_pairs));
  });
}

void sis_state_free(sis_state* state) { delete state; }

sis_status sis_permanent(const sis_complex* entries, size_t n, sis_complex* out) {
  return guarded([&] {
    require(entries, "entries");
    require(out, "out");
    if (n == 0) throw sis::validation_error("permanent: empty matrix");
    if (n > sis::kMaxPermanentDimension) throw sis::validation_error("dimension cap exceeded");
    sis::ComplexMatrix m(n, n);
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < n; ++c) {
        m(r, c) = {entries[r * n + c].re, entries[r * n + c].im};
      }
    }
    const sis::Complex p = sis::permanent(m);
    *out = sis_complex{p.real(), p.imag()};
  });
}

sis_status sis_write_jsa(const sis_config* cfg, const char* out_dir, unsigned formats,
                         char** summary) {
  return guarded([&] {
    require(cfg, "config");
    require(out_dir, "out_dir");
    const auto files = sis::render_jsa_artifacts(cfg->parsed, formats);
    sis::commit_artifacts(out_dir, files);
    if (summary) {
      const sis::JsaMatrix jsa = sis::build_jsa(cfg->parsed.pump_spectrum(), cfg->parsed.grid);
      *summary = duplicate(sis::jsa_to_json(jsa));
    }
  });
}

sis_status sis_run_scenario(const sis_config* cfg, const char* out_dir, int exact_only,
                            unsigned formats, char** summary) {
  return guarded([&] {
    require(cfg, "config");
    require(out_dir, "out_dir");
    const sis::ScenarioResult result =
        sis::run_scenario(cfg->parsed, sis::RunOptions{exact_only != 0, formats});
    sis::commit_artifacts(out_dir, result.artifacts);
    if (summary) *summary = duplicate(sis::summary_json(result, cfg->parsed));
  });
}

sis_status sis_run_sweep(const sis_sweep* sweep, const char* out_dir, int exact_only,
                         unsigned formats, char** summary) {
  return guarded([&] {
    require(sweep, "sweep");
    require(out_dir, "out_dir");
    const sis::SweepResult result =
        sis::phase_sweep(sweep->parsed, sis::RunOptions{exact_only != 0, formats});
    sis::commit_artifacts(out_dir, result.artifacts);
    if (summary) *summary = duplicate(result.artifacts.at("sweep.csv"));
  });
}

sis_status sis_verify_oracle(const sis_config* cfg, double tolerance, double* max_deviation,
                             int* passed, char** summary) {
  return guarded([&] {
    require(cfg, "config");
    const sis::OracleReport report = sis::verify_oracle(cfg->parsed, tolerance);
    if (max_deviation) *max_deviation = report.max_relative_deviation;
    if (passed) *passed = report.passed ? 1 : 0;
    if (summary) *summary = duplicate(sis::summary_json(report));
  });
}

}  // extern "C"
