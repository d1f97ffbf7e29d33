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

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sis/detection.hpp"
#include "sis/fock_oracle.hpp"
#include "sis/frequency_grid.hpp"
#include "sis/gaussian_state.hpp"

namespace sis {

struct PumpComponent {
  int index = 0;
  double magnitude = 1.0;
  double phase = 0.0;  // radians
};

struct ScenarioConfig {
  std::string name = "scenario";
  std::vector<PumpComponent> pump;
  FrequencyGrid grid = default_grid();
  double gain = kDefaultGain;
  int truncation = 4;
  DetectionModel detection;
  std::uint64_t shots = 1'000'000;
  std::uint64_t seed = 1;

  PumpSpectrum pump_spectrum() const;
  void validate() const;
};

struct SweepSpec {
  int swept_pump_index = 0;
  std::vector<double> phase_grid;
  ScenarioConfig base;

  void validate() const;
};

/// JSON documents. Parsing validates; errors name the offending key.
ScenarioConfig parse_scenario_config(std::string_view json_text);
std::string scenario_config_to_json(const ScenarioConfig& cfg);
SweepSpec parse_sweep_spec(std::string_view json_text);
std::string sweep_spec_to_json(const SweepSpec& spec);

/// Applies `dotted.path=value` to a JSON document before parsing; array
/// elements are addressed by number (`pump.1.phase=1.3`). The value is read
/// as JSON when it parses, otherwise as a string.
std::string apply_override(std::string_view json_text, std::string_view assignment);

/// FNV-1a over the canonical JSON form, as 16 hex digits.
std::string config_hash(std::string_view canonical_json);

enum OutputFormat : unsigned {
  kFormatCsv = 1u,
  kFormatJson = 2u,
  kFormatSvg = 4u,
  kFormatAll = kFormatCsv | kFormatJson | kFormatSvg,
};

struct RunOptions {
  bool exact_only = false;
  unsigned formats = kFormatAll;
};

/// Everything one run produces. `artifacts` maps file name to contents.
struct ScenarioResult {
  JsaMatrix jsa;
  GaussianPairState state;
  OutcomeTable quantum_twofold;
  OutcomeTable quantum_fourfold;
  OutcomeTable classical_fourfold;
  /// |perm psi_sub|^2 and perm(|psi_sub|^2) on the unscaled JSA.
  OutcomeTable quantum_weights;
  OutcomeTable classical_weights;
  OutcomeTable exact_clicks;  // detection applied to the truncated state
  CountReport expected;       // shots * exact_clicks, normalized
  std::optional<CountReport> sampled;
  std::optional<OutcomeTable> sampled_classical_fourfold;
  ContrastReport exact_contrast;
  std::optional<ContrastReport> sampled_contrast;
  std::map<std::string, std::string> artifacts;
};

/// build_jsa -> from_jsa -> expand -> exact tables and (unless exact_only)
/// sampled counts -> detection -> normalization -> classical baseline ->
/// contrast. Errors are rethrown prefixed with the config field at fault.
ScenarioResult run_scenario(const ScenarioConfig& cfg, const RunOptions& opts = {});

struct SweepPoint {
  double theta = 0.0;
  OutcomeTable twofold_abs2;  // |psi|^2 for every signal-idler pair
  std::optional<OutcomeTable> sampled_twofold;
};

struct SweepResult {
  std::vector<SweepPoint> points;
  std::map<std::string, std::string> artifacts;
};

/// Sets the swept pump's phase to each grid value, keeping magnitudes.
SweepResult phase_sweep(const SweepSpec& spec, const RunOptions& opts = {});

struct OracleReport {
  double max_relative_deviation = 0.0;
  std::size_t patterns_checked = 0;
  int max_pairs = 0;
  double tolerance = 1e-9;
  bool passed = false;
};

/// Compares n_pair_probability with the Fock expansion on every
/// collision-free pattern up to min(truncation, 3) pairs.
OracleReport verify_oracle(const ScenarioConfig& cfg, double tolerance = 1e-9);
OracleReport verify_oracle(const GaussianPairState& state, int truncation, double tolerance);

std::string summary_json(const ScenarioResult& result, const ScenarioConfig& cfg);
std::string summary_json(const OracleReport& report);

/// jsa.json / jsa.csv for the configured pump.
std::map<std::string, std::string> render_jsa_artifacts(const ScenarioConfig& cfg, unsigned formats);

/// Writes all files into a sibling temp directory, then renames it over
/// `out_dir`. Nothing is left behind if a write fails.
void commit_artifacts(const std::filesystem::path& out_dir,
                      const std::map<std::string, std::string>& files);

}  // namespace sis
