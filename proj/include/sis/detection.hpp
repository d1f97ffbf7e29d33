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
#include <optional>
#include <string>
#include <vector>

#include "sis/detection_model.hpp"
#include "sis/fock_oracle.hpp"
#include "sis/outcome.hpp"

namespace sis {

/// Independent binomial thinning of every channel's photon number.
OutcomeTable apply_loss(const OutcomeTable& occupations, const DetectionModel& model);

/// Occupations to click patterns. With record_collisions off, any pattern
/// that still has two or more photons in one channel is dropped.
OutcomeTable apply_threshold(const OutcomeTable& occupations, const DetectionModel& model);

/// apply_threshold(apply_loss(.)).
OutcomeTable apply_detection(const OutcomeTable& occupations, const DetectionModel& model);
OutcomeTable apply_detection(const TruncatedState& ts, const DetectionModel& model);

/// Twofold and fourfold coincidence tables with their provenance.
///
/// The normalized tables are always recomputed from the raw ones.
struct CountReport {
  OutcomeTable twofold;
  OutcomeTable fourfold;
  std::optional<OutcomeTable> twofold_normalized;
  std::optional<OutcomeTable> fourfold_normalized;
  std::uint64_t n_shots = 0;
  std::uint64_t seed = 0;
  std::string integration_label;
};

/// Splits a click table into its twofold and fourfold parts.
CountReport make_count_report(const OutcomeTable& clicks, std::uint64_t n_shots,
                              std::uint64_t seed, std::string label = {});

/// Rescales each pattern by prod (eta_min / eta_channel) over its photons,
/// separately for signal and idler channels, emulating a uniform
/// instrument at the worst channel's efficiency.
CountReport normalize_to_least_efficient(const CountReport& report, const DetectionModel& model);

/// total_shots * perm(R_sub) per signal pair, where R = twofold / total_shots
/// is the idler x signal rate matrix.
OutcomeTable classical_fourfold_prediction(const OutcomeTable& twofold, std::uint64_t total_shots);

enum class RatioKind { Finite, Infinite, Undefined };

struct ContrastEntry {
  Pattern pattern;
  double quantum = 0.0;
  double classical = 0.0;
  double ratio = 0.0;
  RatioKind kind = RatioKind::Finite;
};

struct ContrastReport {
  std::vector<ContrastEntry> entries;
  double scale = 1.0;  // applied to the classical table before dividing
  double mean_constructive_ratio = 0.0;
  double mean_destructive_ratio = 0.0;
  /// Mean quantum value on constructive patterns over mean on destructive ones.
  double contrast = 0.0;
  std::size_t n_constructive = 0;
  std::size_t n_destructive = 0;
};

/// Tolerance around 1 inside which a ratio counts as neither constructive
/// nor destructive.
inline constexpr double kNeutralRatioTolerance = 1e-9;

/// Per-pattern quantum / classical. If `reference` names patterns (those
/// with one nonzero permutation), the classical table is first rescaled so
/// both tables have equal totals over them; otherwise tables are compared
/// in their own units. A zero classical entry under a nonzero quantum one
/// gives RatioKind::Infinite rather than an error.
ContrastReport interference_contrast(const OutcomeTable& quantum, const OutcomeTable& classical,
                                     const std::vector<Pattern>& reference = {});

}  // namespace sis
