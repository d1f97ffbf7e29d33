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
#include <map>
#include <string>

#include "sis/detection_model.hpp"
#include "sis/gaussian_state.hpp"
#include "sis/outcome.hpp"

namespace sis {

inline constexpr int kMaxTruncation = 6;

/// Fock-basis expansion of a GaussianPairState up to `n_max` pairs.
struct TruncatedState {
  int n_max = 0;
  std::map<Pattern, Complex, PatternOrder> amplitudes;
  /// 1 - sum |amp|^2, clamped at zero.
  double norm_deficit = 0.0;
  std::size_t n_idler = 0;
  std::size_t n_signal = 0;
};

/// Brute-force series expansion: the N-pair sector is the (N-1)-pair sector
/// hit once more by sum_jk L_jk a+_j b+_k, divided by N, with sqrt(n+1)
/// ladder factors on every creation. Handles same-channel collisions.
TruncatedState expand(const GaussianPairState& state, int n_max);

/// Deterministic sub-seed for stream `stream` of a master seed (splitmix64).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

double pattern_probability(const TruncatedState& ts, const Pattern& p);

/// |amp|^2 per occupation pattern, optionally divided by 1 - norm_deficit.
OutcomeTable to_distribution(const TruncatedState& ts, bool renormalize);

/// Draws `n_shots` occupation patterns from the renormalized truncated
/// distribution, thins and thresholds each through `detection`, and counts
/// click patterns. Shots are split over a fixed number of shards with
/// sub-seeds derived from `seed`, so the result depends only on the seed.
OutcomeTable sample_events(const TruncatedState& ts, const DetectionModel& detection,
                           std::uint64_t n_shots, std::uint64_t seed);

/// Debug dump: {"n_max":..,"norm_deficit":..,"amplitudes":{"i1|s2":{"re":..,"im":..}}}.
std::string truncated_state_to_json(const TruncatedState& ts);

}  // namespace sis
