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

#include <cstddef>
#include <map>
#include <string>

namespace sis {

/// Per-channel efficiencies and threshold-detector behaviour.
///
/// Channels absent from `efficiencies` are lossless. Dark clicks are off
/// unless a channel has an entry in `dark_click_probability`.
struct DetectionModel {
  std::map<std::string, double> efficiencies;
  bool record_collisions = false;
  std::map<std::string, double> dark_click_probability;

  /// Rejects values outside [0, 1] and labels that are not channels of an
  /// n_idler x n_signal grid.
  void validate(std::size_t n_idler, std::size_t n_signal) const;

  double idler_efficiency(std::size_t row) const;
  double signal_efficiency(std::size_t col) const;
  double idler_dark(std::size_t row) const;
  double signal_dark(std::size_t col) const;

  bool operator==(const DetectionModel&) const = default;
};

}  // namespace sis
