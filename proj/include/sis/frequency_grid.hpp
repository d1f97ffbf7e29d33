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

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sis/types.hpp"

namespace sis {

/// Integer bookkeeping for pump, signal and idler channels.
///
/// One index step is `spacing_hz`, which is half the 200 GHz channel pitch:
/// pumps sit on even or odd indices, signal and idler channels on even ones.
/// Energy matching is then index arithmetic: a pair in signal `s` and idler
/// `i` is driven by pump photons at `p`, `q` when `s + i == p + q`.
///
/// Channels are labelled positionally: `i1, i2, ...` for idlers and
/// `s1, s2, ...` for signals, in the order the index lists are given.
struct FrequencyGrid {
  double spacing_hz = 100e9;
  std::vector<int> pump_indices;
  std::vector<int> signal_indices;
  std::vector<int> idler_indices;

  /// Throws a validation error if the grid is malformed.
  void validate() const;

  std::size_t n_signal() const noexcept { return signal_indices.size(); }
  std::size_t n_idler() const noexcept { return idler_indices.size(); }

  std::optional<std::size_t> find_signal(std::string_view label) const;
  std::optional<std::size_t> find_idler(std::string_view label) const;

  bool operator==(const FrequencyGrid&) const = default;
};

std::string signal_label(std::size_t column);
std::string idler_label(std::size_t row);

/// The six-channel layout used throughout: pumps at -2..2, signals s1..s4 at
/// 2, 4, 6, 8, idlers i1 at -4 and i2 at -6.
FrequencyGrid default_grid();

/// Complex pump field amplitudes keyed by grid index.
struct PumpSpectrum {
  std::map<int, Complex> amplitudes;

  PumpSpectrum() = default;
  explicit PumpSpectrum(std::map<int, Complex> a) : amplitudes(std::move(a)) {}

  PumpSpectrum shifted(int offset) const;
  PumpSpectrum scaled(Complex factor) const;
};

/// f_j = sum_l e_l e_{j-l}; the JSA depends only on signal+idler index.
struct PumpAutoconvolution {
  std::map<int, Complex> values;

  Complex at(int sum_index) const;
};

/// Pair-creation amplitudes psi[idler row][signal column] with their grid.
struct JsaMatrix {
  ComplexMatrix entries;
  FrequencyGrid grid;

  std::size_t rows() const noexcept { return entries.rows(); }
  std::size_t cols() const noexcept { return entries.cols(); }
  const Complex& operator()(std::size_t r, std::size_t c) const { return entries(r, c); }
};

PumpAutoconvolution autoconvolve(const PumpSpectrum& pump);

JsaMatrix build_jsa(const PumpSpectrum& pump, const FrequencyGrid& grid);

/// Closed-form three-pump matrix for pumps a1, a2, a3 at indices -2, 0, +2 of
/// the default grid:
///
///   [ 2 a1 a2   a2^2 + 2 a1 a3   2 a2 a3          a3^2    ]
///   [ a1^2      2 a1 a2          a2^2 + 2 a1 a3   2 a2 a3 ]
JsaMatrix three_pump_matrix(Complex a1, Complex a2, Complex a3);

std::string jsa_to_json(const JsaMatrix& jsa);
std::string jsa_to_csv(const JsaMatrix& jsa);

}  // namespace sis
