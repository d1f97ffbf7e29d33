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

#include "sis/frequency_grid.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

#include "json.hpp"

namespace sis {

namespace {

void require_distinct(const std::vector<int>& v, const char* what) {
  std::set<int> seen(v.begin(), v.end());
  if (seen.size() != v.size()) {
    throw validation_error(std::string("grid: duplicate index in ") + what);
  }
}

std::optional<std::size_t> find_label(std::string_view label, char prefix, std::size_t count) {
  if (label.size() < 2 || label.front() != prefix) return std::nullopt;
  std::size_t number = 0;
  auto [ptr, ec] = std::from_chars(label.data() + 1, label.data() + label.size(), number);
  if (ec != std::errc{} || ptr != label.data() + label.size()) return std::nullopt;
  if (number < 1 || number > count) return std::nullopt;
  return number - 1;
}

std::string format_complex(Complex z) {
  std::ostringstream os;
  os.precision(17);
  os << z.real() << (std::signbit(z.imag()) ? "-" : "+") << std::abs(z.imag()) << "j";
  return os.str();
}

}  // namespace

void FrequencyGrid::validate() const {
  if (!(spacing_hz > 0.0) || !std::isfinite(spacing_hz)) {
    throw validation_error("grid: spacing_hz must be positive");
  }
  if (signal_indices.empty()) throw validation_error("grid: no signal channels");
  if (idler_indices.empty()) throw validation_error("grid: no idler channels");
  require_distinct(pump_indices, "pump_indices");
  require_distinct(signal_indices, "signal_indices");
  require_distinct(idler_indices, "idler_indices");
  if (!std::is_sorted(pump_indices.begin(), pump_indices.end())) {
    throw validation_error("grid: pump_indices must be increasing");
  }
}

std::optional<std::size_t> FrequencyGrid::find_signal(std::string_view label) const {
  return find_label(label, 's', signal_indices.size());
}

std::optional<std::size_t> FrequencyGrid::find_idler(std::string_view label) const {
  return find_label(label, 'i', idler_indices.size());
}

std::string signal_label(std::size_t column) { return "s" + std::to_string(column + 1); }
std::string idler_label(std::size_t row) { return "i" + std::to_string(row + 1); }

FrequencyGrid default_grid() {
  FrequencyGrid g;
  g.spacing_hz = 100e9;
  g.pump_indices = {-2, -1, 0, 1, 2};
  g.signal_indices = {2, 4, 6, 8};
  g.idler_indices = {-4, -6};
  return g;
}

PumpSpectrum PumpSpectrum::shifted(int offset) const {
  PumpSpectrum out;
  for (const auto& [k, v] : amplitudes) out.amplitudes[k + offset] = v;
  return out;
}

PumpSpectrum PumpSpectrum::scaled(Complex factor) const {
  PumpSpectrum out;
  for (const auto& [k, v] : amplitudes) out.amplitudes[k] = v * factor;
  return out;
}

Complex PumpAutoconvolution::at(int sum_index) const {
  auto it = values.find(sum_index);
  return it == values.end() ? Complex{} : it->second;
}

PumpAutoconvolution autoconvolve(const PumpSpectrum& pump) {
  bool any_nonzero = std::any_of(pump.amplitudes.begin(), pump.amplitudes.end(),
                                 [](const auto& kv) { return kv.second != Complex{}; });
  if (!any_nonzero) throw validation_error("empty spectrum");

  // Unordered pairs l <= m: cross terms count twice, the degenerate one once.
  PumpAutoconvolution f;
  for (auto it = pump.amplitudes.begin(); it != pump.amplitudes.end(); ++it) {
    const auto& [l, el] = *it;
    f.values[2 * l] += el * el;
    for (auto jt = std::next(it); jt != pump.amplitudes.end(); ++jt) {
      const auto& [m, em] = *jt;
      f.values[l + m] += 2.0 * (el * em);
    }
  }
  return f;
}

JsaMatrix build_jsa(const PumpSpectrum& pump, const FrequencyGrid& grid) {
  grid.validate();
  if (!grid.pump_indices.empty()) {
    for (const auto& [k, v] : pump.amplitudes) {
      if (!std::binary_search(grid.pump_indices.begin(), grid.pump_indices.end(), k)) {
        throw validation_error("pump index " + std::to_string(k) + " is not a grid pump channel");
      }
    }
  }
  const PumpAutoconvolution f = autoconvolve(pump);
  ComplexMatrix psi(grid.n_idler(), grid.n_signal());
  for (std::size_t m = 0; m < grid.n_idler(); ++m) {
    for (std::size_t n = 0; n < grid.n_signal(); ++n) {
      psi(m, n) = f.at(grid.signal_indices[n] + grid.idler_indices[m]);
    }
  }
  return JsaMatrix{std::move(psi), grid};
}

JsaMatrix three_pump_matrix(Complex a1, Complex a2, Complex a3) {
  const Complex outer12 = 2.0 * (a1 * a2);
  const Complex outer23 = 2.0 * (a2 * a3);
  const Complex mid = a2 * a2 + 2.0 * (a1 * a3);
  ComplexMatrix psi{
      {outer12, mid, outer23, a3 * a3},
      {a1 * a1, outer12, mid, outer23},
  };
  return JsaMatrix{std::move(psi), default_grid()};
}

std::string jsa_to_json(const JsaMatrix& jsa) {
  nlohmann::ordered_json j;
  j["rows"] = jsa.rows();
  j["cols"] = jsa.cols();
  nlohmann::ordered_json row_labels = nlohmann::json::array();
  nlohmann::ordered_json col_labels = nlohmann::json::array();
  for (std::size_t m = 0; m < jsa.rows(); ++m) row_labels.push_back(idler_label(m));
  for (std::size_t n = 0; n < jsa.cols(); ++n) col_labels.push_back(signal_label(n));
  j["row_labels"] = row_labels;
  j["col_labels"] = col_labels;
  j["grid"] = {
      {"spacing_hz", jsa.grid.spacing_hz},
      {"pump_indices", jsa.grid.pump_indices},
      {"signal_indices", jsa.grid.signal_indices},
      {"idler_indices", jsa.grid.idler_indices},
  };
  nlohmann::ordered_json entries = nlohmann::json::array();
  for (const Complex& z : jsa.entries.data()) {
    entries.push_back({{"re", z.real()}, {"im", z.imag()}});
  }
  j["entries"] = entries;
  return j.dump(2) + "\n";
}

std::string jsa_to_csv(const JsaMatrix& jsa) {
  std::ostringstream os;
  os << "idler";
  for (std::size_t n = 0; n < jsa.cols(); ++n) os << ',' << signal_label(n);
  os << '\n';
  for (std::size_t m = 0; m < jsa.rows(); ++m) {
    os << idler_label(m);
    for (std::size_t n = 0; n < jsa.cols(); ++n) os << ',' << format_complex(jsa(m, n));
    os << '\n';
  }
  return os.str();
}

}  // namespace sis
