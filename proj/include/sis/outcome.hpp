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

#include <compare>
#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace sis {

/// Photon numbers (or click flags) per idler and signal channel.
///
/// Text form is `i1+i2|s1+s3`, with `x<n>` for multiple photons in one
/// channel (`i1x2|s2x2`) and `vac` for the empty pattern.
struct Pattern {
  std::vector<int> idler;
  std::vector<int> signal;

  static Pattern empty(std::size_t n_idler, std::size_t n_signal);

  /// Parses the text form. Channel vectors are sized to the given counts.
  static Pattern parse(std::string_view text, std::size_t n_idler, std::size_t n_signal);

  int idler_photons() const;
  int signal_photons() const;
  int total() const { return idler_photons() + signal_photons(); }
  bool collision_free() const;

  std::vector<std::size_t> idler_channels() const;
  std::vector<std::size_t> signal_channels() const;

  std::string label() const;

  bool operator==(const Pattern&) const = default;
};

/// Fewer photons first; then channels in reading order, so the six
/// two-signal patterns list as 1&2, 1&3, 1&4, 2&3, 2&4, 3&4.
struct PatternOrder {
  bool operator()(const Pattern& a, const Pattern& b) const;
};

/// Pattern -> probability (or count). Missing patterns read as zero.
class OutcomeTable {
 public:
  using Map = std::map<Pattern, double, PatternOrder>;

  OutcomeTable() = default;
  OutcomeTable(std::size_t n_idler, std::size_t n_signal)
      : n_idler_(n_idler), n_signal_(n_signal) {}

  std::size_t n_idler() const noexcept { return n_idler_; }
  std::size_t n_signal() const noexcept { return n_signal_; }

  void set(const Pattern& p, double value);
  void add(const Pattern& p, double value);
  double at(const Pattern& p) const;
  bool contains(const Pattern& p) const { return entries_.contains(p); }

  double total() const;
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

  const Map& entries() const noexcept { return entries_; }

  OutcomeTable filtered(const std::function<bool(const Pattern&)>& keep) const;
  OutcomeTable scaled(double factor) const;

  bool operator==(const OutcomeTable&) const = default;

 private:
  std::size_t n_idler_ = 0;
  std::size_t n_signal_ = 0;
  Map entries_;
};

/// Exactly one idler and one signal photon, one per channel.
bool is_twofold(const Pattern& p);
/// Exactly two idler and two signal channels, one photon each.
bool is_fourfold(const Pattern& p);

/// All collision-free patterns with `n_pairs` idler and `n_pairs` signal
/// channels, in PatternOrder.
std::vector<Pattern> collision_free_patterns(std::size_t n_idler, std::size_t n_signal,
                                             std::size_t n_pairs);

std::string table_to_json(const OutcomeTable& table);
/// `pattern,value` rows.
std::string table_to_csv(const OutcomeTable& table, std::string_view value_column);

}  // namespace sis
