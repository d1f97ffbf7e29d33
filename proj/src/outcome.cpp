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

#include "sis/outcome.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <sstream>

#include "json.hpp"
#include "sis/types.hpp"

namespace sis {

namespace {

void append_channels(std::ostringstream& os, const std::vector<int>& occ, char prefix,
                     bool& first) {
  for (std::size_t k = 0; k < occ.size(); ++k) {
    if (occ[k] == 0) continue;
    if (!first) os << '+';
    first = false;
    os << prefix << (k + 1);
    if (occ[k] > 1) os << 'x' << occ[k];
  }
}

int parse_int(std::string_view s, std::string_view context) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
    throw validation_error("bad pattern token '" + std::string(context) + "'");
  }
  return value;
}

void combinations(std::size_t n, std::size_t k, std::vector<std::vector<std::size_t>>& out) {
  std::vector<std::size_t> idx(k);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  if (k > n) return;
  while (true) {
    out.push_back(idx);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace

Pattern Pattern::empty(std::size_t n_idler, std::size_t n_signal) {
  return Pattern{std::vector<int>(n_idler, 0), std::vector<int>(n_signal, 0)};
}

Pattern Pattern::parse(std::string_view text, std::size_t n_idler, std::size_t n_signal) {
  Pattern p = empty(n_idler, n_signal);
  if (text == "vac") return p;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find_first_of("+|", pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view token = text.substr(pos, end - pos);
    pos = end + 1;
    if (token.empty()) continue;
    const char kind = token.front();
    std::string_view body = token.substr(1);
    int count = 1;
    if (auto x = body.find('x'); x != std::string_view::npos) {
      count = parse_int(body.substr(x + 1), token);
      body = body.substr(0, x);
    }
    const int channel = parse_int(body, token);
    if (count < 1) throw validation_error("bad pattern token '" + std::string(token) + "'");
    if (kind == 'i' && channel >= 1 && static_cast<std::size_t>(channel) <= n_idler) {
      p.idler[channel - 1] += count;
    } else if (kind == 's' && channel >= 1 && static_cast<std::size_t>(channel) <= n_signal) {
      p.signal[channel - 1] += count;
    } else {
      throw validation_error("unknown channel in pattern '" + std::string(token) + "'");
    }
  }
  return p;
}

int Pattern::idler_photons() const { return std::accumulate(idler.begin(), idler.end(), 0); }
int Pattern::signal_photons() const { return std::accumulate(signal.begin(), signal.end(), 0); }

bool Pattern::collision_free() const {
  auto le1 = [](int n) { return n <= 1; };
  return std::all_of(idler.begin(), idler.end(), le1) &&
         std::all_of(signal.begin(), signal.end(), le1);
}

std::vector<std::size_t> Pattern::idler_channels() const {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < idler.size(); ++k) {
    for (int c = 0; c < idler[k]; ++c) out.push_back(k);
  }
  return out;
}

std::vector<std::size_t> Pattern::signal_channels() const {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < signal.size(); ++k) {
    for (int c = 0; c < signal[k]; ++c) out.push_back(k);
  }
  return out;
}

std::string Pattern::label() const {
  if (total() == 0) return "vac";
  std::ostringstream os;
  bool first = true;
  append_channels(os, idler, 'i', first);
  os << '|';
  first = true;
  append_channels(os, signal, 's', first);
  return os.str();
}

bool PatternOrder::operator()(const Pattern& a, const Pattern& b) const {
  if (a.total() != b.total()) return a.total() < b.total();
  if (a.idler != b.idler) return std::lexicographical_compare(b.idler.begin(), b.idler.end(),
                                                              a.idler.begin(), a.idler.end());
  return std::lexicographical_compare(b.signal.begin(), b.signal.end(), a.signal.begin(),
                                      a.signal.end());
}

void OutcomeTable::set(const Pattern& p, double value) { entries_[p] = value; }

void OutcomeTable::add(const Pattern& p, double value) { entries_[p] += value; }

double OutcomeTable::at(const Pattern& p) const {
  auto it = entries_.find(p);
  return it == entries_.end() ? 0.0 : it->second;
}

double OutcomeTable::total() const {
  double sum = 0.0;
  for (const auto& [p, v] : entries_) sum += v;
  return sum;
}

OutcomeTable OutcomeTable::filtered(const std::function<bool(const Pattern&)>& keep) const {
  OutcomeTable out(n_idler_, n_signal_);
  for (const auto& [p, v] : entries_) {
    if (keep(p)) out.entries_.emplace(p, v);
  }
  return out;
}

OutcomeTable OutcomeTable::scaled(double factor) const {
  OutcomeTable out = *this;
  for (auto& [p, v] : out.entries_) v *= factor;
  return out;
}

bool is_twofold(const Pattern& p) {
  return p.collision_free() && p.idler_photons() == 1 && p.signal_photons() == 1;
}

bool is_fourfold(const Pattern& p) {
  return p.collision_free() && p.idler_photons() == 2 && p.signal_photons() == 2;
}

std::vector<Pattern> collision_free_patterns(std::size_t n_idler, std::size_t n_signal,
                                             std::size_t n_pairs) {
  std::vector<std::vector<std::size_t>> idler_sets;
  std::vector<std::vector<std::size_t>> signal_sets;
  combinations(n_idler, n_pairs, idler_sets);
  combinations(n_signal, n_pairs, signal_sets);
  std::vector<Pattern> out;
  for (const auto& is : idler_sets) {
    for (const auto& ss : signal_sets) {
      Pattern p = Pattern::empty(n_idler, n_signal);
      for (auto i : is) p.idler[i] = 1;
      for (auto s : ss) p.signal[s] = 1;
      out.push_back(std::move(p));
    }
  }
  std::sort(out.begin(), out.end(), PatternOrder{});
  return out;
}

std::string table_to_json(const OutcomeTable& table) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [p, v] : table.entries()) j[p.label()] = v;
  return j.dump(2);
}

std::string table_to_csv(const OutcomeTable& table, std::string_view value_column) {
  std::ostringstream os;
  os.precision(17);
  os << "pattern," << value_column << '\n';
  for (const auto& [p, v] : table.entries()) os << p.label() << ',' << v << '\n';
  return os.str();
}

}  // namespace sis
