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

#include "sis/detection.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "sis/frequency_grid.hpp"
#include "sis/permanent.hpp"

namespace sis {

namespace {

double lookup(const std::map<std::string, double>& m, const std::string& key, double fallback) {
  auto it = m.find(key);
  return it == m.end() ? fallback : it->second;
}

double binomial(int n, int k) {
  double c = 1.0;
  for (int j = 1; j <= k; ++j) c = c * (n - k + j) / j;
  return c;
}

struct ChannelRef {
  bool idler;
  std::size_t index;
};

std::vector<ChannelRef> channels_of(std::size_t n_idler, std::size_t n_signal) {
  std::vector<ChannelRef> out;
  for (std::size_t m = 0; m < n_idler; ++m) out.push_back({true, m});
  for (std::size_t n = 0; n < n_signal; ++n) out.push_back({false, n});
  return out;
}

int& slot(Pattern& p, const ChannelRef& c) { return c.idler ? p.idler[c.index] : p.signal[c.index]; }
int slot(const Pattern& p, const ChannelRef& c) {
  return c.idler ? p.idler[c.index] : p.signal[c.index];
}

void check_shape(const OutcomeTable& table, const Pattern& p) {
  if (p.idler.size() != table.n_idler() || p.signal.size() != table.n_signal()) {
    throw validation_error("pattern " + p.label() + " does not match the table's channels");
  }
}

}  // namespace

void DetectionModel::validate(std::size_t n_idler, std::size_t n_signal) const {
  FrequencyGrid shape;
  shape.signal_indices.resize(n_signal);
  shape.idler_indices.resize(n_idler);
  auto check = [&](const std::map<std::string, double>& values, const char* what) {
    for (const auto& [label, v] : values) {
      if (!shape.find_idler(label) && !shape.find_signal(label)) {
        throw validation_error(std::string("detection: unknown channel '") + label + "' in " +
                               what);
      }
      if (!(v >= 0.0 && v <= 1.0)) {
        throw validation_error(std::string("detection: ") + what + " for '" + label +
                               "' must be in [0, 1]");
      }
    }
  };
  check(efficiencies, "efficiencies");
  check(dark_click_probability, "dark_click_probability");
}

double DetectionModel::idler_efficiency(std::size_t row) const {
  return lookup(efficiencies, idler_label(row), 1.0);
}
double DetectionModel::signal_efficiency(std::size_t col) const {
  return lookup(efficiencies, signal_label(col), 1.0);
}
double DetectionModel::idler_dark(std::size_t row) const {
  return lookup(dark_click_probability, idler_label(row), 0.0);
}
double DetectionModel::signal_dark(std::size_t col) const {
  return lookup(dark_click_probability, signal_label(col), 0.0);
}

OutcomeTable apply_loss(const OutcomeTable& occupations, const DetectionModel& model) {
  model.validate(occupations.n_idler(), occupations.n_signal());
  const auto channels = channels_of(occupations.n_idler(), occupations.n_signal());
  OutcomeTable out(occupations.n_idler(), occupations.n_signal());
  for (const auto& [pattern, prob] : occupations.entries()) {
    check_shape(occupations, pattern);
    Pattern survived = pattern;
    std::function<void(std::size_t, double)> walk = [&](std::size_t ci, double weight) {
      if (weight == 0.0) return;
      if (ci == channels.size()) {
        out.add(survived, weight);
        return;
      }
      const ChannelRef& c = channels[ci];
      const int n = slot(pattern, c);
      const double eta = c.idler ? model.idler_efficiency(c.index)
                                 : model.signal_efficiency(c.index);
      for (int k = 0; k <= n; ++k) {
        slot(survived, c) = k;
        walk(ci + 1, weight * binomial(n, k) * std::pow(eta, k) * std::pow(1.0 - eta, n - k));
      }
      slot(survived, c) = n;
    };
    walk(0, prob);
  }
  return out;
}

OutcomeTable apply_threshold(const OutcomeTable& occupations, const DetectionModel& model) {
  model.validate(occupations.n_idler(), occupations.n_signal());
  const auto channels = channels_of(occupations.n_idler(), occupations.n_signal());
  OutcomeTable out(occupations.n_idler(), occupations.n_signal());
  for (const auto& [pattern, prob] : occupations.entries()) {
    check_shape(occupations, pattern);
    if (!model.record_collisions && !pattern.collision_free()) continue;
    Pattern clicks = Pattern::empty(occupations.n_idler(), occupations.n_signal());
    std::function<void(std::size_t, double)> walk = [&](std::size_t ci, double weight) {
      if (weight == 0.0) return;
      if (ci == channels.size()) {
        out.add(clicks, weight);
        return;
      }
      const ChannelRef& c = channels[ci];
      if (slot(pattern, c) > 0) {
        slot(clicks, c) = 1;
        walk(ci + 1, weight);
        return;
      }
      const double dark = c.idler ? model.idler_dark(c.index) : model.signal_dark(c.index);
      slot(clicks, c) = 0;
      walk(ci + 1, weight * (1.0 - dark));
      slot(clicks, c) = 1;
      walk(ci + 1, weight * dark);
      slot(clicks, c) = 0;
    };
    walk(0, prob);
  }
  return out;
}

OutcomeTable apply_detection(const OutcomeTable& occupations, const DetectionModel& model) {
  return apply_threshold(apply_loss(occupations, model), model);
}

OutcomeTable apply_detection(const TruncatedState& ts, const DetectionModel& model) {
  return apply_detection(to_distribution(ts, false), model);
}

CountReport make_count_report(const OutcomeTable& clicks, std::uint64_t n_shots,
                              std::uint64_t seed, std::string label) {
  CountReport report;
  report.n_shots = n_shots;
  report.seed = seed;
  report.integration_label = std::move(label);
  report.twofold = OutcomeTable(clicks.n_idler(), clicks.n_signal());
  report.fourfold = OutcomeTable(clicks.n_idler(), clicks.n_signal());
  for (const Pattern& p : collision_free_patterns(clicks.n_idler(), clicks.n_signal(), 1)) {
    report.twofold.set(p, clicks.at(p));
  }
  if (clicks.n_idler() >= 2 && clicks.n_signal() >= 2) {
    for (const Pattern& p : collision_free_patterns(clicks.n_idler(), clicks.n_signal(), 2)) {
      report.fourfold.set(p, clicks.at(p));
    }
  }
  return report;
}

CountReport normalize_to_least_efficient(const CountReport& report, const DetectionModel& model) {
  const std::size_t n_idler = report.twofold.n_idler();
  const std::size_t n_signal = report.twofold.n_signal();
  model.validate(n_idler, n_signal);

  std::vector<double> eta_i(n_idler), eta_s(n_signal);
  for (std::size_t m = 0; m < n_idler; ++m) eta_i[m] = model.idler_efficiency(m);
  for (std::size_t n = 0; n < n_signal; ++n) eta_s[n] = model.signal_efficiency(n);
  auto dead = [](double e) { return e <= 0.0; };
  if (std::any_of(eta_i.begin(), eta_i.end(), dead) ||
      std::any_of(eta_s.begin(), eta_s.end(), dead)) {
    throw validation_error("cannot normalize dead channel");
  }
  const double min_i = *std::min_element(eta_i.begin(), eta_i.end());
  const double min_s = *std::min_element(eta_s.begin(), eta_s.end());

  auto rescale = [&](const OutcomeTable& raw) {
    OutcomeTable out(raw.n_idler(), raw.n_signal());
    for (const auto& [p, v] : raw.entries()) {
      double factor = 1.0;
      for (std::size_t m = 0; m < n_idler; ++m) factor *= std::pow(min_i / eta_i[m], p.idler[m]);
      for (std::size_t n = 0; n < n_signal; ++n) factor *= std::pow(min_s / eta_s[n], p.signal[n]);
      out.set(p, v * factor);
    }
    return out;
  };

  CountReport out = report;
  out.twofold_normalized = rescale(report.twofold);
  out.fourfold_normalized = rescale(report.fourfold);
  return out;
}

OutcomeTable classical_fourfold_prediction(const OutcomeTable& twofold, std::uint64_t total_shots) {
  if (total_shots < 1) throw validation_error("total_shots must be at least 1");
  const std::size_t n_idler = twofold.n_idler();
  const std::size_t n_signal = twofold.n_signal();
  if (n_idler < 2 || n_signal < 2) throw validation_error("need two idler and two signal channels");

  ComplexMatrix rates(n_idler, n_signal);
  for (const Pattern& p : collision_free_patterns(n_idler, n_signal, 1)) {
    if (!twofold.contains(p)) throw validation_error("missing twofold combination " + p.label());
    rates(p.idler_channels()[0], p.signal_channels()[0]) =
        twofold.at(p) / static_cast<double>(total_shots);
  }
  OutcomeTable out(n_idler, n_signal);
  for (const Pattern& p : collision_free_patterns(n_idler, n_signal, 2)) {
    const ComplexMatrix sub = submatrix(rates, p.idler_channels(), p.signal_channels());
    out.set(p, static_cast<double>(total_shots) * permanent(sub).real());
  }
  return out;
}

ContrastReport interference_contrast(const OutcomeTable& quantum, const OutcomeTable& classical,
                                     const std::vector<Pattern>& reference) {
  for (const auto& [p, v] : quantum.entries()) {
    if (!classical.contains(p)) throw validation_error("classical table lacks " + p.label());
  }
  for (const auto& [p, v] : classical.entries()) {
    if (!quantum.contains(p)) throw validation_error("quantum table lacks " + p.label());
  }

  ContrastReport report;
  if (!reference.empty()) {
    double q_ref = 0.0, c_ref = 0.0;
    for (const Pattern& p : reference) {
      q_ref += quantum.at(p);
      c_ref += classical.at(p);
    }
    if (q_ref > 0.0 && c_ref > 0.0) report.scale = q_ref / c_ref;
  }

  double sum_con_ratio = 0.0, sum_des_ratio = 0.0, sum_con_q = 0.0, sum_des_q = 0.0;
  for (const auto& [p, q] : quantum.entries()) {
    ContrastEntry e;
    e.pattern = p;
    e.quantum = q;
    e.classical = classical.at(p) * report.scale;
    if (e.classical > 0.0) {
      e.ratio = q / e.classical;
    } else if (q > 0.0) {
      e.kind = RatioKind::Infinite;
      e.ratio = std::numeric_limits<double>::infinity();
    } else {
      e.kind = RatioKind::Undefined;
      e.ratio = std::numeric_limits<double>::quiet_NaN();
    }
    if (e.kind == RatioKind::Finite && e.ratio > 1.0 + kNeutralRatioTolerance) {
      ++report.n_constructive;
      sum_con_ratio += e.ratio;
      sum_con_q += q;
    } else if (e.kind == RatioKind::Finite && e.ratio < 1.0 - kNeutralRatioTolerance) {
      ++report.n_destructive;
      sum_des_ratio += e.ratio;
      sum_des_q += q;
    }
    report.entries.push_back(std::move(e));
  }
  if (report.n_constructive > 0) {
    report.mean_constructive_ratio = sum_con_ratio / static_cast<double>(report.n_constructive);
  }
  if (report.n_destructive > 0) {
    report.mean_destructive_ratio = sum_des_ratio / static_cast<double>(report.n_destructive);
  }
  if (report.n_constructive > 0 && report.n_destructive > 0 && sum_des_q > 0.0) {
    report.contrast = (sum_con_q / static_cast<double>(report.n_constructive)) /
                      (sum_des_q / static_cast<double>(report.n_destructive));
  }
  return report;
}

}  // namespace sis
