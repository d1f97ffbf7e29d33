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

#include "sis/fock_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <thread>

#include "json.hpp"

namespace sis {

namespace {

using AmplitudeMap = std::map<Pattern, Complex, PatternOrder>;

constexpr std::size_t kSampleShards = 8;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// 53-bit uniform in [0, 1). std::uniform_real_distribution is not
// reproducible across standard libraries.
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// One shot through loss and threshold detection. Returns false when the
// shot is discarded as an unrecorded collision.
bool detect_shot(const Pattern& occupations, const DetectionModel& model, std::mt19937_64& rng,
                 Pattern& clicks) {
  auto channel = [&](int photons, double eta, double dark, int& click) {
    int survived = 0;
    for (int k = 0; k < photons; ++k) {
      if (eta >= 1.0 || uniform01(rng) < eta) ++survived;
    }
    if (survived >= 2 && !model.record_collisions) return false;
    click = survived > 0 ? 1 : 0;
    if (click == 0 && dark > 0.0 && uniform01(rng) < dark) click = 1;
    return true;
  };
  for (std::size_t m = 0; m < occupations.idler.size(); ++m) {
    if (!channel(occupations.idler[m], model.idler_efficiency(m), model.idler_dark(m),
                 clicks.idler[m])) {
      return false;
    }
  }
  for (std::size_t n = 0; n < occupations.signal.size(); ++n) {
    if (!channel(occupations.signal[n], model.signal_efficiency(n), model.signal_dark(n),
                 clicks.signal[n])) {
      return false;
    }
  }
  return true;
}

}  // namespace

TruncatedState expand(const GaussianPairState& state, int n_max) {
  if (n_max < 1 || n_max > kMaxTruncation) {
    throw validation_error("truncation must be between 1 and " + std::to_string(kMaxTruncation));
  }
  const ComplexMatrix& lambda = state.lambda.entries;
  const std::size_t n_idler = lambda.rows();
  const std::size_t n_signal = lambda.cols();

  TruncatedState ts;
  ts.n_max = n_max;
  ts.n_idler = n_idler;
  ts.n_signal = n_signal;

  // Sectors hold the series terms without the overall constant C.
  AmplitudeMap sector;
  sector.emplace(Pattern::empty(n_idler, n_signal), Complex{1.0, 0.0});
  for (const auto& [p, a] : sector) ts.amplitudes.emplace(p, state.norm_constant * a);

  for (int order = 1; order <= n_max; ++order) {
    AmplitudeMap next;
    for (const auto& [pattern, amp] : sector) {
      for (std::size_t m = 0; m < n_idler; ++m) {
        for (std::size_t n = 0; n < n_signal; ++n) {
          const Complex l = lambda(m, n);
          if (l == Complex{}) continue;
          Pattern created = pattern;
          const double ladder = std::sqrt(static_cast<double>(created.idler[m] + 1) *
                                          static_cast<double>(created.signal[n] + 1));
          ++created.idler[m];
          ++created.signal[n];
          next[created] += amp * l * ladder / static_cast<double>(order);
        }
      }
    }
    sector = std::move(next);
    for (const auto& [p, a] : sector) ts.amplitudes.emplace(p, state.norm_constant * a);
  }

  double norm = 0.0;
  for (const auto& [p, a] : ts.amplitudes) norm += std::norm(a);
  ts.norm_deficit = std::max(0.0, 1.0 - norm);
  return ts;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  return splitmix64(master ^ splitmix64(stream + 1));
}

double pattern_probability(const TruncatedState& ts, const Pattern& p) {
  auto it = ts.amplitudes.find(p);
  return it == ts.amplitudes.end() ? 0.0 : std::norm(it->second);
}

OutcomeTable to_distribution(const TruncatedState& ts, bool renormalize) {
  const double scale = renormalize ? 1.0 / (1.0 - ts.norm_deficit) : 1.0;
  OutcomeTable table(ts.n_idler, ts.n_signal);
  for (const auto& [p, a] : ts.amplitudes) table.set(p, std::norm(a) * scale);
  return table;
}

OutcomeTable sample_events(const TruncatedState& ts, const DetectionModel& detection,
                           std::uint64_t n_shots, std::uint64_t seed) {
  if (n_shots < 1) throw validation_error("n_shots must be at least 1");
  detection.validate(ts.n_idler, ts.n_signal);

  std::vector<Pattern> patterns;
  std::vector<double> cdf;
  double running = 0.0;
  for (const auto& [p, a] : ts.amplitudes) {
    const double w = std::norm(a);
    if (w <= 0.0) continue;
    running += w;
    patterns.push_back(p);
    cdf.push_back(running);
  }
  if (patterns.empty()) throw numerical_error("truncated state has no weight");
  const double total = running;  // renormalizes by 1 - norm_deficit

  using Counts = std::map<Pattern, std::uint64_t, PatternOrder>;
  std::vector<Counts> shard_counts(kSampleShards);
  {
    std::vector<std::jthread> workers;
    for (std::size_t s = 0; s < kSampleShards; ++s) {
      const std::uint64_t shots =
          n_shots / kSampleShards + (s < n_shots % kSampleShards ? 1 : 0);
      workers.emplace_back([&, s, shots] {
        std::mt19937_64 rng(derive_seed(seed, s));
        Counts& counts = shard_counts[s];
        Pattern clicks = Pattern::empty(ts.n_idler, ts.n_signal);
        for (std::uint64_t k = 0; k < shots; ++k) {
          const double u = uniform01(rng) * total;
          auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
          const std::size_t idx =
              std::min(static_cast<std::size_t>(it - cdf.begin()), patterns.size() - 1);
          if (detect_shot(patterns[idx], detection, rng, clicks)) ++counts[clicks];
        }
      });
    }
  }

  OutcomeTable table(ts.n_idler, ts.n_signal);
  for (const Counts& counts : shard_counts) {
    for (const auto& [p, c] : counts) table.add(p, static_cast<double>(c));
  }
  return table;
}

std::string truncated_state_to_json(const TruncatedState& ts) {
  nlohmann::ordered_json j;
  j["n_max"] = ts.n_max;
  j["norm_deficit"] = ts.norm_deficit;
  nlohmann::ordered_json amps = nlohmann::ordered_json::object();
  for (const auto& [p, a] : ts.amplitudes) amps[p.label()] = {{"re", a.real()}, {"im", a.imag()}};
  j["amplitudes"] = amps;
  return j.dump(2) + "\n";
}

}  // namespace sis
