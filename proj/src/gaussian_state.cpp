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

#include "sis/gaussian_state.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "sis/permanent.hpp"

namespace sis {

namespace {

Eigen::MatrixXcd to_eigen(const ComplexMatrix& m) {
  Eigen::MatrixXcd out(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = m(r, c);
    }
  }
  return out;
}

std::vector<double> singular_values(const ComplexMatrix& m) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(to_eigen(m));
  const auto& sv = svd.singularValues();
  std::vector<double> out(sv.data(), sv.data() + sv.size());
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

GaussianPairState finish_state(JsaMatrix lambda) {
  GaussianPairState state;
  state.schmidt_values = singular_values(lambda.entries);
  for (double& s : state.schmidt_values) {
    if (s < kSchmidtCutoff) s = 0.0;
  }
  if (state.schmidt_values.front() >= 1.0) {
    throw validation_error("unphysical gain: largest Schmidt value must be below 1");
  }
  state.gain = state.schmidt_values.front();
  double c = 1.0;
  for (double s : state.schmidt_values) c *= std::sqrt(1.0 - s * s);
  state.norm_constant = c;
  state.lambda = std::move(lambda);
  return state;
}

void check_pattern_shape(const Pattern& p, const GaussianPairState& state) {
  if (p.idler.size() != state.lambda.rows() || p.signal.size() != state.lambda.cols()) {
    throw validation_error("pattern does not match the state's channel count");
  }
  if (!p.collision_free()) {
    throw validation_error("pattern " + p.label() + " has a collision; use the Fock oracle");
  }
  if (p.idler_photons() != p.signal_photons() || p.idler_photons() < 1) {
    throw validation_error("pattern " + p.label() + " needs N >= 1 idlers and N signals");
  }
}

}  // namespace

GaussianPairState from_jsa(const JsaMatrix& jsa, double gain) {
  if (!(gain > 0.0 && gain < 1.0)) throw validation_error("unphysical gain");
  const std::vector<double> sv = singular_values(jsa.entries);
  if (!(sv.front() > 0.0) || !std::isfinite(sv.front())) {
    throw validation_error("JSA is identically zero");
  }
  JsaMatrix lambda{jsa.entries.scaled(gain / sv.front()), jsa.grid};
  return finish_state(std::move(lambda));
}

GaussianPairState from_lambda(const JsaMatrix& lambda) {
  const std::vector<double> sv = singular_values(lambda.entries);
  if (!(sv.front() > 0.0)) throw validation_error("squeezing matrix is identically zero");
  return finish_state(lambda);
}

Complex n_pair_amplitude(const GaussianPairState& state, const OutcomePattern& pattern) {
  if (pattern.idler_channels.size() != pattern.signal_channels.size() ||
      pattern.idler_channels.empty()) {
    throw validation_error("pattern needs N >= 1 idler and N signal channels");
  }
  const ComplexMatrix sub =
      submatrix(state.lambda, pattern.idler_channels, pattern.signal_channels);
  return state.norm_constant * permanent(sub);
}

Complex n_pair_amplitude(const GaussianPairState& state, const Pattern& pattern) {
  check_pattern_shape(pattern, state);
  const ComplexMatrix sub =
      submatrix(state.lambda.entries, pattern.idler_channels(), pattern.signal_channels());
  return state.norm_constant * permanent(sub);
}

double n_pair_probability(const GaussianPairState& state, const OutcomePattern& pattern) {
  return std::norm(n_pair_amplitude(state, pattern));
}

double n_pair_probability(const GaussianPairState& state, const Pattern& pattern) {
  return std::norm(n_pair_amplitude(state, pattern));
}

OutcomeTable quantum_outcome_table(const GaussianPairState& state, std::size_t n_pairs) {
  const std::size_t n_idler = state.lambda.rows();
  const std::size_t n_signal = state.lambda.cols();
  if (n_pairs < 1) throw validation_error("n_pairs must be at least 1");
  if (n_pairs > n_idler || n_pairs > n_signal) {
    throw validation_error("n_pairs " + std::to_string(n_pairs) + " exceeds channel count");
  }
  OutcomeTable table(n_idler, n_signal);
  for (const Pattern& p : collision_free_patterns(n_idler, n_signal, n_pairs)) {
    table.set(p, n_pair_probability(state, p));
  }
  return table;
}

OutcomeTable classical_outcome_table(const GaussianPairState& state, std::size_t n_pairs) {
  const std::size_t n_idler = state.lambda.rows();
  const std::size_t n_signal = state.lambda.cols();
  if (n_pairs < 1) throw validation_error("n_pairs must be at least 1");
  if (n_pairs > n_idler || n_pairs > n_signal) {
    throw validation_error("n_pairs " + std::to_string(n_pairs) + " exceeds channel count");
  }
  const ComplexMatrix rates = abs_squared_matrix(state.lambda.entries);
  const double c2 = state.norm_constant * state.norm_constant;
  OutcomeTable table(n_idler, n_signal);
  for (const Pattern& p : collision_free_patterns(n_idler, n_signal, n_pairs)) {
    const ComplexMatrix sub = submatrix(rates, p.idler_channels(), p.signal_channels());
    table.set(p, c2 * permanent(sub).real());
  }
  return table;
}

std::vector<Pattern> non_interfering_patterns(const GaussianPairState& state,
                                              std::size_t n_pairs) {
  std::vector<Pattern> out;
  for (const Pattern& p :
       collision_free_patterns(state.lambda.rows(), state.lambda.cols(), n_pairs)) {
    const ComplexMatrix sub =
        submatrix(state.lambda.entries, p.idler_channels(), p.signal_channels());
    if (nonzero_permutation_count(sub) == 1) out.push_back(p);
  }
  return out;
}

}  // namespace sis
