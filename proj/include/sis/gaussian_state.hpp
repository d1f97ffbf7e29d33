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

#include <string>
#include <vector>

#include "sis/frequency_grid.hpp"
#include "sis/outcome.hpp"
#include "sis/types.hpp"

namespace sis {

inline constexpr double kDefaultGain = 0.1;
/// Schmidt values below this count as exactly zero.
inline constexpr double kSchmidtCutoff = 1e-14;

/// Multimode two-mode-squeezed vacuum C exp(sum_jk L_jk a+_j b+_k)|vac>.
///
/// `lambda` is the idler x signal squeezing matrix (same grid as the JSA it
/// came from), `schmidt_values` its singular values in descending order, and
/// `norm_constant` C = prod_j sqrt(1 - lambda_j^2).
struct GaussianPairState {
  JsaMatrix lambda;
  std::vector<double> schmidt_values;
  double norm_constant = 1.0;
  double gain = kDefaultGain;
};

/// N signal and N idler channels, one photon each.
struct OutcomePattern {
  std::vector<std::string> idler_channels;
  std::vector<std::string> signal_channels;
};

/// Scales psi so its largest singular value equals `gain`.
GaussianPairState from_jsa(const JsaMatrix& jsa, double gain = kDefaultGain);

/// State built from an explicit squeezing matrix (spectral norm < 1).
GaussianPairState from_lambda(const JsaMatrix& lambda);

/// C * perm(L restricted to the pattern's rows and columns).
Complex n_pair_amplitude(const GaussianPairState& state, const OutcomePattern& pattern);
Complex n_pair_amplitude(const GaussianPairState& state, const Pattern& pattern);

double n_pair_probability(const GaussianPairState& state, const OutcomePattern& pattern);
double n_pair_probability(const GaussianPairState& state, const Pattern& pattern);

/// |C perm(L_sub)|^2 for every collision-free pattern with `n_pairs` pairs.
OutcomeTable quantum_outcome_table(const GaussianPairState& state, std::size_t n_pairs);

/// Distinguishable-photon baseline with the same prefactor:
/// C^2 perm(|L_sub|^2).
OutcomeTable classical_outcome_table(const GaussianPairState& state, std::size_t n_pairs);

/// Patterns whose submatrix has exactly one nonzero permutation; on these
/// quantum and classical predictions agree.
std::vector<Pattern> non_interfering_patterns(const GaussianPairState& state,
                                              std::size_t n_pairs);

}  // namespace sis
