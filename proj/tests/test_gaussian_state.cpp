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

#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "sis/gaussian_state.hpp"
#include "sis/permanent.hpp"

using namespace sis;
using sis::testing::norm_constant_by_eigen;

namespace {

const Complex kRootTwoI{0.0, std::sqrt(2.0)};

JsaMatrix two_pump(double a = 0.0, double b = 0.0) {
  return build_jsa(PumpSpectrum({{-1, std::polar(1.0, a)}, {1, std::polar(1.0, b)}}),
                   default_grid());
}

JsaMatrix balanced_three_pump() { return three_pump_matrix(kRootTwoI, 1.0, kRootTwoI); }

Pattern pat(const std::string& text) { return Pattern::parse(text, 2, 4); }

const char* const kFourfold[] = {"i1+i2|s1+s2", "i1+i2|s1+s3", "i1+i2|s1+s4",
                                 "i1+i2|s2+s3", "i1+i2|s2+s4", "i1+i2|s3+s4"};

}  // namespace

TEST_CASE("single pump: two unit Schmidt modes") {
  const GaussianPairState s =
      from_jsa(build_jsa(PumpSpectrum({{0, 1.0}}), default_grid()), 0.1);
  REQUIRE(s.schmidt_values.size() == 2);
  CHECK(s.schmidt_values[0] == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(s.schmidt_values[1] == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(s.norm_constant == doctest::Approx(0.99).epsilon(1e-14));
}

TEST_CASE("one-mode state at gain 0.5") {
  JsaMatrix jsa{ComplexMatrix{{Complex{0, 3}}}, FrequencyGrid{100e9, {0}, {1}, {-1}}};
  const GaussianPairState s = from_jsa(jsa, 0.5);
  CHECK(s.norm_constant == doctest::Approx(std::sqrt(0.75)).epsilon(1e-14));
  CHECK(std::abs(s.lambda(0, 0) - Complex{0, 0.5}) < 1e-15);
}

TEST_CASE("norm constant matches the Gram-eigenvalue route") {
  for (const JsaMatrix& jsa : {two_pump(), balanced_three_pump(), three_pump_matrix(0.3, -1.2, 0.7)}) {
    const GaussianPairState s = from_jsa(jsa, 0.3);
    CHECK(s.norm_constant == doctest::Approx(norm_constant_by_eigen(s.lambda.entries)).epsilon(1e-12));
    CHECK(s.schmidt_values.front() == doctest::Approx(0.3).epsilon(1e-14));
  }
}

TEST_CASE("gain validation") {
  const JsaMatrix jsa = two_pump();
  CHECK_THROWS_WITH(from_jsa(jsa, 1.0), "unphysical gain");
  CHECK_THROWS_WITH(from_jsa(jsa, 1.5), "unphysical gain");
  CHECK_THROWS_WITH(from_jsa(jsa, 0.0), "unphysical gain");
  CHECK_THROWS_WITH(from_jsa(jsa, -0.1), "unphysical gain");
  CHECK_THROWS_WITH(from_jsa(jsa, std::nan("")), "unphysical gain");
  JsaMatrix zero = jsa;
  zero.entries = ComplexMatrix(2, 4);
  CHECK_THROWS_AS(from_jsa(zero, 0.1), Error);
  // The unscaled two-pump JSA has spectral norm well above 1.
  CHECK_THROWS_AS(from_lambda(jsa), Error);
}

TEST_CASE("fourfold probabilities for the balanced three-pump state") {
  const GaussianPairState s = from_jsa(balanced_three_pump(), 0.1);
  const double p12 = n_pair_probability(s, pat("i1+i2|s1+s2"));
  const double p13 = n_pair_probability(s, pat("i1+i2|s1+s3"));
  CHECK(p13 / p12 == doctest::Approx(50.0).epsilon(1e-12));

  const double weights[] = {4, 200, 16, 1, 200, 4};
  for (int k = 0; k < 6; ++k) {
    CHECK(n_pair_probability(s, pat(kFourfold[k])) / p12 ==
          doctest::Approx(weights[k] / 4.0).epsilon(1e-12));
  }
}

TEST_CASE("quantum and classical tables for the two-pump state") {
  const GaussianPairState s = from_jsa(two_pump(), 0.1);
  const OutcomeTable q = quantum_outcome_table(s, 2);
  const OutcomeTable c = classical_outcome_table(s, 2);
  REQUIRE(q.size() == 6);
  REQUIRE(c.size() == 6);
  const double q_weights[] = {1, 4, 1, 25, 4, 1};
  const double c_weights[] = {1, 4, 1, 17, 4, 1};
  const double unit = q.at(pat("i1+i2|s1+s2"));
  for (int k = 0; k < 6; ++k) {
    CHECK(q.at(pat(kFourfold[k])) / unit == doctest::Approx(q_weights[k]).epsilon(1e-12));
    CHECK(c.at(pat(kFourfold[k])) / unit == doctest::Approx(c_weights[k]).epsilon(1e-12));
  }
  const auto plain = non_interfering_patterns(s, 2);
  CHECK(plain.size() == 5);
  for (const Pattern& p : plain) CHECK(p != pat("i1+i2|s2+s3"));
}

TEST_CASE("single pump: only the 2&3 fourfold survives") {
  const GaussianPairState s = from_jsa(build_jsa(PumpSpectrum({{0, 1.0}}), default_grid()), 0.1);
  const OutcomeTable q = quantum_outcome_table(s, 2);
  for (const auto& [p, v] : q.entries()) {
    if (p == pat("i1+i2|s2+s3")) {
      CHECK(v == doctest::Approx(std::pow(0.99 * 0.01, 2)).epsilon(1e-12));
    } else {
      CHECK(v == 0.0);
    }
  }
}

TEST_CASE("twofold amplitude is C times the squeezing entry") {
  const GaussianPairState s = from_jsa(balanced_three_pump(), 0.2);
  const Complex amp = n_pair_amplitude(s, OutcomePattern{{"i2"}, {"s3"}});
  CHECK(std::abs(amp - s.norm_constant * s.lambda(1, 2)) < 1e-15);
}

TEST_CASE("pattern validation") {
  const GaussianPairState s = from_jsa(two_pump(), 0.1);
  CHECK_THROWS_AS(n_pair_amplitude(s, OutcomePattern{{"i1"}, {"s1", "s2"}}), Error);
  CHECK_THROWS_AS(n_pair_amplitude(s, OutcomePattern{{}, {}}), Error);
  CHECK_THROWS_AS(n_pair_amplitude(s, OutcomePattern{{"i9"}, {"s1"}}), Error);
  CHECK_THROWS_AS(n_pair_amplitude(s, Pattern::parse("i1x2|s1+s2", 2, 4)), Error);
  CHECK_THROWS_AS(quantum_outcome_table(s, 3), Error);
  CHECK_THROWS_AS(quantum_outcome_table(s, 0), Error);
}

TEST_CASE("property: global pump phase leaves probabilities unchanged") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  for (int trial = 0; trial < 50; ++trial) {
    PumpSpectrum p;
    for (int k = -2; k <= 2; ++k) p.amplitudes[k] = sis::testing::random_complex(rng);
    const GaussianPairState a = from_jsa(build_jsa(p, default_grid()), 0.2);
    const GaussianPairState b =
        from_jsa(build_jsa(p.scaled(std::polar(1.0, phase(rng))), default_grid()), 0.2);
    CHECK(a.norm_constant == doctest::Approx(b.norm_constant).epsilon(1e-12));
    for (const char* label : kFourfold) {
      const double pa = n_pair_probability(a, pat(label));
      const double pb = n_pair_probability(b, pat(label));
      CHECK(std::abs(pa - pb) <= 1e-12 * std::max(pa, 1e-30));
    }
  }
}

TEST_CASE("property: channel order inside a pattern does not matter") {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 30; ++trial) {
    PumpSpectrum p;
    for (int k = -2; k <= 2; ++k) p.amplitudes[k] = sis::testing::random_complex(rng);
    const GaussianPairState s = from_jsa(build_jsa(p, default_grid()), 0.2);
    const Complex a = n_pair_amplitude(s, OutcomePattern{{"i1", "i2"}, {"s1", "s4"}});
    const Complex b = n_pair_amplitude(s, OutcomePattern{{"i2", "i1"}, {"s4", "s1"}});
    const Complex c = n_pair_amplitude(s, OutcomePattern{{"i2", "i1"}, {"s1", "s4"}});
    CHECK(std::abs(a - b) <= 1e-14 * std::abs(a) + 1e-300);
    CHECK(std::abs(a - c) <= 1e-14 * std::abs(a) + 1e-300);
  }
}

TEST_CASE("property: two-pump 2&3 enhancement is 25/17 for any pump phases") {
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  for (int trial = 0; trial < 20; ++trial) {
    const GaussianPairState s = from_jsa(two_pump(phase(rng), phase(rng)), 0.1);
    const OutcomeTable q = quantum_outcome_table(s, 2);
    const OutcomeTable c = classical_outcome_table(s, 2);
    CHECK(q.at(pat("i1+i2|s2+s3")) / c.at(pat("i1+i2|s2+s3")) ==
          doctest::Approx(25.0 / 17.0).epsilon(1e-9));
  }
}

TEST_CASE("property: norm constant decreases with gain") {
  const JsaMatrix jsa = balanced_three_pump();
  double previous = 1.0;
  for (double g = 0.05; g < 0.99; g += 0.05) {
    const double c = from_jsa(jsa, g).norm_constant;
    CHECK(c < previous);
    CHECK(c > 0.0);
    previous = c;
  }
}
