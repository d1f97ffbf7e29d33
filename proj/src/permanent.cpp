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

#include "sis/permanent.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <set>

namespace sis {

Complex permanent(const ComplexMatrix& m) {
  if (!m.is_square()) throw validation_error("permanent: matrix is not square");
  const std::size_t n = m.rows();
  if (n > kMaxPermanentDimension) throw validation_error("dimension cap exceeded");

  // perm(A) = (-1)^n sum_{S} (-1)^{|S|} prod_i sum_{j in S} a_ij, with S
  // visited in Gray-code order so consecutive subsets differ by one column.
  std::vector<Complex> row_sums(n, Complex{});
  Complex total{};
  const std::uint64_t n_subsets = std::uint64_t{1} << n;
  std::uint64_t gray = 0;
  for (std::uint64_t k = 1; k < n_subsets; ++k) {
    const auto col = static_cast<std::size_t>(std::countr_zero(k));
    const std::uint64_t bit = std::uint64_t{1} << col;
    gray ^= bit;
    const double direction = (gray & bit) ? 1.0 : -1.0;
    for (std::size_t i = 0; i < n; ++i) row_sums[i] += direction * m(i, col);

    Complex product{1.0, 0.0};
    for (const Complex& s : row_sums) product *= s;
    if (std::popcount(gray) % 2 == 1) {
      total -= product;
    } else {
      total += product;
    }
  }
  return (n % 2 == 1) ? -total : total;
}

std::size_t nonzero_permutation_count(const ComplexMatrix& m) {
  if (!m.is_square()) throw validation_error("permutation count: matrix is not square");
  if (m.rows() > 10) throw validation_error("permutation count: dimension above 10");
  std::vector<std::size_t> sigma(m.rows());
  std::iota(sigma.begin(), sigma.end(), std::size_t{0});
  std::size_t count = 0;
  do {
    bool nonzero = true;
    for (std::size_t q = 0; q < sigma.size() && nonzero; ++q) {
      nonzero = m(sigma[q], q) != Complex{};
    }
    if (nonzero) ++count;
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return count;
}

ComplexMatrix submatrix(const ComplexMatrix& m, const std::vector<std::size_t>& rows,
                        const std::vector<std::size_t>& cols) {
  if (rows.empty() || cols.empty()) throw validation_error("submatrix: empty selection");
  ComplexMatrix out(rows.size(), cols.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r] >= m.rows()) throw validation_error("submatrix: row out of range");
    for (std::size_t c = 0; c < cols.size(); ++c) {
      if (cols[c] >= m.cols()) throw validation_error("submatrix: column out of range");
      out(r, c) = m(rows[r], cols[c]);
    }
  }
  return out;
}

ComplexMatrix submatrix(const JsaMatrix& jsa, const std::vector<std::string>& idler_rows,
                        const std::vector<std::string>& signal_cols) {
  auto resolve = [](const std::vector<std::string>& labels, auto&& find) {
    std::vector<std::size_t> out;
    std::set<std::string> seen;
    for (const auto& label : labels) {
      if (!seen.insert(label).second) throw validation_error("duplicate channel label " + label);
      auto idx = find(label);
      if (!idx) throw validation_error("unknown channel label " + label);
      out.push_back(*idx);
    }
    return out;
  };
  auto rows = resolve(idler_rows, [&](const std::string& l) { return jsa.grid.find_idler(l); });
  auto cols = resolve(signal_cols, [&](const std::string& l) { return jsa.grid.find_signal(l); });
  return submatrix(jsa.entries, rows, cols);
}

ComplexMatrix abs_squared_matrix(const ComplexMatrix& m) {
  ComplexMatrix out(m.rows(), m.cols());
  auto src = m.data();
  auto dst = out.data();
  for (std::size_t k = 0; k < src.size(); ++k) dst[k] = Complex{std::norm(src[k]), 0.0};
  return out;
}

}  // namespace sis
