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

#include <cstddef>
#include <string>
#include <vector>

#include "sis/frequency_grid.hpp"
#include "sis/types.hpp"

namespace sis {

inline constexpr std::size_t kMaxPermanentDimension = 20;

/// Permanent of a square matrix via Ryser's inclusion-exclusion formula,
/// walking column subsets in Gray-code order so each step updates the row
/// sums with a single column. O(2^n n).
Complex permanent(const ComplexMatrix& m);

/// Number of permutations sigma with a nonzero product prod_q m[sigma(q)][q].
/// Brute force; meant for the small submatrices that outcome patterns select.
std::size_t nonzero_permutation_count(const ComplexMatrix& m);

/// Rows and columns picked by channel label (`i1`, `s3`, ...) in the order
/// given. Shapes need not match.
ComplexMatrix submatrix(const JsaMatrix& jsa, const std::vector<std::string>& idler_rows,
                        const std::vector<std::string>& signal_cols);

/// Index-based variant used internally.
ComplexMatrix submatrix(const ComplexMatrix& m, const std::vector<std::size_t>& rows,
                        const std::vector<std::size_t>& cols);

/// Entrywise |m_jk|^2 with exactly zero imaginary parts.
ComplexMatrix abs_squared_matrix(const ComplexMatrix& m);

}  // namespace sis
