// Copyright 2026 The symtoep Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <lapacke.h>

#include <algorithm>
#include <string>
#include <vector>

#include "symtoep/errors.hpp"

namespace symtoep::detail {

/// Eigenvalues of a symmetric matrix given as a row-major n x n array,
/// ascending. When eigenvectors is non-null the orthonormal eigenvector
/// columns are returned there (row-major n x n).
inline std::vector<double> symmetric_eigenvalues(
    std::vector<double> a, lapack_int n, std::vector<double>* eigenvectors) {
  std::vector<double> w(static_cast<std::size_t>(std::max<lapack_int>(n, 1)));
  const char jobz = eigenvectors != nullptr ? 'V' : 'N';
  const lapack_int info =
      LAPACKE_dsyevd(LAPACK_ROW_MAJOR, jobz, 'U', n, a.data(), n, w.data());
  if (info != 0) {
    throw NumericError("dsyevd failed (info=" + std::to_string(info) + ")");
  }
  w.resize(static_cast<std::size_t>(n));
  if (eigenvectors != nullptr) *eigenvectors = std::move(a);
  return w;
}

/// Singular values of a row-major m x n array, ascending.
inline std::vector<double> svd_values(std::vector<double> a, lapack_int m,
                                      lapack_int n) {
  const lapack_int k = std::min(m, n);
  std::vector<double> s(static_cast<std::size_t>(std::max<lapack_int>(k, 1)));
  const lapack_int info = LAPACKE_dgesdd(LAPACK_ROW_MAJOR, 'N', m, n, a.data(),
                                         n, s.data(), nullptr, m, nullptr, n);
  if (info != 0) {
    throw NumericError("dgesdd failed (info=" + std::to_string(info) + ")");
  }
  s.resize(static_cast<std::size_t>(k));
  std::reverse(s.begin(), s.end());
  return s;
}

/// Thin SVD of a row-major m x n array: singular values descending, left
/// singular vectors in u (m x k column-major-by-column in row-major layout),
/// right singular vectors (not transposed) in v (n x k).
inline void svd_thin(std::vector<double> a, lapack_int m, lapack_int n,
                     std::vector<double>& s, std::vector<double>& u,
                     std::vector<double>& v) {
  const lapack_int k = std::min(m, n);
  s.assign(static_cast<std::size_t>(k), 0.0);
  u.assign(static_cast<std::size_t>(m) * k, 0.0);
  std::vector<double> vt(static_cast<std::size_t>(k) * n, 0.0);
  const lapack_int info = LAPACKE_dgesdd(LAPACK_ROW_MAJOR, 'S', m, n, a.data(),
                                         n, s.data(), u.data(), k, vt.data(), n);
  if (info != 0) {
    throw NumericError("dgesdd failed (info=" + std::to_string(info) + ")");
  }
  v.assign(static_cast<std::size_t>(n) * k, 0.0);
  for (lapack_int i = 0; i < n; ++i) {
    for (lapack_int j = 0; j < k; ++j) {
      v[static_cast<std::size_t>(i) * k + j] =
          vt[static_cast<std::size_t>(j) * n + i];
    }
  }
}

}  // namespace symtoep::detail
