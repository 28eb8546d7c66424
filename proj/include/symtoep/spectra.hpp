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

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "symtoep/dense_matrix.hpp"
#include "symtoep/detail/lapack.hpp"
#include "symtoep/errors.hpp"
#include "symtoep/multi_index.hpp"

namespace symtoep {

enum class SpectrumKind { kEigenvalues, kSingularValues };

/// Sorted (ascending) eigenvalues or singular values.
struct Spectrum {
  std::vector<double> values;
  SpectrumKind kind = SpectrumKind::kEigenvalues;
};

namespace detail {

inline void require_finite(const DenseMatrix& a, const char* what) {
  if (!all_finite(a)) {
    throw NumericError(std::string(what) + ": non-finite entries");
  }
}

}  // namespace detail

/// Eigenvalues of a symmetric matrix, ascending. The input must be symmetric
/// to 1e-12 * max|a_ij|. With check_factorization the eigenvector
/// factorization is computed as well and the reconstruction residual
/// ||A Q - Q Lambda||_max is verified against 1e-9 * ||A||_2.
inline Spectrum eig_sym(const DenseMatrix& a, bool check_factorization = false) {
  if (a.rows() != a.cols()) {
    throw InvalidArgumentError("eig_sym: square matrix required");
  }
  detail::require_finite(a, "eig_sym");
  const double scale = max_abs(a);
  for (index_t i = 0; i < a.rows(); ++i) {
    for (index_t j = i + 1; j < a.cols(); ++j) {
      if (std::abs(a(i, j) - a(j, i)) > 1e-12 * scale) {
        throw NumericError("eig_sym: input is not symmetric");
      }
    }
  }

  std::vector<double> buf(a.data().begin(), a.data().end());
  const lapack_int n = static_cast<lapack_int>(a.rows());
  std::vector<double> vectors;
  std::vector<double> w = detail::symmetric_eigenvalues(
      std::move(buf), n, check_factorization ? &vectors : nullptr);

  if (check_factorization && n > 0) {
    double norm = 0.0;
    for (double v : w) norm = std::max(norm, std::abs(v));
    double residual = 0.0;
    for (lapack_int i = 0; i < n; ++i) {
      for (lapack_int j = 0; j < n; ++j) {
        double acc = 0.0;
        for (lapack_int l = 0; l < n; ++l) {
          acc += a(i, l) * vectors[static_cast<std::size_t>(l) * n + j];
        }
        acc -= vectors[static_cast<std::size_t>(i) * n + j] *
               w[static_cast<std::size_t>(j)];
        residual = std::max(residual, std::abs(acc));
      }
    }
    if (residual > 1e-9 * std::max(norm, std::numeric_limits<double>::min())) {
      throw NumericError("eig_sym: factorization residual too large");
    }
  }
  return {std::move(w), SpectrumKind::kEigenvalues};
}

/// Singular values, nonnegative and ascending.
inline Spectrum singular_values(const DenseMatrix& a) {
  detail::require_finite(a, "singular_values");
  std::vector<double> buf(a.data().begin(), a.data().end());
  std::vector<double> s = detail::svd_values(
      std::move(buf), static_cast<lapack_int>(a.rows()),
      static_cast<lapack_int>(a.cols()));
  return {std::move(s), SpectrumKind::kSingularValues};
}

/// Schatten-1 norm: the sum of all singular values.
inline double trace_norm(const DenseMatrix& a) {
  const Spectrum s = singular_values(a);
  double acc = 0.0;
  for (double v : s.values) acc += v;
  return acc;
}

/// Count of singular values above max(rows, cols) * eps * sigma_max.
inline index_t numerical_rank(const DenseMatrix& a) {
  const Spectrum s = singular_values(a);
  if (s.values.empty()) return 0;
  const double sigma_max = s.values.back();
  const double tol = static_cast<double>(std::max(a.rows(), a.cols())) *
                     std::numeric_limits<double>::epsilon() * sigma_max;
  index_t rank = 0;
  for (double v : s.values) {
    if (v > tol) ++rank;
  }
  return rank;
}

}  // namespace symtoep
