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

#include <istream>
#include <ostream>
#include <span>
#include <utility>
#include <vector>

#include "symtoep/detail/format.hpp"
#include "symtoep/errors.hpp"
#include "symtoep/multi_index.hpp"

namespace symtoep {

/// Dense array of real Fourier coefficients of a trigonometric polynomial of
/// degree r: the value for offset j, |j_t| <= r_t, is stored at position j + r
/// of a (2r_1+1) x ... x (2r_k+1) array in lexicographic order (first level
/// slowest). Coefficients are real throughout; the symbol f(theta) is the sum
/// of coeff(j) * exp(i<j,theta>).
class FourierStencil {
 public:
  explicit FourierStencil(MultiIndex degree) : degree_(std::move(degree)) {
    if (degree_.levels() == 0) {
      throw InvalidArgumentError("FourierStencil: empty degree");
    }
    std::vector<index_t> shape(degree_.levels());
    for (std::size_t t = 0; t < degree_.levels(); ++t) {
      if (degree_[t] < 0) {
        throw InvalidArgumentError("FourierStencil: negative degree " +
                                   degree_.to_string());
      }
      shape[t] = 2 * degree_[t] + 1;
    }
    shape_ = MultiIndex(std::move(shape));
    coeffs_.assign(static_cast<std::size_t>(product(shape_)), 0.0);
  }

  std::size_t levels() const { return degree_.levels(); }
  const MultiIndex& degree() const { return degree_; }
  /// Shape 2r+1 of the coefficient array.
  const MultiIndex& shape() const { return shape_; }

  bool in_band(const MultiIndex& j) const {
    if (j.levels() != degree_.levels()) {
      throw InvalidArgumentError("FourierStencil: offset level mismatch");
    }
    for (std::size_t t = 0; t < j.levels(); ++t) {
      if (j[t] < -degree_[t] || j[t] > degree_[t]) return false;
    }
    return true;
  }

  /// Coefficient for offset j; zero outside the band.
  double coefficient(const MultiIndex& j) const {
    if (!in_band(j)) return 0.0;
    return coeffs_[static_cast<std::size_t>(linear_index(j + degree_, shape_))];
  }

  double& at(const MultiIndex& j) {
    if (!in_band(j)) {
      throw InvalidArgumentError("FourierStencil: offset " + j.to_string() +
                                 " outside band of degree " +
                                 degree_.to_string());
    }
    return coeffs_[static_cast<std::size_t>(linear_index(j + degree_, shape_))];
  }

  std::span<const double> coefficients() const { return coeffs_; }
  std::span<double> coefficients() { return coeffs_; }

  bool operator==(const FourierStencil&) const = default;

 private:
  MultiIndex degree_;
  MultiIndex shape_;
  std::vector<double> coeffs_;
};

/// Coefficient array of the separable product of unilevel factors: exact
/// products of the stored reals, no quadrature involved.
inline FourierStencil outer_product(std::span<const FourierStencil> factors) {
  if (factors.empty()) {
    throw InvalidArgumentError("outer_product: no factors");
  }
  std::vector<index_t> degree;
  for (const FourierStencil& f : factors) {
    if (f.levels() != 1) {
      throw InvalidArgumentError("outer_product: factors must be unilevel");
    }
    degree.push_back(f.degree()[0]);
  }
  FourierStencil out{MultiIndex(std::move(degree))};
  const std::size_t k = factors.size();
  const auto offsets = lex_enumerate(out.shape());
  for (const MultiIndex& pos : offsets) {
    double v = 1.0;
    for (std::size_t t = 0; t < k; ++t) {
      v *= factors[t].coefficients()[static_cast<std::size_t>(pos[t])];
    }
    out.coefficients()[static_cast<std::size_t>(linear_index(pos, out.shape()))] =
        v;
  }
  return out;
}

/// Text format: line 1 is "k r_1 ... r_k"; the following lines hold the
/// flattened coefficients in lexicographic order, one per line, with 17
/// significant digits.
inline void write_stencil(std::ostream& os, const FourierStencil& s) {
  os << s.levels();
  for (index_t r : s.degree()) os << ' ' << r;
  os << '\n';
  for (double v : s.coefficients()) os << detail::to_decimal17(v) << '\n';
}

inline FourierStencil read_stencil(std::istream& is) {
  std::size_t k = 0;
  if (!(is >> k) || k == 0) {
    throw IoError("stencil file: bad level count");
  }
  std::vector<index_t> degree(k);
  for (std::size_t t = 0; t < k; ++t) {
    if (!(is >> degree[t]) || degree[t] < 0) {
      throw IoError("stencil file: bad degree entry");
    }
  }
  FourierStencil out{MultiIndex(std::move(degree))};
  for (double& v : out.coefficients()) {
    if (!(is >> v)) throw IoError("stencil file: truncated coefficients");
  }
  return out;
}

}  // namespace symtoep
