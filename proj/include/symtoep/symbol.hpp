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

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

#include "symtoep/detail/lapack.hpp"
#include "symtoep/errors.hpp"
#include "symtoep/fourier_stencil.hpp"
#include "symtoep/multi_index.hpp"

namespace symtoep {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr index_t kDefaultQuadratureSamples = 4096;
/// Quadrature coefficients must be real up to this imaginary residue.
inline constexpr double kImaginaryResidueTolerance = 1e-10;

namespace detail {

/// Reduce to the fundamental period [-pi, pi].
inline double wrap_to_pi(double x) {
  return x - kTwoPi * std::round(x / kTwoPi);
}

}  // namespace detail

/// A generating function: an explicit coefficient stencil, a separable
/// product of unilevel symbols, or a pointwise-evaluable function whose
/// coefficients are computed by tensorized midpoint quadrature. Values are
/// immutable after construction.
class SymbolSpec {
 public:
  enum class Kind { kStencil, kSeparable, kQuadrature };

  /// Pointwise evaluation; callables must be 2*pi-periodic in every argument.
  using Callable = std::function<double(std::span<const double>)>;
  /// Closed-form unilevel Fourier coefficients, indexed by offset.
  using CoefficientFn = std::function<double(index_t)>;

  static SymbolSpec stencil(FourierStencil s) {
    SymbolSpec out;
    out.kind_ = Kind::kStencil;
    out.levels_ = s.levels();
    out.stencil_.push_back(std::move(s));
    return out;
  }

  static SymbolSpec separable(std::vector<SymbolSpec> factors) {
    if (factors.empty()) {
      throw InvalidArgumentError("SymbolSpec: separable product of nothing");
    }
    for (const SymbolSpec& f : factors) {
      if (f.levels() != 1) {
        throw InvalidArgumentError(
            "SymbolSpec: separable factors must be unilevel");
      }
    }
    SymbolSpec out;
    out.kind_ = Kind::kSeparable;
    out.levels_ = factors.size();
    out.factors_ = std::move(factors);
    return out;
  }

  static SymbolSpec quadrature(Callable f, std::size_t levels,
                               MultiIndex truncation_degree,
                               index_t samples_per_dim =
                                   kDefaultQuadratureSamples) {
    if (levels == 0 || truncation_degree.levels() != levels) {
      throw InvalidArgumentError("SymbolSpec: bad quadrature level count");
    }
    SymbolSpec out;
    out.kind_ = Kind::kQuadrature;
    out.levels_ = levels;
    out.callable_ = std::move(f);
    out.degree_ = std::move(truncation_degree);
    out.samples_per_dim_ = samples_per_dim;
    out.check_quadrature_resolution(out.degree_);
    return out;
  }

  /// The 2*pi-periodic extension of theta^2 on [-pi, pi], with its classical
  /// closed-form coefficients supplied analytically so that no quadrature
  /// error enters downstream uses.
  static SymbolSpec theta_squared(
      MultiIndex truncation_degree = MultiIndex{8},
      index_t samples_per_dim = kDefaultQuadratureSamples) {
    SymbolSpec out = quadrature(
        [](std::span<const double> theta) {
          const double x = detail::wrap_to_pi(theta[0]);
          return x * x;
        },
        1, std::move(truncation_degree), samples_per_dim);
    out.analytic_coeffs_ = [](index_t j) {
      if (j == 0) return std::numbers::pi * std::numbers::pi / 3.0;
      const double sign = (j % 2 == 0) ? 1.0 : -1.0;
      return sign * 2.0 / (static_cast<double>(j) * static_cast<double>(j));
    };
    return out;
  }

  Kind kind() const { return kind_; }
  std::size_t levels() const { return levels_; }

  const FourierStencil& stencil_data() const {
    require_kind(Kind::kStencil, "stencil_data");
    return stencil_.front();
  }

  std::span<const SymbolSpec> factors() const {
    require_kind(Kind::kSeparable, "factors");
    return factors_;
  }

  const Callable& callable() const {
    require_kind(Kind::kQuadrature, "callable");
    return callable_;
  }

  const MultiIndex& truncation_degree() const {
    require_kind(Kind::kQuadrature, "truncation_degree");
    return degree_;
  }

  index_t samples_per_dim() const {
    require_kind(Kind::kQuadrature, "samples_per_dim");
    return samples_per_dim_;
  }

  bool has_analytic_coefficients() const {
    return static_cast<bool>(analytic_coeffs_);
  }

  const CoefficientFn& analytic_coefficients() const {
    return analytic_coeffs_;
  }

  void check_quadrature_resolution(const MultiIndex& degree) const {
    for (index_t r : degree) {
      if (samples_per_dim_ < 2 * r + 2) {
        throw InvalidArgumentError(
            "SymbolSpec: quadrature samples_per_dim too small for degree " +
            degree.to_string());
      }
    }
  }

 private:
  SymbolSpec() = default;

  void require_kind(Kind k, const char* what) const {
    if (kind_ != k) {
      throw InvalidArgumentError(std::string("SymbolSpec: ") + what +
                                 " on wrong variant");
    }
  }

  Kind kind_ = Kind::kStencil;
  std::size_t levels_ = 0;
  std::vector<FourierStencil> stencil_;  // empty or one element
  std::vector<SymbolSpec> factors_;
  Callable callable_;
  MultiIndex degree_;
  index_t samples_per_dim_ = 0;
  CoefficientFn analytic_coeffs_;
};

/// f(theta) = sum of coeff(j) exp(i<j,theta>). Stencil symbols use the finite
/// Fourier sum; quadrature symbols evaluate the underlying callable directly.
inline std::complex<double> evaluate(const SymbolSpec& spec,
                                     std::span<const double> theta) {
  if (theta.size() != spec.levels()) {
    throw InvalidArgumentError("evaluate: theta length mismatch");
  }
  switch (spec.kind()) {
    case SymbolSpec::Kind::kStencil: {
      const FourierStencil& s = spec.stencil_data();
      std::complex<double> acc = 0.0;
      const auto offsets = lex_enumerate(s.shape());
      for (std::size_t p = 0; p < offsets.size(); ++p) {
        const double c = s.coefficients()[p];
        if (c == 0.0) continue;
        double dot = 0.0;
        for (std::size_t t = 0; t < s.levels(); ++t) {
          dot += static_cast<double>(offsets[p][t] - s.degree()[t]) * theta[t];
        }
        acc += c * std::complex<double>(std::cos(dot), std::sin(dot));
      }
      return acc;
    }
    case SymbolSpec::Kind::kSeparable: {
      std::complex<double> acc = 1.0;
      std::size_t t = 0;
      for (const SymbolSpec& f : spec.factors()) {
        acc *= evaluate(f, theta.subspan(t, 1));
        ++t;
      }
      return acc;
    }
    case SymbolSpec::Kind::kQuadrature:
      return {spec.callable()(theta), 0.0};
  }
  throw InvalidArgumentError("evaluate: unknown variant");
}

namespace detail {

inline FourierStencil quadrature_stencil(const SymbolSpec& spec,
                                         const MultiIndex& degree) {
  spec.check_quadrature_resolution(degree);
  const std::size_t k = spec.levels();
  const index_t samples = spec.samples_per_dim();
  FourierStencil out{degree};

  if (spec.has_analytic_coefficients()) {
    // Unilevel by construction.
    for (index_t j = -degree[0]; j <= degree[0]; ++j) {
      out.at(MultiIndex{j}) = spec.analytic_coefficients()(j);
    }
    return out;
  }

  // Midpoint grid theta_s = -pi + 2 pi (s + 1/2) / M per dimension, and the
  // analysis phases exp(-i j theta_s) for every retained offset.
  std::vector<double> grid(static_cast<std::size_t>(samples));
  for (index_t s = 0; s < samples; ++s) {
    grid[static_cast<std::size_t>(s)] =
        -std::numbers::pi +
        kTwoPi * (static_cast<double>(s) + 0.5) / static_cast<double>(samples);
  }
  std::vector<std::vector<std::complex<double>>> phase(k);
  for (std::size_t t = 0; t < k; ++t) {
    const index_t width = 2 * degree[t] + 1;
    phase[t].resize(static_cast<std::size_t>(samples * width));
    for (index_t s = 0; s < samples; ++s) {
      for (index_t j = -degree[t]; j <= degree[t]; ++j) {
        const double arg = -static_cast<double>(j) * grid[s];
        phase[t][static_cast<std::size_t>(s * width + j + degree[t])] = {
            std::cos(arg), std::sin(arg)};
      }
    }
  }

  const auto offsets = lex_enumerate(out.shape());
  std::vector<std::complex<double>> acc(offsets.size(), 0.0);
  const MultiIndex grid_shape = MultiIndex::uniform(k, samples);
  const index_t total = product(grid_shape);
  std::vector<double> theta(k);
  for (index_t p = 0; p < total; ++p) {
    const MultiIndex s = multi_index(p, grid_shape);
    for (std::size_t t = 0; t < k; ++t) {
      theta[t] = grid[static_cast<std::size_t>(s[t])];
    }
    const double fv = spec.callable()(theta);
    for (std::size_t q = 0; q < offsets.size(); ++q) {
      std::complex<double> ph = 1.0;
      for (std::size_t t = 0; t < k; ++t) {
        const index_t width = 2 * degree[t] + 1;
        ph *= phase[t][static_cast<std::size_t>(s[t] * width + offsets[q][t])];
      }
      acc[q] += fv * ph;
    }
  }

  const double scale = 1.0 / std::pow(static_cast<double>(samples),
                                      static_cast<double>(k));
  double magnitude = 0.0;
  for (const auto& c : acc) magnitude = std::max(magnitude, std::abs(c));
  for (std::size_t q = 0; q < offsets.size(); ++q) {
    const std::complex<double> c = acc[q] * scale;
    if (std::abs(c.imag()) >
        kImaginaryResidueTolerance * std::max(1.0, magnitude * scale)) {
      throw NumericError(
          "quadrature coefficients are not real: the symbol violates the "
          "real-coefficient assumption");
    }
    out.coefficients()[q] = c.real();
  }
  return out;
}

inline FourierStencil reband(const FourierStencil& s, const MultiIndex& degree) {
  if (degree.levels() != s.levels()) {
    throw InvalidArgumentError("stencil_of: degree level mismatch");
  }
  if (degree == s.degree()) return s;
  FourierStencil out{degree};
  for (const MultiIndex& pos : lex_enumerate(out.shape())) {
    out.coefficients()[static_cast<std::size_t>(
        linear_index(pos, out.shape()))] = s.coefficient(pos - degree);
  }
  return out;
}

}  // namespace detail

/// Fourier coefficients of the symbol truncated to the given degree. For
/// separable symbols the result is the exact outer product of the factor
/// stencils; for quadrature symbols the coefficients come from the analysis
/// transform on the midpoint grid (or from closed-form coefficients when the
/// symbol carries them).
inline FourierStencil stencil_of(const SymbolSpec& spec,
                                 const MultiIndex& degree) {
  if (degree.levels() != spec.levels()) {
    throw InvalidArgumentError("stencil_of: degree level mismatch");
  }
  switch (spec.kind()) {
    case SymbolSpec::Kind::kStencil:
      return detail::reband(spec.stencil_data(), degree);
    case SymbolSpec::Kind::kSeparable: {
      std::vector<FourierStencil> parts;
      std::size_t t = 0;
      for (const SymbolSpec& f : spec.factors()) {
        parts.push_back(stencil_of(f, MultiIndex{degree[t]}));
        ++t;
      }
      return outer_product(parts);
    }
    case SymbolSpec::Kind::kQuadrature:
      return detail::quadrature_stencil(spec, degree);
  }
  throw InvalidArgumentError("stencil_of: unknown variant");
}

inline FourierStencil stencil_of(const SymbolSpec& spec) {
  switch (spec.kind()) {
    case SymbolSpec::Kind::kStencil:
      return spec.stencil_data();
    case SymbolSpec::Kind::kSeparable: {
      std::vector<FourierStencil> parts;
      for (const SymbolSpec& f : spec.factors()) parts.push_back(stencil_of(f));
      return outer_product(parts);
    }
    case SymbolSpec::Kind::kQuadrature:
      return detail::quadrature_stencil(spec, spec.truncation_degree());
  }
  throw InvalidArgumentError("stencil_of: unknown variant");
}

/// Tensorized midpoint approximation of the L1 norm over [-pi, pi]^k.
inline double l1_norm(const SymbolSpec& spec, index_t samples_per_dim) {
  if (samples_per_dim < 16) {
    throw InvalidArgumentError("l1_norm: samples_per_dim must be >= 16");
  }
  const std::size_t k = spec.levels();
  const MultiIndex grid_shape = MultiIndex::uniform(k, samples_per_dim);
  const index_t total = product(grid_shape);
  std::vector<double> theta(k);
  double acc = 0.0;
  for (index_t p = 0; p < total; ++p) {
    const MultiIndex s = multi_index(p, grid_shape);
    for (std::size_t t = 0; t < k; ++t) {
      theta[t] = -std::numbers::pi +
                 kTwoPi * (static_cast<double>(s[t]) + 0.5) /
                     static_cast<double>(samples_per_dim);
    }
    acc += std::abs(evaluate(spec, theta));
  }
  const double cell = std::pow(kTwoPi / static_cast<double>(samples_per_dim),
                               static_cast<double>(k));
  return acc * cell;
}

/// Splits a bilevel stencil with numerically rank-1 coefficient matrix into
/// unilevel factors u, v with u * v^T equal to the matrix. The first nonzero
/// entry of u is positive; u has unit Euclidean norm.
inline std::pair<FourierStencil, FourierStencil> stencil_rank1_factor(
    const FourierStencil& s) {
  if (s.levels() != 2) {
    throw InvalidArgumentError("stencil_rank1_factor: bilevel stencil required");
  }
  const lapack_int m = static_cast<lapack_int>(s.shape()[0]);
  const lapack_int n = static_cast<lapack_int>(s.shape()[1]);
  std::vector<double> a(s.coefficients().begin(), s.coefficients().end());
  std::vector<double> sv;
  std::vector<double> u;
  std::vector<double> v;
  detail::svd_thin(std::move(a), m, n, sv, u, v);

  FourierStencil row_factor{MultiIndex{s.degree()[0]}};
  FourierStencil col_factor{MultiIndex{s.degree()[1]}};
  if (sv[0] == 0.0) return {row_factor, col_factor};  // zero stencil
  if (sv.size() > 1 && sv[1] > 1e-10 * sv[0]) {
    throw InvalidArgumentError(
        "stencil_rank1_factor: coefficient matrix is not separable (numerical "
        "rank exceeds 1)");
  }

  const lapack_int kcols = std::min(m, n);
  double sign = 1.0;
  for (lapack_int i = 0; i < m; ++i) {
    const double ui = u[static_cast<std::size_t>(i) * kcols];
    if (std::abs(ui) > 1e-14) {
      sign = ui > 0.0 ? 1.0 : -1.0;
      break;
    }
  }
  for (lapack_int i = 0; i < m; ++i) {
    row_factor.coefficients()[static_cast<std::size_t>(i)] =
        sign * u[static_cast<std::size_t>(i) * kcols];
  }
  for (lapack_int j = 0; j < n; ++j) {
    col_factor.coefficients()[static_cast<std::size_t>(j)] =
        sign * sv[0] * v[static_cast<std::size_t>(j) * kcols];
  }

  for (lapack_int i = 0; i < m; ++i) {
    for (lapack_int j = 0; j < n; ++j) {
      const double rebuilt = row_factor.coefficients()[i] *
                             col_factor.coefficients()[j];
      const double want = s.coefficients()[static_cast<std::size_t>(i) * n + j];
      if (std::abs(rebuilt - want) > 1e-12 * std::max(1.0, sv[0])) {
        throw NumericError("stencil_rank1_factor: reconstruction residual");
      }
    }
  }
  return {row_factor, col_factor};
}

/// All nonzero (coefficient, offset) pairs in lexicographic offset order.
/// Each term is a separable monomial by construction.
inline std::vector<std::pair<double, MultiIndex>> monomial_decompose(
    const FourierStencil& s) {
  std::vector<std::pair<double, MultiIndex>> out;
  const auto offsets = lex_enumerate(s.shape());
  for (std::size_t p = 0; p < offsets.size(); ++p) {
    const double c = s.coefficients()[p];
    if (c == 0.0) continue;
    out.emplace_back(c, offsets[p] - s.degree());
  }
  return out;
}

}  // namespace symtoep
