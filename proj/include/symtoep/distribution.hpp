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
#include <span>
#include <utility>
#include <vector>

#include "symtoep/errors.hpp"
#include "symtoep/multi_index.hpp"
#include "symtoep/spectra.hpp"
#include "symtoep/symbol.hpp"
#include "symtoep/toeplitz.hpp"

namespace symtoep {

// ---------------------------------------------------------------------------
// Two-branch symbol samplers.
//
// The symmetrized sequence distributes as a function taking the values +|f|
// on one hyperoctant of [-2pi,2pi]^k and -|f| on the opposite one. Two
// parameterizations of that function are provided: a shift-based one (psi,
// the negative branch reads -|f(theta + 2pi)|) and a reflection-based one
// (phi, the negative branch reads -|f(-theta)|). For separable symbols the
// tensor product of the unilevel shift-based samplers (h) covers the whole
// cube [-2pi,2pi]^k.
// ---------------------------------------------------------------------------

namespace detail {

enum class Orthant { kNonNegative, kNonPositive, kMixed };

inline Orthant classify_orthant(std::span<const double> theta) {
  bool all_nonneg = true;
  bool all_nonpos = true;
  for (double v : theta) {
    if (std::abs(v) > kTwoPi) {
      throw InvalidArgumentError("symbol sampler: point outside [-2pi,2pi]^k");
    }
    if (v < 0.0) all_nonneg = false;
    if (v > 0.0) all_nonpos = false;
  }
  // The all-zero point belongs to the positive branch.
  if (all_nonneg) return Orthant::kNonNegative;
  if (all_nonpos) return Orthant::kNonPositive;
  return Orthant::kMixed;
}

}  // namespace detail

/// Shift-based two-branch sample: |f(theta)| for theta in [0,2pi]^k,
/// -|f(theta + 2pi)| for theta in [-2pi,0]^k (theta = 0 goes to the positive
/// branch). Points outside the two hyperoctants are a domain error.
inline double psi_sample(const SymbolSpec& f, std::span<const double> theta) {
  if (theta.size() != f.levels()) {
    throw InvalidArgumentError("psi_sample: theta length mismatch");
  }
  switch (detail::classify_orthant(theta)) {
    case detail::Orthant::kNonNegative:
      return std::abs(evaluate(f, theta));
    case detail::Orthant::kNonPositive: {
      std::vector<double> shifted(theta.begin(), theta.end());
      for (double& v : shifted) v += kTwoPi;
      return -std::abs(evaluate(f, shifted));
    }
    case detail::Orthant::kMixed:
      throw InvalidArgumentError(
          "psi_sample: point outside the two-branch domain");
  }
  throw InvalidArgumentError("psi_sample: unreachable");
}

/// Reflection-based two-branch sample: |f(theta)| on the nonnegative
/// hyperoctant, -|f(-theta)| on the nonpositive one. Same domain as
/// psi_sample; boundary points with a zero component resolve the same way.
inline double phi_sample(const SymbolSpec& f, std::span<const double> theta) {
  if (theta.size() != f.levels()) {
    throw InvalidArgumentError("phi_sample: theta length mismatch");
  }
  switch (detail::classify_orthant(theta)) {
    case detail::Orthant::kNonNegative:
      return std::abs(evaluate(f, theta));
    case detail::Orthant::kNonPositive: {
      std::vector<double> reflected(theta.begin(), theta.end());
      for (double& v : reflected) v = -v;
      return -std::abs(evaluate(f, reflected));
    }
    case detail::Orthant::kMixed:
      throw InvalidArgumentError(
          "phi_sample: point outside the two-branch domain");
  }
  throw InvalidArgumentError("phi_sample: unreachable");
}

/// Product of unilevel shift-based samples, defined on all of [-2pi,2pi]^k:
/// factor t contributes |f_t(theta_t)| for theta_t in [0,2pi] and
/// -|f_t(theta_t + 2pi)| for theta_t in [-2pi,0).
inline double h_sample(std::span<const SymbolSpec> factors,
                       std::span<const double> theta) {
  if (factors.empty() || factors.size() != theta.size()) {
    throw InvalidArgumentError("h_sample: factor/point length mismatch");
  }
  double acc = 1.0;
  for (std::size_t t = 0; t < factors.size(); ++t) {
    if (factors[t].levels() != 1) {
      throw InvalidArgumentError("h_sample: factors must be unilevel");
    }
    const double v = theta[t];
    if (std::abs(v) > kTwoPi) {
      throw InvalidArgumentError("h_sample: point outside [-2pi,2pi]^k");
    }
    const double point[1] = {v >= 0.0 ? v : v + kTwoPi};
    const double mag = std::abs(evaluate(factors[t], point));
    acc *= v >= 0.0 ? mag : -mag;
  }
  return acc;
}

/// Convenience overload for a separable SymbolSpec.
inline double h_sample(const SymbolSpec& f, std::span<const double> theta) {
  if (f.kind() != SymbolSpec::Kind::kSeparable) {
    throw InvalidArgumentError("h_sample: separable symbol required");
  }
  return h_sample(f.factors(), theta);
}

// ---------------------------------------------------------------------------
// Sampling grids.
// ---------------------------------------------------------------------------

enum class GridKind { kXiUnion, kThetaUniform };

/// A list of N(n) sample points in [-2pi,2pi]^k (k = 2 for both kinds).
struct GridSpec {
  GridKind kind = GridKind::kXiUnion;
  MultiIndex n;
  std::size_t point_dim = 0;
  std::vector<double> coords;  // point-major, point_dim values per point

  index_t num_points() const {
    return static_cast<index_t>(coords.size() / point_dim);
  }
  std::span<const double> point(index_t i) const {
    return {coords.data() + static_cast<std::size_t>(i) * point_dim, point_dim};
  }
};

/// The union grid for the two-branch samplers: the (n_1/2) x n_2 points
/// gamma_{j1,j2} = 2pi (j1/(n_1/2 - 1), j2/(n_2 - 1)) together with their
/// shift gamma - 2pi, listed as N(n) points (the origin appears in both
/// halves). Requires k = 2, even n_1 >= 4, n_2 >= 2.
inline GridSpec xi_grid(const MultiIndex& n) {
  if (n.levels() != 2) {
    throw InvalidArgumentError("xi_grid: defined for two levels only");
  }
  product(n);
  if (n[0] % 2 != 0 || n[0] < 4) {
    throw InvalidArgumentError("xi_grid: n_1 must be even and >= 4");
  }
  if (n[1] < 2) {
    throw InvalidArgumentError("xi_grid: n_2 must be >= 2");
  }
  const index_t half_rows = n[0] / 2;
  GridSpec out;
  out.kind = GridKind::kXiUnion;
  out.n = n;
  out.point_dim = 2;
  out.coords.reserve(static_cast<std::size_t>(2 * product(n)));
  for (int shift = 0; shift < 2; ++shift) {
    const double delta = shift == 0 ? 0.0 : -kTwoPi;
    for (index_t j1 = 0; j1 < half_rows; ++j1) {
      for (index_t j2 = 0; j2 < n[1]; ++j2) {
        out.coords.push_back(kTwoPi * static_cast<double>(j1) /
                                 static_cast<double>(half_rows - 1) +
                             delta);
        out.coords.push_back(kTwoPi * static_cast<double>(j2) /
                                 static_cast<double>(n[1] - 1) +
                             delta);
      }
    }
  }
  return out;
}

/// The uniform grid over [-2pi,2pi]^2:
/// theta_{j1,j2} = 4pi (j1/(n_1-1), j2/(n_2-1)) - 2pi. Requires n_t >= 2.
inline GridSpec theta_grid(const MultiIndex& n) {
  if (n.levels() != 2) {
    throw InvalidArgumentError("theta_grid: defined for two levels only");
  }
  product(n);
  for (index_t v : n) {
    if (v < 2) {
      throw InvalidArgumentError("theta_grid: every n_t must be >= 2");
    }
  }
  GridSpec out;
  out.kind = GridKind::kThetaUniform;
  out.n = n;
  out.point_dim = 2;
  out.coords.reserve(static_cast<std::size_t>(2 * product(n)));
  for (index_t j1 = 0; j1 < n[0]; ++j1) {
    for (index_t j2 = 0; j2 < n[1]; ++j2) {
      out.coords.push_back(2.0 * kTwoPi * static_cast<double>(j1) /
                               static_cast<double>(n[0] - 1) -
                           kTwoPi);
      out.coords.push_back(2.0 * kTwoPi * static_cast<double>(j2) /
                               static_cast<double>(n[1] - 1) -
                           kTwoPi);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Sorted matching and distribution functionals.
// ---------------------------------------------------------------------------

/// Sentinel: pick the outlier threshold as 10x the run's own mean error.
inline constexpr double kAutoOutlierThreshold =
    std::numeric_limits<double>::quiet_NaN();

/// Pairing of a spectrum with symbol samples after sorting both ascending.
struct SpectrumReport {
  std::vector<double> eigenvalues;
  std::vector<double> samples;
  std::vector<double> per_index_abs_err;
  double mean_abs_err = 0.0;
  double max_abs_err = 0.0;
  double wasserstein1 = 0.0;  // equals mean_abs_err for sorted matching
  double outlier_threshold = 0.0;
  index_t outlier_count = 0;
};

inline SpectrumReport match_sorted(const Spectrum& spectrum,
                                   std::vector<double> samples,
                                   double outlier_threshold =
                                       kAutoOutlierThreshold) {
  if (spectrum.values.size() != samples.size()) {
    throw InvalidArgumentError("match_sorted: length mismatch");
  }
  if (samples.empty()) {
    throw InvalidArgumentError("match_sorted: empty input");
  }
  SpectrumReport report;
  report.eigenvalues = spectrum.values;  // already ascending
  std::sort(samples.begin(), samples.end());
  report.samples = std::move(samples);
  report.per_index_abs_err.resize(report.samples.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < report.samples.size(); ++i) {
    const double err = std::abs(report.eigenvalues[i] - report.samples[i]);
    report.per_index_abs_err[i] = err;
    sum += err;
    report.max_abs_err = std::max(report.max_abs_err, err);
  }
  report.mean_abs_err = sum / static_cast<double>(report.samples.size());
  report.wasserstein1 = report.mean_abs_err;
  report.outlier_threshold = std::isnan(outlier_threshold)
                                 ? 10.0 * report.mean_abs_err
                                 : outlier_threshold;
  for (double err : report.per_index_abs_err) {
    if (err > report.outlier_threshold) ++report.outlier_count;
  }
  return report;
}

/// Mean absolute difference of two sorted sample vectors (the 1-Wasserstein
/// distance of the empirical distributions).
inline double sorted_wasserstein1(std::vector<double> a,
                                  std::vector<double> b) {
  if (a.size() != b.size() || a.empty()) {
    throw InvalidArgumentError("sorted_wasserstein1: length mismatch");
  }
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += std::abs(a[i] - b[i]);
  return sum / static_cast<double>(a.size());
}

/// Continuous test function with bounded support:
/// F(x) = max(0, 1 - |x - center| / width).
struct HatFunction {
  double center = 0.0;
  double width = 1.0;
  double operator()(double x) const {
    return std::max(0.0, 1.0 - std::abs(x - center) / width);
  }
};

/// Hat functions with centers uniformly spanning [lo, hi] and width twice the
/// center spacing.
inline std::vector<HatFunction> hat_family(double lo, double hi, int count) {
  if (count < 1) {
    throw InvalidArgumentError("hat_family: empty test family");
  }
  std::vector<HatFunction> out;
  out.reserve(static_cast<std::size_t>(count));
  const double spacing = count > 1 ? (hi - lo) / (count - 1) : 0.0;
  const double width = spacing > 0.0 ? 2.0 * spacing : 1.0;
  for (int i = 0; i < count; ++i) {
    out.push_back({lo + spacing * i, width});
  }
  return out;
}

enum class DistributionTarget {
  kPsi,     // two-branch values, domain measure 2 (2pi)^k
  kPhi,     // reflection parameterization; same branch values as kPsi
  kH,       // separable tensor sampler on [-2pi,2pi]^k, measure (4pi)^k
  kAbsPsi,  // |two-branch values| (singular value comparisons)
  kAbsH,
};

/// max over the test family of | mean of F over the spectrum - mean of F(g) |
/// where g is the chosen distribution symbol and its mean is the midpoint-rule
/// integral over g's domain, normalized by the domain measure. fine_samples
/// is the midpoint resolution per dimension.
inline double functional_discrepancy(const Spectrum& spectrum,
                                     const SymbolSpec& f,
                                     DistributionTarget target,
                                     std::span<const HatFunction> test_functions,
                                     index_t fine_samples) {
  if (test_functions.empty()) {
    throw InvalidArgumentError("functional_discrepancy: empty test family");
  }
  if (spectrum.values.empty()) {
    throw InvalidArgumentError("functional_discrepancy: empty spectrum");
  }
  if (fine_samples < 2) {
    throw InvalidArgumentError("functional_discrepancy: fine_samples too small");
  }
  const std::size_t k = f.levels();
  const MultiIndex grid_shape = MultiIndex::uniform(k, fine_samples);
  const index_t total = product(grid_shape);

  // Midpoint samples of the symbol side. For the two-branch targets the
  // integral over both hyperoctants reduces by periodicity to the positive
  // one, with both signs contributing at every point.
  std::vector<double> symbol_values;
  const bool two_branch = target == DistributionTarget::kPsi ||
                          target == DistributionTarget::kPhi ||
                          target == DistributionTarget::kAbsPsi;
  symbol_values.reserve(static_cast<std::size_t>(two_branch ? 2 * total
                                                            : total));
  std::vector<double> theta(k);
  for (index_t p = 0; p < total; ++p) {
    const MultiIndex s = multi_index(p, grid_shape);
    if (two_branch) {
      for (std::size_t t = 0; t < k; ++t) {
        theta[t] = kTwoPi * (static_cast<double>(s[t]) + 0.5) /
                   static_cast<double>(fine_samples);
      }
      const double mag = std::abs(evaluate(f, theta));
      if (target == DistributionTarget::kAbsPsi) {
        symbol_values.push_back(mag);
        symbol_values.push_back(mag);
      } else {
        symbol_values.push_back(mag);
        symbol_values.push_back(-mag);
      }
    } else {
      for (std::size_t t = 0; t < k; ++t) {
        theta[t] = -kTwoPi + 2.0 * kTwoPi * (static_cast<double>(s[t]) + 0.5) /
                                 static_cast<double>(fine_samples);
      }
      const double v = h_sample(f, theta);
      symbol_values.push_back(target == DistributionTarget::kAbsH ? std::abs(v)
                                                                  : v);
    }
  }

  double worst = 0.0;
  for (const HatFunction& test : test_functions) {
    double spectral_mean = 0.0;
    for (double v : spectrum.values) spectral_mean += test(v);
    spectral_mean /= static_cast<double>(spectrum.values.size());

    double symbol_mean = 0.0;
    for (double v : symbol_values) symbol_mean += test(v);
    symbol_mean /= static_cast<double>(symbol_values.size());

    worst = std::max(worst, std::abs(spectral_mean - symbol_mean));
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Approximating-class certificates.
// ---------------------------------------------------------------------------

/// Outcome of one small-rank / small-norm splitting check.
struct AcsReport {
  index_t m = 0;               // truncation parameter of this report
  double rank_fraction = 0.0;  // measured rank / N(n)
  double measured = 0.0;       // measured quantity (rank fraction or
                               // trace norm per matrix order)
  double bound = 0.0;          // the certified bound for the measured quantity
  bool passed = false;
};

/// Verifies the small-rank splitting of the symmetrization for a polynomial
/// symbol: the correction returned by decompose_blocks must have rank at most
/// 2 r_1 N(n) / n_1.
inline AcsReport acs_check_polynomial(const FourierStencil& stencil,
                                      const MultiIndex& n,
                                      index_t dense_limit = kDefaultDenseLimit) {
  const BlockDecomposition parts = decompose_blocks(stencil, n, dense_limit);
  const index_t total = product(n);
  const index_t rank = numerical_rank(parts.correction);
  const double bound = 2.0 * static_cast<double>(stencil.degree()[0]) *
                       static_cast<double>(total) / static_cast<double>(n[0]);
  AcsReport report;
  report.m = n[0];
  report.rank_fraction =
      static_cast<double>(rank) / static_cast<double>(total);
  report.measured = report.rank_fraction;
  report.bound = bound / static_cast<double>(total);
  report.passed = static_cast<double>(rank) <= bound;
  return report;
}

/// Verifies the trace-norm splitting criterion for truncations of a general
/// symbol: for each degree m, the scaled trace norm of T_n[f] - T_n[f_m] must
/// be bounded by the scaled L1 distance of the symbols. f is represented at
/// full bandwidth (degree n - 1) on the matrix side; the L1 side is measured
/// by midpoint sampling with l1_samples_per_dim points per dimension.
inline std::vector<AcsReport> acs_check_truncation(
    const SymbolSpec& f, std::span<const MultiIndex> truncation_degrees,
    const MultiIndex& n, index_t l1_samples_per_dim = 1024,
    index_t dense_limit = kDefaultDenseLimit) {
  const std::size_t k = f.levels();
  if (n.levels() != k) {
    throw InvalidArgumentError("acs_check_truncation: level mismatch");
  }
  std::vector<index_t> full(k);
  for (std::size_t t = 0; t < k; ++t) full[t] = n[t] - 1;
  const FourierStencil full_stencil = stencil_of(f, MultiIndex(full));
  const DenseMatrix reference = build_toeplitz(full_stencil, n, dense_limit);
  const index_t total = product(n);

  std::vector<AcsReport> reports;
  for (const MultiIndex& degree : truncation_degrees) {
    const FourierStencil truncated = stencil_of(f, degree);
    const DenseMatrix approx = build_toeplitz(truncated, n, dense_limit);
    const double measured =
        trace_norm(reference - approx) / static_cast<double>(total);

    const SymbolSpec truncated_symbol = SymbolSpec::stencil(truncated);
    const MultiIndex grid_shape = MultiIndex::uniform(k, l1_samples_per_dim);
    const index_t grid_total = product(grid_shape);
    std::vector<double> theta(k);
    double l1 = 0.0;
    for (index_t p = 0; p < grid_total; ++p) {
      const MultiIndex s = multi_index(p, grid_shape);
      for (std::size_t t = 0; t < k; ++t) {
        theta[t] = -std::numbers::pi +
                   kTwoPi * (static_cast<double>(s[t]) + 0.5) /
                       static_cast<double>(l1_samples_per_dim);
      }
      l1 += std::abs(evaluate(f, theta) - evaluate(truncated_symbol, theta));
    }
    l1 *= std::pow(kTwoPi / static_cast<double>(l1_samples_per_dim),
                   static_cast<double>(k));

    AcsReport report;
    index_t max_degree = 0;
    for (index_t d : degree) max_degree = std::max(max_degree, d);
    report.m = max_degree;
    report.measured = measured;
    report.bound = l1 / std::pow(kTwoPi, static_cast<double>(k));
    report.passed = measured <= report.bound * (1.0 + 1e-8);
    reports.push_back(report);
  }
  return reports;
}

}  // namespace symtoep
