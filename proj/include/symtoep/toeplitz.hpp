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

#include <fftw3.h>

#include <complex>
#include <span>
#include <utility>
#include <vector>

#include "symtoep/dense_matrix.hpp"
#include "symtoep/errors.hpp"
#include "symtoep/fourier_stencil.hpp"
#include "symtoep/multi_index.hpp"

namespace symtoep {

/// Largest N(n) that dense materialization accepts by default.
inline constexpr index_t kDefaultDenseLimit = 8192;

namespace detail {

inline void check_dense_size(const MultiIndex& n, index_t dense_limit) {
  if (product(n) > dense_limit) {
    throw SizeError("dense matrix of order " + std::to_string(product(n)) +
                    " exceeds the configured limit " +
                    std::to_string(dense_limit));
  }
}

}  // namespace detail

/// The k-level Toeplitz matrix of the stencil: entry at multi-row l and
/// multi-column h is the coefficient for offset l - h (zero outside the band).
/// Rows and columns are ordered lexicographically, first level slowest.
inline DenseMatrix build_toeplitz(const FourierStencil& stencil,
                                  const MultiIndex& n,
                                  index_t dense_limit = kDefaultDenseLimit) {
  if (n.levels() != stencil.levels()) {
    throw InvalidArgumentError("build_toeplitz: dimension level mismatch");
  }
  detail::check_dense_size(n, dense_limit);
  const index_t total = product(n);
  const auto rows = lex_enumerate(n);
  DenseMatrix out(total, total);
  for (index_t l = 0; l < total; ++l) {
    for (index_t h = 0; h < total; ++h) {
      out(l, h) = stencil.coefficient(rows[static_cast<std::size_t>(l)] -
                                      rows[static_cast<std::size_t>(h)]);
    }
  }
  return out;
}

/// Tensorization of the unilevel anti-identities. Under the lexicographic
/// ordering this equals the N(n) x N(n) anti-identity.
inline DenseMatrix flip(const MultiIndex& n,
                        index_t dense_limit = kDefaultDenseLimit) {
  detail::check_dense_size(n, dense_limit);
  const index_t total = product(n);
  DenseMatrix out(total, total);
  for (index_t i = 0; i < total; ++i) out(i, total - 1 - i) = 1.0;
  return out;
}

/// The flip-symmetrization: the anti-identity times the Toeplitz matrix.
/// Equivalent to reversing the row order of build_toeplitz, which is how it
/// is materialized; the result is symmetric because the coefficients are real.
inline DenseMatrix symmetrize(const FourierStencil& stencil,
                              const MultiIndex& n,
                              index_t dense_limit = kDefaultDenseLimit) {
  if (n.levels() != stencil.levels()) {
    throw InvalidArgumentError("symmetrize: dimension level mismatch");
  }
  detail::check_dense_size(n, dense_limit);
  const index_t total = product(n);
  const auto rows = lex_enumerate(n);
  DenseMatrix out(total, total);
  for (index_t l = 0; l < total; ++l) {
    // Reversal in the linear order is reversal in every level.
    const MultiIndex& flipped = rows[static_cast<std::size_t>(total - 1 - l)];
    for (index_t h = 0; h < total; ++h) {
      out(l, h) =
          stencil.coefficient(flipped - rows[static_cast<std::size_t>(h)]);
    }
  }
  return out;
}

/// Splitting of the symmetrization for even first-level dimension
/// n_1 = 2 nu_1: the antidiagonal part holds the symmetrization at the halved
/// size (nu_1, n_2, ..., n_k) in its two off-diagonal blocks, and the
/// correction is the block-diagonal pair of Hankel corners. The parts sum to
/// symmetrize(stencil, n) exactly.
struct BlockDecomposition {
  DenseMatrix antidiagonal;
  DenseMatrix correction;
};

inline BlockDecomposition decompose_blocks(
    const FourierStencil& stencil, const MultiIndex& n,
    index_t dense_limit = kDefaultDenseLimit) {
  if (n.levels() != stencil.levels()) {
    throw InvalidArgumentError("decompose_blocks: dimension level mismatch");
  }
  if (n[0] % 2 != 0) {
    throw InvalidArgumentError(
        "decompose_blocks: unsupported decomposition, n_1 must be even");
  }
  detail::check_dense_size(n, dense_limit);
  MultiIndex halved = n;
  halved[0] = n[0] / 2;
  const index_t half = product(halved);

  const DenseMatrix block = symmetrize(stencil, halved, dense_limit);
  DenseMatrix antidiagonal(2 * half, 2 * half);
  for (index_t i = 0; i < half; ++i) {
    for (index_t j = 0; j < half; ++j) {
      antidiagonal(i, half + j) = block(i, j);
      antidiagonal(half + i, j) = block(i, j);
    }
  }
  // The Hankel corners come out by subtraction, which keeps the reassembly
  // identity exact.
  DenseMatrix correction = symmetrize(stencil, n, dense_limit) - antidiagonal;
  return {std::move(antidiagonal), std::move(correction)};
}

namespace detail {

/// RAII array allocated with the FFT library allocator, so that new-array
/// execution sees the same alignment the plans were created with.
class FftwComplexBuffer {
 public:
  explicit FftwComplexBuffer(std::size_t size)
      : size_(size),
        data_(static_cast<fftw_complex*>(
            fftw_malloc(sizeof(fftw_complex) * size))) {
    if (data_ == nullptr) throw std::bad_alloc();
    for (std::size_t i = 0; i < size; ++i) {
      data_[i][0] = 0.0;
      data_[i][1] = 0.0;
    }
  }
  ~FftwComplexBuffer() {
    if (data_ != nullptr) fftw_free(data_);
  }
  FftwComplexBuffer(const FftwComplexBuffer&) = delete;
  FftwComplexBuffer& operator=(const FftwComplexBuffer&) = delete;
  FftwComplexBuffer(FftwComplexBuffer&& other) noexcept
      : size_(other.size_), data_(other.data_) {
    other.data_ = nullptr;
    other.size_ = 0;
  }
  FftwComplexBuffer& operator=(FftwComplexBuffer&&) = delete;

  fftw_complex* get() { return data_; }
  const fftw_complex* get() const { return data_; }
  std::size_t size() const { return size_; }

 private:
  std::size_t size_;
  fftw_complex* data_;
};

}  // namespace detail

/// Fast application of the k-level Toeplitz matrix through a circulant
/// embedding of size 2 n_t per level. Construction precomputes the spectral
/// table of the embedding; apply() matches the dense product to 1e-10
/// relative error. Instances are immutable after construction and apply() is
/// safe to call concurrently; construction itself is not thread-safe because
/// the FFT planner is a process-global resource.
class ToeplitzOperator {
 public:
  ToeplitzOperator(const FourierStencil& stencil, MultiIndex n)
      : n_(std::move(n)),
        dim_(product(n_)),
        padded_(embedding_shape(n_)),
        padded_total_(product(padded_)),
        symbol_fft_(static_cast<std::size_t>(padded_total_)),
        plan_in_(static_cast<std::size_t>(padded_total_)),
        plan_out_(static_cast<std::size_t>(padded_total_)) {
    if (n_.levels() != stencil.levels()) {
      throw InvalidArgumentError("ToeplitzOperator: dimension level mismatch");
    }
    embed_map_.resize(static_cast<std::size_t>(dim_));
    for (index_t p = 0; p < dim_; ++p) {
      index_t rem = p;
      index_t out = 0;
      index_t stride = 1;
      for (std::size_t t = n_.levels(); t-- > 0;) {
        out += (rem % n_[t]) * stride;
        stride *= padded_[t];
        rem /= n_[t];
      }
      embed_map_[static_cast<std::size_t>(p)] = out;
    }
    std::vector<int> dims(n_.levels());
    for (std::size_t t = 0; t < n_.levels(); ++t) {
      dims[t] = static_cast<int>(padded_[t]);
    }
    forward_ = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(),
                             plan_in_.get(), plan_out_.get(), FFTW_FORWARD,
                             FFTW_ESTIMATE);
    inverse_ = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(),
                             plan_in_.get(), plan_out_.get(), FFTW_BACKWARD,
                             FFTW_ESTIMATE);
    if (forward_ == nullptr || inverse_ == nullptr) {
      throw NumericError("ToeplitzOperator: FFT planning failed");
    }

    // First circulant column per level: offset j for position m is m itself
    // for m < n_t, m - 2 n_t for m > n_t, and the unused slot m = n_t is 0.
    detail::FftwComplexBuffer table(static_cast<std::size_t>(padded_total_));
    MultiIndex pos = MultiIndex::zero(padded_.levels());
    MultiIndex offset = MultiIndex::zero(padded_.levels());
    for (index_t p = 0; p < padded_total_; ++p) {
      bool used = true;
      for (std::size_t t = 0; t < padded_.levels(); ++t) {
        if (pos[t] < n_[t]) {
          offset[t] = pos[t];
        } else if (pos[t] == n_[t]) {
          used = false;
          break;
        } else {
          offset[t] = pos[t] - padded_[t];
        }
      }
      if (used) table.get()[p][0] = stencil.coefficient(offset);
      for (std::size_t t = padded_.levels(); t-- > 0;) {
        if (++pos[t] < padded_[t]) break;
        pos[t] = 0;
      }
    }
    fftw_execute_dft(forward_, table.get(), symbol_fft_.get());
  }

  ~ToeplitzOperator() {
    if (forward_ != nullptr) fftw_destroy_plan(forward_);
    if (inverse_ != nullptr) fftw_destroy_plan(inverse_);
  }
  ToeplitzOperator(const ToeplitzOperator&) = delete;
  ToeplitzOperator& operator=(const ToeplitzOperator&) = delete;

  const MultiIndex& size() const { return n_; }
  index_t dimension() const { return dim_; }

  std::vector<double> apply(std::span<const double> x) const {
    if (static_cast<index_t>(x.size()) != dim_) {
      throw InvalidArgumentError("ToeplitzOperator::apply: dimension mismatch");
    }
    detail::FftwComplexBuffer work(static_cast<std::size_t>(padded_total_));
    detail::FftwComplexBuffer spectrum(static_cast<std::size_t>(padded_total_));

    // Scatter x into the padded grid.
    for (index_t p = 0; p < dim_; ++p) {
      work.get()[embedded_index(p)][0] = x[static_cast<std::size_t>(p)];
    }
    fftw_execute_dft(forward_, work.get(), spectrum.get());
    for (index_t p = 0; p < padded_total_; ++p) {
      const double re = spectrum.get()[p][0];
      const double im = spectrum.get()[p][1];
      const double sre = symbol_fft_.get()[p][0];
      const double sim = symbol_fft_.get()[p][1];
      spectrum.get()[p][0] = re * sre - im * sim;
      spectrum.get()[p][1] = re * sim + im * sre;
    }
    fftw_execute_dft(inverse_, spectrum.get(), work.get());

    const double scale = 1.0 / static_cast<double>(padded_total_);
    std::vector<double> y(static_cast<std::size_t>(dim_));
    for (index_t p = 0; p < dim_; ++p) {
      y[static_cast<std::size_t>(p)] = work.get()[embedded_index(p)][0] * scale;
    }
    return y;
  }

 private:
  static MultiIndex embedding_shape(const MultiIndex& n) {
    product(n);  // validates
    std::vector<index_t> padded(n.levels());
    for (std::size_t t = 0; t < n.levels(); ++t) padded[t] = 2 * n[t];
    return MultiIndex(std::move(padded));
  }

  index_t embedded_index(index_t p) const {
    return embed_map_[static_cast<std::size_t>(p)];
  }

  MultiIndex n_;
  index_t dim_;
  MultiIndex padded_;
  index_t padded_total_;
  std::vector<index_t> embed_map_;
  detail::FftwComplexBuffer symbol_fft_;
  fftw_plan forward_ = nullptr;
  fftw_plan inverse_ = nullptr;
  detail::FftwComplexBuffer plan_in_;
  detail::FftwComplexBuffer plan_out_;
};

inline std::vector<double> matvec(const ToeplitzOperator& op,
                                  std::span<const double> x) {
  return op.apply(x);
}

}  // namespace symtoep
