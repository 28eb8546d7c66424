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
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "symtoep/detail/format.hpp"
#include "symtoep/errors.hpp"
#include "symtoep/multi_index.hpp"

namespace symtoep {

/// Row-major real matrix.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(index_t rows, index_t cols, double value = 0.0)
      : rows_(rows), cols_(cols) {
    if (rows < 0 || cols < 0) {
      throw InvalidArgumentError("DenseMatrix: negative shape");
    }
    data_.assign(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols),
                 value);
  }

  static DenseMatrix identity(index_t n) {
    DenseMatrix m(n, n);
    for (index_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  index_t rows() const { return rows_; }
  index_t cols() const { return cols_; }

  double operator()(index_t r, index_t c) const {
    return data_[static_cast<std::size_t>(r) * cols_ + c];
  }
  double& operator()(index_t r, index_t c) {
    return data_[static_cast<std::size_t>(r) * cols_ + c];
  }

  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }

  bool operator==(const DenseMatrix&) const = default;

 private:
  index_t rows_ = 0;
  index_t cols_ = 0;
  std::vector<double> data_;
};

inline DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw InvalidArgumentError("matrix addition: shape mismatch");
  }
  DenseMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < out.data().size(); ++i) {
    out.data()[i] = a.data()[i] + b.data()[i];
  }
  return out;
}

inline DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw InvalidArgumentError("matrix subtraction: shape mismatch");
  }
  DenseMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < out.data().size(); ++i) {
    out.data()[i] = a.data()[i] - b.data()[i];
  }
  return out;
}

inline DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) {
    throw InvalidArgumentError("matrix multiply: inner dimension mismatch");
  }
  DenseMatrix out(a.rows(), b.cols());
  for (index_t i = 0; i < a.rows(); ++i) {
    for (index_t l = 0; l < a.cols(); ++l) {
      const double ail = a(i, l);
      if (ail == 0.0) continue;
      for (index_t j = 0; j < b.cols(); ++j) {
        out(i, j) += ail * b(l, j);
      }
    }
  }
  return out;
}

inline DenseMatrix transpose(const DenseMatrix& a) {
  DenseMatrix out(a.cols(), a.rows());
  for (index_t i = 0; i < a.rows(); ++i) {
    for (index_t j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
  }
  return out;
}

/// Kronecker product with the left factor varying slowest.
inline DenseMatrix kron(const DenseMatrix& a, const DenseMatrix& b) {
  DenseMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (index_t i = 0; i < a.rows(); ++i) {
    for (index_t j = 0; j < a.cols(); ++j) {
      const double aij = a(i, j);
      if (aij == 0.0) continue;
      for (index_t p = 0; p < b.rows(); ++p) {
        for (index_t q = 0; q < b.cols(); ++q) {
          out(i * b.rows() + p, j * b.cols() + q) = aij * b(p, q);
        }
      }
    }
  }
  return out;
}

inline std::vector<double> matvec(const DenseMatrix& a,
                                  std::span<const double> x) {
  if (static_cast<index_t>(x.size()) != a.cols()) {
    throw InvalidArgumentError("matvec: dimension mismatch");
  }
  std::vector<double> y(static_cast<std::size_t>(a.rows()), 0.0);
  for (index_t i = 0; i < a.rows(); ++i) {
    double acc = 0.0;
    for (index_t j = 0; j < a.cols(); ++j) acc += a(i, j) * x[j];
    y[static_cast<std::size_t>(i)] = acc;
  }
  return y;
}

inline double max_abs(const DenseMatrix& a) {
  double m = 0.0;
  for (double v : a.data()) m = std::max(m, std::abs(v));
  return m;
}

inline bool all_finite(const DenseMatrix& a) {
  for (double v : a.data()) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

/// Debug dump: first line "rows cols", then row-major entries, one per line,
/// 17 significant digits.
inline void write_matrix(std::ostream& os, const DenseMatrix& a) {
  os << a.rows() << ' ' << a.cols() << '\n';
  for (double v : a.data()) os << detail::to_decimal17(v) << '\n';
}

inline DenseMatrix read_matrix(std::istream& is) {
  index_t rows = 0;
  index_t cols = 0;
  if (!(is >> rows >> cols) || rows < 0 || cols < 0) {
    throw IoError("matrix dump: bad header");
  }
  DenseMatrix out(rows, cols);
  for (double& v : out.data()) {
    if (!(is >> v)) throw IoError("matrix dump: truncated entries");
  }
  return out;
}

}  // namespace symtoep
