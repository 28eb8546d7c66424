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

#include <cstdint>
#include <initializer_list>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "symtoep/errors.hpp"

namespace symtoep {

using index_t = std::int64_t;

/// Integer vector indexing the levels of a k-level structure. The same type
/// holds matrix dimensions n (entries >= 1), polynomial degrees r
/// (entries >= 0) and Fourier offsets j (entries may be negative).
class MultiIndex {
 public:
  MultiIndex() = default;
  MultiIndex(std::initializer_list<index_t> entries) : entries_(entries) {}
  explicit MultiIndex(std::vector<index_t> entries)
      : entries_(std::move(entries)) {}

  static MultiIndex uniform(std::size_t levels, index_t value) {
    return MultiIndex(std::vector<index_t>(levels, value));
  }
  static MultiIndex zero(std::size_t levels) { return uniform(levels, 0); }

  std::size_t levels() const { return entries_.size(); }
  index_t operator[](std::size_t t) const { return entries_[t]; }
  index_t& operator[](std::size_t t) { return entries_[t]; }

  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  const std::vector<index_t>& entries() const { return entries_; }

  bool operator==(const MultiIndex&) const = default;

  std::string to_string() const {
    std::ostringstream os;
    os << '(';
    for (std::size_t t = 0; t < entries_.size(); ++t) {
      if (t > 0) os << ',';
      os << entries_[t];
    }
    os << ')';
    return os.str();
  }

 private:
  std::vector<index_t> entries_;
};

namespace detail {

inline void require_same_levels(const MultiIndex& a, const MultiIndex& b,
                                const char* what) {
  if (a.levels() != b.levels()) {
    throw InvalidArgumentError(std::string(what) + ": level count mismatch " +
                               a.to_string() + " vs " + b.to_string());
  }
}

}  // namespace detail

inline MultiIndex operator+(const MultiIndex& a, const MultiIndex& b) {
  detail::require_same_levels(a, b, "MultiIndex addition");
  std::vector<index_t> out(a.levels());
  for (std::size_t t = 0; t < a.levels(); ++t) out[t] = a[t] + b[t];
  return MultiIndex(std::move(out));
}

inline MultiIndex operator-(const MultiIndex& a, const MultiIndex& b) {
  detail::require_same_levels(a, b, "MultiIndex subtraction");
  std::vector<index_t> out(a.levels());
  for (std::size_t t = 0; t < a.levels(); ++t) out[t] = a[t] - b[t];
  return MultiIndex(std::move(out));
}

/// N(n) = n_1 n_2 ... n_k. Every entry must be a valid dimension (>= 1).
inline index_t product(const MultiIndex& n) {
  if (n.levels() == 0) {
    throw InvalidArgumentError("product: empty multi-index");
  }
  index_t p = 1;
  for (index_t v : n) {
    if (v < 1) {
      throw InvalidArgumentError("product: invalid dimension " + n.to_string());
    }
    p *= v;
  }
  return p;
}

/// Position of i in the lexicographic enumeration of [0,n_1) x ... x [0,n_k)
/// with the first coordinate slowest. This is the ordering under which the
/// multilevel Toeplitz matrix of a separable symbol factors as a Kronecker
/// product with the left factor varying slowest.
inline index_t linear_index(const MultiIndex& i, const MultiIndex& n) {
  detail::require_same_levels(i, n, "linear_index");
  product(n);  // validates n
  index_t p = 0;
  for (std::size_t t = 0; t < n.levels(); ++t) {
    if (i[t] < 0 || i[t] >= n[t]) {
      throw InvalidArgumentError("linear_index: component out of range, i=" +
                                 i.to_string() + " n=" + n.to_string());
    }
    p = p * n[t] + i[t];
  }
  return p;
}

/// Inverse of linear_index.
inline MultiIndex multi_index(index_t p, const MultiIndex& n) {
  const index_t total = product(n);
  if (p < 0 || p >= total) {
    throw InvalidArgumentError("multi_index: position out of range");
  }
  std::vector<index_t> out(n.levels());
  for (std::size_t t = n.levels(); t-- > 0;) {
    out[t] = p % n[t];
    p /= n[t];
  }
  return MultiIndex(std::move(out));
}

/// All N(n) multi-indices in lexicographic order, first coordinate slowest.
inline std::vector<MultiIndex> lex_enumerate(const MultiIndex& n) {
  const index_t total = product(n);
  std::vector<MultiIndex> out;
  out.reserve(static_cast<std::size_t>(total));
  MultiIndex i = MultiIndex::zero(n.levels());
  for (index_t p = 0; p < total; ++p) {
    out.push_back(i);
    for (std::size_t t = n.levels(); t-- > 0;) {
      if (++i[t] < n[t]) break;
      i[t] = 0;
    }
  }
  return out;
}

}  // namespace symtoep
