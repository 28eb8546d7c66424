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

#include <stdexcept>
#include <string>

namespace symtoep {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad dimensions, out-of-range indices, domain violations, mismatched sizes.
class InvalidArgumentError : public Error {
 public:
  using Error::Error;
};

/// A dense materialization would exceed the configured size cap.
class SizeError : public Error {
 public:
  using Error::Error;
};

/// Numerical contract violations: non-finite entries, asymmetry beyond
/// tolerance, non-real Fourier coefficients, solver convergence failures.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// File format problems (stencil files, matrix dumps, experiment configs).
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace symtoep
