// Copyright 2026 The rdd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace rdd {

template <typename Real>
using Complex = std::complex<Real>;

/** Dense complex matrix; carrier for Hamiltonians, unitaries and states. */
template <typename Real>
using Matrix = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Real>
using Vector = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, 1>;

template <typename Real>
using RealVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

namespace tol {
/// Hermiticity and unitarity checks (max-entry norm).
inline constexpr double kStructural = 1e-10;
/// Trace preservation.
inline constexpr double kTrace = 1e-12;
/// Allowed negative eigenvalue undershoot in positivity checks.
inline constexpr double kPositivity = 1e-10;
}  // namespace tol

/** Base class of every error raised by the library. */
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/** A caller violated a documented precondition (bad argument). */
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/** Operand dimensions are incompatible. */
class DimensionError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/**
 * A computed quantity broke a numerical contract, e.g. a compiled
 * propagator failed the unitarity check.
 */
class NumericalContractError : public Error {
 public:
  using Error::Error;
};

/** Malformed input file; the message carries the offending line number. */
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace rdd
