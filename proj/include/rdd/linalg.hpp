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

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <span>
#include <string>

#include "rdd/common.hpp"

namespace rdd {

/** Kronecker product a (x) b. */
template <typename Real>
Matrix<Real> kron(const Matrix<Real>& a, const Matrix<Real>& b) {
  Matrix<Real> out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

template <typename Real>
Vector<Real> kron_vec(const Vector<Real>& a, const Vector<Real>& b) {
  Vector<Real> out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    out.segment(i * b.size(), b.size()) = a(i) * b;
  }
  return out;
}

template <typename Real>
Matrix<Real> identity(Eigen::Index dim) {
  return Matrix<Real>::Identity(dim, dim);
}

/// max |h - h^dagger| over all entries.
template <typename Real>
double hermiticity_defect(const Matrix<Real>& h) {
  if (h.rows() != h.cols()) return INFINITY;
  if (h.size() == 0) return 0.0;
  return static_cast<double>((h - h.adjoint()).cwiseAbs().maxCoeff());
}

/// max |u u^dagger - I| over all entries.
template <typename Real>
double unitarity_defect(const Matrix<Real>& u) {
  if (u.rows() != u.cols()) return INFINITY;
  if (u.size() == 0) return 0.0;
  const Matrix<Real> gram = u * u.adjoint();
  return static_cast<double>(
      (gram - Matrix<Real>::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff());
}

template <typename Real>
bool all_finite(const Matrix<Real>& a) {
  for (Eigen::Index k = 0; k < a.size(); ++k) {
    const auto& z = a.data()[k];
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

template <typename Real>
void require_square(const Matrix<Real>& a, const char* what) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw DimensionError(std::string(what) + ": expected a non-empty square matrix, got " +
                         std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  }
}

template <typename Real>
void require_hermitian(const Matrix<Real>& h, const char* what) {
  require_square(h, what);
  if (!all_finite(h)) throw PreconditionError(std::string(what) + ": non-finite entry");
  const double defect = hermiticity_defect(h);
  if (defect > tol::kStructural) {
    throw PreconditionError(std::string(what) + ": matrix is not Hermitian (defect " +
                            std::to_string(defect) + ")");
  }
}

template <typename Real>
void require_same_shape(const Matrix<Real>& a, const Matrix<Real>& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError(std::string(what) + ": dimension mismatch (" +
                         std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + " vs " +
                         std::to_string(b.rows()) + "x" + std::to_string(b.cols()) + ")");
  }
}

/**
 * Eigendecomposition of a Hermitian generator, reused to evaluate
 * exp(-i h t) for any number of times t.
 */
template <typename Real>
class HermitianEigen {
 public:
  explicit HermitianEigen(const Matrix<Real>& h) {
    require_hermitian(h, "HermitianEigen");
    // Symmetrize so the solver never sees the roundoff-level anti-Hermitian part.
    const Matrix<Real> sym = (h + h.adjoint()) * Real(0.5);
    Eigen::SelfAdjointEigenSolver<Matrix<Real>> solver(sym);
    if (solver.info() != Eigen::Success) {
      throw NumericalContractError("HermitianEigen: eigensolver did not converge");
    }
    values_ = solver.eigenvalues();
    vectors_ = solver.eigenvectors();
  }

  Eigen::Index dim() const { return values_.size(); }
  const RealVector<Real>& eigenvalues() const { return values_; }
  const Matrix<Real>& eigenvectors() const { return vectors_; }

  /// exp(-i h t)
  Matrix<Real> propagator(Real t) const {
    return vectors_ * phases(t).asDiagonal() * vectors_.adjoint();
  }

  /// exp(-i h t) applied to each column of `states`.
  Matrix<Real> apply(Real t, const Matrix<Real>& states) const {
    Matrix<Real> coeffs = vectors_.adjoint() * states;
    coeffs = phases(t).asDiagonal() * coeffs;
    return vectors_ * coeffs;
  }

 private:
  Vector<Real> phases(Real t) const {
    Vector<Real> out(values_.size());
    for (Eigen::Index k = 0; k < values_.size(); ++k) {
      const Real angle = -values_(k) * t;
      out(k) = Complex<Real>(std::cos(angle), std::sin(angle));
    }
    return out;
  }

  RealVector<Real> values_;
  Matrix<Real> vectors_;
};

/**
 * exp(-i h t) for Hermitian h, by diagonalization. Throws PreconditionError
 * if h is not Hermitian within tol::kStructural.
 */
template <typename Real>
Matrix<Real> expm_hermitian(const Matrix<Real>& h, Real t) {
  return HermitianEigen<Real>(h).propagator(t);
}

/**
 * Partial trace of a bipartite operator on C^dim_sys (x) C^dim_bath.
 * keep_sys selects which factor survives.
 */
template <typename Real>
Matrix<Real> partial_trace(const Matrix<Real>& rho, Eigen::Index dim_sys, Eigen::Index dim_bath,
                           bool keep_sys) {
  if (dim_sys <= 0 || dim_bath <= 0 || rho.rows() != dim_sys * dim_bath ||
      rho.cols() != dim_sys * dim_bath) {
    throw DimensionError("partial_trace: operator is " + std::to_string(rho.rows()) + "x" +
                         std::to_string(rho.cols()) + ", factors are " +
                         std::to_string(dim_sys) + " and " + std::to_string(dim_bath));
  }
  if (keep_sys) {
    Matrix<Real> out = Matrix<Real>::Zero(dim_sys, dim_sys);
    for (Eigen::Index i = 0; i < dim_sys; ++i) {
      for (Eigen::Index j = 0; j < dim_sys; ++j) {
        out(i, j) = rho.block(i * dim_bath, j * dim_bath, dim_bath, dim_bath).trace();
      }
    }
    return out;
  }
  Matrix<Real> out = Matrix<Real>::Zero(dim_bath, dim_bath);
  for (Eigen::Index i = 0; i < dim_sys; ++i) {
    out += rho.block(i * dim_bath, i * dim_bath, dim_bath, dim_bath);
  }
  return out;
}

/// Sum of absolute eigenvalues of a Hermitian matrix.
template <typename Real>
Real trace_norm_hermitian(const Matrix<Real>& a) {
  require_hermitian(a, "trace_norm_hermitian");
  const Matrix<Real> sym = (a + a.adjoint()) * Real(0.5);
  Eigen::SelfAdjointEigenSolver<Matrix<Real>> solver(sym, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericalContractError("trace_norm_hermitian: eigensolver did not converge");
  }
  return solver.eigenvalues().cwiseAbs().sum();
}

/** Trace distance (1/2) ||rho - sigma||_1 between two density matrices. */
template <typename Real>
Real trace_distance(const Matrix<Real>& rho, const Matrix<Real>& sigma) {
  require_same_shape(rho, sigma, "trace_distance");
  require_hermitian(rho, "trace_distance");
  require_hermitian(sigma, "trace_distance");
  return Real(0.5) * trace_norm_hermitian<Real>(rho - sigma);
}

/**
 * Trace distance between sum_k w_k |out_k><out_k| and |ideal><ideal|.
 *
 * The difference is rewritten in terms of delta_k = out_k - ideal,
 *   sum_k w_k (|ideal><delta_k| + |delta_k><ideal| + |delta_k><delta_k|),
 * and diagonalized inside the span of {ideal, delta_1, ...}. Small deltas are
 * carried with relative rather than absolute precision, so the result stays
 * accurate far below the roundoff floor of the dense route.
 */
template <typename Real>
Real trace_distance_pure_mixture(const Matrix<Real>& outputs, std::span<const Real> weights,
                                 const Vector<Real>& ideal) {
  const Eigen::Index m = outputs.cols();
  if (m == 0 || static_cast<std::size_t>(m) != weights.size() || outputs.rows() != ideal.size()) {
    throw DimensionError("trace_distance_pure_mixture: inconsistent operand sizes");
  }
  Matrix<Real> basis(ideal.size(), m + 1);
  basis.col(0) = ideal;
  Matrix<Real> coeff = Matrix<Real>::Zero(m + 1, m + 1);
  Real weight_sum = 0;
  for (Eigen::Index k = 0; k < m; ++k) {
    // |out_k><out_k| ignores the phase of out_k; align it with ideal so delta_k is small.
    const Complex<Real> overlap = ideal.dot(outputs.col(k));
    const Real mag = std::abs(overlap);
    const Complex<Real> align = mag > Real(0) ? std::conj(overlap) / mag : Complex<Real>(1);
    basis.col(k + 1) = align * outputs.col(k) - ideal;
    const Real w = weights[static_cast<std::size_t>(k)];
    coeff(0, k + 1) = w;
    coeff(k + 1, 0) = w;
    coeff(k + 1, k + 1) = w;
    weight_sum += w;
  }
  coeff(0, 0) = weight_sum - Real(1);

  // basis = Q R  =>  basis C basis^dagger = Q (R C R^dagger) Q^dagger.
  Eigen::HouseholderQR<Matrix<Real>> qr(basis);
  const Eigen::Index r = std::min<Eigen::Index>(basis.rows(), m + 1);
  const Matrix<Real> upper =
      qr.matrixQR().topRows(r).template triangularView<Eigen::Upper>();
  const Matrix<Real> reduced = upper * coeff * upper.adjoint();
  return Real(0.5) * trace_norm_hermitian<Real>((reduced + reduced.adjoint()) * Real(0.5));
}

/** Largest singular value. */
template <typename Real>
Real operator_norm(const Matrix<Real>& a) {
  if (a.size() == 0) return Real(0);
  if (a.rows() == a.cols() && hermiticity_defect(a) == 0.0) {
    Eigen::SelfAdjointEigenSolver<Matrix<Real>> solver(a, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().cwiseAbs().maxCoeff();
  }
  Eigen::JacobiSVD<Matrix<Real>> svd(a);
  return svd.singularValues()(0);
}

/// Smallest eigenvalue of the Hermitian part.
template <typename Real>
Real min_eigenvalue(const Matrix<Real>& a) {
  require_square(a, "min_eigenvalue");
  const Matrix<Real> sym = (a + a.adjoint()) * Real(0.5);
  Eigen::SelfAdjointEigenSolver<Matrix<Real>> solver(sym, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

/**
 * max |a - e^{i phi} b| after removing the relative global phase, taken
 * from the largest-magnitude entry of b.
 */
template <typename Real>
double phase_aligned_distance(const Matrix<Real>& a, const Matrix<Real>& b) {
  require_same_shape(a, b, "phase_aligned_distance");
  if (a.size() == 0) return 0.0;
  Eigen::Index row = 0;
  Eigen::Index col = 0;
  b.cwiseAbs().maxCoeff(&row, &col);
  if (std::abs(b(row, col)) == Real(0)) {
    return static_cast<double>(a.cwiseAbs().maxCoeff());
  }
  Complex<Real> phase = a(row, col) / b(row, col);
  const Real mag = std::abs(phase);
  phase = mag == Real(0) ? Complex<Real>(1) : phase / mag;
  return static_cast<double>((a - phase * b).cwiseAbs().maxCoeff());
}

template <typename Real>
bool equal_up_to_phase(const Matrix<Real>& a, const Matrix<Real>& b, double tolerance) {
  return phase_aligned_distance(a, b) <= tolerance;
}

}  // namespace rdd
