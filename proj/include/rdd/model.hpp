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

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "rdd/linalg.hpp"
#include "rdd/pauli.hpp"

namespace rdd {

/**
 * Reproducible random source, version "mt19937_64/v1".
 *
 * Raw 64-bit draws come from std::mt19937_64, whose output sequence is fixed
 * by the C++ standard. Floating-point conversions are done here rather than
 * with <random> distributions (those are implementation-defined):
 *   uniform01 = (x >> 11) * 2^-53                          in [0, 1)
 *   normal    = Box-Muller on (1 - u1, u2), both outputs used in turn
 */
class Rng {
 public:
  static constexpr const char* kVersion = "mt19937_64/v1";

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform01();  // (0, 1]
    const double u2 = uniform01();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Independent child seed for (stream, index) under a base seed.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream, std::uint64_t index) {
  return mix64(mix64(mix64(base) ^ stream) ^ index);
}

/// Pauli p on qubit `site` of an n-qubit register.
template <typename Real>
Matrix<Real> local_pauli(std::size_t n, std::size_t site, Pauli p) {
  return pauli_matrix<Real>(PauliWord::single(n, site, p));
}

/**
 * Open-chain Heisenberg Hamiltonian sum_j (X_j X_{j+1} + Y_j Y_{j+1} + Z_j Z_{j+1}).
 */
template <typename Real>
Matrix<Real> build_heisenberg(std::size_t n) {
  if (n < 2) throw PreconditionError("build_heisenberg: need at least 2 qubits");
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n);
  Matrix<Real> h = Matrix<Real>::Zero(dim, dim);
  for (std::size_t j = 0; j + 1 < n; ++j) {
    for (Pauli p : {Pauli::X, Pauli::Y, Pauli::Z}) {
      std::vector<Pauli> labels(n, Pauli::I);
      labels[j] = p;
      labels[j + 1] = p;
      h += pauli_matrix<Real>(PauliWord(labels));
    }
  }
  return h;
}

/**
 * System-bath Hamiltonian H = h_sys (x) I + I (x) h_bath + h_sb.
 *
 * h_sb already carries the coupling prefactor coupling_j; beta is the
 * operator norm of the decoupled part H_0.
 */
template <typename Real>
struct HamiltonianModel {
  Matrix<Real> h_sys;
  Matrix<Real> h_bath;
  Matrix<Real> h_sb;
  std::size_t n_sys = 0;
  std::size_t n_bath = 0;
  double coupling_j = 0.0;
  double beta = 0.0;
  /// Sum of operator norms of the bath operators multiplying each system
  /// Pauli in h_sb (prefactor included); the bound-style coupling strength.
  double coupling_norm_sum = 0.0;
  /// Every random coefficient drawn for this model, in draw order.
  std::vector<double> coefficients;

  Eigen::Index dim_sys() const { return Eigen::Index{1} << n_sys; }
  Eigen::Index dim_bath() const { return Eigen::Index{1} << n_bath; }
  Eigen::Index dim() const { return dim_sys() * dim_bath(); }

  /// H_0 = h_sys (x) I + I (x) h_bath
  Matrix<Real> h0() const {
    return kron<Real>(h_sys, identity<Real>(dim_bath())) +
           kron<Real>(identity<Real>(dim_sys()), h_bath);
  }

  Matrix<Real> total() const { return h0() + h_sb; }
};

namespace detail {

/// sum_{j, beta} gamma_{beta, j} sigma_{beta, j} over `n` qubits, beta in {I,X,Y,Z}.
template <typename Real>
Matrix<Real> local_sum(std::size_t n, std::span<const double> gamma) {
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n);
  Matrix<Real> out = Matrix<Real>::Zero(dim, dim);
  std::size_t k = 0;
  for (std::size_t j = 0; j < n; ++j) {
    for (Pauli p : {Pauli::I, Pauli::X, Pauli::Y, Pauli::Z}) {
      out += Real(gamma[k++]) * local_pauli<Real>(n, j, p);
    }
  }
  return out;
}

/// sum_{alpha, beta} gamma_{alpha, beta} sigma_alpha (x) sigma_beta on two qubits.
template <typename Real>
Matrix<Real> two_qubit_sum(std::span<const double> gamma) {
  Matrix<Real> out = Matrix<Real>::Zero(4, 4);
  std::size_t k = 0;
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      out += Real(gamma[k++]) *
             pauli_matrix<Real>(PauliWord({static_cast<Pauli>(a), static_cast<Pauli>(b)}));
    }
  }
  return out;
}

inline std::vector<double> draw_uniform(std::uint64_t seed, std::size_t count) {
  Rng rng(seed);
  std::vector<double> out(count);
  for (double& x : out) x = rng.uniform01();
  return out;
}

template <typename Real>
void finish(HamiltonianModel<Real>& model) {
  require_hermitian(model.h_sys, "HamiltonianModel::h_sys");
  require_hermitian(model.h_bath, "HamiltonianModel::h_bath");
  require_hermitian(model.h_sb, "HamiltonianModel::h_sb");
  model.beta = static_cast<double>(operator_norm<Real>(model.h0()));
}

}  // namespace detail

/// Number of coefficients build_local_bath_model draws: 4 bath operators
/// (B_X, B_Y, B_Z and the bath Hamiltonian), each n_bath * 4 values.
inline std::size_t local_bath_coefficient_count(std::size_t n_bath) { return 4 * n_bath * 4; }

/**
 * Heisenberg system with general 1-local coupling to a bath:
 *   H_SB = j sum_i sum_{alpha in X,Y,Z} sigma_{alpha,i} (x) B_alpha
 *   B_alpha = sum_{k, beta in I,X,Y,Z} gamma_{alpha,beta,k} sigma_{beta,k}
 *   H_B = one more operator of the same form, not scaled by j.
 * `gamma` holds B_X, B_Y, B_Z, H_B blocks of n_bath * 4 values each.
 */
template <typename Real>
HamiltonianModel<Real> build_local_bath_model(std::size_t n_sys, std::size_t n_bath, double j,
                                              std::vector<double> gamma) {
  if (n_sys < 1 || n_bath < 1) {
    throw PreconditionError("build_local_bath_model: need n_sys >= 1 and n_bath >= 1");
  }
  if (gamma.size() != local_bath_coefficient_count(n_bath)) {
    throw PreconditionError("build_local_bath_model: expected " +
                            std::to_string(local_bath_coefficient_count(n_bath)) +
                            " coefficients");
  }
  if (!(j >= 0.0)) throw PreconditionError("build_local_bath_model: coupling must be >= 0");
  HamiltonianModel<Real> model;
  model.n_sys = n_sys;
  model.n_bath = n_bath;
  model.coupling_j = j;
  // A single system qubit has no chain bonds.
  model.h_sys = n_sys >= 2 ? build_heisenberg<Real>(n_sys) : Matrix<Real>::Zero(2, 2);
  const std::size_t block = n_bath * 4;
  const std::span<const double> all(gamma);
  model.h_bath = detail::local_sum<Real>(n_bath, all.subspan(3 * block, block));
  model.h_sb = Matrix<Real>::Zero(model.dim(), model.dim());
  double bath_norms = 0.0;
  const std::array<Pauli, 3> alphas = {Pauli::X, Pauli::Y, Pauli::Z};
  for (std::size_t a = 0; a < 3; ++a) {
    const Matrix<Real> b = detail::local_sum<Real>(n_bath, all.subspan(a * block, block));
    bath_norms += static_cast<double>(operator_norm<Real>(b));
    for (std::size_t i = 0; i < n_sys; ++i) {
      model.h_sb += kron<Real>(local_pauli<Real>(n_sys, i, alphas[a]), b);
    }
  }
  model.h_sb *= Real(j);
  model.coupling_norm_sum = j * static_cast<double>(n_sys) * bath_norms;
  model.coefficients = std::move(gamma);
  detail::finish(model);
  return model;
}

template <typename Real>
HamiltonianModel<Real> build_local_bath_model(std::size_t n_sys, std::size_t n_bath, double j,
                                              std::uint64_t seed) {
  return build_local_bath_model<Real>(
      n_sys, n_bath, j, detail::draw_uniform(seed, local_bath_coefficient_count(n_bath)));
}

/**
 * One system qubit dephased by a two-qubit bath:
 *   H = I (x) B_I + j Z (x) B_Z,  B_k = sum_{alpha,beta} gamma_{k,alpha,beta} sigma_alpha (x) sigma_beta
 * with 16 uniform [0,1) coefficients per operator (B_I first, then B_Z).
 * The system Hamiltonian is zero.
 */
template <typename Real>
HamiltonianModel<Real> build_dephasing_model(double j, std::uint64_t seed) {
  if (!(j >= 0.0)) throw PreconditionError("build_dephasing_model: coupling must be >= 0");
  HamiltonianModel<Real> model;
  model.n_sys = 1;
  model.n_bath = 2;
  model.coupling_j = j;
  model.coefficients = detail::draw_uniform(seed, 32);
  const std::span<const double> all(model.coefficients);
  model.h_sys = Matrix<Real>::Zero(2, 2);
  model.h_bath = detail::two_qubit_sum<Real>(all.subspan(0, 16));
  const Matrix<Real> bz = detail::two_qubit_sum<Real>(all.subspan(16, 16));
  model.h_sb = Real(j) * kron<Real>(pauli_matrix<Real>(PauliWord::parse("Z")), bz);
  model.coupling_norm_sum = j * static_cast<double>(operator_norm<Real>(bz));
  detail::finish(model);
  return model;
}

/**
 * Heisenberg chain with local dephasing coupling, as used for the Hahn-echo
 * example: H_SB = j sum_i Z_i (x) B_i, one B_i per system qubit, each of the
 * 1-local form over the bath qubits; H_B is one further draw of that form.
 */
template <typename Real>
HamiltonianModel<Real> build_dephasing_chain_model(std::size_t n_sys, std::size_t n_bath, double j,
                                                   std::uint64_t seed) {
  if (n_sys < 2 || n_bath < 1) {
    throw PreconditionError("build_dephasing_chain_model: need n_sys >= 2 and n_bath >= 1");
  }
  if (!(j >= 0.0)) throw PreconditionError("build_dephasing_chain_model: coupling must be >= 0");
  HamiltonianModel<Real> model;
  model.n_sys = n_sys;
  model.n_bath = n_bath;
  model.coupling_j = j;
  const std::size_t block = n_bath * 4;
  model.coefficients = detail::draw_uniform(seed, (n_sys + 1) * block);
  const std::span<const double> all(model.coefficients);
  model.h_sys = build_heisenberg<Real>(n_sys);
  model.h_bath = detail::local_sum<Real>(n_bath, all.subspan(n_sys * block, block));
  model.h_sb = Matrix<Real>::Zero(model.dim(), model.dim());
  double bath_norms = 0.0;
  for (std::size_t i = 0; i < n_sys; ++i) {
    const Matrix<Real> b = detail::local_sum<Real>(n_bath, all.subspan(i * block, block));
    bath_norms += static_cast<double>(operator_norm<Real>(b));
    model.h_sb += kron<Real>(local_pauli<Real>(n_sys, i, Pauli::Z), b);
  }
  model.h_sb *= Real(j);
  model.coupling_norm_sum = j * bath_norms;
  detail::finish(model);
  return model;
}

/// Haar-random pure state: normalized vector of i.i.d. complex Gaussians.
template <typename Real>
Vector<Real> random_pure_state(Eigen::Index dim, Rng& rng) {
  if (dim < 1) throw PreconditionError("random_pure_state: dimension must be positive");
  Vector<Real> v(dim);
  for (Eigen::Index k = 0; k < dim; ++k) {
    const double re = rng.normal();
    const double im = rng.normal();
    v(k) = Complex<Real>(Real(re), Real(im));
  }
  v /= v.norm();
  return v;
}

/// |psi_S> (x) |psi_B>, both factors Haar-random; system factor drawn first.
template <typename Real>
Vector<Real> random_product_vector(Eigen::Index dim_sys, Eigen::Index dim_bath, std::uint64_t seed) {
  if (dim_sys < 2 || dim_bath < 2) {
    throw PreconditionError("random_product_state: factor dimensions must be >= 2");
  }
  Rng rng(seed);
  const Vector<Real> sys = random_pure_state<Real>(dim_sys, rng);
  const Vector<Real> bath = random_pure_state<Real>(dim_bath, rng);
  return kron_vec<Real>(sys, bath);
}

/// Density matrix of random_product_vector.
template <typename Real>
Matrix<Real> random_product_state(Eigen::Index dim_sys, Eigen::Index dim_bath, std::uint64_t seed) {
  const Vector<Real> psi = random_product_vector<Real>(dim_sys, dim_bath, seed);
  return psi * psi.adjoint();
}

}  // namespace rdd
