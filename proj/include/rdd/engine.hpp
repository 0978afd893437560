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

#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "rdd/linalg.hpp"
#include "rdd/model.hpp"
#include "rdd/pauli.hpp"
#include "rdd/sequences.hpp"

namespace rdd {

/**
 * Free-evolution steps exp(-i H d) for one Hamiltonian, one
 * diagonalization shared by every duration and one cached matrix per
 * distinct duration.
 */
template <typename Real>
class SegmentPropagator {
 public:
  explicit SegmentPropagator(const Matrix<Real>& h) : eigen_(h) {}
  explicit SegmentPropagator(HermitianEigen<Real> eigen) : eigen_(std::move(eigen)) {}

  Eigen::Index dim() const { return eigen_.dim(); }
  const HermitianEigen<Real>& eigen() const { return eigen_; }

  const Matrix<Real>& step(double duration) {
    auto it = cache_.find(duration);
    if (it == cache_.end()) {
      it = cache_.emplace(duration, eigen_.propagator(Real(duration))).first;
    }
    return it->second;
  }

 private:
  HermitianEigen<Real> eigen_;
  std::map<double, Matrix<Real>> cache_;
};

namespace detail {
inline Eigen::Index checked_bath_dim(Eigen::Index dim, std::size_t n_sys, const char* what) {
  const Eigen::Index dim_sys = Eigen::Index{1} << n_sys;
  if (dim <= 0 || dim % dim_sys != 0) {
    throw DimensionError(std::string(what) + ": dimension " + std::to_string(dim) +
                         " is not a multiple of 2^" + std::to_string(n_sys));
  }
  return dim / dim_sys;
}
}  // namespace detail

/**
 * Applies the sequence to each column of `states` without forming the
 * propagator. Pulses act as P (x) I_bath.
 */
template <typename Real>
Matrix<Real> propagate(const PulseSequence& seq, SegmentPropagator<Real>& prop,
                       Matrix<Real> states) {
  detail::checked_bath_dim(prop.dim(), seq.qubit_count(), "propagate");
  if (states.rows() != prop.dim()) throw DimensionError("propagate: state dimension mismatch");
  for (const Segment& s : seq.segments()) {
    if (!s.pulse.is_identity() || s.pulse.quarter_turns() != 0) {
      states = PauliAction<Real>(s.pulse).left(states);
    }
    states = prop.step(s.duration) * states;
  }
  return PauliAction<Real>(seq.final_pulse()).left(states);
}

template <typename Real>
Matrix<Real> compile_unitary(const PulseSequence& seq, SegmentPropagator<Real>& prop) {
  Matrix<Real> u = propagate(seq, prop, identity<Real>(prop.dim()));
  const double defect = unitarity_defect(u);
  if (!(defect <= tol::kStructural)) {
    throw NumericalContractError("compile_unitary: unitarity defect " + std::to_string(defect));
  }
  return u;
}

/**
 * Time-ordered propagator of the sequence under h_total, with every pulse
 * acting on the leading qubits as P (x) I_bath.
 */
template <typename Real>
Matrix<Real> compile_unitary(const PulseSequence& seq, const Matrix<Real>& h_total) {
  require_hermitian(h_total, "compile_unitary");
  detail::checked_bath_dim(h_total.rows(), seq.qubit_count(), "compile_unitary");
  SegmentPropagator<Real> prop(h_total);
  return compile_unitary(seq, prop);
}

/// U_0 = exp(-i H_0 T)
template <typename Real>
Matrix<Real> ideal_unitary(const HamiltonianModel<Real>& model, double total_t) {
  if (!(total_t >= 0.0)) throw PreconditionError("ideal_unitary: total time must be >= 0");
  return expm_hermitian<Real>(model.h0(), Real(total_t));
}

template <typename Real>
struct ChannelBranch {
  Real weight;
  Matrix<Real> unitary;
};

/** rho -> sum_k w_k U_k rho U_k^dagger */
template <typename Real>
class MixedUnitaryChannel {
 public:
  explicit MixedUnitaryChannel(std::vector<ChannelBranch<Real>> branches)
      : branches_(std::move(branches)) {
    if (branches_.empty()) throw PreconditionError("MixedUnitaryChannel: no branches");
    Real total = 0;
    for (const auto& b : branches_) {
      if (!(b.weight > 0)) throw PreconditionError("MixedUnitaryChannel: weights must be positive");
      require_same_shape(b.unitary, branches_.front().unitary, "MixedUnitaryChannel");
      require_square(b.unitary, "MixedUnitaryChannel");
      const double defect = unitarity_defect(b.unitary);
      if (!(defect <= tol::kStructural)) {
        throw NumericalContractError("MixedUnitaryChannel: branch unitarity defect " +
                                     std::to_string(defect));
      }
      total += b.weight;
    }
    if (std::abs(static_cast<double>(total) - 1.0) > tol::kTrace) {
      throw PreconditionError("MixedUnitaryChannel: weights do not sum to 1");
    }
  }

  const std::vector<ChannelBranch<Real>>& branches() const { return branches_; }
  std::size_t size() const { return branches_.size(); }
  Eigen::Index dim() const { return branches_.front().unitary.rows(); }

 private:
  std::vector<ChannelBranch<Real>> branches_;
};

template <typename Real>
MixedUnitaryChannel<Real> deterministic_channel(const PulseSequence& seq,
                                                const HamiltonianModel<Real>& model) {
  return MixedUnitaryChannel<Real>({{Real(1), compile_unitary<Real>(seq, model.total())}});
}

/// Uniform mixture of g D g^dagger over the group.
template <typename Real>
MixedUnitaryChannel<Real> randomized_channel(const PulseSequence& seq, const DecouplingGroup& group,
                                             const HamiltonianModel<Real>& model) {
  if (group.qubit_count() != seq.qubit_count()) {
    throw DimensionError("randomized_channel: group and sequence act on different qubit counts");
  }
  const Matrix<Real> d = compile_unitary<Real>(seq, model.total());
  std::vector<ChannelBranch<Real>> branches;
  const Real w = Real(1) / Real(group.size());
  for (const PauliWord& g : group.elements()) {
    branches.push_back({w, PauliAction<Real>(g).conjugate(d)});
  }
  return MixedUnitaryChannel<Real>(std::move(branches));
}

template <typename Real>
Matrix<Real> apply_channel(const MixedUnitaryChannel<Real>& ch, const Matrix<Real>& rho) {
  if (rho.rows() != ch.dim() || rho.cols() != ch.dim()) {
    throw DimensionError("apply_channel: state dimension does not match channel");
  }
  Matrix<Real> out = Matrix<Real>::Zero(rho.rows(), rho.cols());
  for (const auto& b : ch.branches()) {
    out.noalias() += b.weight * (b.unitary * rho * b.unitary.adjoint());
  }
  return out;
}

/// Trace distance between ch(rho) and U_0 rho U_0^dagger.
template <typename Real>
Real state_error(const MixedUnitaryChannel<Real>& ch, const HamiltonianModel<Real>& model,
                 const Matrix<Real>& rho, double total_t) {
  const Matrix<Real> u0 = ideal_unitary(model, total_t);
  const Matrix<Real> ideal = u0 * rho * u0.adjoint();
  return trace_distance<Real>(apply_channel(ch, rho), ideal);
}

/// Trace distance between the system marginals of ch(rho0) and rho0.
template <typename Real>
Real subsystem_error(const MixedUnitaryChannel<Real>& ch, const Matrix<Real>& rho0,
                     Eigen::Index dim_sys, Eigen::Index dim_bath) {
  const Matrix<Real> out = partial_trace<Real>(apply_channel(ch, rho0), dim_sys, dim_bath, true);
  return trace_distance<Real>(out, partial_trace<Real>(rho0, dim_sys, dim_bath, true));
}

/// n-qubit Pauli basis in base-4 order, qubit 0 most significant.
inline std::vector<PauliWord> pauli_basis(std::size_t n) {
  std::vector<PauliWord> basis;
  const std::size_t count = std::size_t{1} << (2 * n);
  for (std::size_t idx = 0; idx < count; ++idx) {
    std::vector<Pauli> labels(n);
    for (std::size_t k = 0; k < n; ++k) {
      labels[k] = static_cast<Pauli>((idx >> (2 * (n - 1 - k))) & 3);
    }
    basis.emplace_back(std::move(labels));
  }
  return basis;
}

/** Bath blocks E_P of an operator D = sum_P P (x) E_P. */
template <typename Real>
class BathBlockMap {
 public:
  BathBlockMap(std::size_t n_sys, std::vector<std::pair<PauliWord, Matrix<Real>>> entries)
      : n_sys_(n_sys), entries_(std::move(entries)) {}

  std::size_t n_sys() const { return n_sys_; }
  const std::vector<std::pair<PauliWord, Matrix<Real>>>& entries() const { return entries_; }

  const Matrix<Real>& block(const PauliWord& p) const {
    for (const auto& [word, e] : entries_) {
      if (word.same_up_to_phase(p)) return e;
    }
    throw PreconditionError("BathBlockMap::block: no entry for " + p.to_string());
  }

  /// sum_{P != I} ||E_P|| (operator norm)
  Real off_identity_norm_sum() const {
    Real total = 0;
    for (const auto& [word, e] : entries_) {
      if (!word.is_identity()) total += operator_norm<Real>(e);
    }
    return total;
  }

  Matrix<Real> reconstruct() const {
    const Eigen::Index dim_bath = entries_.front().second.rows();
    const Eigen::Index dim = (Eigen::Index{1} << n_sys_) * dim_bath;
    Matrix<Real> out = Matrix<Real>::Zero(dim, dim);
    for (const auto& [word, e] : entries_) out += kron<Real>(pauli_matrix<Real>(word), e);
    return out;
  }

 private:
  std::size_t n_sys_;
  std::vector<std::pair<PauliWord, Matrix<Real>>> entries_;
};

/// E_P = 2^{-n} tr_sys[(P^dagger (x) I) d] for every system Pauli P.
template <typename Real>
BathBlockMap<Real> bath_block_decompose(const Matrix<Real>& d, std::size_t n_sys) {
  require_square(d, "bath_block_decompose");
  const Eigen::Index dim_bath = detail::checked_bath_dim(d.rows(), n_sys, "bath_block_decompose");
  const Eigen::Index dim_sys = Eigen::Index{1} << n_sys;
  std::vector<std::pair<PauliWord, Matrix<Real>>> entries;
  for (PauliWord& p : pauli_basis(n_sys)) {
    const Matrix<Real> projected = PauliAction<Real>(p.dagger()).left(d);
    Matrix<Real> e = partial_trace<Real>(projected, dim_sys, dim_bath, false) / Real(dim_sys);
    entries.emplace_back(std::move(p), std::move(e));
  }
  return BathBlockMap<Real>(n_sys, std::move(entries));
}

/// || |G|^{-1} sum_g (g (x) I) h_sb (g (x) I)^dagger ||
template <typename Real>
Real decoupling_residual(const DecouplingGroup& group, const Matrix<Real>& h_sb, std::size_t n_sys) {
  require_square(h_sb, "decoupling_residual");
  if (group.qubit_count() != n_sys) {
    throw DimensionError("decoupling_residual: group does not act on the system qubits");
  }
  detail::checked_bath_dim(h_sb.rows(), n_sys, "decoupling_residual");
  Matrix<Real> avg = Matrix<Real>::Zero(h_sb.rows(), h_sb.cols());
  for (const PauliWord& g : group.elements()) avg += PauliAction<Real>(g).conjugate(h_sb);
  avg /= Real(group.size());
  return operator_norm<Real>(avg);
}

/** Right-hand sides of the CDD_K error bounds. */
struct CddBound {
  /// T (2 beta)^K J 2^{K(K-1)+1} tau^K + J^2 T [2 + T (2 beta + J)] tau
  double deterministic_bound = 0.0;
  /// J^2 T [2 + T (2 beta + J)] tau; the randomized bound is ||D - U_0||^2 plus this.
  double randomized_extra = 0.0;
};

inline CddBound cdd_bound_rhs(double j, double beta, double tau, int k, double total_t) {
  if (!(j >= 0 && beta >= 0 && tau >= 0 && total_t >= 0) || k < 0) {
    throw PreconditionError("cdd_bound_rhs: inputs must be non-negative");
  }
  const double second_order = j * j * total_t * (2.0 + total_t * (2.0 * beta + j)) * tau;
  const double first_order = total_t * std::pow(2.0 * beta, k) * j *
                             std::pow(2.0, k * (k - 1) + 1) * std::pow(tau, k);
  return {first_order + second_order, second_order};
}

/// Draws a branch index with probability equal to its weight.
template <typename Real>
std::size_t sample_branch(const MixedUnitaryChannel<Real>& ch, Rng& rng) {
  const double u = rng.uniform01();
  double acc = 0.0;
  for (std::size_t k = 0; k < ch.size(); ++k) {
    acc += static_cast<double>(ch.branches()[k].weight);
    if (u < acc) return k;
  }
  return ch.size() - 1;
}

}  // namespace rdd
