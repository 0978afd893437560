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

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rdd/common.hpp"

namespace rdd {

/** Symbols for the single-qubit Pauli operators (and identity). */
enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

inline char to_char(Pauli p) { return "IXYZ"[static_cast<int>(p)]; }

/**
 * Product of two single-qubit Paulis: a * b = i^quarter_turns * result.
 */
inline std::pair<Pauli, unsigned> multiply(Pauli a, Pauli b) {
  if (a == Pauli::I) return {b, 0};
  if (b == Pauli::I) return {a, 0};
  if (a == b) return {Pauli::I, 0};
  const int ia = static_cast<int>(a);
  const int ib = static_cast<int>(b);
  // X,Y,Z are cyclic: XY = iZ, YZ = iX, ZX = iY; reversed order gives -i.
  const auto result = static_cast<Pauli>(6 - ia - ib);
  const bool cyclic = (ib - ia + 3) % 3 == 1;
  return {result, cyclic ? 1u : 3u};
}

/**
 * An n-qubit Pauli word with a phase in {1, i, -1, -i}, stored as the power
 * of i (quarter turns, mod 4).
 *
 * Qubit 0 is the leftmost tensor factor, i.e. the most significant bit of a
 * computational-basis index.
 */
class PauliWord {
 public:
  PauliWord() = default;

  explicit PauliWord(std::vector<Pauli> labels, unsigned quarter_turns = 0)
      : labels_(std::move(labels)), quarter_turns_(quarter_turns % 4) {}

  static PauliWord identity(std::size_t n) { return PauliWord(std::vector<Pauli>(n, Pauli::I)); }

  /// The same Pauli on every qubit, e.g. X^{(x) n}.
  static PauliWord uniform(std::size_t n, Pauli p) { return PauliWord(std::vector<Pauli>(n, p)); }

  /// Pauli p on qubit `site`, identity elsewhere.
  static PauliWord single(std::size_t n, std::size_t site, Pauli p) {
    std::vector<Pauli> labels(n, Pauli::I);
    labels.at(site) = p;
    return PauliWord(std::move(labels));
  }

  /// Parses e.g. "XZ", "-YI", "iZ", "-iXX".
  static PauliWord parse(std::string_view text) {
    unsigned q = 0;
    if (!text.empty() && (text.front() == '+' || text.front() == '-')) {
      q = text.front() == '-' ? 2 : 0;
      text.remove_prefix(1);
    }
    if (!text.empty() && text.front() == 'i') {
      q += 1;
      text.remove_prefix(1);
    }
    std::vector<Pauli> labels;
    for (char c : text) {
      switch (c) {
        case 'I': labels.push_back(Pauli::I); break;
        case 'X': labels.push_back(Pauli::X); break;
        case 'Y': labels.push_back(Pauli::Y); break;
        case 'Z': labels.push_back(Pauli::Z); break;
        default: throw PreconditionError(std::string("PauliWord::parse: bad symbol '") + c + "'");
      }
    }
    return PauliWord(std::move(labels), q);
  }

  std::size_t size() const { return labels_.size(); }
  const std::vector<Pauli>& labels() const { return labels_; }
  Pauli operator[](std::size_t k) const { return labels_[k]; }
  unsigned quarter_turns() const { return quarter_turns_; }

  template <typename Real = double>
  Complex<Real> phase() const {
    switch (quarter_turns_) {
      case 0: return {1, 0};
      case 1: return {0, 1};
      case 2: return {-1, 0};
      default: return {0, -1};
    }
  }

  /// True when every label is I, whatever the phase.
  bool is_identity() const {
    for (Pauli p : labels_) {
      if (p != Pauli::I) return false;
    }
    return true;
  }

  /// Paulis are Hermitian, so only the phase is conjugated.
  PauliWord dagger() const { return PauliWord(labels_, (4 - quarter_turns_) % 4); }

  PauliWord without_phase() const { return PauliWord(labels_); }

  bool same_up_to_phase(const PauliWord& other) const { return labels_ == other.labels_; }

  /// Whether the two words commute as operators.
  bool commutes_with(const PauliWord& other) const {
    require_same_size(other, "PauliWord::commutes_with");
    int anti = 0;
    for (std::size_t k = 0; k < labels_.size(); ++k) {
      const Pauli a = labels_[k];
      const Pauli b = other.labels_[k];
      if (a != Pauli::I && b != Pauli::I && a != b) ++anti;
    }
    return anti % 2 == 0;
  }

  std::string to_string() const {
    static constexpr const char* kPrefix[] = {"+", "+i", "-", "-i"};
    std::string out = kPrefix[quarter_turns_];
    for (Pauli p : labels_) out += to_char(p);
    return out;
  }

  friend bool operator==(const PauliWord&, const PauliWord&) = default;

  /// Exact product, phase included. Throws on length mismatch.
  friend PauliWord operator*(const PauliWord& a, const PauliWord& b) {
    a.require_same_size(b, "pauli_mul");
    std::vector<Pauli> labels(a.size());
    unsigned q = a.quarter_turns_ + b.quarter_turns_;
    for (std::size_t k = 0; k < a.size(); ++k) {
      const auto [p, turns] = multiply(a.labels_[k], b.labels_[k]);
      labels[k] = p;
      q += turns;
    }
    return PauliWord(std::move(labels), q);
  }

 private:
  void require_same_size(const PauliWord& other, const char* what) const {
    if (size() != other.size()) {
      throw DimensionError(std::string(what) + ": words have " + std::to_string(size()) +
                           " and " + std::to_string(other.size()) + " qubits");
    }
  }

  std::vector<Pauli> labels_;
  unsigned quarter_turns_ = 0;
};

inline PauliWord pauli_mul(const PauliWord& a, const PauliWord& b) { return a * b; }

/**
 * Signed-permutation form of a Pauli word: P|s> = coeff[s] |target[s]>.
 * Lets P (x) I_bath act on matrices and vectors in O(dim^2) / O(dim).
 */
template <typename Real>
class PauliAction {
 public:
  explicit PauliAction(const PauliWord& word) {
    const std::size_t n = word.size();
    const std::size_t dim = std::size_t{1} << n;
    target_.resize(dim);
    coeff_.resize(dim);
    const Complex<Real> global = word.phase<Real>();
    for (std::size_t s = 0; s < dim; ++s) {
      std::size_t t = s;
      Complex<Real> c = global;
      for (std::size_t k = 0; k < n; ++k) {
        const std::size_t bit = std::size_t{1} << (n - 1 - k);
        const bool one = (s & bit) != 0;
        switch (word[k]) {
          case Pauli::I: break;
          case Pauli::X: t ^= bit; break;
          case Pauli::Y:
            t ^= bit;
            c *= one ? Complex<Real>(0, -1) : Complex<Real>(0, 1);
            break;
          case Pauli::Z:
            if (one) c = -c;
            break;
        }
      }
      target_[s] = t;
      coeff_[s] = c;
    }
  }

  std::size_t dim() const { return target_.size(); }

  /// (P (x) I_bath) m
  Matrix<Real> left(const Matrix<Real>& m) const {
    const Eigen::Index block = check(m.rows(), "PauliAction::left");
    Matrix<Real> out(m.rows(), m.cols());
    for (std::size_t s = 0; s < target_.size(); ++s) {
      out.middleRows(static_cast<Eigen::Index>(target_[s]) * block, block) =
          coeff_[s] * m.middleRows(static_cast<Eigen::Index>(s) * block, block);
    }
    return out;
  }

  /// m (P (x) I_bath)^dagger
  Matrix<Real> right_dagger(const Matrix<Real>& m) const {
    const Eigen::Index block = check(m.cols(), "PauliAction::right_dagger");
    Matrix<Real> out(m.rows(), m.cols());
    for (std::size_t s = 0; s < target_.size(); ++s) {
      out.middleCols(static_cast<Eigen::Index>(target_[s]) * block, block) =
          std::conj(coeff_[s]) * m.middleCols(static_cast<Eigen::Index>(s) * block, block);
    }
    return out;
  }

  /// (P (x) I) m (P (x) I)^dagger
  Matrix<Real> conjugate(const Matrix<Real>& m) const { return right_dagger(left(m)); }

 private:
  Eigen::Index check(Eigen::Index extent, const char* what) const {
    const auto dim = static_cast<Eigen::Index>(target_.size());
    if (extent % dim != 0 || extent == 0) {
      throw DimensionError(std::string(what) + ": extent " + std::to_string(extent) +
                           " is not a multiple of " + std::to_string(dim));
    }
    return extent / dim;
  }

  std::vector<std::size_t> target_;
  std::vector<Complex<Real>> coeff_;
};

/** Dense 2^n x 2^n matrix of a Pauli word, phase included. */
template <typename Real>
Matrix<Real> pauli_matrix(const PauliWord& w) {
  const PauliAction<Real> action(w);
  const auto dim = static_cast<Eigen::Index>(action.dim());
  return action.left(Matrix<Real>::Identity(dim, dim));
}

}  // namespace rdd
