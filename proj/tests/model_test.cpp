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

#include <gtest/gtest.h>

#include <algorithm>
#include <vector>

#include "rdd/model.hpp"
#include "rdd/sequences.hpp"
#include "test_util.hpp"

namespace rdd {
namespace {

using testing::Mat;
using testing::max_abs;

TEST(Rng, EngineIsTheStandardMersenneTwister) {
  // The standard pins the 10000th output of a default-seeded mt19937_64.
  Rng rng(5489u);
  std::uint64_t x = 0;
  for (int k = 0; k < 10000; ++k) x = rng.next();
  EXPECT_EQ(x, 9981545732273789042ULL);
}

TEST(Rng, UniformAndNormalRanges) {
  Rng rng(1);
  double mean = 0.0;
  double var = 0.0;
  const int n = 20000;
  for (int k = 0; k < n; ++k) {
    const double u = rng.uniform01();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    const double z = rng.normal();
    mean += z;
    var += z * z;
  }
  mean /= n;
  var /= n;
  EXPECT_NEAR(mean, 0.0, 0.05);
  EXPECT_NEAR(var, 1.0, 0.05);
}

TEST(Rng, DerivedSeedsDiffer) {
  EXPECT_NE(derive_seed(1, 0, 0), derive_seed(1, 0, 1));
  EXPECT_NE(derive_seed(1, 0, 0), derive_seed(1, 1, 0));
  EXPECT_NE(derive_seed(1, 0, 0), derive_seed(2, 0, 0));
  EXPECT_EQ(derive_seed(7, 3, 9), derive_seed(7, 3, 9));
}

TEST(Heisenberg, TwoQubitSpectrum) {
  const Mat h = build_heisenberg<double>(2);
  // Independent route: general (non-Hermitian) eigensolver.
  Eigen::ComplexEigenSolver<Mat> solver(h);
  std::vector<double> values;
  for (Eigen::Index k = 0; k < 4; ++k) values.push_back(solver.eigenvalues()(k).real());
  std::sort(values.begin(), values.end());
  const std::vector<double> expected = {-3, 1, 1, 1};
  for (std::size_t k = 0; k < 4; ++k) EXPECT_NEAR(values[k], expected[k], 1e-12);
}

TEST(Heisenberg, CommutesWithGlobalPaulis) {
  for (std::size_t n : {2u, 3u, 4u}) {
    const Mat h = build_heisenberg<double>(n);
    EXPECT_LE(hermiticity_defect(h), 0.0);
    const DecouplingGroup group = DecouplingGroup::xy4(n);
    for (const PauliWord& g : group.elements()) {
      const Mat gm = pauli_matrix<double>(g);
      EXPECT_LE(max_abs(gm * h - h * gm), 1e-12);
    }
  }
}

TEST(Heisenberg, FourQubitsTraceless) {
  const Mat h = build_heisenberg<double>(4);
  EXPECT_EQ(h.rows(), 16);
  EXPECT_NEAR(std::abs(h.trace()), 0.0, 1e-12);
}

TEST(Heisenberg, RejectsSingleQubit) { EXPECT_THROW(build_heisenberg<double>(1), PreconditionError); }

TEST(LocalBathModel, DeterministicInSeed) {
  const auto a = build_local_bath_model<double>(2, 2, 0.3, 99);
  const auto b = build_local_bath_model<double>(2, 2, 0.3, 99);
  EXPECT_EQ(a.coefficients, b.coefficients);
  EXPECT_EQ(a.h_sb, b.h_sb);
  EXPECT_EQ(a.h_bath, b.h_bath);
  const auto c = build_local_bath_model<double>(2, 2, 0.3, 100);
  EXPECT_NE(a.coefficients, c.coefficients);
}

TEST(LocalBathModel, ZeroCouplingHasNoInteraction) {
  const auto m = build_local_bath_model<double>(2, 2, 0.0, 5);
  EXPECT_EQ(operator_norm<double>(m.h_sb), 0.0);
  EXPECT_EQ(m.coupling_j, 0.0);
}

TEST(LocalBathModel, ZeroCoefficientsHook) {
  const auto m = build_local_bath_model<double>(
      2, 2, 1.0, std::vector<double>(local_bath_coefficient_count(2), 0.0));
  EXPECT_EQ(max_abs(m.h_sb), 0.0);
  EXPECT_EQ(max_abs(m.h_bath), 0.0);
}

TEST(LocalBathModel, Invariants) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const double j = 0.1 * static_cast<double>(seed + 1);
    const auto m = build_local_bath_model<double>(3, 2, j, seed);
    EXPECT_EQ(m.coupling_j, j);
    EXPECT_LE(hermiticity_defect(m.h_sys), 1e-10);
    EXPECT_LE(hermiticity_defect(m.h_bath), 1e-10);
    EXPECT_LE(hermiticity_defect(m.h_sb), 1e-10);
    EXPECT_NEAR(m.beta, operator_norm<double>(m.h0()), 1e-9);
    EXPECT_EQ(m.dim(), 32);
    for (double g : m.coefficients) {
      EXPECT_GE(g, 0.0);
      EXPECT_LT(g, 1.0);
    }
  }
}

TEST(LocalBathModel, CouplingScalesLinearlyInJ) {
  const auto a = build_local_bath_model<double>(2, 1, 1.0, 3);
  const auto b = build_local_bath_model<double>(2, 1, 0.25, 3);
  EXPECT_LE(max_abs(0.25 * a.h_sb - b.h_sb), 1e-15);
  EXPECT_EQ(a.h_bath, b.h_bath);
}

TEST(LocalBathModel, XY4TwirlAnnihilatesEveryCouplingTerm) {
  const std::size_t n = 3;
  const DecouplingGroup group = DecouplingGroup::xy4(n);
  Rng rng(31);
  const Mat bath_op = testing::random_hermitian(2, rng);
  for (std::size_t i = 0; i < n; ++i) {
    for (Pauli p : {Pauli::X, Pauli::Y, Pauli::Z}) {
      const Mat term = kron<double>(local_pauli<double>(n, i, p), bath_op);
      Mat avg = Mat::Zero(term.rows(), term.cols());
      for (const PauliWord& g : group.elements()) {
        const Mat gm = kron<double>(pauli_matrix<double>(g), Mat::Identity(2, 2));
        avg += gm * term * gm.adjoint();
      }
      EXPECT_LE(max_abs(avg / 4.0), 1e-12);
    }
  }
}

TEST(DephasingModel, Structure) {
  const auto m = build_dephasing_model<double>(0.7, 4);
  EXPECT_EQ(m.n_sys, 1u);
  EXPECT_EQ(m.n_bath, 2u);
  EXPECT_EQ(max_abs(m.h_sys), 0.0);
  const Mat z = kron<double>(pauli_matrix<double>(PauliWord::parse("Z")), Mat::Identity(4, 4));
  EXPECT_LE(max_abs(z * m.h_sb - m.h_sb * z), 1e-12);
  EXPECT_EQ(m.coefficients.size(), 32u);
  EXPECT_EQ(build_dephasing_model<double>(0.7, 4).coefficients, m.coefficients);
}

TEST(DephasingChainModel, XFlipAnticommutesWithCoupling) {
  const auto m = build_dephasing_chain_model<double>(2, 1, 0.5, 8);
  const Mat x = kron<double>(pauli_matrix<double>(PauliWord::parse("XX")), Mat::Identity(2, 2));
  EXPECT_LE(max_abs(x * m.h_sb + m.h_sb * x), 1e-12);
  EXPECT_LE(max_abs(x * m.h0() - m.h0() * x), 1e-12);
}

TEST(RandomProductState, PureNormalizedProduct) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Mat rho = random_product_state<double>(4, 8, seed);
    EXPECT_NEAR(rho.trace().real(), 1.0, 1e-12);
    EXPECT_NEAR((rho * rho).trace().real(), 1.0, 1e-12);
    const Mat red = partial_trace<double>(rho, 4, 8, true);
    Eigen::SelfAdjointEigenSolver<Mat> solver(red);
    EXPECT_NEAR(solver.eigenvalues()(3), 1.0, 1e-12);
    EXPECT_NEAR(solver.eigenvalues().head(3).cwiseAbs().maxCoeff(), 0.0, 1e-12);
  }
  EXPECT_EQ(random_product_state<double>(2, 2, 3), random_product_state<double>(2, 2, 3));
  EXPECT_THROW(random_product_state<double>(1, 2, 3), PreconditionError);
}

}  // namespace
}  // namespace rdd
