// Copyright 2026 The greenqfi Authors
// SPDX-License-Identifier: Apache-2.0

#include "greenqfi/qfi.hpp"

#include "dense_oracle.hpp"

#include <gtest/gtest.h>

#include <numbers>
#include <random>

using namespace greenqfi;

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::VectorXcd random_in(const SubsetBasis& b, unsigned seed) {
  return oracle::random_state(static_cast<int>(b.size()), seed);
}

WitnessVector random_phases(int n, unsigned seed) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> u(0.0, 2.0 * kPi);
  Eigen::VectorXcd a(n);
  for (int j = 0; j < n; ++j) a[j] = std::polar(1.0, u(gen));
  return witness_from_coefficients(a);
}

}  // namespace

TEST(Witness, FromK) {
  const auto w = witness_from_k(kPi / 2, 4);
  ASSERT_TRUE(w.k);
  EXPECT_NEAR(std::abs(w.a[0] - cplx(0, 1)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(w.a[3] - cplx(1, 0)), 0.0, 1e-15);
}

TEST(PureQfi, TwoSiteToy) {
  // |psi> = (|10> + |01>)/sqrt 2.
  SectorBasis s(2, 1);
  Eigen::VectorXcd psi = Eigen::VectorXcd::Constant(2, 1.0 / std::sqrt(2.0));
  for (unsigned seed = 0; seed < 5; ++seed) {
    const auto a = random_phases(2, seed);
    const double ref = 2.0 * std::norm(a.a[0] - a.a[1]);
    EXPECT_NEAR(qfi_pure_den(correlation_data(psi, s).C, a), ref, 1e-12);
    EXPECT_NEAR(qfi_doubled_pure_oracle(psi, s, a), ref, 1e-12);
  }
}

TEST(PureQfi, CorrelationDataMatchesDense) {
  const auto space = SubsetBasis::full(4);
  const auto psi = random_in(space, 11);
  const auto data = correlation_data(psi, space);
  EXPECT_LT((data.C - oracle::correlation(psi, 4)).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_THROW(correlation_data(Eigen::VectorXcd(2 * psi), space), std::invalid_argument);
}

TEST(PureQfi, DenAgreesWithDenseOracle) {
  for (int n = 2; n <= 5; ++n) {
    for (int ne = 0; ne <= n; ++ne) {
      const auto sector = SubsetBasis::sector(n, ne);
      const auto psi = random_in(sector, 100u * n + ne);
      const auto a = random_phases(n, 7u * n + ne);
      const double dense = oracle::doubled_pure_qfi(to_bit_order(psi, sector), a.a);
      EXPECT_NEAR(qfi_pure_den(correlation_data(psi, sector).C, a), dense, 1e-10);
      EXPECT_NEAR(qfi_doubled_pure_oracle(psi, sector, a), dense, 1e-10);
    }
  }
}

TEST(PureQfi, GeneralFormulaExactForAnyState) {
  for (int n = 2; n <= 5; ++n) {
    const auto space = SubsetBasis::full(n);
    for (unsigned seed = 0; seed < 4; ++seed) {
      const auto psi = random_in(space, 1000u * n + seed);
      const auto a = random_phases(n, seed + 50u);
      const double dense = oracle::doubled_pure_qfi(psi, a.a);
      EXPECT_NEAR(qfi_pure_general(correlation_data(psi, space), a), dense, 1e-10);
    }
  }
}

TEST(PureQfi, IenFormulaExactOnParityEigenstates) {
  for (int n = 2; n <= 5; ++n) {
    for (int parity : {1, -1}) {
      const auto space = SubsetBasis::parity(n, parity);
      const auto psi = random_in(space, 500u * n + (parity > 0));
      const auto a = random_phases(n, 3u * n);
      const auto data = correlation_data(psi, space);
      EXPECT_LT(data.b.norm(), 1e-14);
      const double ref = qfi_doubled_pure_oracle(psi, space, a);
      EXPECT_NEAR(qfi_pure_ien(data, a), ref, 1e-10);
      EXPECT_NEAR(qfi_pure_general(data, a), ref, 1e-10);
      EXPECT_NEAR(witness_mean(data, a), 0.0, 1e-14);
    }
  }
}

TEST(PureQfi, IenFormulaDeviatesWhenParityIsBroken) {
  // (|0> + |1>)/sqrt 2 on one mode of a two-site block has <c^dag> != 0.
  const auto space = SubsetBasis::full(2);
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(4);
  psi[0] = psi[1] = 1.0 / std::sqrt(2.0);
  const auto a = witness_from_k(0.0, 2);
  const auto data = correlation_data(psi, space);
  const double exact = qfi_doubled_pure_oracle(psi, space, a);
  EXPECT_NEAR(qfi_pure_general(data, a), exact, 1e-12);
  EXPECT_GT(std::abs(qfi_pure_ien(data, a) - exact), 1e-3);
}

TEST(ExtendedCorrelation, SumAndTraceFormsAgree) {
  for (int n = 2; n <= 5; ++n) {
    const auto space = SubsetBasis::parity(n, 1);
    const auto psi = random_in(space, 77u * n);
    const auto a = witness_from_k(0.37 * n, n);
    const auto data = correlation_data(psi, space);
    const auto ext = extended_correlation(data, a);
    const double ref = qfi_doubled_pure_oracle(psi, space, a);
    EXPECT_NEAR(qfi_extended(ext), ref, 1e-10);
    EXPECT_NEAR(qfi_extended_trace(ext), ref, 1e-10);
    EXPECT_LE(ref, extended_upper_bound(ext) + 1e-10);
    EXPECT_LE(extended_upper_bound(ext), 4.0 * n + 1e-10);
    const Eigen::MatrixXcd m = ext.matrix;
    EXPECT_LT((m - m.adjoint()).cwiseAbs().maxCoeff(), 1e-14);
  }
}

TEST(ExtendedCorrelation, UpperBoundOnDenStates) {
  for (int n = 2; n <= 5; ++n) {
    const auto space = SubsetBasis::sector(n, n / 2);
    for (unsigned seed = 0; seed < 10; ++seed) {
      const auto psi = random_in(space, seed + 31u * n);
      const auto a = random_phases(n, seed);
      const auto ext = extended_correlation(correlation_data(psi, space), a);
      EXPECT_LE(qfi_extended(ext), extended_upper_bound(ext) + 1e-10);
    }
  }
}

TEST(NaiveWitness, AlwaysFourNOnDenStates) {
  for (int n = 2; n <= 6; ++n) {
    for (int ne = 0; ne <= n; ++ne) {
      const auto sector = SubsetBasis::sector(n, ne);
      EXPECT_NEAR(qfi_naive_single_fermion(random_in(sector, 9u * n + ne), sector), 4.0 * n, 1e-10);
    }
  }
}

TEST(DoubledOracle, SizeGuard) {
  const auto s = SubsetBasis::sector(7, 3);
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(s.size()));
  psi[0] = 1.0;
  EXPECT_THROW(qfi_doubled_pure_oracle(psi, s, witness_from_k(0.0, 7)), std::invalid_argument);
  EXPECT_THROW(qfi_pure_den(Eigen::MatrixXcd::Zero(3, 3), witness_from_k(0.0, 4)), std::invalid_argument);
}

TEST(QfiCurve, DensityIsFOverFourN) {
  const auto sector = SubsetBasis::sector(4, 2);
  const auto psi = random_in(sector, 5);
  const auto curve = qfi_curve(correlation_data(psi, sector), k_grid(8));
  ASSERT_EQ(curve.qfi.size(), 8u);
  const auto f = curve.density();
  for (std::size_t i = 0; i < f.size(); ++i) EXPECT_DOUBLE_EQ(f[i], curve.qfi[i] / 16.0);
  EXPECT_DOUBLE_EQ(k_grid(4)[2], kPi);
}
