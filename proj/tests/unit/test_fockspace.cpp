// Copyright 2026 The greenqfi Authors
// SPDX-License-Identifier: Apache-2.0

#include "greenqfi/fockspace.hpp"

#include "dense_oracle.hpp"

#include <gtest/gtest.h>

using namespace greenqfi;

TEST(OccupationState, CountsAndParity) {
  OccupationState s{0b1011};
  EXPECT_EQ(s.count(), 3);
  EXPECT_EQ(s.parity(), -1);
  EXPECT_TRUE(s.occupied(1));
  EXPECT_FALSE(s.occupied(3));
}

TEST(ModeOps, JordanWignerSign) {
  // c_3^dag on |1,1,0> picks up (-1)^2.
  auto r = apply_mode_op(OccupationState{0b011}, 3, ModeKind::create);
  ASSERT_TRUE(r);
  EXPECT_EQ(r->state.bits, 0b111u);
  EXPECT_EQ(r->sign, 1);
  // c_2 on |1,1,0>: one occupied mode below.
  r = apply_mode_op(OccupationState{0b011}, 2, ModeKind::annihilate);
  ASSERT_TRUE(r);
  EXPECT_EQ(r->state.bits, 0b001u);
  EXPECT_EQ(r->sign, -1);
  EXPECT_FALSE(apply_mode_op(OccupationState{0b011}, 1, ModeKind::create));
  EXPECT_FALSE(apply_mode_op(OccupationState{0b011}, 3, ModeKind::annihilate));
}

TEST(ModeOps, StringAppliesRightmostFirst) {
  const ModeOp ops[] = {cdag(1), c(2)};
  auto r = apply_mode_string(OccupationState{0b010}, ops);
  ASSERT_TRUE(r);
  EXPECT_EQ(r->state.bits, 0b001u);
  EXPECT_EQ(r->sign, 1);
  const ModeOp pair[] = {cdag(1), cdag(2)};
  auto p = apply_mode_string(OccupationState{0}, pair);
  ASSERT_TRUE(p);
  EXPECT_EQ(p->sign, 1);  // |1,1> = c_1^dag c_2^dag |0>
  const ModeOp swapped[] = {cdag(2), cdag(1)};
  EXPECT_EQ(apply_mode_string(OccupationState{0}, swapped)->sign, -1);
}

TEST(Bases, SectorDimensions) {
  for (int n = 1; n <= 10; ++n) {
    std::size_t total = 0;
    for (int k = 0; k <= n; ++k) {
      SectorBasis s(n, k);
      EXPECT_EQ(s.size(), binomial(n, k));
      total += s.size();
      for (std::size_t r = 0; r < s.size(); ++r) EXPECT_EQ(*s.index_of(s.state(r)), r);
    }
    EXPECT_EQ(total, std::size_t{1} << n);
  }
  EXPECT_THROW(SectorBasis(3, 4), std::invalid_argument);
}

TEST(Bases, FullAndSubsetAgree) {
  FullBasis full(5);
  auto bits = SubsetBasis::full(5);
  for (std::size_t r = 0; r < bits.size(); ++r) EXPECT_EQ(bits.state(r).bits, r);
  for (std::size_t r = 0; r < full.size(); ++r) EXPECT_EQ(*full.index_of(full.state(r)), r);
  auto even = SubsetBasis::parity(5, 1);
  EXPECT_EQ(even.size(), 16u);
  for (auto s : even.states()) EXPECT_EQ(s.parity(), 1);
}

TEST(MatrixOfOperator, MatchesDenseKronecker) {
  const int n = 4;
  const auto dense = oracle::annihilators(n);
  const auto space = SubsetBasis::full(n);
  for (int i = 1; i <= n; ++i) {
    const OperatorTerm ci{cplx{1.0}, {c(i)}};
    const Eigen::MatrixXcd m(matrix_of_operator(std::span(&ci, 1), space));
    EXPECT_LT((m - dense[i - 1]).cwiseAbs().maxCoeff(), 1e-15) << "c_" << i;
    for (int j = 1; j <= n; ++j) {
      const OperatorTerm hop{cplx{0.3, -0.2}, {cdag(i), c(j)}};
      const Eigen::MatrixXcd h(matrix_of_operator(std::span(&hop, 1), space));
      const Eigen::MatrixXcd ref = cplx{0.3, -0.2} * dense[i - 1].adjoint() * dense[j - 1];
      EXPECT_LT((h - ref).cwiseAbs().maxCoeff(), 1e-15);
    }
  }
}

TEST(MatrixOfOperator, AnticommutationRelations) {
  const int n = 3;
  const auto space = SubsetBasis::full(n);
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= n; ++j) {
      const OperatorTerm a{cplx{1.0}, {c(i)}}, b{cplx{1.0}, {cdag(j)}};
      const Eigen::MatrixXcd ci(matrix_of_operator(std::span(&a, 1), space));
      const Eigen::MatrixXcd cj(matrix_of_operator(std::span(&b, 1), space));
      const Eigen::MatrixXcd anti = ci * cj + cj * ci;
      const Eigen::MatrixXcd ref = (i == j ? 1.0 : 0.0) * Eigen::MatrixXcd::Identity(8, 8);
      EXPECT_LT((anti - ref).cwiseAbs().maxCoeff(), 1e-15);
    }
  }
}

TEST(MatrixOfOperator, RejectsNumberMismatchAndBadSites) {
  SectorBasis s(4, 2);
  const OperatorTerm add{cplx{1.0}, {cdag(1)}};
  EXPECT_THROW(matrix_of_operator(std::span(&add, 1), s), std::invalid_argument);
  const OperatorTerm bad{cplx{1.0}, {cdag(5), c(1)}};
  EXPECT_THROW(matrix_of_operator(std::span(&bad, 1), s), std::invalid_argument);
  SectorBasis s3(4, 3);
  const Eigen::MatrixXcd m(matrix_of_operator(std::span(&add, 1), s, s3));
  EXPECT_EQ(m.rows(), 4);
  EXPECT_EQ(m.cols(), 6);
}

TEST(EmbedState, RoundTrip) {
  SectorBasis s(4, 2);
  Eigen::VectorXcd v = oracle::random_state(6, 3);
  const auto full = SubsetBasis::full(4);
  const auto e = embed_state(v, s, full);
  EXPECT_NEAR(e.norm(), 1.0, 1e-14);
  for (std::size_t r = 0; r < s.size(); ++r) {
    EXPECT_EQ(e[s.state(r).bits], v[static_cast<Eigen::Index>(r)]);
  }
  EXPECT_LT((embed_state(e, full, full) - e).norm(), 1e-15);
}
