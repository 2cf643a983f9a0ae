// Copyright 2026 The greenqfi Authors
// SPDX-License-Identifier: Apache-2.0

#include "greenqfi/bounds.hpp"

#include "dense_oracle.hpp"

#include <gtest/gtest.h>

#include <numbers>

using namespace greenqfi;

namespace {

constexpr double kPi = std::numbers::pi;

OptimizerConfig quick(int restarts = 16) {
  OptimizerConfig cfg;
  cfg.restarts = restarts;
  return cfg;
}

}  // namespace

TEST(Objective, ValueMatchesPureFormula) {
  for (auto sym : {SymmetryClass::den, SymmetryClass::ien, SymmetryClass::parity_even, SymmetryClass::parity_odd}) {
    const int ne = sym == SymmetryClass::den ? 2 : -1;
    const auto space = block_space(4, sym, ne);
    const auto a = witness_from_k(1.1, 4);
    const QfiObjective obj(space, a);
    const auto psi = oracle::random_state(static_cast<int>(space.size()), 17);
    EXPECT_NEAR(obj.value(psi), qfi_pure_general(correlation_data(psi, space), a), 1e-11) << to_string(sym);
    EXPECT_NEAR(obj.value(psi), qfi_doubled_pure_oracle(psi, space, a), 1e-10);
  }
}

TEST(Objective, GradientMatchesFiniteDifferences) {
  for (auto sym : {SymmetryClass::den, SymmetryClass::ien}) {
    const int ne = sym == SymmetryClass::den ? 3 : -1;
    const auto space = block_space(5, sym, ne);
    const QfiObjective obj(space, witness_from_k(0.9, 5));
    const auto psi = oracle::random_state(static_cast<int>(space.size()), 23);
    Eigen::VectorXcd g(psi.size());
    obj.value_and_gradient(psi, g);
    const double h = 1e-6;
    for (Eigen::Index i = 0; i < psi.size(); ++i) {
      for (cplx dir : {cplx{1.0, 0.0}, cplx{0.0, 1.0}}) {
        Eigen::VectorXcd p = psi, m = psi;
        p[i] += h * dir;
        m[i] -= h * dir;
        const double fd = (obj.value(p) - obj.value(m)) / (2.0 * h);
        // dF = 2 Re(conj(g) . dpsi)
        const double analytic = 2.0 * (std::conj(g[i]) * dir).real();
        EXPECT_NEAR(fd, analytic, 1e-5) << "component " << i;
      }
    }
  }
}

TEST(BlockMaximum, TwoSiteClosedForm) {
  for (int m = 0; m < 16; ++m) {
    const double k = 2.0 * kPi * m / 16;
    const auto best = max_block_qfi(2, k, SymmetryClass::den, quick(8));
    EXPECT_TRUE(best.converged);
    EXPECT_NEAR(best.qfi, 4.0 * (1.0 - std::cos(k)), 1e-6);
  }
}

TEST(BlockMaximum, FourSiteAnchors) {
  const auto cfg = quick();
  EXPECT_NEAR(max_block_qfi(4, 0.0, SymmetryClass::den, cfg).qfi, 8.0, 1e-4 * 8.0);
  for (int m = 1; m < 4; ++m) {
    EXPECT_NEAR(max_block_qfi(4, 2.0 * kPi * m / 4, SymmetryClass::den, cfg).qfi, 16.0, 1e-4 * 16.0);
  }
}

TEST(BlockMaximum, OptimumIsAValidStateOfItsSpace) {
  const auto best = max_block_qfi(5, 1.3, SymmetryClass::ien, quick(8), 0.5);
  const auto space = block_space(5, SymmetryClass::ien);
  ASSERT_EQ(best.states.size(), space.size());
  EXPECT_NEAR(best.state.norm(), 1.0, 1e-12);
  const SubsetBasis basis(5, best.states);
  EXPECT_NEAR(qfi_doubled_pure_oracle(best.state, basis, witness_from_k(1.3, 5)), best.qfi, 1e-9);
  EXPECT_LE(best.qfi, 20.0 + 1e-8);
}

TEST(BlockMaximum, DeterministicForAFixedSeed) {
  const auto a = max_block_qfi(4, 0.7, SymmetryClass::den, quick(4));
  const auto b = max_block_qfi(4, 0.7, SymmetryClass::den, quick(4));
  EXPECT_EQ(a.qfi, b.qfi);
  EXPECT_EQ(a.best_restart, b.best_restart);
}

TEST(BlockMaximum, Validation) {
  EXPECT_THROW(max_block_qfi(9, 0.0, SymmetryClass::den, quick()), std::invalid_argument);
  EXPECT_THROW(max_block_qfi(3, 0.0, SymmetryClass::den, quick()), std::invalid_argument);
  EXPECT_NO_THROW(max_block_qfi(3, 0.0, SymmetryClass::ien, quick(2)));
  OptimizerConfig bad;
  bad.restarts = 0;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  EXPECT_EQ(block_electrons(6, 0.5), 3);
  EXPECT_THROW(block_electrons(3, 0.5), std::invalid_argument);
}

TEST(Patterns, ParseAndLabel) {
  const auto p = parse_pattern("{2, 4,2}");
  EXPECT_EQ(p.blocks, (std::vector<int>{4, 2, 2}));
  EXPECT_EQ(p.label(), "{4,2,2}");
  EXPECT_EQ(p.n_sites(), 8);
  EXPECT_EQ(p.multiplicities(), (std::vector<std::pair<int, int>>{{4, 1}, {2, 2}}));
  EXPECT_THROW(parse_pattern("4,x"), std::invalid_argument);
  EXPECT_THROW(parse_pattern("5,3"), std::invalid_argument);
  EXPECT_NO_THROW(parse_pattern("5,3", SymmetryClass::ien));
  EXPECT_EQ(parse_symmetry("parity-even"), SymmetryClass::parity_even);
  EXPECT_THROW(parse_symmetry("bogus"), std::invalid_argument);
}

TEST(Patterns, TwoSiteBlocksClosedForm) {
  const auto ks = k_grid(16);
  const auto curve = pattern_bound_curve(parse_pattern("2,2,2,2"), ks, quick(8));
  for (std::size_t i = 0; i < ks.size(); ++i) EXPECT_NEAR(curve.qfi[i], 16.0 * (1.0 - std::cos(ks[i])), 1e-6);
  EXPECT_TRUE(curve.all_converged());
}

TEST(Patterns, CoarserPatternsDominate) {
  BoundCache cache;
  const auto ks = k_grid(8);
  const auto cfg = quick();
  const auto fine = pattern_bound_curve(parse_pattern("2,2,2"), ks, cfg, &cache);
  const auto mid = pattern_bound_curve(parse_pattern("4,2"), ks, cfg, &cache);
  const auto coarse = pattern_bound_curve(parse_pattern("6"), ks, cfg, &cache);
  for (std::size_t i = 0; i < ks.size(); ++i) {
    EXPECT_LE(fine.qfi[i], mid.qfi[i] + 1e-8);
    EXPECT_LE(mid.qfi[i], coarse.qfi[i] + 1e-8);
    EXPECT_LE(coarse.qfi[i], 24.0 + 1e-8);
  }
}

TEST(Patterns, ReplicationKeepsDensity) {
  const auto ks = k_grid(8);
  const auto base = pattern_bound_curve(parse_pattern("4,2"), ks, quick());
  const auto rep = replicate_bound(base, 3);
  EXPECT_EQ(rep.n_sites(), 18);
  EXPECT_EQ(rep.copies, 3);
  const auto f0 = base.density(), f3 = rep.density();
  for (std::size_t i = 0; i < ks.size(); ++i) {
    EXPECT_NEAR(rep.qfi[i], 3.0 * base.qfi[i], 1e-12);
    EXPECT_NEAR(f3[i], f0[i], 1e-12);
  }
  EXPECT_THROW(replicate_bound(base, 0), std::invalid_argument);
}

TEST(Cache, InsertOnceAndReuse) {
  BoundCache cache;
  const auto cfg = quick(4);
  const auto a = cache.get_or_compute(4, 0.5, SymmetryClass::den, cfg, 0.5);
  EXPECT_EQ(cache.size(), 1u);
  BlockMaximum fake;
  fake.qfi = -1.0;
  cache.insert(BoundCache::make_key(4, 0.5, SymmetryClass::den, cfg, 0.5), fake);
  EXPECT_EQ(cache.get_or_compute(4, 0.5, SymmetryClass::den, cfg, 0.5).qfi, a.qfi);
  auto other = cfg;
  other.seed += 1;
  cache.get_or_compute(4, 0.5, SymmetryClass::den, other, 0.5);
  EXPECT_EQ(cache.size(), 2u);
}

TEST(TimeReversal, RealAmplitudesReachTheSameMaximum) {
  for (double k : {0.0, kPi / 3, kPi / 2, kPi}) {
    const auto tri = tri_restriction_check(4, k, quick(8));
    EXPECT_NEAR(tri.real_max, tri.complex_max, 1e-6);
  }
}
