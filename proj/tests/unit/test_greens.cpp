// Copyright 2026 The greenqfi Authors
// SPDX-License-Identifier: Apache-2.0

#include "greenqfi/greens.hpp"

#include "dense_oracle.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>

using namespace greenqfi;

namespace {

ModelParams chain(int n, double u) {
  ModelParams p;
  p.n_sites = n;
  p.u = u;
  return p;
}

double weight_at(const std::vector<Pole>& poles, double omega) {
  double w = 0.0;
  for (const auto& p : poles) {
    if (std::abs(p.omega - omega) < 1e-9) w += p.weight.real();
  }
  return w;
}

SpectralPoles single_pole(double omega, double weight) {
  SpectralPoles s;
  s.representation = Representation::momentum;
  s.n_sites = 1;
  s.channels = {{Pole{omega, cplx{weight}}}};
  return s;
}

}  // namespace

TEST(PositionPoles, OneModeVacuum) {
  const auto eigs = solve_sectors(1, [](const SectorBasis& b) {
    return Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(b.size()), static_cast<Eigen::Index>(b.size()));
  });
  const auto poles = spectral_poles_position(eigs, pure_state_weights(eigs, 0, 0), 1, 1);
  ASSERT_EQ(poles.size(), 1u);
  EXPECT_DOUBLE_EQ(poles[0].omega, 0.0);
  EXPECT_NEAR(poles[0].weight.real(), 1.0, 1e-15);
}

TEST(PositionPoles, FreeRingGroundState) {
  const auto eigs = solve_tu_model(chain(4, 0.0));
  const auto w = pure_state_weights(eigs, 2, 0);
  for (int i = 1; i <= 4; ++i) {
    const auto poles = spectral_poles_position(eigs, w, i, i);
    EXPECT_NEAR(weight_at(poles, -2.0), 0.25, 1e-12);
    EXPECT_NEAR(weight_at(poles, 0.0), 0.5, 1e-12);
    EXPECT_NEAR(weight_at(poles, 2.0), 0.25, 1e-12);
  }
}

TEST(PositionPoles, SumRuleEveryPair) {
  const auto eigs = solve_tu_model(chain(5, 3.0));
  for (double t : {0.3, 1.0, 5.0}) {
    const auto all = spectral_poles_position(eigs, thermal_weights(eigs, t, 1.0), Boundary::periodic);
    for (double r : check_sum_rule(all)) EXPECT_LT(r, 1e-12);
  }
}

TEST(PositionPoles, LehmannSumMatchesDenseRetardedAnticommutator) {
  // sum_p w_p e^{-i w_p s} = <{c_i(s), c_j^dag}> for the Gibbs state.
  const int n = 4;
  const double temp = 0.8, mu = 1.5, s = 0.37;
  const auto eigs = solve_tu_model(chain(n, 2.0));
  const auto all = spectral_poles_position(eigs, thermal_weights(eigs, temp, mu), Boundary::periodic);
  const oracle::Mat k = oracle::tu_hamiltonian(n, 1.0, 2.0, true) - mu * oracle::number_operator(n);
  Eigen::SelfAdjointEigenSolver<oracle::Mat> es(k);
  Eigen::VectorXd p = (-(es.eigenvalues().array() - es.eigenvalues()[0]) / temp).exp();
  p /= p.sum();
  const oracle::Mat rho = es.eigenvectors() * p.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
  const Eigen::VectorXcd phase = (cplx{0.0, 1.0} * s * es.eigenvalues().cast<cplx>()).array().exp();
  const oracle::Mat u = es.eigenvectors() * phase.asDiagonal() * es.eigenvectors().adjoint();
  const auto c = oracle::annihilators(n);
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= n; ++j) {
      const oracle::Mat ci_s = u * c[i - 1] * u.adjoint();
      const oracle::Mat cd = c[j - 1].adjoint();
      const cplx ref = (rho * (ci_s * cd + cd * ci_s)).trace();
      cplx got{};
      for (const auto& pole : all.site_channel(i, j)) got += pole.weight * std::polar(1.0, -pole.omega * s);
      EXPECT_NEAR(std::abs(got - ref), 0.0, 1e-11) << i << "," << j;
    }
  }
}

TEST(MomentumPoles, FreeDispersion) {
  const auto eigs = solve_tu_model(chain(4, 0.0));
  const auto m = spectral_poles_momentum(eigs, pure_state_weights(eigs, 2, 0), Boundary::periodic);
  for (int q = 0; q < 4; ++q) {
    const auto& ch = m.momentum_channel(q);
    ASSERT_EQ(ch.size(), 1u) << "q index " << q;
    EXPECT_NEAR(ch[0].omega, 2.0 * std::cos(2.0 * std::numbers::pi * q / 4), 1e-12);
    EXPECT_NEAR(ch[0].weight.real(), 1.0, 1e-12);
  }
}

TEST(MomentumPoles, DirectAndFourierPathsAgree) {
  const auto eigs = solve_tu_model(chain(6, 4.0));
  const auto w = thermal_weights(eigs, 1.0, 2.0);
  const auto direct = spectral_poles_momentum(eigs, w, Boundary::periodic);
  const auto via = spectral_poles_momentum(spectral_poles_position(eigs, w, Boundary::periodic));
  for (int q = 0; q < 6; ++q) {
    const auto a = merge_poles(direct.momentum_channel(q), 1e-8);
    const auto b = merge_poles(via.momentum_channel(q), 1e-8);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      EXPECT_NEAR(a[i].omega, b[i].omega, 1e-8);
      EXPECT_NEAR(a[i].weight.real(), b[i].weight.real(), 1e-11);
    }
  }
}

TEST(MomentumPoles, ThermalPropertiesEightSites) {
  const auto eigs = solve_tu_model(chain(8, 4.0));
  const auto m = spectral_poles_momentum(eigs, thermal_weights(eigs, 1.0, 0.0), Boundary::periodic);
  for (double r : check_sum_rule(m)) EXPECT_LT(r, 1e-10);
  for (const auto& ch : m.channels) {
    for (const auto& p : ch) {
      EXPECT_GE(p.weight.real(), -1e-12);
      EXPECT_NEAR(p.weight.imag(), 0.0, 1e-12);
      EXPECT_LE(std::abs(p.omega), m.omega0 + 1e-9);
    }
  }
  EXPECT_NEAR(m.omega0, many_body_bandwidth(eigs, 0.0), 1e-12);
}

TEST(MomentumPoles, ZeroTemperatureLimitOfThermalPoles) {
  // N = 4, U = 4 at mu = -1: the one-electron ground state (E = -2) is unique
  // and lies at least 1 below every other level of E - mu N. The half-filled
  // ring is a doublet.
  const double mu = -1.0;
  const auto eigs = solve_tu_model(chain(4, 4.0));
  const auto cold = spectral_poles_momentum(eigs, thermal_weights(eigs, 0.01, mu), Boundary::periodic);
  const auto pure = spectral_poles_momentum(eigs, pure_state_weights(eigs, 1, 0), Boundary::periodic);
  for (int q = 0; q < 4; ++q) {
    for (const auto& p : pure.momentum_channel(q)) {
      // Thermal energies carry the -mu N shift.
      EXPECT_NEAR(weight_at(cold.momentum_channel(q), p.omega - mu), p.weight.real(), 1e-10);
    }
  }
}

TEST(MomentumPoles, RejectsOpenBoundary) {
  ModelParams p = chain(4, 1.0);
  p.boundary = Boundary::open;
  const auto eigs = solve_tu_model(p);
  const auto w = thermal_weights(eigs, 1.0, 0.0);
  EXPECT_THROW(spectral_poles_momentum(spectral_poles_position(eigs, w, Boundary::open)), std::invalid_argument);
  EXPECT_THROW(spectral_poles_momentum(eigs, w, Boundary::open), std::invalid_argument);
}

TEST(MomentumIndex, GridAndOffGrid) {
  EXPECT_EQ(momentum_index(std::numbers::pi, 8), 4);
  EXPECT_EQ(momentum_index(0.0, 8), 0);
  EXPECT_EQ(momentum_index(2.0 * std::numbers::pi, 8), 0);
  EXPECT_EQ(momentum_index(-std::numbers::pi / 4, 8), 7);
  EXPECT_THROW(momentum_index(1.0, 8), std::invalid_argument);
}

TEST(Binning, SinglePole) {
  const auto b = bin_spectrum(single_pole(0.05, 1.0), 0.1, 0.1);
  ASSERT_EQ(b.bin_count(), 2u);
  EXPECT_DOUBLE_EQ(b.omega_min, -0.1);
  EXPECT_DOUBLE_EQ(b.values[0][0], 0.0);
  EXPECT_NEAR(b.values[0][1], 10.0, 1e-12);
}

TEST(Binning, EdgeGoesToUpperBin) {
  const auto b = bin_spectrum(single_pole(0.0, 1.0), 0.1, 0.2);
  ASSERT_EQ(b.bin_count(), 4u);
  EXPECT_NEAR(b.values[0][2], 10.0, 1e-12);
  EXPECT_EQ(b.values[0][1], 0.0);
}

TEST(Binning, IntegralPreserved) {
  const auto eigs = solve_tu_model(chain(8, 4.0));
  const auto m = spectral_poles_momentum(eigs, thermal_weights(eigs, 1.0, 0.0), Boundary::periodic);
  for (double dw : {0.4, 0.1, 0.05}) {
    const auto b = bin_spectrum(m, dw);
    EXPECT_LE(b.omega_min, -m.omega0 + 1e-12);
    for (int q = 0; q < 8; ++q) {
      double s = 0.0, w = 0.0;
      for (double v : b.values[static_cast<std::size_t>(q)]) s += v * dw;
      for (const auto& p : m.momentum_channel(q)) w += p.weight.real();
      EXPECT_NEAR(s, w, 1e-12);
    }
  }
  EXPECT_THROW(bin_spectrum(m, 0.0), std::invalid_argument);
}

TEST(Binning, TanhKernelConvergesAtFirstOrder) {
  const double temp = 1.0;
  const auto eigs = solve_tu_model(chain(8, 4.0));
  const auto m = spectral_poles_momentum(eigs, thermal_weights(eigs, temp, 0.0), Boundary::periodic);
  auto f = [&](double w) { return std::tanh(0.5 * w / temp); };
  std::vector<double> errs;
  for (double dw : {0.2, 0.1, 0.05}) {
    const auto b = bin_spectrum(m, dw);
    double err = 0.0, mass = 0.0;
    for (int q = 0; q < 8; ++q) {
      double exact = 0.0, binned = 0.0;
      for (const auto& p : m.momentum_channel(q)) {
        exact += f(p.omega) * p.weight.real();
        mass += std::abs(p.weight.real());
      }
      for (std::size_t i = 0; i < b.bin_count(); ++i) binned += f(b.center(i)) * b.values[static_cast<std::size_t>(q)][i] * dw;
      err += std::abs(binned - exact);
    }
    // |f(c) - f(w)| <= |c - w| sup|f'| <= dw/2 * 1/(2T).
    EXPECT_LE(err, 0.5 * dw * 0.5 / temp * mass);
    errs.push_back(err);
  }
  // Four-fold refinement: a first-order method gains about 4x.
  EXPECT_LT(errs[2], errs[0] / 2.0);
}

TEST(Broadening, LorentzianValues) {
  const auto b = broaden_spectrum(single_pole(0.0, 1.0), 1.0, {0.0, 1.0});
  EXPECT_NEAR(b.values[0][0], 1.0 / std::numbers::pi, 1e-15);
  EXPECT_NEAR(b.values[0][1], 0.5 / std::numbers::pi, 1e-15);
  EXPECT_THROW(broaden_spectrum(single_pole(0.0, 1.0), 0.0, {0.0}), std::invalid_argument);
}

TEST(Broadening, WideGridIntegral) {
  const auto grid = uniform_grid(-50.0, 50.0, 0.01);
  const auto b = broaden_spectrum(single_pole(0.3, 1.0), 0.5, grid);
  double s = 0.0;
  for (double v : b.values[0]) s += v * 0.01;
  EXPECT_NEAR(s, 1.0, 0.02);
}

TEST(Broadening, ApproachesBinnedFormAsEtaShrinks) {
  const auto eigs = solve_tu_model(chain(6, 2.0));
  const auto m = spectral_poles_momentum(eigs, thermal_weights(eigs, 1.0, 0.0), Boundary::periodic);
  const double dw = 0.5;
  // Padded and shifted so that no pole sits on a bin edge.
  const auto binned = bin_spectrum(m, dw, m.omega0 + 1.123);
  // Mass of the broadened curve in each bin against the histogram, summed
  // over bins. A pole at distance d from an edge leaks about eta / (pi d).
  std::vector<double> errors;
  for (double eta : {0.4, 0.1, 0.02}) {
    double total = 0.0;
    for (std::size_t i = 0; i < binned.bin_count(); ++i) {
      const double lo = binned.center(i) - dw / 2;
      const auto grid = uniform_grid(lo + 0.0005, lo + dw - 0.0005, 0.001);
      const auto br = broaden_spectrum(m, eta, grid);
      for (int q = 0; q < 6; ++q) {
        double mass = 0.0;
        for (double v : br.values[static_cast<std::size_t>(q)]) mass += v * 0.001;
        total += std::abs(mass - binned.values[static_cast<std::size_t>(q)][i] * dw);
      }
    }
    errors.push_back(total);
  }
  EXPECT_LT(errors[1], errors[0]);
  EXPECT_LT(errors[2], errors[1]);
  EXPECT_LT(errors[2], 0.25 * errors[0]);
}

TEST(MergePoles, CombinesCoincidentEnergies) {
  const auto merged = merge_poles({{1.0, cplx{0.25}}, {1.0 + 1e-12, cplx{0.25}}, {-1.0, cplx{0.5}}, {2.0, cplx{1e-16}}});
  ASSERT_EQ(merged.size(), 2u);
  EXPECT_DOUBLE_EQ(merged[0].omega, -1.0);
  EXPECT_NEAR(merged[1].weight.real(), 0.5, 1e-15);
}
