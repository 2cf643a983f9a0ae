// Copyright 2026 The greenqfi Authors
// SPDX-License-Identifier: Apache-2.0

#include "greenqfi/qfi.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace greenqfi {

double fermi(double omega, double beta) {
  const double x = beta * omega;
  if (x > 0.0) {
    const double e = std::exp(-x);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(x));
}

namespace {

double beta_of(double temperature) {
  if (!(temperature > 0.0) || !std::isfinite(temperature)) {
    throw std::invalid_argument("thermal QFI needs a finite temperature T > 0");
  }
  return 1.0 / temperature;
}

struct Level {
  double omega;
  double weight;
  double occupation;
};

std::vector<std::vector<Level>> levels_of(const std::vector<std::vector<Pole>>& channels, double beta) {
  std::vector<std::vector<Level>> out(channels.size());
  for (std::size_t q = 0; q < channels.size(); ++q) {
    for (const auto& p : channels[q]) {
      if (p.weight.real() == 0.0) continue;
      out[q].push_back({p.omega, p.weight.real(), fermi(p.omega, beta)});
    }
  }
  return out;
}

// tanh(beta (e - w) / 2) (n_F(w) - n_F(e)), symmetric in (w, e) and >= 0.
double pair_kernel(const Level& lo, const Level& hi, double beta) {
  return std::tanh(0.5 * beta * (hi.omega - lo.omega)) * (lo.occupation - hi.occupation);
}

double pole_pair_sum(const std::vector<std::vector<Pole>>& channels, double k, double temperature) {
  const double beta = beta_of(temperature);
  const int n = static_cast<int>(channels.size());
  const int shift = momentum_index(k, n);
  const auto levels = levels_of(channels, beta);
  // The q-k pairs repeat the q+k pairs with the roles swapped.
  double f = 0.0;
  for (int q = 0; q < n; ++q) {
    const auto& a = levels[static_cast<std::size_t>(q)];
    const auto& b = levels[static_cast<std::size_t>((q + shift) % n)];
    for (const auto& x : a) {
      double row = 0.0;
      for (const auto& y : b) row += pair_kernel(x, y, beta) * y.weight;
      f += row * x.weight;
    }
  }
  return 4.0 * f;
}

}  // namespace

std::vector<Pole> thermal_structure_factor(const SpectralPoles& momentum, double k) {
  if (momentum.representation != Representation::momentum) {
    throw std::invalid_argument("thermal_structure_factor: needs momentum-space poles");
  }
  const double beta = beta_of(momentum.temperature);
  const int n = momentum.n_sites;
  const int shift = momentum_index(k, n);
  const auto levels = levels_of(momentum.channels, beta);
  std::vector<Pole> all;
  for (int q = 0; q < n; ++q) {
    std::vector<Pole> s;
    for (const int sign : {1, -1}) {
      const auto& b = levels[static_cast<std::size_t>(((q + sign * shift) % n + n) % n)];
      for (const auto& x : levels[static_cast<std::size_t>(q)]) {
        for (const auto& y : b) {
          const double wt = std::numbers::pi * (x.occupation - y.occupation) * x.weight * y.weight;
          if (wt != 0.0) s.push_back({y.omega - x.omega, cplx{wt}});
        }
      }
    }
    auto merged = merge_poles(std::move(s));
    all.insert(all.end(), merged.begin(), merged.end());
  }
  return merge_poles(std::move(all));
}

double qfi_from_structure_factor(const std::vector<Pole>& s, double temperature) {
  const double beta = beta_of(temperature);
  double f = 0.0;
  for (const auto& p : s) f += std::tanh(0.5 * beta * p.omega) * p.weight.real();
  return 2.0 / std::numbers::pi * f;
}

double qfi_thermal_from_spectra(const SpectralPoles& momentum, double k) {
  if (momentum.representation != Representation::momentum) {
    throw std::invalid_argument("qfi_thermal_from_spectra: needs momentum-space poles");
  }
  return pole_pair_sum(momentum.channels, k, momentum.temperature);
}

double qfi_thermal_discrete(const DiscreteSpectrum& spectrum, double k) {
  return pole_pair_sum(spectrum.channels, k, spectrum.temperature);
}

double qfi_thermal_from_spectra(const BinnedSpectrum& binned, double k) {
  DiscreteSpectrum d{binned.n_sites, binned.temperature, {}};
  for (const auto& row : binned.values) {
    std::vector<Pole> ch;
    for (std::size_t b = 0; b < row.size(); ++b) {
      if (row[b] != 0.0) ch.push_back({binned.center(b), cplx{row[b] * binned.bin_width}});
    }
    d.channels.push_back(std::move(ch));
  }
  return qfi_thermal_discrete(d, k);
}

double qfi_thermal_from_spectra(const BroadenedSpectrum& broadened, double k) {
  const auto& g = broadened.grid;
  if (g.size() < 2) throw std::invalid_argument("qfi_thermal_from_spectra: grid too short");
  const double step = g[1] - g[0];
  for (std::size_t i = 1; i < g.size(); ++i) {
    if (std::abs((g[i] - g[i - 1]) - step) > 1e-9 * std::max(1.0, std::abs(step))) {
      throw std::invalid_argument("qfi_thermal_from_spectra: broadened grid is not uniform");
    }
  }
  DiscreteSpectrum d{broadened.n_sites, broadened.temperature, {}};
  for (const auto& row : broadened.values) {
    std::vector<Pole> ch;
    for (std::size_t i = 0; i < row.size(); ++i) ch.push_back({g[i], cplx{row[i] * step}});
    d.channels.push_back(std::move(ch));
  }
  return qfi_thermal_discrete(d, k);
}

double qfi_thermal_canonical(const EigenSystem& eigs, const ThermalWeights& w, double k) {
  if (w.ensemble != Ensemble::canonical) {
    throw std::invalid_argument("qfi_thermal_canonical: weights are not canonical");
  }
  return qfi_pure_den(thermal_correlation_matrix(eigs, w), witness_from_k(k, eigs.n_sites()));
}

std::vector<double> QfiCurve::density() const {
  std::vector<double> f(qfi.size());
  for (std::size_t i = 0; i < qfi.size(); ++i) f[i] = qfi[i] / (4.0 * n_sites);
  return f;
}

std::vector<double> k_grid(int count) {
  if (count < 1) throw std::invalid_argument("k_grid: need at least one point");
  std::vector<double> ks(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) ks[static_cast<std::size_t>(i)] = 2.0 * std::numbers::pi * i / count;
  return ks;
}

QfiCurve qfi_curve(const CorrelationData& data, const std::vector<double>& ks) {
  QfiCurve curve;
  curve.k = ks;
  curve.n_sites = data.n_sites();
  curve.source = "pure";
  for (double k : ks) curve.qfi.push_back(qfi_pure_general(data, witness_from_k(k, data.n_sites())));
  return curve;
}

QfiCurve qfi_curve(const SpectralPoles& momentum, const std::vector<double>& ks) {
  QfiCurve curve;
  curve.k = ks;
  curve.n_sites = momentum.n_sites;
  curve.temperature = momentum.temperature;
  curve.source = "thermal-poles";
  for (double k : ks) curve.qfi.push_back(qfi_thermal_from_spectra(momentum, k));
  return curve;
}

QfiCurve qfi_curve(const BinnedSpectrum& binned, const std::vector<double>& ks) {
  QfiCurve curve;
  curve.k = ks;
  curve.n_sites = binned.n_sites;
  curve.temperature = binned.temperature;
  curve.source = "thermal-binned";
  for (double k : ks) curve.qfi.push_back(qfi_thermal_from_spectra(binned, k));
  return curve;
}

}  // namespace greenqfi
