// Copyright 2026 The greenqfi Authors
// SPDX-License-Identifier: Apache-2.0

#include "greenqfi/greens.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace greenqfi {

std::size_t SpectralPoles::pole_count() const {
  std::size_t n = 0;
  for (const auto& ch : channels) n += ch.size();
  return n;
}

double many_body_bandwidth(const EigenSystem& eigs, double mu) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& s : eigs.sectors()) {
    const int ne = s.basis.n_electrons();
    for (Eigen::Index r = 0; r < s.energies.size(); ++r) {
      lo = std::min(lo, s.energies[r] - mu * ne);
      hi = std::max(hi, s.energies[r] - mu * ne);
    }
  }
  return hi - lo;
}

std::vector<Transition> spectral_transitions(const EigenSystem& eigs, const ThermalWeights& w) {
  const int n = eigs.n_sites();
  std::vector<Transition> out;
  for (int ne = 0; ne < n; ++ne) {
    const auto& lower = eigs.sector(ne);
    const auto& upper = eigs.sector(ne + 1);
    const auto& p_lo = w.probabilities[static_cast<std::size_t>(ne)];
    const auto& p_hi = w.probabilities[static_cast<std::size_t>(ne + 1)];

    // <m|c_i|n> in the eigenbases, one matrix per site.
    std::vector<Eigen::MatrixXcd> amp;
    amp.reserve(static_cast<std::size_t>(n));
    for (int i = 1; i <= n; ++i) {
      const OperatorTerm term{cplx{1.0}, {c(i)}};
      const Eigen::MatrixXcd ci(matrix_of_operator(std::span(&term, 1), upper.basis, lower.basis));
      amp.push_back(lower.vectors.adjoint() * ci * upper.vectors);
    }
    for (Eigen::Index m = 0; m < lower.energies.size(); ++m) {
      for (Eigen::Index k = 0; k < upper.energies.size(); ++k) {
        const double occ = p_lo[m] + p_hi[k];
        if (occ <= 0.0) continue;
        Transition t;
        t.omega = (upper.energies[k] - w.mu * (ne + 1)) - (lower.energies[m] - w.mu * ne);
        t.occupation = occ;
        t.amplitude.resize(n);
        double norm2 = 0.0;
        for (int i = 0; i < n; ++i) {
          t.amplitude[i] = amp[static_cast<std::size_t>(i)](m, k);
          norm2 += std::norm(t.amplitude[i]);
        }
        if (occ * norm2 < kPoleWeightFloor) continue;
        out.push_back(std::move(t));
      }
    }
  }
  return out;
}

namespace {

SpectralPoles empty_poles(const EigenSystem& eigs, const ThermalWeights& w, Representation rep,
                          Boundary boundary, std::size_t channels) {
  SpectralPoles poles;
  poles.representation = rep;
  poles.n_sites = eigs.n_sites();
  poles.boundary = boundary;
  poles.temperature = w.temperature;
  poles.omega0 = many_body_bandwidth(eigs, w.mu);
  poles.channels.resize(channels);
  return poles;
}

cplx phase(double angle) { return std::polar(1.0, angle); }

}  // namespace

std::vector<Pole> spectral_poles_position(const EigenSystem& eigs, const ThermalWeights& w,
                                          int i, int j) {
  const int n = eigs.n_sites();
  if (i < 1 || i > n || j < 1 || j > n) {
    throw std::invalid_argument("spectral_poles_position: site index out of range");
  }
  std::vector<Pole> poles;
  for (const auto& t : spectral_transitions(eigs, w)) {
    const cplx wt = t.occupation * t.amplitude[i - 1] * std::conj(t.amplitude[j - 1]);
    if (std::abs(wt) >= kPoleWeightFloor) poles.push_back({t.omega, wt});
  }
  return poles;
}

SpectralPoles spectral_poles_position(const EigenSystem& eigs, const ThermalWeights& w,
                                      Boundary boundary) {
  const int n = eigs.n_sites();
  auto poles = empty_poles(eigs, w, Representation::position, boundary,
                           static_cast<std::size_t>(n * n));
  for (const auto& t : spectral_transitions(eigs, w)) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const cplx wt = t.occupation * t.amplitude[i] * std::conj(t.amplitude[j]);
        if (std::abs(wt) >= kPoleWeightFloor) {
          poles.channels[static_cast<std::size_t>(i * n + j)].push_back({t.omega, wt});
        }
      }
    }
  }
  return poles;
}

std::vector<Pole> merge_poles(std::vector<Pole> poles, double tol) {
  std::sort(poles.begin(), poles.end(),
            [](const Pole& a, const Pole& b) { return a.omega < b.omega; });
  std::vector<Pole> merged;
  std::size_t start = 0;
  while (start < poles.size()) {
    std::size_t end = start;
    cplx wsum{};
    double wabs = 0.0;
    double wmean = 0.0;
    while (end < poles.size() && poles[end].omega - poles[start].omega <= tol) {
      wsum += poles[end].weight;
      wabs += std::abs(poles[end].weight);
      wmean += std::abs(poles[end].weight) * poles[end].omega;
      ++end;
    }
    const double omega = wabs > 0.0 ? wmean / wabs : poles[start].omega;
    if (std::abs(wsum) >= kPoleWeightFloor) merged.push_back({omega, wsum});
    start = end;
  }
  return merged;
}

SpectralPoles spectral_poles_momentum(const SpectralPoles& position) {
  if (position.representation != Representation::position) {
    throw std::invalid_argument("spectral_poles_momentum: expected a position-space pole set");
  }
  if (position.boundary != Boundary::periodic) {
    throw std::invalid_argument("spectral_poles_momentum: momentum is only defined for periodic chains");
  }
  const int n = position.n_sites;
  SpectralPoles out = position;
  out.representation = Representation::momentum;
  out.channels.assign(static_cast<std::size_t>(n), {});
  for (int qn = 0; qn < n; ++qn) {
    const double q = 2.0 * std::numbers::pi * qn / n;
    std::vector<Pole> acc;
    for (int i = 1; i <= n; ++i) {
      for (int j = 1; j <= n; ++j) {
        const cplx f = phase(-q * (i - j)) / static_cast<double>(n);
        for (const auto& p : position.site_channel(i, j)) acc.push_back({p.omega, f * p.weight});
      }
    }
    auto merged = merge_poles(std::move(acc));
    for (auto& p : merged) p.weight = cplx{p.weight.real(), 0.0};
    std::erase_if(merged, [](const Pole& p) { return std::abs(p.weight) < kPoleWeightFloor; });
    out.channels[static_cast<std::size_t>(qn)] = std::move(merged);
  }
  return out;
}

SpectralPoles spectral_poles_momentum(const EigenSystem& eigs, const ThermalWeights& w,
                                      Boundary boundary) {
  if (boundary != Boundary::periodic) {
    throw std::invalid_argument("spectral_poles_momentum: momentum is only defined for periodic chains");
  }
  const int n = eigs.n_sites();
  auto poles = empty_poles(eigs, w, Representation::momentum, boundary, static_cast<std::size_t>(n));
  // Row qn of the unitary Fourier matrix: N^{-1/2} e^{-i q j}.
  Eigen::MatrixXcd fourier(n, n);
  for (int qn = 0; qn < n; ++qn) {
    for (int j = 1; j <= n; ++j) {
      fourier(qn, j - 1) = phase(-2.0 * std::numbers::pi * qn * j / n) / std::sqrt(double(n));
    }
  }
  std::vector<std::vector<Pole>> raw(static_cast<std::size_t>(n));
  for (const auto& t : spectral_transitions(eigs, w)) {
    const Eigen::VectorXcd aq = fourier * t.amplitude;
    for (int qn = 0; qn < n; ++qn) {
      const double wt = t.occupation * std::norm(aq[qn]);
      if (wt >= kPoleWeightFloor) raw[static_cast<std::size_t>(qn)].push_back({t.omega, cplx{wt}});
    }
  }
  for (int qn = 0; qn < n; ++qn) {
    poles.channels[static_cast<std::size_t>(qn)] = merge_poles(std::move(raw[static_cast<std::size_t>(qn)]));
  }
  return poles;
}

std::vector<double> check_sum_rule(const SpectralPoles& poles) {
  std::vector<double> residual;
  const int n = poles.n_sites;
  for (std::size_t ch = 0; ch < poles.channels.size(); ++ch) {
    cplx sum{};
    for (const auto& p : poles.channels[ch]) sum += p.weight;
    double expected = 1.0;
    if (poles.representation == Representation::position) {
      const auto i = ch / static_cast<std::size_t>(n);
      const auto j = ch % static_cast<std::size_t>(n);
      expected = (i == j) ? 1.0 : 0.0;
    }
    residual.push_back(std::abs(sum - expected));
  }
  return residual;
}

int momentum_index(double k, int n_sites) {
  const double x = k * n_sites / (2.0 * std::numbers::pi);
  const double r = std::round(x);
  if (std::abs(x - r) > 1e-9) {
    throw std::invalid_argument("wavevector k = " + std::to_string(k) +
                                " is not on the momentum grid 2 pi n / " + std::to_string(n_sites));
  }
  const int m = static_cast<int>(r) % n_sites;
  return m < 0 ? m + n_sites : m;
}

BinnedSpectrum bin_spectrum(const SpectralPoles& momentum, double bin_width,
                            std::optional<double> omega0) {
  if (momentum.representation != Representation::momentum) {
    throw std::invalid_argument("bin_spectrum: bin the momentum-space spectrum");
  }
  if (!(bin_width > 0.0)) throw std::invalid_argument("bin_spectrum: bin width must be positive");
  const double w0 = omega0.value_or(momentum.omega0);
  if (!(w0 > 0.0)) throw std::invalid_argument("bin_spectrum: bandwidth must be positive");
  const auto n_bins = static_cast<std::size_t>(std::max(1.0, std::ceil(2.0 * w0 / bin_width - 1e-9)));

  BinnedSpectrum out;
  out.n_sites = momentum.n_sites;
  out.temperature = momentum.temperature;
  out.omega_min = -w0;
  out.bin_width = bin_width;
  out.values.assign(momentum.channels.size(), std::vector<double>(n_bins, 0.0));
  const double slack = 1e-9 * std::max(1.0, w0);
  for (std::size_t q = 0; q < momentum.channels.size(); ++q) {
    for (const auto& p : momentum.channels[q]) {
      if (p.omega < -w0 - slack || p.omega > w0 + slack) {
        throw std::invalid_argument("bin_spectrum: pole at omega = " + std::to_string(p.omega) +
                                    " lies outside [-omega0, omega0]");
      }
      const double x = std::floor((p.omega + w0) / bin_width);
      const auto b = static_cast<std::size_t>(std::clamp(x, 0.0, static_cast<double>(n_bins - 1)));
      out.values[q][b] += p.weight.real() / bin_width;
    }
  }
  return out;
}

BroadenedSpectrum broaden_spectrum(const SpectralPoles& momentum, double eta,
                                   const std::vector<double>& grid) {
  if (momentum.representation != Representation::momentum) {
    throw std::invalid_argument("broaden_spectrum: broaden the momentum-space spectrum");
  }
  if (!(eta > 0.0)) throw std::invalid_argument("broaden_spectrum: eta must be positive");
  BroadenedSpectrum out;
  out.n_sites = momentum.n_sites;
  out.temperature = momentum.temperature;
  out.eta = eta;
  out.grid = grid;
  out.values.assign(momentum.channels.size(), std::vector<double>(grid.size(), 0.0));
  for (std::size_t q = 0; q < momentum.channels.size(); ++q) {
    for (const auto& p : momentum.channels[q]) {
      for (std::size_t g = 0; g < grid.size(); ++g) {
        const double x = grid[g] - p.omega;
        out.values[q][g] += p.weight.real() * eta / (std::numbers::pi * (x * x + eta * eta));
      }
    }
  }
  return out;
}

std::vector<double> uniform_grid(double lo, double hi, double step) {
  if (!(step > 0.0) || hi < lo) throw std::invalid_argument("uniform_grid: invalid range");
  const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 0.5)) + 1;
  std::vector<double> g(count);
  for (std::size_t i = 0; i < count; ++i) g[i] = lo + static_cast<double>(i) * step;
  return g;
}

}  // namespace greenqfi
