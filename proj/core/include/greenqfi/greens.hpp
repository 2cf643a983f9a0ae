// Copyright 2026 The greenqfi Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file greens.hpp
 * @brief Lehmann pole sets of the single-particle spectral function and their
 *        binned / Lorentzian-broadened forms.
 *
 * Position space:
 *   A_ij(w) = sum_{m,n} (p_m + p_n) <m|c_i|n><n|c_j^dag|m> delta(w - (E_n - E_m))
 * which equals the (1 + e^{-beta w}) p_m form for thermal weights and obeys
 * sum_w A_ij = delta_ij for any weights. Energies are the mu-shifted
 * E - mu N of the weights.
 *
 * Momentum space uses the unitary convention
 *   c_q = N^{-1/2} sum_j e^{-iqj} c_j,   q = 2 pi n / N,
 * so that every A_q carries unit total weight.
 */

#pragma once

#include "greenqfi/model.hpp"

#include <vector>

namespace greenqfi {

enum class Representation { position, momentum };

struct Pole {
  double omega = 0.0;
  cplx weight{};
};

/// Poles with |weight| below this are dropped.
inline constexpr double kPoleWeightFloor = 1e-14;

struct SpectralPoles {
  Representation representation = Representation::position;
  int n_sites = 0;
  Boundary boundary = Boundary::periodic;
  double temperature = 0.0;
  /// Many-body bandwidth E_max - E_0 (of E - mu N); poles lie in [-omega0, omega0].
  double omega0 = 0.0;
  /// position: channel i*N + j (0-based sites); momentum: channel n for q = 2 pi n / N.
  std::vector<std::vector<Pole>> channels;

  const std::vector<Pole>& site_channel(int i, int j) const {
    return channels.at(static_cast<std::size_t>((i - 1) * n_sites + (j - 1)));
  }
  const std::vector<Pole>& momentum_channel(int n) const {
    return channels.at(static_cast<std::size_t>(n));
  }
  std::size_t pole_count() const;
};

/// One single-particle transition |m> (N_e) -> |n> (N_e + 1) with the
/// amplitudes <m|c_i|n> for every site.
struct Transition {
  double omega = 0.0;        // (E_n - mu N_n) - (E_m - mu N_m)
  double occupation = 0.0;   // p_m + p_n
  Eigen::VectorXcd amplitude;
};

std::vector<Transition> spectral_transitions(const EigenSystem& eigs, const ThermalWeights& w);

double many_body_bandwidth(const EigenSystem& eigs, double mu = 0.0);

/// Poles of A_ij for one site pair (1-based).
std::vector<Pole> spectral_poles_position(const EigenSystem& eigs, const ThermalWeights& w,
                                          int i, int j);

/// Poles of A_ij for all site pairs.
SpectralPoles spectral_poles_position(const EigenSystem& eigs, const ThermalWeights& w,
                                      Boundary boundary);

/// Fourier transform of a full position pole set; coincident poles merged.
SpectralPoles spectral_poles_momentum(const SpectralPoles& position);

/// A_q straight from the Lehmann sum with momentum operators c_q.
SpectralPoles spectral_poles_momentum(const EigenSystem& eigs, const ThermalWeights& w,
                                      Boundary boundary);

/// |sum_p w_p - expected| per channel (delta_ij or 1).
std::vector<double> check_sum_rule(const SpectralPoles& poles);

/// Sorts by energy and merges poles closer than tol.
std::vector<Pole> merge_poles(std::vector<Pole> poles, double tol = 1e-9);

/// Momentum index n with k = 2 pi n / N; throws when k is off the grid.
int momentum_index(double k, int n_sites);

/// Piecewise-constant A_q on [omega_min, omega_min + n_bins * bin_width).
struct BinnedSpectrum {
  int n_sites = 0;
  double temperature = 0.0;
  double omega_min = 0.0;
  double bin_width = 0.1;
  std::vector<std::vector<double>> values;  // per q, spectral density per unit energy

  std::size_t bin_count() const { return values.empty() ? 0 : values.front().size(); }
  double center(std::size_t b) const {
    return omega_min + (static_cast<double>(b) + 0.5) * bin_width;
  }
};

/// Histogram of a momentum pole set over [-omega0, omega0] (omega0 from the
/// poles unless given). A pole on a bin edge goes to the upper bin.
BinnedSpectrum bin_spectrum(const SpectralPoles& momentum, double bin_width = 0.1,
                            std::optional<double> omega0 = std::nullopt);

struct BroadenedSpectrum {
  int n_sites = 0;
  double temperature = 0.0;
  double eta = 0.0;
  std::vector<double> grid;
  std::vector<std::vector<double>> values;  // per q
};

/// delta(x) -> eta / (pi (x^2 + eta^2)) applied to every momentum pole.
BroadenedSpectrum broaden_spectrum(const SpectralPoles& momentum, double eta,
                                   const std::vector<double>& grid);

/// lo, lo + step, ..., up to and including hi (within half a step).
std::vector<double> uniform_grid(double lo, double hi, double step);

}  // namespace greenqfi
