// Copyright 2026 The greenqfi Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file qfi.hpp
 * @brief Quantum Fisher information of the doubled-system hopping witness
 *
 *   O = sum_j a_j c_{jA}^dag c_{jB} + h.c.
 *
 * evaluated on rho (x) rho, either from correlation matrices (pure states),
 * from single-particle spectral functions (thermal states) or by brute
 * force in the 2N-mode Fock space.
 *
 * Thermal path. With momentum spectral functions A_q in the unitary
 * convention and n_F the Fermi function,
 *
 *   F = 2 sum_q sum_{w' in A_q} sum_{e in A_{q+k}, A_{q-k}}
 *         tanh(beta (e - w') / 2) (n_F(w') - n_F(e)) A_q(w') A_{q+-k}(e),
 *
 * equivalently F = (2/pi) int tanh(beta w / 2) S(w) dw with the pole set
 *
 *   S(w) = pi sum (n_F(w') - n_F(e)) A_q(w') A_{q+-k}(e) delta(w - e + w')
 *        = pi (1 - e^{-beta w}) sum n_F(w') (1 - n_F(e)) A_q(w') A_{q+-k}(e) delta(...)
 *
 * S is odd in w, so tanh(beta w / 2) S(w) is even. The formula requires
 * grand-canonical weights; in the canonical ensemble the witness maps the
 * state out of its sector and F reduces to 4 <O^2>, i.e. the pure-state
 * correlation-matrix expression evaluated with the thermal C.
 */

#pragma once

#include "greenqfi/greens.hpp"

#include <optional>
#include <string>
#include <vector>

namespace greenqfi {

struct WitnessVector {
  Eigen::VectorXcd a;
  /// Set when a_j = e^{ikj}.
  std::optional<double> k;

  int n_sites() const { return static_cast<int>(a.size()); }
};

/// a_j = e^{ikj}, j = 1..N.
WitnessVector witness_from_k(double k, int n_sites);
WitnessVector witness_from_coefficients(Eigen::VectorXcd a);

/// One-body expectation values of a pure state (0-based indices).
struct CorrelationData {
  Eigen::MatrixXcd C;  // <c_i^dag c_j>
  Eigen::MatrixXcd P;  // <c_i^dag c_j^dag>
  Eigen::VectorXcd b;  // <c_i^dag>
  Eigen::VectorXcd d;  // <c_i^dag (-1)^N>

  int n_sites() const { return static_cast<int>(C.rows()); }
};

namespace detail {
void check_normalized(const Eigen::VectorXcd& psi);
}  // namespace detail

template <FockBasis B>
CorrelationData correlation_data(const Eigen::VectorXcd& psi, const B& basis) {
  if (static_cast<std::size_t>(psi.size()) != basis.size()) {
    throw std::invalid_argument("correlation_data: state length does not match basis");
  }
  detail::check_normalized(psi);
  const int n = basis.n_sites();
  CorrelationData out{Eigen::MatrixXcd::Zero(n, n), Eigen::MatrixXcd::Zero(n, n),
                      Eigen::VectorXcd::Zero(n), Eigen::VectorXcd::Zero(n)};
  auto amplitude = [&](OccupationState s) -> cplx {
    auto r = basis.index_of(s);
    return r ? psi[static_cast<Eigen::Index>(*r)] : cplx{};
  };
  for (std::size_t r = 0; r < basis.size(); ++r) {
    const cplx v = psi[static_cast<Eigen::Index>(r)];
    if (v == cplx{}) continue;
    const OccupationState s = basis.state(r);
    for (int i = 1; i <= n; ++i) {
      const ModeOp single[] = {cdag(i)};
      if (auto img = apply_mode_string(s, single)) {
        const cplx w = std::conj(amplitude(img->state)) * v * static_cast<double>(img->sign);
        out.b[i - 1] += w;
        out.d[i - 1] += w * static_cast<double>(s.parity());
      }
      for (int j = 1; j <= n; ++j) {
        const ModeOp hop[] = {cdag(i), c(j)};
        if (auto img = apply_mode_string(s, hop)) {
          out.C(i - 1, j - 1) += std::conj(amplitude(img->state)) * v * static_cast<double>(img->sign);
        }
        const ModeOp pair[] = {cdag(i), cdag(j)};
        if (auto img = apply_mode_string(s, pair)) {
          out.P(i - 1, j - 1) += std::conj(amplitude(img->state)) * v * static_cast<double>(img->sign);
        }
      }
    }
  }
  return out;
}

/// 8 sum_i |a_i|^2 C_ii - 8 sum_ij Re(a_i^* a_j) |C_ij|^2 (definite electron number).
double qfi_pure_den(const Eigen::MatrixXcd& C, const WitnessVector& a);

/// The three-term C, P, b expression with the -16 sum_i Re(a_i)|<c_i^dag>|^2
/// correction. Exact when b = 0.
double qfi_pure_ien(const CorrelationData& data, const WitnessVector& a);

/// Exact pure-state QFI for any state: the C and P terms minus 4 <O>^2 with
/// <O> = 2 Re sum_j a_j <c_j^dag (-1)^N> <c_j^dag>^*.
double qfi_pure_general(const CorrelationData& data, const WitnessVector& a);

/// <O> on psi (x) psi.
double witness_mean(const CorrelationData& data, const WitnessVector& a);

/// [[C, P], [P^dag, 1 - C^T]] with the doubled coefficients [a; -a^*].
struct ExtendedCorrelation {
  Eigen::MatrixXcd matrix;
  Eigen::VectorXcd coefficients;

  int n_sites() const { return static_cast<int>(matrix.rows() / 2); }
};

ExtendedCorrelation extended_correlation(const CorrelationData& data, const WitnessVector& a);

/// 4 sum_IJ a_I^* a_J (delta_IJ C_II - |C_IJ|^2). Valid when parity is conserved.
double qfi_extended(const ExtendedCorrelation& ext);

/// Same quantity as 4 Re tr[A C (A^dag - A^* C^dag)], A = diag(coefficients).
double qfi_extended_trace(const ExtendedCorrelation& ext);

/// 8 sum_I |a_I|^2 C_II (1 - C_II), an upper bound on qfi_extended.
double extended_upper_bound(const ExtendedCorrelation& ext);

/// 4 Var(O) on psi (x) psi built explicitly in the 2N-mode space (N <= 6).
template <FockBasis B>
double qfi_doubled_pure_oracle(const Eigen::VectorXcd& psi, const B& basis, const WitnessVector& a);

/// Full-space amplitudes indexed by occupation bits.
template <FockBasis B>
Eigen::VectorXcd to_bit_order(const Eigen::VectorXcd& psi, const B& basis) {
  return embed_state(psi, basis, SubsetBasis::full(basis.n_sites()));
}

double qfi_doubled_pure_oracle_bits(const Eigen::VectorXcd& psi_bits, int n_sites,
                                    const WitnessVector& a);

template <FockBasis B>
double qfi_doubled_pure_oracle(const Eigen::VectorXcd& psi, const B& basis, const WitnessVector& a) {
  return qfi_doubled_pure_oracle_bits(to_bit_order(psi, basis), basis.n_sites(), a);
}

/// 2 sum (p_M - p_N)^2 / (p_M + p_N) |<M|O|N>|^2 over product eigenstates
/// M = (m, n) of rho (x) rho (N <= 4). Throws if |<O>| exceeds 1e-12.
double qfi_thermal_lehmann_oracle(const EigenSystem& eigs, const ThermalWeights& w,
                                  const WitnessVector& a);
double qfi_thermal_lehmann_oracle(const EigenSystem& eigs, const WitnessVector& a,
                                  double temperature, double mu);

/// 4 Var(sum_i (c_i^dag + c_i)) on a single copy.
template <FockBasis B>
double qfi_naive_single_fermion(const Eigen::VectorXcd& psi, const B& basis);

double qfi_naive_single_fermion_bits(const Eigen::VectorXcd& psi_bits, int n_sites);

template <FockBasis B>
double qfi_naive_single_fermion(const Eigen::VectorXcd& psi, const B& basis) {
  detail::check_normalized(psi);
  return qfi_naive_single_fermion_bits(to_bit_order(psi, basis), basis.n_sites());
}

// Thermal evaluation from spectral functions.

/// Fermi function 1 / (e^{beta w} + 1), overflow safe.
double fermi(double omega, double beta);

/// Pole set of S(w, k, T); k must lie on the momentum grid.
std::vector<Pole> thermal_structure_factor(const SpectralPoles& momentum, double k);

/// (2/pi) sum_p tanh(beta w_p / 2) S_p.
double qfi_from_structure_factor(const std::vector<Pole>& s, double temperature);

/// Exact pole-pair sum.
double qfi_thermal_from_spectra(const SpectralPoles& momentum, double k);

/// Bin centres carry the mass value * width of each bin.
double qfi_thermal_from_spectra(const BinnedSpectrum& binned, double k);

/// Grid points carry value * local grid spacing.
double qfi_thermal_from_spectra(const BroadenedSpectrum& broadened, double k);

/// Spectral masses per q channel on a shared energy list.
struct DiscreteSpectrum {
  int n_sites = 0;
  double temperature = 0.0;
  std::vector<std::vector<Pole>> channels;
};

double qfi_thermal_discrete(const DiscreteSpectrum& spectrum, double k);

/// Canonical-ensemble thermal QFI: 4 <O^2> on rho (x) rho.
double qfi_thermal_canonical(const EigenSystem& eigs, const ThermalWeights& w, double k);

struct QfiCurve {
  std::vector<double> k;
  std::vector<double> qfi;
  int n_sites = 0;
  double temperature = 0.0;
  std::string source;
  bool degenerate = false;

  /// F / (4N).
  std::vector<double> density() const;
};

/// Evenly spaced k = 2 pi i / count, i = 0..count-1.
std::vector<double> k_grid(int count);

QfiCurve qfi_curve(const CorrelationData& data, const std::vector<double>& ks);
QfiCurve qfi_curve(const SpectralPoles& momentum, const std::vector<double>& ks);
QfiCurve qfi_curve(const BinnedSpectrum& binned, const std::vector<double>& ks);

}  // namespace greenqfi
