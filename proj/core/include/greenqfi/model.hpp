// Copyright 2026 The greenqfi Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file model.hpp
 * @brief Spinless t-U chain, sector-wise exact diagonalization and thermal
 *        weights.
 *
 *   H = t sum_i (c_i^dag c_{i+1} + c_{i+1}^dag c_i) + U sum_i n_i n_{i+1}
 *
 * The hopping enters with +t. Grand-canonical weights use
 * p_m ~ exp(-(E_m - mu N_m)/T) over the whole Fock space.
 */

#pragma once

#include "greenqfi/fockspace.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace greenqfi {

enum class Boundary { periodic, open };

std::string to_string(Boundary b);
Boundary parse_boundary(const std::string& s);

struct ModelParams {
  int n_sites = 2;
  double t = 1.0;
  double u = 0.0;
  Boundary boundary = Boundary::periodic;
  double mu = 0.0;
  /// A 2-site periodic ring counts its single bond twice; this must be
  /// requested explicitly.
  bool allow_doubled_bond = false;

  void validate() const;
};

/// Operator terms of the t-U Hamiltonian (sites 1..N).
std::vector<OperatorTerm> tu_hamiltonian_terms(const ModelParams& params);

Eigen::MatrixXcd build_tu_hamiltonian(const ModelParams& params, const SectorBasis& sector);

struct Eigenpairs {
  Eigen::VectorXd energies;   // ascending
  Eigen::MatrixXcd vectors;   // columns
};

/// Full dense spectrum of a Hermitian matrix. Throws on non-Hermitian input.
Eigenpairs diagonalize_hermitian(const Eigen::MatrixXcd& h);

struct GroundState {
  double energy = 0.0;
  Eigen::VectorXcd state;
  /// First excitation gap below 1e-9. On a periodic chain the returned
  /// vector is then a translation eigenstate of the degenerate level;
  /// otherwise it is the eigensolver's first vector.
  bool degenerate = false;
  double gap = 0.0;
  int multiplicity = 1;
  /// Crystal momentum K in (-pi, pi] of the returned state (periodic chains).
  std::optional<double> momentum;
};

inline constexpr double kDegeneracyGap = 1e-9;

/// Lowest eigenstate of the sector. On a periodic chain every degenerate
/// level is rotated onto translation eigenstates ordered by |K| (ties go to
/// K > 0), and the first one is returned. The phase is fixed so that the
/// largest amplitude is real and positive.
GroundState ground_state(const ModelParams& params, const SectorBasis& sector);

/// Cyclic translation c_j -> c_{j+1} (site N wraps to 1) on a sector.
Eigen::MatrixXcd translation_operator(const SectorBasis& sector);

struct SectorSpectrum {
  SectorBasis basis;
  Eigen::VectorXd energies;
  Eigen::MatrixXcd vectors;
};

struct LevelRef {
  int sector = 0;  // electron count
  int index = 0;   // position within the sector spectrum
  double energy = 0.0;
};

/// Eigenpairs of every particle-number sector of an N-site system.
class EigenSystem {
 public:
  EigenSystem(int n_sites, std::vector<SectorSpectrum> sectors);

  int n_sites() const { return n_sites_; }
  const std::vector<SectorSpectrum>& sectors() const { return sectors_; }
  const SectorSpectrum& sector(int n_electrons) const {
    return sectors_.at(static_cast<std::size_t>(n_electrons));
  }
  /// All levels in ascending energy (ties broken by sector, then index).
  const std::vector<LevelRef>& levels() const { return levels_; }
  double ground_energy() const { return levels_.front().energy; }
  double max_energy() const { return levels_.back().energy; }
  std::size_t dimension() const { return levels_.size(); }

 private:
  int n_sites_;
  std::vector<SectorSpectrum> sectors_;
  std::vector<LevelRef> levels_;
};

using SectorHamiltonian = std::function<Eigen::MatrixXcd(const SectorBasis&)>;

/// Diagonalizes every sector 0..n_sites of an arbitrary number-conserving
/// Hamiltonian.
EigenSystem solve_sectors(int n_sites, const SectorHamiltonian& build);

/// Periodic chains get the same translation-resolved degenerate levels as
/// ground_state, so pure_state_weights(eigs, ne, 0) is that state.
EigenSystem solve_tu_model(const ModelParams& params);

enum class Ensemble { grand_canonical, canonical };

/// Occupation probabilities of every eigenstate of an EigenSystem.
struct ThermalWeights {
  double temperature = 0.0;  // 0 marks a pure eigenstate
  double mu = 0.0;
  Ensemble ensemble = Ensemble::grand_canonical;
  std::vector<Eigen::VectorXd> probabilities;  // per sector, per level
  /// log Z of the max-shifted sum: Z = exp(log_partition).
  double log_partition = 0.0;

  double partition() const;
  double probability(int sector, int index) const {
    return probabilities[static_cast<std::size_t>(sector)][index];
  }
  /// E_m - mu N_m, the energy that enters the Boltzmann factor.
  double shifted_energy(const EigenSystem& eigs, int sector, int index) const;
};

/// p_m = exp(-(E_m - mu N_m)/T)/Z over the full Fock space.
ThermalWeights thermal_weights(const EigenSystem& eigs, double temperature, double mu);

/// Boltzmann weights restricted to one particle-number sector. mu does not
/// change the weights; it only sets the reference E - mu N used by
/// spectral functions built from them.
ThermalWeights canonical_weights(const EigenSystem& eigs, double temperature, int n_electrons,
                                 double mu = 0.0);

/// All weight on a single eigenstate (zero-temperature pure state).
ThermalWeights pure_state_weights(const EigenSystem& eigs, int n_electrons, int index = 0);

/// <c_i^dag c_j> of a density matrix diagonal in the eigenbasis (0-based i, j).
Eigen::MatrixXcd thermal_correlation_matrix(const EigenSystem& eigs, const ThermalWeights& w);

}  // namespace greenqfi
