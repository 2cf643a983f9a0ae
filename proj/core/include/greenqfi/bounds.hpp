// Copyright 2026 The greenqfi Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file bounds.hpp
 * @brief Maximal witness QFI over symmetry-restricted pure block states and
 *        additive pattern bounds.
 *
 * A block of n sites is maximized over unit vectors of a fixed-number
 * sector (DEN), a parity subspace or the whole Fock space (IEN) by
 * Riemannian gradient ascent on the sphere with Barzilai-Borwein steps and
 * Armijo backtracking, restarted from complex Gaussian vectors. The best
 * restart is returned. A pattern bound is the sum of its block maxima.
 */

#pragma once

#include "greenqfi/qfi.hpp"

#include <cstdint>
#include <map>
#include <mutex>
#include <string>
#include <tuple>
#include <vector>

namespace greenqfi {

enum class SymmetryClass { den, ien, parity_even, parity_odd };

std::string to_string(SymmetryClass s);
SymmetryClass parse_symmetry(const std::string& s);

struct OptimizerConfig {
  int restarts = 64;
  int max_iters = 2000;
  double grad_tol = 1e-9;
  double armijo = 1e-4;
  double backtrack = 0.5;
  int max_backtracks = 60;
  std::uint64_t seed = 20240917;
  /// Restrict amplitudes to real numbers.
  bool real_only = false;

  void validate() const;
};

/// The space a block state lives in.
SubsetBasis block_space(int block_size, SymmetryClass symmetry, int n_electrons = -1);

/// F(psi) = the exact pure-state witness QFI on a fixed state space, with its
/// gradient with respect to the real and imaginary parts of psi.
class QfiObjective {
 public:
  QfiObjective(SubsetBasis space, WitnessVector a);

  const SubsetBasis& space() const { return space_; }
  double value(const Eigen::VectorXcd& psi) const;
  /// Returns F and, when grad has the size of psi, writes dF/d psi^* into it
  /// (the real gradient is 2 grad).
  double value_and_gradient(const Eigen::VectorXcd& psi, Eigen::VectorXcd& grad) const;

 private:
  struct Hop {
    int i = 0;
    int j = 0;
    std::vector<int> from, to;
    std::vector<double> sign;
  };
  cplx expectation(const Hop& h, const Eigen::VectorXcd& psi) const;
  void apply(const Hop& h, cplx coef, const Eigen::VectorXcd& psi, Eigen::VectorXcd& out) const;
  void apply_adjoint(const Hop& h, cplx coef, const Eigen::VectorXcd& psi,
                     Eigen::VectorXcd& out) const;

  SubsetBasis space_;
  WitnessVector a_;
  std::vector<Hop> hops_;      // c_i^dag c_j, all i, j
  std::vector<Hop> pairs_;     // c_i^dag c_j^dag, i < j
  std::vector<Hop> singles_;   // c_j^dag
  std::vector<Hop> signed_;    // c_j^dag (-1)^N
};

struct BlockMaximum {
  double qfi = 0.0;
  Eigen::VectorXcd state;
  std::vector<OccupationState> states;  // basis of `state`
  bool converged = false;
  double grad_norm = 0.0;
  int iterations = 0;
  int best_restart = 0;
};

/// One ascent from psi0. Used by max_block_qfi for every restart.
BlockMaximum ascend(const QfiObjective& objective, Eigen::VectorXcd psi0, const OptimizerConfig& cfg);

/// Electron count used for a DEN block at a given filling; throws if
/// block_size * filling is not an integer.
int block_electrons(int block_size, double filling);

BlockMaximum max_block_qfi(int block_size, double k, SymmetryClass symmetry,
                           const OptimizerConfig& cfg, double filling = 0.5);

struct EntanglementPattern {
  std::vector<int> blocks;  // descending
  SymmetryClass symmetry = SymmetryClass::den;
  double filling = 0.5;

  int n_sites() const;
  std::string label() const;  // e.g. "{4,2,2}"
  /// Distinct sizes with multiplicities, descending.
  std::vector<std::pair<int, int>> multiplicities() const;
  void validate() const;
};

/// Parses "4,2,2" or "{4,2,2}".
EntanglementPattern parse_pattern(const std::string& text, SymmetryClass symmetry = SymmetryClass::den,
                                  double filling = 0.5);

/// Insert-once cache of block maxima, safe for concurrent use.
class BoundCache {
 public:
  struct Key {
    int block_size;
    SymmetryClass symmetry;
    int n_electrons;
    bool real_only;
    std::uint64_t k_bits;
    std::uint64_t seed;
    int restarts;
    auto operator<=>(const Key&) const = default;
  };

  BlockMaximum get_or_compute(int block_size, double k, SymmetryClass symmetry,
                              const OptimizerConfig& cfg, double filling);
  /// Adds an externally computed entry; existing entries win.
  void insert(const Key& key, BlockMaximum value);
  std::vector<std::pair<Key, BlockMaximum>> entries() const;
  std::size_t size() const;

  static Key make_key(int block_size, double k, SymmetryClass symmetry, const OptimizerConfig& cfg,
                      double filling);

 private:
  mutable std::mutex mutex_;
  std::map<Key, BlockMaximum> table_;
};

struct BoundCurve {
  EntanglementPattern pattern;
  std::vector<double> k;
  std::vector<double> qfi;
  std::vector<bool> converged;
  /// Per k, one entry per distinct block size (pattern.multiplicities order).
  std::vector<std::vector<BlockMaximum>> blocks;
  int copies = 1;

  int n_sites() const { return pattern.n_sites(); }
  std::vector<double> density() const;
  bool all_converged() const;
};

BoundCurve pattern_bound_curve(const EntanglementPattern& pattern, const std::vector<double>& ks,
                               const OptimizerConfig& cfg, BoundCache* cache = nullptr);

/// The bound of `copies` disjoint replicas of the pattern.
BoundCurve replicate_bound(const BoundCurve& bound, int copies);

struct TriCheck {
  double real_max = 0.0;
  double complex_max = 0.0;
};

TriCheck tri_restriction_check(int block_size, double k, const OptimizerConfig& cfg,
                               double filling = 0.5);

}  // namespace greenqfi
