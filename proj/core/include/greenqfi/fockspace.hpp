// Copyright 2026 The greenqfi Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file fockspace.hpp
 * @brief Spinless fermionic occupation-number bases and sign-correct mode
 *        operators.
 *
 * Sites are 1-indexed; site j lives in bit (j-1) of the occupation pattern.
 * Mode operators follow the left-to-right Jordan-Wigner convention
 *
 *   c_j |n> = (-1)^{sum_{l<j} n_l} |n - e_j>   if n_j = 1,
 *
 * and analogously for c_j^dagger. A doubled system of two N-site copies is
 * an ordinary 2N-mode space with copy A on sites 1..N and copy B on
 * N+1..2N.
 */

#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <bit>
#include <complex>
#include <concepts>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace greenqfi {

using cplx = std::complex<double>;

/// Largest number of fermionic modes any basis may span (2^24 states).
inline constexpr int kMaxModes = 24;

struct OccupationState {
  std::uint32_t bits = 0;

  int count() const { return std::popcount(bits); }
  bool occupied(int site) const { return ((bits >> (site - 1)) & 1u) != 0; }
  int parity() const { return (count() & 1) ? -1 : 1; }

  auto operator<=>(const OccupationState&) const = default;
};

enum class ModeKind { create, annihilate };

struct ModeOp {
  int site = 1;
  ModeKind kind = ModeKind::annihilate;
};

inline ModeOp cdag(int site) { return {site, ModeKind::create}; }
inline ModeOp c(int site) { return {site, ModeKind::annihilate}; }

struct SignedState {
  OccupationState state;
  int sign = 1;
};

/// Applies c_site or c_site^dagger. Returns nullopt when Pauli-blocked.
std::optional<SignedState> apply_mode_op(OccupationState state, int site,
                                         ModeKind kind);

/// Applies a product of mode operators as written, i.e. rightmost first.
std::optional<SignedState> apply_mode_string(OccupationState state,
                                             std::span<const ModeOp> ops);

/// Binomial coefficient for n, k <= kMaxModes.
std::uint64_t binomial(int n, int k);

/// All states of n_sites modes holding exactly n_electrons particles, in
/// ascending bit order. index_of is the combinatorial rank, so lookups are
/// exact and allocation free.
class SectorBasis {
 public:
  SectorBasis(int n_sites, int n_electrons);

  int n_sites() const { return n_sites_; }
  int n_electrons() const { return n_electrons_; }
  std::size_t size() const { return states_.size(); }
  OccupationState state(std::size_t r) const { return states_[r]; }
  const std::vector<OccupationState>& states() const { return states_; }
  std::optional<std::size_t> index_of(OccupationState s) const;
  std::optional<int> fixed_electrons() const { return n_electrons_; }

 private:
  int n_sites_;
  int n_electrons_;
  std::vector<OccupationState> states_;
};

/// The whole Fock space, as the concatenation of sectors 0..n_sites.
class FullBasis {
 public:
  explicit FullBasis(int n_sites);

  int n_sites() const { return n_sites_; }
  std::size_t size() const { return std::size_t{1} << n_sites_; }
  OccupationState state(std::size_t r) const;
  std::optional<std::size_t> index_of(OccupationState s) const;
  std::optional<int> fixed_electrons() const { return std::nullopt; }

  const std::vector<SectorBasis>& sectors() const { return sectors_; }
  const SectorBasis& sector(int n_electrons) const {
    return sectors_.at(static_cast<std::size_t>(n_electrons));
  }
  /// Position of the first state of a sector inside the full ordering.
  std::size_t offset(int n_electrons) const {
    return offsets_.at(static_cast<std::size_t>(n_electrons));
  }

 private:
  int n_sites_;
  std::vector<SectorBasis> sectors_;
  std::vector<std::size_t> offsets_;
};

/// An arbitrary sorted set of occupation states (e.g. a parity subspace).
class SubsetBasis {
 public:
  SubsetBasis(int n_sites, std::vector<OccupationState> states);

  static SubsetBasis parity(int n_sites, int parity);
  static SubsetBasis sector(int n_sites, int n_electrons);
  static SubsetBasis full(int n_sites);

  int n_sites() const { return n_sites_; }
  std::size_t size() const { return states_.size(); }
  OccupationState state(std::size_t r) const { return states_[r]; }
  const std::vector<OccupationState>& states() const { return states_; }
  std::optional<std::size_t> index_of(OccupationState s) const;
  std::optional<int> fixed_electrons() const { return fixed_; }

 private:
  int n_sites_;
  std::vector<OccupationState> states_;
  std::optional<int> fixed_;
};

template <class B>
concept FockBasis = requires(const B& b, OccupationState s, std::size_t r) {
  { b.n_sites() } -> std::convertible_to<int>;
  { b.size() } -> std::convertible_to<std::size_t>;
  { b.state(r) } -> std::same_as<OccupationState>;
  { b.index_of(s) } -> std::same_as<std::optional<std::size_t>>;
  { b.fixed_electrons() } -> std::same_as<std::optional<int>>;
};

/// coefficient * (product of mode operators, written left to right).
struct OperatorTerm {
  cplx coefficient{1.0, 0.0};
  std::vector<ModeOp> ops;

  int number_change() const;
};

using SparseMatrixC = Eigen::SparseMatrix<cplx>;

namespace detail {
void check_sites(std::span<const OperatorTerm> terms, int n_sites);
void check_number_change(std::span<const OperatorTerm> terms, int expected);
}  // namespace detail

/// Matrix <out| sum_terms |in> with fermionic signs. Rows index basis_out.
template <FockBasis In, FockBasis Out>
SparseMatrixC matrix_of_operator(std::span<const OperatorTerm> terms,
                                 const In& basis_in, const Out& basis_out) {
  if (basis_in.n_sites() != basis_out.n_sites()) {
    throw std::invalid_argument("matrix_of_operator: bases span different mode counts");
  }
  detail::check_sites(terms, basis_in.n_sites());
  if (basis_in.fixed_electrons() && basis_out.fixed_electrons()) {
    detail::check_number_change(terms, *basis_out.fixed_electrons() - *basis_in.fixed_electrons());
  }
  std::vector<Eigen::Triplet<cplx>> triplets;
  triplets.reserve(basis_in.size() * terms.size());
  for (std::size_t col = 0; col < basis_in.size(); ++col) {
    const OccupationState s = basis_in.state(col);
    for (const auto& term : terms) {
      auto image = apply_mode_string(s, term.ops);
      if (!image) continue;
      auto row = basis_out.index_of(image->state);
      if (!row) {
        throw std::invalid_argument("matrix_of_operator: image state outside output basis");
      }
      triplets.emplace_back(static_cast<int>(*row), static_cast<int>(col),
                            term.coefficient * static_cast<double>(image->sign));
    }
  }
  SparseMatrixC m(static_cast<Eigen::Index>(basis_out.size()),
                  static_cast<Eigen::Index>(basis_in.size()));
  m.setFromTriplets(triplets.begin(), triplets.end());
  return m;
}

template <FockBasis B>
SparseMatrixC matrix_of_operator(std::span<const OperatorTerm> terms, const B& basis) {
  return matrix_of_operator(terms, basis, basis);
}

/// Re-expresses a vector given on `from` in the ordering of `to`. Every
/// state with nonzero amplitude must exist in `to`.
template <FockBasis From, FockBasis To>
Eigen::VectorXcd embed_state(const Eigen::VectorXcd& v, const From& from, const To& to) {
  if (static_cast<std::size_t>(v.size()) != from.size()) {
    throw std::invalid_argument("embed_state: vector length does not match basis");
  }
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(to.size()));
  for (std::size_t r = 0; r < from.size(); ++r) {
    if (v[static_cast<Eigen::Index>(r)] == cplx{}) continue;
    auto idx = to.index_of(from.state(r));
    if (!idx) throw std::invalid_argument("embed_state: state missing from target basis");
    out[static_cast<Eigen::Index>(*idx)] = v[static_cast<Eigen::Index>(r)];
  }
  return out;
}

}  // namespace greenqfi
