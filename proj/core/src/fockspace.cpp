// Copyright 2026 The greenqfi Authors
// SPDX-License-Identifier: Apache-2.0

#include "greenqfi/fockspace.hpp"

#include <algorithm>
#include <array>

namespace greenqfi {

namespace {

constexpr auto kBinomials = [] {
  std::array<std::array<std::uint64_t, kMaxModes + 1>, kMaxModes + 1> t{};
  for (int n = 0; n <= kMaxModes; ++n) {
    t[n][0] = 1;
    for (int k = 1; k <= n; ++k) t[n][k] = t[n - 1][k - 1] + (k <= n - 1 ? t[n - 1][k] : 0);
  }
  return t;
}();

void check_dimension(int n_sites) {
  if (n_sites < 0 || n_sites > kMaxModes) {
    throw std::invalid_argument("basis: n_sites must lie in [0, " + std::to_string(kMaxModes) +
                                "], got " + std::to_string(n_sites));
  }
}

// Next larger integer with the same popcount (Gosper's hack).
std::uint32_t next_same_popcount(std::uint32_t v) {
  const std::uint32_t t = v | (v - 1);
  return (t + 1) | (((~t & -~t) - 1) >> (std::countr_zero(v) + 1));
}

}  // namespace

std::uint64_t binomial(int n, int k) {
  if (n < 0 || k < 0 || k > n || n > kMaxModes) return 0;
  return kBinomials[n][k];
}

std::optional<SignedState> apply_mode_op(OccupationState state, int site, ModeKind kind) {
  const std::uint32_t mask = 1u << (site - 1);
  const bool occ = (state.bits & mask) != 0;
  if ((kind == ModeKind::annihilate) != occ) return std::nullopt;
  const int below = std::popcount(state.bits & (mask - 1));
  return SignedState{OccupationState{state.bits ^ mask}, (below & 1) ? -1 : 1};
}

std::optional<SignedState> apply_mode_string(OccupationState state, std::span<const ModeOp> ops) {
  SignedState acc{state, 1};
  for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
    auto next = apply_mode_op(acc.state, it->site, it->kind);
    if (!next) return std::nullopt;
    acc.state = next->state;
    acc.sign *= next->sign;
  }
  return acc;
}

SectorBasis::SectorBasis(int n_sites, int n_electrons) : n_sites_(n_sites), n_electrons_(n_electrons) {
  check_dimension(n_sites);
  if (n_electrons < 0 || n_electrons > n_sites) {
    throw std::invalid_argument("SectorBasis: n_electrons " + std::to_string(n_electrons) +
                                " outside [0, " + std::to_string(n_sites) + "]");
  }
  const std::uint64_t dim = binomial(n_sites, n_electrons);
  states_.reserve(dim);
  if (n_electrons == 0) {
    states_.push_back(OccupationState{0});
    return;
  }
  std::uint32_t v = (n_electrons == 32) ? ~0u : ((1u << n_electrons) - 1);
  for (std::uint64_t r = 0; r < dim; ++r) {
    states_.push_back(OccupationState{v});
    if (r + 1 < dim) v = next_same_popcount(v);
  }
}

std::optional<std::size_t> SectorBasis::index_of(OccupationState s) const {
  if (s.count() != n_electrons_ || (n_sites_ < 32 && (s.bits >> n_sites_) != 0)) {
    return std::nullopt;
  }
  // Combinatorial number system: ascending order at fixed popcount is colex.
  std::uint64_t rank = 0;
  std::uint32_t bits = s.bits;
  int k = 1;
  while (bits != 0) {
    const int pos = std::countr_zero(bits);
    rank += binomial(pos, k);
    bits &= bits - 1;
    ++k;
  }
  return static_cast<std::size_t>(rank);
}

FullBasis::FullBasis(int n_sites) : n_sites_(n_sites) {
  check_dimension(n_sites);
  std::size_t offset = 0;
  for (int ne = 0; ne <= n_sites; ++ne) {
    sectors_.emplace_back(n_sites, ne);
    offsets_.push_back(offset);
    offset += sectors_.back().size();
  }
}

OccupationState FullBasis::state(std::size_t r) const {
  auto it = std::upper_bound(offsets_.begin(), offsets_.end(), r);
  const auto ne = static_cast<std::size_t>(std::distance(offsets_.begin(), it) - 1);
  return sectors_[ne].state(r - offsets_[ne]);
}

std::optional<std::size_t> FullBasis::index_of(OccupationState s) const {
  if (n_sites_ < 32 && (s.bits >> n_sites_) != 0) return std::nullopt;
  const auto ne = static_cast<std::size_t>(s.count());
  auto r = sectors_[ne].index_of(s);
  if (!r) return std::nullopt;
  return offsets_[ne] + *r;
}

SubsetBasis::SubsetBasis(int n_sites, std::vector<OccupationState> states)
    : n_sites_(n_sites), states_(std::move(states)) {
  check_dimension(n_sites);
  std::sort(states_.begin(), states_.end());
  states_.erase(std::unique(states_.begin(), states_.end()), states_.end());
  for (auto s : states_) {
    if (n_sites < 32 && (s.bits >> n_sites) != 0) {
      throw std::invalid_argument("SubsetBasis: state exceeds the mode count");
    }
  }
  if (!states_.empty()) {
    const int n0 = states_.front().count();
    if (std::all_of(states_.begin(), states_.end(), [n0](auto s) { return s.count() == n0; })) {
      fixed_ = n0;
    }
  }
}

SubsetBasis SubsetBasis::parity(int n_sites, int parity) {
  check_dimension(n_sites);
  std::vector<OccupationState> states;
  for (std::uint32_t b = 0; b < (1u << n_sites); ++b) {
    OccupationState s{b};
    if (s.parity() == parity) states.push_back(s);
  }
  return SubsetBasis(n_sites, std::move(states));
}

SubsetBasis SubsetBasis::sector(int n_sites, int n_electrons) {
  SectorBasis b(n_sites, n_electrons);
  return SubsetBasis(n_sites, b.states());
}

SubsetBasis SubsetBasis::full(int n_sites) {
  check_dimension(n_sites);
  std::vector<OccupationState> states;
  for (std::uint32_t b = 0; b < (1u << n_sites); ++b) states.push_back(OccupationState{b});
  return SubsetBasis(n_sites, std::move(states));
}

std::optional<std::size_t> SubsetBasis::index_of(OccupationState s) const {
  auto it = std::lower_bound(states_.begin(), states_.end(), s);
  if (it == states_.end() || *it != s) return std::nullopt;
  return static_cast<std::size_t>(std::distance(states_.begin(), it));
}

int OperatorTerm::number_change() const {
  int delta = 0;
  for (const auto& op : ops) delta += (op.kind == ModeKind::create) ? 1 : -1;
  return delta;
}

namespace detail {

void check_sites(std::span<const OperatorTerm> terms, int n_sites) {
  for (const auto& term : terms) {
    for (const auto& op : term.ops) {
      if (op.site < 1 || op.site > n_sites) {
        throw std::invalid_argument("operator term references site " + std::to_string(op.site) +
                                    " outside 1.." + std::to_string(n_sites));
      }
    }
  }
}

void check_number_change(std::span<const OperatorTerm> terms, int expected) {
  for (const auto& term : terms) {
    if (term.number_change() != expected) {
      throw std::invalid_argument("operator term changes particle number by " +
                                  std::to_string(term.number_change()) +
                                  " but the bases require " + std::to_string(expected));
    }
  }
}

}  // namespace detail

}  // namespace greenqfi
