// Copyright 2026 The greenqfi Authors
// SPDX-License-Identifier: Apache-2.0

#include "greenqfi/model.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>

namespace greenqfi {

std::string to_string(Boundary b) { return b == Boundary::periodic ? "periodic" : "open"; }

Boundary parse_boundary(const std::string& s) {
  if (s == "periodic" || s == "pbc") return Boundary::periodic;
  if (s == "open" || s == "obc") return Boundary::open;
  throw std::invalid_argument("unknown boundary '" + s + "' (expected periodic|open)");
}

void ModelParams::validate() const {
  if (n_sites < 2) throw std::invalid_argument("model: n_sites must be >= 2");
  if (n_sites > kMaxModes) throw std::invalid_argument("model: n_sites exceeds the dimension guard");
  if (!std::isfinite(t) || !std::isfinite(u) || !std::isfinite(mu)) {
    throw std::invalid_argument("model: t, u and mu must be finite");
  }
  if (boundary == Boundary::periodic && n_sites == 2 && !allow_doubled_bond) {
    throw std::invalid_argument(
        "model: a periodic 2-site chain counts its bond twice; set allow_doubled_bond "
        "or use open boundaries");
  }
}

std::vector<OperatorTerm> tu_hamiltonian_terms(const ModelParams& params) {
  params.validate();
  const int n = params.n_sites;
  const int bonds = params.boundary == Boundary::periodic ? n : n - 1;
  std::vector<OperatorTerm> terms;
  for (int b = 0; b < bonds; ++b) {
    const int i = b + 1;
    const int j = (b + 1) % n + 1;
    terms.push_back({cplx{params.t}, {cdag(i), c(j)}});
    terms.push_back({cplx{params.t}, {cdag(j), c(i)}});
    // n_i n_j = c_i^dag c_i c_j^dag c_j
    terms.push_back({cplx{params.u}, {cdag(i), c(i), cdag(j), c(j)}});
  }
  return terms;
}

Eigen::MatrixXcd build_tu_hamiltonian(const ModelParams& params, const SectorBasis& sector) {
  if (sector.n_sites() != params.n_sites) {
    throw std::invalid_argument("build_tu_hamiltonian: sector does not belong to the model");
  }
  const auto terms = tu_hamiltonian_terms(params);
  return Eigen::MatrixXcd(matrix_of_operator(terms, sector));
}

Eigenpairs diagonalize_hermitian(const Eigen::MatrixXcd& h) {
  if (h.rows() != h.cols()) throw std::invalid_argument("diagonalize_hermitian: matrix not square");
  if (h.size() == 0) return {Eigen::VectorXd(0), Eigen::MatrixXcd(0, 0)};
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  if ((h - h.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw std::invalid_argument("diagonalize_hermitian: matrix is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("diagonalize_hermitian: eigensolver failed");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

Eigen::MatrixXcd translation_operator(const SectorBasis& sector) {
  const int n = sector.n_sites();
  const auto dim = static_cast<Eigen::Index>(sector.size());
  Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(dim, dim);
  for (std::size_t r = 0; r < sector.size(); ++r) {
    const OccupationState s = sector.state(r);
    std::vector<ModeOp> ref, moved;
    for (int j = 1; j <= n; ++j) {
      if (!s.occupied(j)) continue;
      ref.push_back(cdag(j));
      moved.push_back(cdag(j % n + 1));
    }
    const auto a = apply_mode_string(OccupationState{}, ref);
    const auto b = apply_mode_string(OccupationState{}, moved);
    t(static_cast<Eigen::Index>(*sector.index_of(b->state)), static_cast<Eigen::Index>(r)) =
        static_cast<double>(a->sign * b->sign);
  }
  return t;
}

namespace {

void fix_phase(Eigen::Ref<Eigen::VectorXcd> v) {
  Eigen::Index imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  v *= std::conj(v[imax]) / std::abs(v[imax]);
  v.normalize();
}

double crystal_momentum(const Eigen::MatrixXcd& t, const Eigen::VectorXcd& v) {
  return std::arg(v.dot(t * v));
}

// Rotates every degenerate cluster of a periodic sector spectrum onto
// translation eigenstates, ordered by |K| with K > 0 first on ties.
void resolve_degenerate_levels(const SectorBasis& sector, const Eigen::VectorXd& e,
                               Eigen::MatrixXcd& v) {
  const Eigen::MatrixXcd t = translation_operator(sector);
  // cos K + g sin K separates all momenta of a cluster for irrational g.
  constexpr double g = 0.6180339887498949;
  const Eigen::MatrixXcd probe =
      0.5 * (t + t.adjoint()) + cplx{0.0, -0.5 * g} * (t - t.adjoint());
  Eigen::Index a = 0;
  while (a < e.size()) {
    Eigen::Index b = a + 1;
    while (b < e.size() && e[b] - e[a] < kDegeneracyGap) ++b;
    if (b - a > 1) {
      const Eigen::MatrixXcd block = v.middleCols(a, b - a);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(block.adjoint() * probe * block);
      Eigen::MatrixXcd rotated = block * es.eigenvectors();
      std::vector<std::pair<double, Eigen::Index>> order;
      for (Eigen::Index i = 0; i < rotated.cols(); ++i) {
        order.push_back({crystal_momentum(t, rotated.col(i)), i});
      }
      std::stable_sort(order.begin(), order.end(), [](const auto& x, const auto& y) {
        if (std::abs(std::abs(x.first) - std::abs(y.first)) > 1e-9) {
          return std::abs(x.first) < std::abs(y.first);
        }
        return x.first > y.first + 1e-9;
      });
      for (Eigen::Index i = 0; i < rotated.cols(); ++i) {
        v.col(a + i) = rotated.col(order[static_cast<std::size_t>(i)].second);
      }
    }
    a = b;
  }
  for (Eigen::Index i = 0; i < v.cols(); ++i) fix_phase(v.col(i));
}

}  // namespace

GroundState ground_state(const ModelParams& params, const SectorBasis& sector) {
  auto eig = diagonalize_hermitian(build_tu_hamiltonian(params, sector));
  if (params.boundary == Boundary::periodic) {
    resolve_degenerate_levels(sector, eig.energies, eig.vectors);
  }
  GroundState gs;
  gs.energy = eig.energies[0];
  gs.state = eig.vectors.col(0);
  gs.gap = eig.energies.size() > 1 ? eig.energies[1] - eig.energies[0]
                                   : std::numeric_limits<double>::infinity();
  gs.degenerate = gs.gap < kDegeneracyGap;
  while (gs.multiplicity < eig.energies.size() &&
         eig.energies[gs.multiplicity] - eig.energies[0] < kDegeneracyGap) {
    ++gs.multiplicity;
  }
  if (params.boundary == Boundary::periodic) {
    gs.momentum = crystal_momentum(translation_operator(sector), gs.state);
  } else {
    fix_phase(gs.state);
  }
  return gs;
}

EigenSystem::EigenSystem(int n_sites, std::vector<SectorSpectrum> sectors)
    : n_sites_(n_sites), sectors_(std::move(sectors)) {
  if (static_cast<int>(sectors_.size()) != n_sites + 1) {
    throw std::invalid_argument("EigenSystem: expected one spectrum per sector 0..n_sites");
  }
  for (int ne = 0; ne <= n_sites; ++ne) {
    const auto& s = sectors_[static_cast<std::size_t>(ne)];
    if (s.basis.n_electrons() != ne || s.basis.n_sites() != n_sites) {
      throw std::invalid_argument("EigenSystem: sector bases out of order");
    }
    for (Eigen::Index r = 0; r < s.energies.size(); ++r) {
      levels_.push_back({ne, static_cast<int>(r), s.energies[r]});
    }
  }
  std::stable_sort(levels_.begin(), levels_.end(),
                   [](const LevelRef& a, const LevelRef& b) { return a.energy < b.energy; });
}

EigenSystem solve_sectors(int n_sites, const SectorHamiltonian& build) {
  std::vector<SectorSpectrum> sectors;
  for (int ne = 0; ne <= n_sites; ++ne) {
    SectorBasis basis(n_sites, ne);
    auto eig = diagonalize_hermitian(build(basis));
    sectors.push_back({std::move(basis), std::move(eig.energies), std::move(eig.vectors)});
  }
  return EigenSystem(n_sites, std::move(sectors));
}

EigenSystem solve_tu_model(const ModelParams& params) {
  params.validate();
  auto eigs = solve_sectors(params.n_sites, [&params](const SectorBasis& b) {
    return build_tu_hamiltonian(params, b);
  });
  if (params.boundary != Boundary::periodic) return eigs;
  auto sectors = eigs.sectors();
  for (auto& s : sectors) resolve_degenerate_levels(s.basis, s.energies, s.vectors);
  return EigenSystem(params.n_sites, std::move(sectors));
}

double ThermalWeights::partition() const { return std::exp(log_partition); }

double ThermalWeights::shifted_energy(const EigenSystem& eigs, int sector, int index) const {
  return eigs.sector(sector).energies[index] - mu * sector;
}

namespace {

ThermalWeights boltzmann(const EigenSystem& eigs, double temperature, double mu,
                         std::optional<int> only_sector) {
  if (!(temperature > 0.0) || !std::isfinite(temperature)) {
    throw std::invalid_argument("thermal weights need a finite T > 0 (use the pure-state path at T = 0)");
  }
  const double beta = 1.0 / temperature;
  ThermalWeights w;
  w.temperature = temperature;
  w.mu = mu;
  w.ensemble = only_sector ? Ensemble::canonical : Ensemble::grand_canonical;

  double emin = std::numeric_limits<double>::infinity();
  for (const auto& s : eigs.sectors()) {
    const int ne = s.basis.n_electrons();
    if (only_sector && ne != *only_sector) continue;
    for (Eigen::Index r = 0; r < s.energies.size(); ++r) emin = std::min(emin, s.energies[r] - mu * ne);
  }
  double z = 0.0;
  for (const auto& s : eigs.sectors()) {
    const int ne = s.basis.n_electrons();
    Eigen::VectorXd p = Eigen::VectorXd::Zero(s.energies.size());
    if (!only_sector || ne == *only_sector) {
      for (Eigen::Index r = 0; r < s.energies.size(); ++r) {
        p[r] = std::exp(-beta * (s.energies[r] - mu * ne - emin));
        z += p[r];
      }
    }
    w.probabilities.push_back(std::move(p));
  }
  for (auto& p : w.probabilities) p /= z;
  w.log_partition = std::log(z) - beta * emin;
  return w;
}

}  // namespace

ThermalWeights thermal_weights(const EigenSystem& eigs, double temperature, double mu) {
  return boltzmann(eigs, temperature, mu, std::nullopt);
}

ThermalWeights canonical_weights(const EigenSystem& eigs, double temperature, int n_electrons,
                                 double mu) {
  if (n_electrons < 0 || n_electrons > eigs.n_sites()) {
    throw std::invalid_argument("canonical_weights: electron count outside the Fock space");
  }
  return boltzmann(eigs, temperature, mu, n_electrons);
}

ThermalWeights pure_state_weights(const EigenSystem& eigs, int n_electrons, int index) {
  const auto& s = eigs.sector(n_electrons);
  if (index < 0 || index >= s.energies.size()) {
    throw std::invalid_argument("pure_state_weights: level index out of range");
  }
  ThermalWeights w;
  w.temperature = 0.0;
  w.ensemble = Ensemble::canonical;
  for (const auto& sec : eigs.sectors()) {
    w.probabilities.push_back(Eigen::VectorXd::Zero(sec.energies.size()));
  }
  w.probabilities[static_cast<std::size_t>(n_electrons)][index] = 1.0;
  w.log_partition = 0.0;
  return w;
}

Eigen::MatrixXcd thermal_correlation_matrix(const EigenSystem& eigs, const ThermalWeights& w) {
  const int n = eigs.n_sites();
  Eigen::MatrixXcd corr = Eigen::MatrixXcd::Zero(n, n);
  for (const auto& s : eigs.sectors()) {
    const int ne = s.basis.n_electrons();
    const auto& p = w.probabilities[static_cast<std::size_t>(ne)];
    for (int i = 1; i <= n; ++i) {
      for (int j = 1; j <= n; ++j) {
        const OperatorTerm term{cplx{1.0}, {cdag(i), c(j)}};
        const Eigen::MatrixXcd m(matrix_of_operator(std::span(&term, 1), s.basis));
        const Eigen::MatrixXcd in_eig = s.vectors.adjoint() * m * s.vectors;
        cplx acc{};
        for (Eigen::Index r = 0; r < p.size(); ++r) acc += p[r] * in_eig(r, r);
        corr(i - 1, j - 1) += acc;
      }
    }
  }
  return corr;
}

}  // namespace greenqfi
