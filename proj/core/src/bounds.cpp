// Copyright 2026 The greenqfi Authors
// SPDX-License-Identifier: Apache-2.0

#include "greenqfi/bounds.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>
#include <sstream>

namespace greenqfi {

namespace {

constexpr int kMaxBlockSize = 8;

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t mix(std::uint64_t h, std::uint64_t v) { return splitmix(h ^ splitmix(v)); }

double real_dot(const Eigen::VectorXcd& u, const Eigen::VectorXcd& v) { return u.dot(v).real(); }

}  // namespace

std::string to_string(SymmetryClass s) {
  switch (s) {
    case SymmetryClass::den: return "den";
    case SymmetryClass::ien: return "ien";
    case SymmetryClass::parity_even: return "parity-even";
    case SymmetryClass::parity_odd: return "parity-odd";
  }
  return "den";
}

SymmetryClass parse_symmetry(const std::string& s) {
  if (s == "den" || s == "DEN") return SymmetryClass::den;
  if (s == "ien" || s == "IEN") return SymmetryClass::ien;
  if (s == "parity-even" || s == "even") return SymmetryClass::parity_even;
  if (s == "parity-odd" || s == "odd") return SymmetryClass::parity_odd;
  throw std::invalid_argument("unknown symmetry class '" + s +
                              "' (expected den|ien|parity-even|parity-odd)");
}

void OptimizerConfig::validate() const {
  if (restarts < 1) throw std::invalid_argument("optimizer: restarts must be >= 1");
  if (max_iters < 1) throw std::invalid_argument("optimizer: max_iters must be >= 1");
  if (!(grad_tol > 0.0)) throw std::invalid_argument("optimizer: grad_tol must be positive");
  if (!(backtrack > 0.0 && backtrack < 1.0)) {
    throw std::invalid_argument("optimizer: backtrack factor must lie in (0, 1)");
  }
}

SubsetBasis block_space(int block_size, SymmetryClass symmetry, int n_electrons) {
  switch (symmetry) {
    case SymmetryClass::den: return SubsetBasis::sector(block_size, n_electrons);
    case SymmetryClass::ien: return SubsetBasis::full(block_size);
    case SymmetryClass::parity_even: return SubsetBasis::parity(block_size, 1);
    case SymmetryClass::parity_odd: return SubsetBasis::parity(block_size, -1);
  }
  throw std::invalid_argument("block_space: bad symmetry");
}

QfiObjective::QfiObjective(SubsetBasis space, WitnessVector a) : space_(std::move(space)), a_(std::move(a)) {
  const int n = space_.n_sites();
  if (a_.n_sites() != n) throw std::invalid_argument("QfiObjective: witness size mismatch");
  auto build = [this](std::vector<ModeOp> ops, int i, int j, bool with_parity) {
    Hop h{i, j, {}, {}, {}};
    for (std::size_t col = 0; col < space_.size(); ++col) {
      const OccupationState s = space_.state(col);
      auto img = apply_mode_string(s, ops);
      if (!img) continue;
      auto row = space_.index_of(img->state);
      if (!row) continue;
      h.from.push_back(static_cast<int>(col));
      h.to.push_back(static_cast<int>(*row));
      h.sign.push_back(static_cast<double>(img->sign * (with_parity ? s.parity() : 1)));
    }
    return h;
  };
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= n; ++j) hops_.push_back(build({cdag(i), c(j)}, i - 1, j - 1, false));
  }
  if (!space_.fixed_electrons()) {
    for (int i = 1; i <= n; ++i) {
      for (int j = i + 1; j <= n; ++j) {
        auto h = build({cdag(i), cdag(j)}, i - 1, j - 1, false);
        if (!h.from.empty()) pairs_.push_back(std::move(h));
      }
    }
    for (int j = 1; j <= n; ++j) {
      auto s = build({cdag(j)}, j - 1, j - 1, false);
      auto d = build({cdag(j)}, j - 1, j - 1, true);
      if (!s.from.empty()) {
        singles_.push_back(std::move(s));
        signed_.push_back(std::move(d));
      }
    }
  }
}

cplx QfiObjective::expectation(const Hop& h, const Eigen::VectorXcd& psi) const {
  cplx acc{};
  for (std::size_t e = 0; e < h.from.size(); ++e) {
    acc += std::conj(psi[h.to[e]]) * psi[h.from[e]] * h.sign[e];
  }
  return acc;
}

void QfiObjective::apply(const Hop& h, cplx coef, const Eigen::VectorXcd& psi,
                         Eigen::VectorXcd& out) const {
  for (std::size_t e = 0; e < h.from.size(); ++e) out[h.to[e]] += coef * h.sign[e] * psi[h.from[e]];
}

void QfiObjective::apply_adjoint(const Hop& h, cplx coef, const Eigen::VectorXcd& psi,
                                 Eigen::VectorXcd& out) const {
  for (std::size_t e = 0; e < h.from.size(); ++e) out[h.from[e]] += coef * h.sign[e] * psi[h.to[e]];
}

double QfiObjective::value(const Eigen::VectorXcd& psi) const {
  Eigen::VectorXcd unused;
  return value_and_gradient(psi, unused);
}

double QfiObjective::value_and_gradient(const Eigen::VectorXcd& psi, Eigen::VectorXcd& grad) const {
  const bool want_grad = grad.size() == psi.size();
  const auto& a = a_.a;
  double f = 0.0;

  std::vector<cplx> cvals(hops_.size());
  for (std::size_t h = 0; h < hops_.size(); ++h) {
    const auto& hop = hops_[h];
    const cplx cij = expectation(hop, psi);
    cvals[h] = cij;
    const double kij = (std::conj(a[hop.i]) * a[hop.j]).real();
    if (hop.i == hop.j) f += 8.0 * std::norm(a[hop.i]) * cij.real();
    f -= 8.0 * kij * std::norm(cij);
  }
  std::vector<cplx> pvals(pairs_.size());
  for (std::size_t h = 0; h < pairs_.size(); ++h) {
    const auto& hop = pairs_[h];
    pvals[h] = expectation(hop, psi);
    f += 16.0 * (a[hop.i] * a[hop.j]).real() * std::norm(pvals[h]);
  }
  std::vector<cplx> bvals(singles_.size()), dvals(singles_.size());
  cplx x{};
  for (std::size_t h = 0; h < singles_.size(); ++h) {
    bvals[h] = expectation(singles_[h], psi);
    dvals[h] = expectation(signed_[h], psi);
    x += a[singles_[h].i] * dvals[h] * std::conj(bvals[h]);
  }
  const double mean = 2.0 * x.real();
  f -= 4.0 * mean * mean;
  if (!want_grad) return f;

  grad.setZero();
  for (std::size_t h = 0; h < hops_.size(); ++h) {
    const auto& hop = hops_[h];
    const double kij = (std::conj(a[hop.i]) * a[hop.j]).real();
    cplx coef = -16.0 * kij * std::conj(cvals[h]);
    if (hop.i == hop.j) coef += 8.0 * std::norm(a[hop.i]);
    apply(hop, coef, psi, grad);
  }
  for (std::size_t h = 0; h < pairs_.size(); ++h) {
    const auto& hop = pairs_[h];
    const double rij = (a[hop.i] * a[hop.j]).real();
    apply(hop, 16.0 * rij * std::conj(pvals[h]), psi, grad);
    apply_adjoint(hop, 16.0 * rij * pvals[h], psi, grad);
  }
  if (mean != 0.0) {
    for (std::size_t h = 0; h < singles_.size(); ++h) {
      const cplx aj = a[singles_[h].i];
      const double s = -8.0 * mean;
      apply(signed_[h], s * aj * std::conj(bvals[h]), psi, grad);
      apply_adjoint(singles_[h], s * aj * dvals[h], psi, grad);
      apply_adjoint(signed_[h], s * std::conj(aj) * bvals[h], psi, grad);
      apply(singles_[h], s * std::conj(aj) * std::conj(dvals[h]), psi, grad);
    }
  }
  return f;
}

namespace {

// Riemannian gradient on the unit sphere (real inner product Re u^dag v).
Eigen::VectorXcd riemannian_gradient(const Eigen::VectorXcd& psi, const Eigen::VectorXcd& wirtinger,
                                     bool real_only) {
  Eigen::VectorXcd g = 2.0 * wirtinger;
  if (real_only) g = g.real().cast<cplx>();
  return g - real_dot(psi, g) * psi;
}

}  // namespace

BlockMaximum ascend(const QfiObjective& objective, Eigen::VectorXcd psi, const OptimizerConfig& cfg) {
  psi.normalize();
  const auto dim = psi.size();
  Eigen::VectorXcd w(dim);
  double f = objective.value_and_gradient(psi, w);
  Eigen::VectorXcd g = riemannian_gradient(psi, w, cfg.real_only);
  double gnorm = g.norm();

  BlockMaximum out;
  double alpha = 0.1 / std::max(gnorm, 1.0);
  Eigen::VectorXcd prev_psi, prev_g;
  int it = 0;
  for (; it < cfg.max_iters && gnorm > cfg.grad_tol; ++it) {
    if (it > 0) {
      const Eigen::VectorXcd s = psi - prev_psi;
      const Eigen::VectorXcd y = g - prev_g;
      const double sy = real_dot(s, y);
      const double ss = s.squaredNorm();
      alpha = sy < 0.0 ? ss / -sy : 2.0 * alpha;
      alpha = std::clamp(alpha, 1e-12, 1e3);
    }
    const double slack = 1e-13 * std::max(1.0, std::abs(f));
    bool accepted = false;
    Eigen::VectorXcd trial(dim), trial_w(dim);
    double trial_f = f;
    for (int bt = 0; bt <= cfg.max_backtracks; ++bt) {
      trial = (psi + alpha * g).normalized();
      trial_f = objective.value_and_gradient(trial, trial_w);
      if (trial_f >= f + cfg.armijo * alpha * gnorm * gnorm - slack) {
        accepted = true;
        break;
      }
      alpha *= cfg.backtrack;
    }
    if (!accepted) break;
    prev_psi = psi;
    prev_g = g;
    psi = trial;
    f = trial_f;
    w = trial_w;
    g = riemannian_gradient(psi, w, cfg.real_only);
    gnorm = g.norm();
  }
  out.qfi = f;
  out.state = psi;
  out.states = objective.space().states();
  out.grad_norm = gnorm;
  out.iterations = it;
  out.converged = gnorm <= cfg.grad_tol;
  return out;
}

int block_electrons(int block_size, double filling) {
  if (!(filling >= 0.0 && filling <= 1.0)) {
    throw std::invalid_argument("filling must lie in [0, 1]");
  }
  const double ne = block_size * filling;
  const double r = std::round(ne);
  if (std::abs(ne - r) > 1e-9) {
    std::ostringstream msg;
    msg << "a block of " << block_size << " sites cannot satisfy filling " << filling
        << " with a whole number of electrons";
    throw std::invalid_argument(msg.str());
  }
  return static_cast<int>(r);
}

BlockMaximum max_block_qfi(int block_size, double k, SymmetryClass symmetry,
                           const OptimizerConfig& cfg, double filling) {
  cfg.validate();
  if (block_size < 1 || block_size > kMaxBlockSize) {
    throw std::invalid_argument("max_block_qfi: block size must lie in [1, 8]");
  }
  const int ne = symmetry == SymmetryClass::den ? block_electrons(block_size, filling) : -1;
  QfiObjective objective(block_space(block_size, symmetry, ne), witness_from_k(k, block_size));
  const auto dim = static_cast<Eigen::Index>(objective.space().size());

  std::uint64_t base = mix(cfg.seed, static_cast<std::uint64_t>(block_size));
  base = mix(base, static_cast<std::uint64_t>(symmetry));
  base = mix(base, static_cast<std::uint64_t>(ne + 1));
  base = mix(base, std::bit_cast<std::uint64_t>(k));
  base = mix(base, cfg.real_only ? 1u : 0u);

  BlockMaximum best;
  best.qfi = -std::numeric_limits<double>::infinity();
  for (int r = 0; r < cfg.restarts; ++r) {
    std::mt19937_64 rng(mix(base, static_cast<std::uint64_t>(r)));
    std::normal_distribution<double> normal;
    Eigen::VectorXcd psi0(dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
      const double re = normal(rng);
      const double im = cfg.real_only ? 0.0 : normal(rng);
      psi0[i] = cplx{re, im};
    }
    auto result = ascend(objective, psi0, cfg);
    if (result.qfi > best.qfi) {
      best = std::move(result);
      best.best_restart = r;
    }
  }
  return best;
}

int EntanglementPattern::n_sites() const {
  int n = 0;
  for (int b : blocks) n += b;
  return n;
}

std::string EntanglementPattern::label() const {
  std::string s = "{";
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(blocks[i]);
  }
  return s + "}";
}

std::vector<std::pair<int, int>> EntanglementPattern::multiplicities() const {
  std::vector<std::pair<int, int>> out;
  for (int b : blocks) {
    if (!out.empty() && out.back().first == b) {
      ++out.back().second;
    } else {
      out.emplace_back(b, 1);
    }
  }
  return out;
}

void EntanglementPattern::validate() const {
  if (blocks.empty()) throw std::invalid_argument("pattern: no blocks");
  if (!std::is_sorted(blocks.rbegin(), blocks.rend())) {
    throw std::invalid_argument("pattern: blocks must be sorted in descending order");
  }
  for (int b : blocks) {
    if (b < 1 || b > kMaxBlockSize) {
      throw std::invalid_argument("pattern " + label() + ": block sizes must lie in [1, 8]");
    }
    if (symmetry == SymmetryClass::den) {
      try {
        block_electrons(b, filling);
      } catch (const std::invalid_argument& e) {
        throw std::invalid_argument("pattern " + label() + ": " + e.what());
      }
    }
  }
}

EntanglementPattern parse_pattern(const std::string& text, SymmetryClass symmetry, double filling) {
  EntanglementPattern p;
  p.symmetry = symmetry;
  p.filling = filling;
  std::string body;
  for (char ch : text) {
    if (ch != '{' && ch != '}' && ch != ' ') body += ch;
  }
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(item, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("pattern '" + text + "': '" + item + "' is not a block size");
    }
    if (used != item.size()) {
      throw std::invalid_argument("pattern '" + text + "': '" + item + "' is not a block size");
    }
    p.blocks.push_back(v);
  }
  std::sort(p.blocks.begin(), p.blocks.end(), std::greater<>());
  p.validate();
  return p;
}

BoundCache::Key BoundCache::make_key(int block_size, double k, SymmetryClass symmetry,
                                     const OptimizerConfig& cfg, double filling) {
  const int ne = symmetry == SymmetryClass::den ? block_electrons(block_size, filling) : -1;
  return {block_size, symmetry, ne, cfg.real_only, std::bit_cast<std::uint64_t>(k), cfg.seed,
          cfg.restarts};
}

BlockMaximum BoundCache::get_or_compute(int block_size, double k, SymmetryClass symmetry,
                                        const OptimizerConfig& cfg, double filling) {
  const Key key = make_key(block_size, k, symmetry, cfg, filling);
  {
    std::lock_guard lock(mutex_);
    if (auto it = table_.find(key); it != table_.end()) return it->second;
  }
  BlockMaximum value = max_block_qfi(block_size, k, symmetry, cfg, filling);
  std::lock_guard lock(mutex_);
  return table_.emplace(key, std::move(value)).first->second;
}

void BoundCache::insert(const Key& key, BlockMaximum value) {
  std::lock_guard lock(mutex_);
  table_.emplace(key, std::move(value));
}

std::vector<std::pair<BoundCache::Key, BlockMaximum>> BoundCache::entries() const {
  std::lock_guard lock(mutex_);
  return {table_.begin(), table_.end()};
}

std::size_t BoundCache::size() const {
  std::lock_guard lock(mutex_);
  return table_.size();
}

std::vector<double> BoundCurve::density() const {
  std::vector<double> f(qfi.size());
  for (std::size_t i = 0; i < qfi.size(); ++i) f[i] = qfi[i] / (4.0 * n_sites());
  return f;
}

bool BoundCurve::all_converged() const {
  return std::all_of(converged.begin(), converged.end(), [](bool b) { return b; });
}

BoundCurve pattern_bound_curve(const EntanglementPattern& pattern, const std::vector<double>& ks,
                               const OptimizerConfig& cfg, BoundCache* cache) {
  pattern.validate();
  cfg.validate();
  BoundCache local;
  BoundCache& table = cache ? *cache : local;
  BoundCurve curve;
  curve.pattern = pattern;
  curve.k = ks;
  for (double k : ks) {
    double total = 0.0;
    bool ok = true;
    std::vector<BlockMaximum> per_block;
    for (const auto& [size, count] : pattern.multiplicities()) {
      auto bm = table.get_or_compute(size, k, pattern.symmetry, cfg, pattern.filling);
      total += count * bm.qfi;
      ok = ok && bm.converged;
      per_block.push_back(std::move(bm));
    }
    curve.qfi.push_back(total);
    curve.converged.push_back(ok);
    curve.blocks.push_back(std::move(per_block));
  }
  return curve;
}

BoundCurve replicate_bound(const BoundCurve& bound, int copies) {
  if (copies < 1) throw std::invalid_argument("replicate_bound: copies must be >= 1");
  BoundCurve out = bound;
  out.copies = bound.copies * copies;
  out.pattern.blocks.clear();
  for (int c = 0; c < copies; ++c) {
    out.pattern.blocks.insert(out.pattern.blocks.end(), bound.pattern.blocks.begin(),
                              bound.pattern.blocks.end());
  }
  std::sort(out.pattern.blocks.begin(), out.pattern.blocks.end(), std::greater<>());
  for (auto& v : out.qfi) v *= copies;
  return out;
}

TriCheck tri_restriction_check(int block_size, double k, const OptimizerConfig& cfg, double filling) {
  OptimizerConfig real_cfg = cfg;
  real_cfg.real_only = true;
  OptimizerConfig complex_cfg = cfg;
  complex_cfg.real_only = false;
  return {max_block_qfi(block_size, k, SymmetryClass::den, real_cfg, filling).qfi,
          max_block_qfi(block_size, k, SymmetryClass::den, complex_cfg, filling).qfi};
}

}  // namespace greenqfi
