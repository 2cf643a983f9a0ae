// Copyright 2026 The greenqfi Authors
// SPDX-License-Identifier: Apache-2.0

#include "dense_oracle.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCore>
#include <unsupported/Eigen/KroneckerProduct>

#include <bit>
#include <cmath>
#include <map>
#include <random>
#include <stdexcept>

namespace oracle {

std::vector<Mat> annihilators(int n) {
  Mat lower(2, 2), z(2, 2), id = Mat::Identity(2, 2);
  lower << 0, 1, 0, 0;
  z << 1, 0, 0, -1;
  std::vector<Mat> ops;
  for (int j = 1; j <= n; ++j) {
    Mat m = Mat::Identity(1, 1);
    // Highest mode first so that mode 1 ends up as the lowest bit.
    for (int mode = n; mode >= 1; --mode) {
      const Mat& f = mode == j ? lower : (mode < j ? z : id);
      m = Mat(Eigen::kroneckerProduct(m, f));
    }
    ops.push_back(m);
  }
  return ops;
}

Mat tu_hamiltonian(int n, double t, double u, bool periodic) {
  const auto c = annihilators(n);
  const auto dim = static_cast<Eigen::Index>(1) << n;
  Mat h = Mat::Zero(dim, dim);
  const int bonds = periodic ? n : n - 1;
  for (int b = 0; b < bonds; ++b) {
    const int i = b, j = (b + 1) % n;
    h += t * (c[i].adjoint() * c[j] + c[j].adjoint() * c[i]);
    h += u * (c[i].adjoint() * c[i]) * (c[j].adjoint() * c[j]);
  }
  return h;
}

Mat number_operator(int n) {
  const auto c = annihilators(n);
  const auto dim = static_cast<Eigen::Index>(1) << n;
  Mat m = Mat::Zero(dim, dim);
  for (const auto& x : c) m += x.adjoint() * x;
  return m;
}

std::vector<int> sector_indices(int n, int ne) {
  std::vector<int> out;
  for (int b = 0; b < (1 << n); ++b) {
    if (std::popcount(static_cast<unsigned>(b)) == ne) out.push_back(b);
  }
  return out;
}

namespace {

using Sparse = Eigen::SparseMatrix<cplx>;

// Same construction as annihilators(), kept sparse for the 2n-mode space.
std::vector<Sparse> sparse_annihilators(int n) {
  Sparse lower(2, 2), z(2, 2), id(2, 2);
  lower.insert(0, 1) = 1.0;
  z.insert(0, 0) = 1.0;
  z.insert(1, 1) = -1.0;
  id.setIdentity();
  std::vector<Sparse> ops;
  for (int j = 1; j <= n; ++j) {
    Sparse m(1, 1);
    m.insert(0, 0) = 1.0;
    for (int mode = n; mode >= 1; --mode) {
      const Sparse& f = mode == j ? lower : (mode < j ? z : id);
      m = Sparse(Eigen::kroneckerProduct(m, f));
    }
    ops.push_back(m);
  }
  return ops;
}

// c_{jA}^dag c_{jB} on the doubled space, cached per n.
const std::vector<Sparse>& doubled_hops(int n) {
  static std::map<int, std::vector<Sparse>> cache;
  auto it = cache.find(n);
  if (it == cache.end()) {
    const auto c = sparse_annihilators(2 * n);
    std::vector<Sparse> hops;
    for (int j = 0; j < n; ++j) hops.push_back(Sparse(Sparse(c[j].adjoint()) * c[n + j]));
    it = cache.emplace(n, std::move(hops)).first;
  }
  return it->second;
}

Sparse doubled_witness(int n, const Vec& a) {
  const auto& hops = doubled_hops(n);
  const auto dim = static_cast<Eigen::Index>(1) << (2 * n);
  Sparse o(dim, dim);
  for (int j = 0; j < n; ++j) {
    o += a[j] * hops[static_cast<std::size_t>(j)];
    o += std::conj(a[j]) * Sparse(hops[static_cast<std::size_t>(j)].adjoint());
  }
  return o;
}

double qfi_of_density(const Mat& rho, const Mat& o) {
  Eigen::SelfAdjointEigenSolver<Mat> es(rho);
  const Mat oe = es.eigenvectors().adjoint() * o * es.eigenvectors();
  const auto& p = es.eigenvalues();
  double f = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    for (Eigen::Index j = 0; j < p.size(); ++j) {
      const double s = p[i] + p[j];
      if (s <= 1e-300) continue;
      f += 2.0 * (p[i] - p[j]) * (p[i] - p[j]) / s * std::norm(oe(i, j));
    }
  }
  return f;
}

Mat gibbs(const Mat& k, double temperature) {
  Eigen::SelfAdjointEigenSolver<Mat> es(k);
  const double e0 = es.eigenvalues().minCoeff();
  Eigen::VectorXd w = (-(es.eigenvalues().array() - e0) / temperature).exp();
  w /= w.sum();
  return es.eigenvectors() * w.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

double doubled_pure_qfi(const Vec& psi, const Vec& a) {
  const int n = static_cast<int>(a.size());
  if (n > 5) throw std::invalid_argument("doubled_pure_qfi: n <= 5");
  const Vec doubled = Eigen::kroneckerProduct(psi, psi);  // B index is the high part
  const Sparse o = doubled_witness(n, a);
  const Vec ov = o * doubled;
  const double mean = doubled.dot(ov).real();
  return 4.0 * (ov.squaredNorm() - mean * mean);
}

double doubled_thermal_qfi(const Mat& h, int n, double temperature, double mu, const Vec& a) {
  if (n > 4) throw std::invalid_argument("doubled_thermal_qfi: n <= 4");
  const Mat rho = gibbs(h - mu * number_operator(n), temperature);
  return qfi_of_density(Mat(Eigen::kroneckerProduct(rho, rho)), Mat(doubled_witness(n, a)));
}

double doubled_canonical_qfi(const Mat& h, int n, int ne, double temperature, const Vec& a) {
  if (n > 4) throw std::invalid_argument("doubled_canonical_qfi: n <= 4");
  const auto idx = sector_indices(n, ne);
  const auto d = static_cast<Eigen::Index>(idx.size());
  Mat hs(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) hs(i, j) = h(idx[i], idx[j]);
  }
  const Mat rs = gibbs(hs, temperature);
  const auto dim = static_cast<Eigen::Index>(1) << n;
  Mat rho = Mat::Zero(dim, dim);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) rho(idx[i], idx[j]) = rs(i, j);
  }
  return qfi_of_density(Mat(Eigen::kroneckerProduct(rho, rho)), Mat(doubled_witness(n, a)));
}

Mat correlation(const Vec& psi, int n) {
  const auto c = annihilators(n);
  Mat out(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) out(i, j) = psi.dot(c[i].adjoint() * (c[j] * psi));
  }
  return out;
}

std::vector<double> free_levels(int n, double t, bool periodic) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  const int bonds = periodic ? n : n - 1;
  for (int b = 0; b < bonds; ++b) {
    m(b, (b + 1) % n) += t;
    m((b + 1) % n, b) += t;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  return {es.eigenvalues().data(), es.eigenvalues().data() + n};
}

Vec random_state(int dim, unsigned seed) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> g;
  Vec v(dim);
  for (int i = 0; i < dim; ++i) v[i] = cplx{g(gen), g(gen)};
  return v.normalized();
}

}  // namespace oracle
