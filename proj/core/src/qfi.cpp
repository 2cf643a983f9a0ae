// Copyright 2026 The greenqfi Authors
// SPDX-License-Identifier: Apache-2.0

#include "greenqfi/qfi.hpp"

#include <cmath>

namespace greenqfi {

namespace detail {

void check_normalized(const Eigen::VectorXcd& psi) {
  if (std::abs(psi.squaredNorm() - 1.0) > 1e-12) {
    throw std::invalid_argument("state is not normalized (|psi|^2 = " +
                                std::to_string(psi.squaredNorm()) + ")");
  }
}

}  // namespace detail

WitnessVector witness_from_k(double k, int n_sites) {
  WitnessVector w;
  w.a.resize(n_sites);
  for (int j = 1; j <= n_sites; ++j) w.a[j - 1] = std::polar(1.0, k * j);
  w.k = k;
  return w;
}

WitnessVector witness_from_coefficients(Eigen::VectorXcd a) { return {std::move(a), std::nullopt}; }

namespace {

void check_sizes(int n, const WitnessVector& a) {
  if (a.n_sites() != n) {
    throw std::invalid_argument("witness has " + std::to_string(a.n_sites()) +
                                " coefficients for " + std::to_string(n) + " sites");
  }
}

// 8 Re sum_ij a_i^* a_j (delta_ij C_ii - |C_ij|^2)
double c_term(const Eigen::MatrixXcd& C, const Eigen::VectorXcd& a) {
  double f = 0.0;
  for (Eigen::Index i = 0; i < C.rows(); ++i) {
    f += 8.0 * std::norm(a[i]) * C(i, i).real();
    for (Eigen::Index j = 0; j < C.cols(); ++j) {
      f -= 8.0 * (std::conj(a[i]) * a[j]).real() * std::norm(C(i, j));
    }
  }
  return f;
}

// 8 Re sum_ij a_i a_j |P_ij|^2
double p_term(const Eigen::MatrixXcd& P, const Eigen::VectorXcd& a) {
  double f = 0.0;
  for (Eigen::Index i = 0; i < P.rows(); ++i) {
    for (Eigen::Index j = 0; j < P.cols(); ++j) f += 8.0 * (a[i] * a[j]).real() * std::norm(P(i, j));
  }
  return f;
}

}  // namespace

double qfi_pure_den(const Eigen::MatrixXcd& C, const WitnessVector& a) {
  check_sizes(static_cast<int>(C.rows()), a);
  return c_term(C, a.a);
}

double qfi_pure_ien(const CorrelationData& data, const WitnessVector& a) {
  check_sizes(data.n_sites(), a);
  double f = c_term(data.C, a.a) + p_term(data.P, a.a);
  for (Eigen::Index i = 0; i < data.b.size(); ++i) f -= 16.0 * a.a[i].real() * std::norm(data.b[i]);
  return f;
}

double witness_mean(const CorrelationData& data, const WitnessVector& a) {
  check_sizes(data.n_sites(), a);
  cplx x{};
  for (Eigen::Index j = 0; j < data.b.size(); ++j) x += a.a[j] * data.d[j] * std::conj(data.b[j]);
  return 2.0 * x.real();
}

double qfi_pure_general(const CorrelationData& data, const WitnessVector& a) {
  const double mean = witness_mean(data, a);
  return c_term(data.C, a.a) + p_term(data.P, a.a) - 4.0 * mean * mean;
}

ExtendedCorrelation extended_correlation(const CorrelationData& data, const WitnessVector& a) {
  const int n = data.n_sites();
  check_sizes(n, a);
  for (int i = 0; i < n; ++i) {
    if (std::abs(data.P(i, i)) > 1e-12) {
      throw std::invalid_argument("extended_correlation: P has a nonzero diagonal");
    }
  }
  ExtendedCorrelation ext;
  ext.matrix.resize(2 * n, 2 * n);
  ext.matrix.topLeftCorner(n, n) = data.C;
  ext.matrix.topRightCorner(n, n) = data.P;
  ext.matrix.bottomLeftCorner(n, n) = data.P.adjoint();
  ext.matrix.bottomRightCorner(n, n) = Eigen::MatrixXcd::Identity(n, n) - data.C.transpose();
  ext.coefficients.resize(2 * n);
  ext.coefficients.head(n) = a.a;
  ext.coefficients.tail(n) = -a.a.conjugate();
  return ext;
}

double qfi_extended(const ExtendedCorrelation& ext) {
  const auto& m = ext.matrix;
  const auto& v = ext.coefficients;
  for (int i = 0; i < ext.n_sites(); ++i) {
    if (std::abs(m(i, ext.n_sites() + i)) > 1e-12) {
      throw std::invalid_argument("qfi_extended: pair block has a nonzero diagonal");
    }
  }
  cplx f{};
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    f += std::norm(v[i]) * m(i, i);
    for (Eigen::Index j = 0; j < m.cols(); ++j) f -= std::conj(v[i]) * v[j] * std::norm(m(i, j));
  }
  return 4.0 * f.real();
}

double qfi_extended_trace(const ExtendedCorrelation& ext) {
  const Eigen::MatrixXcd A = ext.coefficients.asDiagonal();
  const Eigen::MatrixXcd& C = ext.matrix;
  const Eigen::MatrixXcd inner = A.adjoint() - A.conjugate() * C.adjoint();
  return 4.0 * (A * C * inner).trace().real();
}

double extended_upper_bound(const ExtendedCorrelation& ext) {
  double f = 0.0;
  for (Eigen::Index i = 0; i < ext.matrix.rows(); ++i) {
    const double c = ext.matrix(i, i).real();
    f += 8.0 * std::norm(ext.coefficients[i]) * c * (1.0 - c);
  }
  return f;
}

namespace {

constexpr int kMaxDoubledSites = 6;

SparseMatrixC doubled_witness(int n, const WitnessVector& a, const SubsetBasis& space) {
  std::vector<OperatorTerm> terms;
  for (int j = 1; j <= n; ++j) {
    terms.push_back({a.a[j - 1], {cdag(j), c(n + j)}});
    terms.push_back({std::conj(a.a[j - 1]), {cdag(n + j), c(j)}});
  }
  return matrix_of_operator(terms, space);
}

}  // namespace

double qfi_doubled_pure_oracle_bits(const Eigen::VectorXcd& psi_bits, int n_sites,
                                    const WitnessVector& a) {
  if (n_sites > kMaxDoubledSites) {
    throw std::invalid_argument("qfi_doubled_pure_oracle: at most 6 sites");
  }
  check_sizes(n_sites, a);
  detail::check_normalized(psi_bits);
  const Eigen::Index dim = psi_bits.size();
  Eigen::VectorXcd doubled(dim * dim);
  for (Eigen::Index hi = 0; hi < dim; ++hi) {
    for (Eigen::Index lo = 0; lo < dim; ++lo) doubled[lo + dim * hi] = psi_bits[lo] * psi_bits[hi];
  }
  const auto space = SubsetBasis::full(2 * n_sites);
  const SparseMatrixC o = doubled_witness(n_sites, a, space);
  const Eigen::VectorXcd ov = o * doubled;
  const double mean = doubled.dot(ov).real();
  return 4.0 * (ov.squaredNorm() - mean * mean);
}

double qfi_thermal_lehmann_oracle(const EigenSystem& eigs, const ThermalWeights& w,
                                  const WitnessVector& a) {
  const int n = eigs.n_sites();
  if (n > 4) throw std::invalid_argument("qfi_thermal_lehmann_oracle: at most 4 sites");
  check_sizes(n, a);
  const auto single = SubsetBasis::full(n);
  const auto dim = static_cast<Eigen::Index>(single.size());

  // Single-copy eigenvectors in bit order, with their probabilities.
  Eigen::MatrixXcd v = Eigen::MatrixXcd::Zero(dim, dim);
  Eigen::VectorXd p(dim);
  Eigen::Index col = 0;
  for (const auto& s : eigs.sectors()) {
    for (Eigen::Index r = 0; r < s.energies.size(); ++r, ++col) {
      v.col(col) = embed_state(s.vectors.col(r), s.basis, single);
      p[col] = w.probability(s.basis.n_electrons(), static_cast<int>(r));
    }
  }
  Eigen::MatrixXcd prod(dim * dim, dim * dim);
  Eigen::VectorXd pp(dim * dim);
  for (Eigen::Index m2 = 0; m2 < dim; ++m2) {
    for (Eigen::Index m1 = 0; m1 < dim; ++m1) {
      pp[m1 + dim * m2] = p[m1] * p[m2];
      for (Eigen::Index b2 = 0; b2 < dim; ++b2) {
        for (Eigen::Index b1 = 0; b1 < dim; ++b1) {
          prod(b1 + dim * b2, m1 + dim * m2) = v(b1, m1) * v(b2, m2);
        }
      }
    }
  }
  const auto space = SubsetBasis::full(2 * n);
  const Eigen::MatrixXcd o = Eigen::MatrixXcd(doubled_witness(n, a, space));
  const Eigen::MatrixXcd oe = prod.adjoint() * o * prod;

  double mean = 0.0;
  for (Eigen::Index i = 0; i < oe.rows(); ++i) mean += pp[i] * oe(i, i).real();
  if (std::abs(mean) > 1e-12) {
    throw std::logic_error("qfi_thermal_lehmann_oracle: <O> does not vanish");
  }
  double f = 0.0;
  for (Eigen::Index i = 0; i < oe.rows(); ++i) {
    for (Eigen::Index j = 0; j < oe.cols(); ++j) {
      const double s = pp[i] + pp[j];
      if (s < 1e-300) continue;
      const double d = pp[i] - pp[j];
      f += 2.0 * d * d / s * std::norm(oe(i, j));
    }
  }
  return f;
}

double qfi_thermal_lehmann_oracle(const EigenSystem& eigs, const WitnessVector& a,
                                  double temperature, double mu) {
  return qfi_thermal_lehmann_oracle(eigs, thermal_weights(eigs, temperature, mu), a);
}

double qfi_naive_single_fermion_bits(const Eigen::VectorXcd& psi_bits, int n_sites) {
  const auto space = SubsetBasis::full(n_sites);
  std::vector<OperatorTerm> terms;
  for (int j = 1; j <= n_sites; ++j) {
    terms.push_back({cplx{1.0}, {cdag(j)}});
    terms.push_back({cplx{1.0}, {c(j)}});
  }
  const SparseMatrixC o = matrix_of_operator(terms, space);
  const Eigen::VectorXcd ov = o * psi_bits;
  const double mean = psi_bits.dot(ov).real();
  return 4.0 * (ov.squaredNorm() - mean * mean);
}

}  // namespace greenqfi
