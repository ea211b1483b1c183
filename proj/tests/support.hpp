// Copyright 2026 The superpose Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Random instance generators and Eigen-backed reference computations shared
// by the test binaries. Nothing here calls into the solver paths under test.

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <vector>

#include "superpose/superpose.hpp"

namespace superpose::testing {

using Rng = std::mt19937_64;

inline Complex gauss(Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  const double re = n(rng);
  return {re, n(rng)};
}

inline double uniform(Rng& rng, double lo = 0.0, double hi = 1.0) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline CVector random_vector(std::size_t n, Rng& rng) {
  CVector v(n);
  for (auto& z : v) z = gauss(rng);
  return v;
}

inline Eigen::MatrixXcd to_eigen(const CMatrix& m) {
  Eigen::MatrixXcd e(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) e(i, j) = m(i, j);
  return e;
}

inline CMatrix from_eigen(const Eigen::MatrixXcd& e) {
  CMatrix m(e.rows(), e.cols());
  for (Eigen::Index i = 0; i < e.rows(); ++i)
    for (Eigen::Index j = 0; j < e.cols(); ++j) m(i, j) = e(i, j);
  return m;
}

inline CMatrix random_matrix(std::size_t r, std::size_t c, Rng& rng) {
  CMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = gauss(rng);
  return m;
}

inline CMatrix random_hermitian(std::size_t n, Rng& rng) {
  const CMatrix m = random_matrix(n, n, rng);
  return (m + m.adjoint()) * 0.5;
}

/// Haar unitary via Eigen's Householder QR with the phase fix.
inline CMatrix random_unitary(std::size_t n, Rng& rng) {
  const Eigen::MatrixXcd z = to_eigen(random_matrix(n, n, rng));
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < q.cols(); ++j) q.col(j) *= r(j, j) / std::abs(r(j, j));
  return from_eigen(q);
}

/// Unit-norm random columns, resampled until reasonably well conditioned.
inline FreeBasis random_basis(std::size_t d, Rng& rng, double min_sigma = 0.05) {
  for (;;) {
    std::vector<CVector> cols;
    for (std::size_t i = 0; i < d; ++i) {
      CVector v = random_vector(d, rng);
      const double n = norm(v);
      for (auto& z : v) z /= n;
      cols.push_back(std::move(v));
    }
    const Eigen::MatrixXcd v = to_eigen(CMatrix::from_columns(cols));
    const double s = Eigen::JacobiSVD<Eigen::MatrixXcd>(v).singularValues().minCoeff();
    if (s > min_sigma) return FreeBasis(cols);
  }
}

inline PureState random_pure(std::size_t d, Rng& rng) {
  return PureState::normalized(random_vector(d, rng));
}

inline DensityMatrix random_density(std::size_t d, Rng& rng, std::size_t rank = 0) {
  if (rank == 0) rank = d;
  const CMatrix g = random_matrix(d, rank, rng);
  CMatrix m = g * g.adjoint();
  return DensityMatrix(hermitian_part(m / m.trace()));
}

inline std::vector<double> random_simplex(std::size_t n, Rng& rng) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> w(n);
  double s = 0.0;
  for (auto& x : w) s += (x = e(rng));
  for (auto& x : w) x /= s;
  return w;
}

/// Pure state with free coefficients supported on the first r labels.
inline PureState random_pure_of_rank(const FreeBasis& basis, std::size_t r, Rng& rng) {
  CVector x(basis.dim(), 0.0);
  for (std::size_t i = 0; i < r; ++i) x[i] = gauss(rng);
  return PureState::normalized(basis.vectors() * x);
}

/// Direct assembly sum_k c_k |c_{f(k)}><c_k^perp| from explicit column data.
inline CMatrix free_operator(const FreeBasis& basis, const std::vector<Complex>& c,
                             const std::vector<std::size_t>& f) {
  const std::size_t d = basis.dim();
  const Eigen::MatrixXcd v = to_eigen(basis.vectors());
  const Eigen::MatrixXcd w = v.adjoint().inverse();
  Eigen::MatrixXcd k = Eigen::MatrixXcd::Zero(d, d);
  for (std::size_t col = 0; col < d; ++col) k += c[col] * v.col(f[col]) * w.col(col).adjoint();
  return from_eigen(k);
}

inline CMatrix random_free_operator(const FreeBasis& basis, Rng& rng) {
  const std::size_t d = basis.dim();
  std::vector<Complex> c(d);
  std::vector<std::size_t> f(d);
  std::uniform_int_distribution<std::size_t> pick(0, d - 1);
  for (std::size_t k = 0; k < d; ++k) {
    c[k] = gauss(rng);
    f[k] = pick(rng);
  }
  return free_operator(basis, c, f);
}

/// Random trace-preserving channel of free operators, completed with
/// complete_free after rescaling into the subnormalized region.
inline Channel random_free_channel(const FreeBasis& basis, Rng& rng, std::size_t n_ops = 3) {
  std::vector<CMatrix> ops;
  CMatrix sum(basis.dim(), basis.dim());
  for (std::size_t n = 0; n < n_ops; ++n) {
    ops.push_back(random_free_operator(basis, rng));
    sum += ops.back().adjoint() * ops.back();
  }
  const double top = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(to_eigen(sum))
                         .eigenvalues()
                         .maxCoeff();
  const double scale = std::sqrt(uniform(rng, 0.3, 1.0) / top);
  for (auto& k : ops) k = k * scale;
  for (auto& f : complete_free(ops, basis)) ops.push_back(std::move(f));
  return Channel(ops);
}

inline Eigen::VectorXd eigen_eigenvalues(const CMatrix& h) {
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(to_eigen(hermitian_part(h)))
      .eigenvalues();
}

inline double eigen_min_eig(const CMatrix& h) { return eigen_eigenvalues(h).minCoeff(); }

/// Relative entropy S(rho||sigma) in nats via Eigen eigendecompositions.
inline double eigen_relative_entropy(const CMatrix& rho, const CMatrix& sigma) {
  auto logm = [](const CMatrix& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(to_eigen(hermitian_part(m)));
    Eigen::VectorXd l = es.eigenvalues();
    for (Eigen::Index i = 0; i < l.size(); ++i) l(i) = l(i) > 1e-300 ? std::log(l(i)) : 0.0;
    return Eigen::MatrixXcd(es.eigenvectors() * l.asDiagonal() * es.eigenvectors().adjoint());
  };
  const Eigen::MatrixXcd r = to_eigen(rho);
  return (r * (logm(rho) - logm(sigma))).trace().real();
}

}  // namespace superpose::testing
