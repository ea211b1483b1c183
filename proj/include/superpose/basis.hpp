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

#include <cmath>
#include <cstdio>
#include <numbers>
#include <span>
#include <vector>

#include "superpose/linalg.hpp"

namespace superpose {

/// A normalized, linearly independent (not necessarily orthogonal) basis
/// together with its reciprocal frame W = (V^dag)^-1.
class FreeBasis {
 public:
  explicit FreeBasis(std::span<const CVector> columns) {
    const std::size_t d = columns.size();
    if (d < 2) {
      throw Error(ErrorKind::DimensionMismatch, "a free basis needs d >= 2 vectors");
    }
    std::vector<CVector> normalized(columns.begin(), columns.end());
    for (std::size_t i = 0; i < d; ++i) {
      if (normalized[i].size() != d) {
        throw Error(ErrorKind::DimensionMismatch,
                    "column " + std::to_string(i) + " does not have dimension d");
      }
      const double len = norm(normalized[i]);
      if (std::abs(len - 1.0) > 1e-8) {
        throw Error(ErrorKind::NotNormalized,
                    "column " + std::to_string(i) + " has norm " + std::to_string(len));
      }
      if (std::abs(len - 1.0) > 1e-15) {
        for (Complex& z : normalized[i]) z /= len;
      }
    }
    v_ = CMatrix::from_columns(normalized);
    const auto sigma = singular_values(v_);
    sigma_min_ = sigma.back();
    if (sigma_min_ <= 1e-8) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.3g", sigma_min_);
      throw Error(ErrorKind::LinearlyDependent,
                  std::string("smallest singular value ") + buf + " <= 1e-8");
    }
    w_ = inverse(v_.adjoint());
    g_ = hermitian_part(v_.adjoint() * v_);
    for (std::size_t i = 0; i < d; ++i) g_(i, i) = 1.0;
  }

  explicit FreeBasis(const CMatrix& v) : FreeBasis(columns_of(v)) {}

  std::size_t dim() const noexcept { return v_.rows(); }
  const CMatrix& vectors() const noexcept { return v_; }
  const CMatrix& gram() const noexcept { return g_; }
  const CMatrix& reciprocal() const noexcept { return w_; }
  double sigma_min() const noexcept { return sigma_min_; }

  CVector vector(std::size_t i) const { return v_.column(i); }
  CVector reciprocal_vector(std::size_t i) const { return w_.column(i); }

  /// Free-frame coefficients x with v = sum_i x_i |c_i>.
  CVector coefficients(std::span<const Complex> v) const {
    return w_.adjoint() * v;
  }

 private:
  static std::vector<CVector> columns_of(const CMatrix& v) {
    std::vector<CVector> cols;
    for (std::size_t j = 0; j < v.cols(); ++j) cols.push_back(v.column(j));
    return cols;
  }

  CMatrix v_;
  CMatrix g_;
  CMatrix w_;
  double sigma_min_ = 0.0;
};

inline const CMatrix& gram(const FreeBasis& basis) { return basis.gram(); }

/// Largest p with p (V^-1)^dag V^-1 <= 1, i.e. sigma_min(V)^2.
inline double filter_probability(const FreeBasis& basis) {
  return basis.sigma_min() * basis.sigma_min();
}

inline FreeBasis orthonormal_basis(std::size_t d) {
  return FreeBasis(CMatrix::identity(d));
}

/// Qubit basis |c1> = |0>, |c2> = sin(t)|0> + cos(t)|1>.
inline FreeBasis tilted_qubit_basis(double theta) {
  return FreeBasis(CMatrix{{1.0, std::sin(theta)}, {0.0, std::cos(theta)}});
}

/// Qubit basis with real overlap <c1|c2> = a placed symmetrically about the
/// x axis of the Bloch sphere: Bloch vectors (a, 0, +-sqrt(1 - a^2)).
inline FreeBasis symmetric_qubit_basis(double a) {
  if (!(a >= 0.0 && a < 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "overlap must lie in [0, 1)");
  }
  const double s = std::sqrt(1.0 + a);
  const double t = std::sqrt(1.0 - a);
  return FreeBasis(CMatrix{{0.5 * (s + t), 0.5 * (s - t)},
                           {0.5 * (s - t), 0.5 * (s + t)}});
}

/// Three-dimensional basis with all pairwise overlaps 1/2.
inline FreeBasis half_overlap_basis_3d() {
  const double r = 1.0 / std::numbers::sqrt2;
  return FreeBasis(CMatrix{{0.0, r, r}, {r, 0.0, r}, {r, r, 0.0}});
}

/// Basis {|c_i> (x) |c_j>} in lexicographic order (i major).
inline FreeBasis product_basis(const FreeBasis& a, const FreeBasis& b) {
  return FreeBasis(kron(a.vectors(), b.vectors()));
}

}  // namespace superpose
