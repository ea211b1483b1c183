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

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "superpose/basis.hpp"

namespace superpose {

/// Unit vector in the computational frame.
class PureState {
 public:
  explicit PureState(CVector amp) : amp_(std::move(amp)) {
    if (amp_.empty()) {
      throw Error(ErrorKind::DimensionMismatch, "empty state vector");
    }
    for (const Complex& z : amp_) {
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw Error(ErrorKind::NonFinite, "state amplitude is NaN or Inf");
      }
    }
    const double len = norm(amp_);
    if (std::abs(len - 1.0) > 1e-8) {
      throw Error(ErrorKind::NotNormalized, "state has norm " + std::to_string(len));
    }
    if (std::abs(len - 1.0) > 1e-15) {
      for (Complex& z : amp_) z /= len;
    }
  }

  /// Rescales any nonzero vector to unit norm.
  static PureState normalized(CVector v) {
    const double len = norm(v);
    if (!(len > 0.0)) {
      throw Error(ErrorKind::NotNormalized, "cannot normalize the zero vector");
    }
    for (Complex& z : v) z /= len;
    return PureState(std::move(v));
  }

  /// The state sum_i x_i |c_i>, renormalized.
  static PureState from_free_coefficients(const FreeBasis& basis,
                                          std::span<const Complex> x) {
    return normalized(basis.vectors() * x);
  }

  std::size_t dim() const noexcept { return amp_.size(); }
  const CVector& amp() const noexcept { return amp_; }
  Complex operator[](std::size_t i) const { return amp_[i]; }

  CMatrix projector() const { return outer(amp_, amp_); }

 private:
  CVector amp_;
};

/// Hermitian, positive semidefinite, unit-trace matrix.
class DensityMatrix {
 public:
  explicit DensityMatrix(const CMatrix& mat) {
    if (!mat.square()) {
      throw Error(ErrorKind::DimensionMismatch, "density matrix must be square");
    }
    if (!is_hermitian(mat, 1e-10)) {
      throw Error(ErrorKind::InvalidState, "density matrix is not Hermitian");
    }
    mat_ = hermitian_part(mat);
    const double tr = mat_.trace().real();
    if (std::abs(tr - 1.0) > 1e-9) {
      throw Error(ErrorKind::InvalidState, "trace invariant violated: trace " +
                                               std::to_string(tr));
    }
    if (!psd_check(mat_, 1e-9)) {
      throw Error(ErrorKind::InvalidState, "density matrix is not positive semidefinite");
    }
  }

  DensityMatrix(const PureState& psi) : DensityMatrix(psi.projector()) {}

  std::size_t dim() const noexcept { return mat_.rows(); }
  const CMatrix& mat() const noexcept { return mat_; }

 private:
  CMatrix mat_;
};

/// rho = sum_ij coeffs(i, j) |c_i><c_j|.
struct FreeExpansion {
  CMatrix coeffs;
};

inline FreeExpansion free_expansion(const DensityMatrix& rho, const FreeBasis& basis) {
  if (rho.dim() != basis.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "state and basis dimensions differ");
  }
  const CMatrix& w = basis.reciprocal();
  return {w.adjoint() * rho.mat() * w};
}

inline CVector free_coefficients(const PureState& psi, const FreeBasis& basis) {
  if (psi.dim() != basis.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "state and basis dimensions differ");
  }
  return basis.coefficients(psi.amp());
}

/// Indices of the free-frame coefficients above tol * (largest modulus).
inline std::vector<std::size_t> superposition_support(const PureState& psi,
                                                      const FreeBasis& basis,
                                                      double tol = 1e-9) {
  const CVector x = free_coefficients(psi, basis);
  double top = 0.0;
  for (const Complex& z : x) top = std::max(top, std::abs(z));
  std::vector<std::size_t> support;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (std::abs(x[i]) > tol * top) support.push_back(i);
  return support;
}

inline std::size_t superposition_rank(const PureState& psi, const FreeBasis& basis,
                                      double tol = 1e-9) {
  return superposition_support(psi, basis, tol).size();
}

inline bool is_free(const DensityMatrix& rho, const FreeBasis& basis, double tol = 1e-9) {
  const CMatrix c = free_expansion(rho, basis).coeffs;
  for (std::size_t i = 0; i < c.rows(); ++i) {
    for (std::size_t j = 0; j < c.cols(); ++j) {
      if (i == j) {
        if (c(i, i).real() < -tol || std::abs(c(i, i).imag()) > tol) return false;
      } else if (std::abs(c(i, j)) > tol) {
        return false;
      }
    }
  }
  return true;
}

/// Mixture sum_i p_i |c_i><c_i|.
inline DensityMatrix free_mixture(const FreeBasis& basis, std::span<const double> weights) {
  if (weights.size() != basis.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "one weight per basis vector");
  }
  const CMatrix& v = basis.vectors();
  return DensityMatrix(v * CMatrix::diagonal(weights) * v.adjoint());
}

inline std::vector<double> singular_values_bipartite(std::span<const Complex> amp,
                                                     std::size_t dim_a, std::size_t dim_b) {
  if (amp.size() != dim_a * dim_b) {
    throw Error(ErrorKind::DimensionMismatch, "amplitude length is not dimA * dimB");
  }
  CMatrix m(dim_a, dim_b, CVector(amp.begin(), amp.end()));
  return singular_values(m);
}

inline std::size_t schmidt_rank(const PureState& psi, std::size_t dim_a, std::size_t dim_b,
                                double tol = 1e-9) {
  const auto s = singular_values_bipartite(psi.amp(), dim_a, dim_b);
  return static_cast<std::size_t>(
      std::count_if(s.begin(), s.end(), [&](double x) { return x > tol; }));
}

}  // namespace superpose
