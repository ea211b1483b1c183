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
#include <optional>
#include <span>
#include <vector>

#include "superpose/state.hpp"

namespace superpose {

/// K = sum_k coeffs[k] |c_{index_fn[k]}><c_k^perp|.
struct FreeKrausForm {
  std::vector<Complex> coeffs;
  std::vector<std::size_t> index_fn;

  CMatrix reconstruct(const FreeBasis& basis) const {
    const std::size_t d = basis.dim();
    CMatrix k(d, d);
    for (std::size_t col = 0; col < coeffs.size(); ++col) {
      if (coeffs[col] == 0.0) continue;
      k += coeffs[col] * outer(basis.vector(index_fn[col]), basis.reciprocal_vector(col));
    }
    return k;
  }
};

/// Trace non-increasing set of Kraus operators.
class Channel {
 public:
  explicit Channel(std::vector<CMatrix> kraus) : kraus_(std::move(kraus)) {
    if (kraus_.empty()) {
      throw Error(ErrorKind::InvalidArgument, "channel needs at least one operator");
    }
    const std::size_t n = kraus_.front().cols();
    in_dim_ = n;
    out_dim_ = kraus_.front().rows();
    CMatrix sum(n, n);
    for (const CMatrix& k : kraus_) {
      if (k.cols() != n || k.rows() != out_dim_) {
        throw Error(ErrorKind::DimensionMismatch, "Kraus operators differ in shape");
      }
      sum += k.adjoint() * k;
    }
    defect_ = hermitian_part(CMatrix::identity(n) - sum);
    if (eigenvalues(defect_).front() < -1e-9) {
      throw Error(ErrorKind::NotSubnormalized, "sum of K^dag K exceeds the identity");
    }
  }

  const std::vector<CMatrix>& kraus() const noexcept { return kraus_; }
  const CMatrix& defect() const noexcept { return defect_; }
  std::size_t input_dim() const noexcept { return in_dim_; }
  std::size_t output_dim() const noexcept { return out_dim_; }

  bool trace_preserving(double tol = 1e-9) const {
    return spectral_norm(defect_) <= tol;
  }

  CMatrix apply(const CMatrix& rho) const {
    CMatrix out(out_dim_, out_dim_);
    for (const CMatrix& k : kraus_) out += k * rho * k.adjoint();
    return out;
  }

 private:
  std::vector<CMatrix> kraus_;
  CMatrix defect_;
  std::size_t in_dim_ = 0;
  std::size_t out_dim_ = 0;
};

/// Free-frame matrix M = W^dag K V; column k holds the coefficients of K|c_k>.
inline CMatrix free_frame_matrix(const CMatrix& k, const FreeBasis& basis) {
  if (k.rows() != basis.dim() || k.cols() != basis.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "operator and basis dimensions differ");
  }
  return basis.reciprocal().adjoint() * k * basis.vectors();
}

inline std::optional<FreeKrausForm> is_free_kraus(const CMatrix& k, const FreeBasis& basis,
                                                  double tol = 1e-9) {
  const CMatrix m = free_frame_matrix(k, basis);
  const std::size_t d = basis.dim();
  FreeKrausForm form{std::vector<Complex>(d, 0.0), std::vector<std::size_t>(d)};
  for (std::size_t col = 0; col < d; ++col) {
    std::optional<std::size_t> hit;
    for (std::size_t row = 0; row < d; ++row) {
      if (std::abs(m(row, col)) <= tol) continue;
      if (hit) return std::nullopt;
      hit = row;
    }
    form.index_fn[col] = hit.value_or(col);
    if (hit) form.coeffs[col] = m(*hit, col);
  }
  return form;
}

inline DensityMatrix apply_channel(const Channel& ch, const DensityMatrix& rho) {
  if (!ch.trace_preserving()) {
    throw Error(ErrorKind::NotTracePreserving, "apply_channel needs a trace-preserving channel");
  }
  if (ch.input_dim() != rho.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "channel and state dimensions differ");
  }
  CMatrix out = ch.apply(rho.mat());
  const double tr = out.trace().real();
  return DensityMatrix(out / tr);
}

struct Outcome {
  std::size_t index;  // position of the Kraus operator
  double probability;
  DensityMatrix state;
};

inline std::vector<Outcome> measure_selective(const Channel& ch, const DensityMatrix& rho) {
  if (ch.input_dim() != rho.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "channel and state dimensions differ");
  }
  std::vector<Outcome> outcomes;
  for (std::size_t n = 0; n < ch.kraus().size(); ++n) {
    const CMatrix& k = ch.kraus()[n];
    CMatrix out = k * rho.mat() * k.adjoint();
    const double p = out.trace().real();
    if (p < 1e-12) continue;
    outcomes.push_back({n, p, DensityMatrix(out / p)});
  }
  return outcomes;
}

/// Free operators F_n = sqrt(p_n) |c_1><n| with 1 - sum K^dag K = sum_n p_n |n><n|.
inline std::vector<CMatrix> complete_free(std::span<const CMatrix> partial,
                                          const FreeBasis& basis) {
  const std::size_t d = basis.dim();
  CMatrix sum(d, d);
  for (const CMatrix& k : partial) {
    if (k.cols() != d) {
      throw Error(ErrorKind::DimensionMismatch, "operator and basis dimensions differ");
    }
    sum += k.adjoint() * k;
  }
  const EigResult residual = herm_eig(hermitian_part(CMatrix::identity(d) - sum));
  if (residual.values.front() < -1e-9) {
    throw Error(ErrorKind::NotSubnormalized,
                "1 - sum K^dag K has eigenvalue " + std::to_string(residual.values.front()));
  }
  const CVector c1 = basis.vector(0);
  std::vector<CMatrix> completion;
  for (std::size_t n = 0; n < d; ++n) {
    const double p = residual.values[n];
    if (p < 1e-12) continue;
    completion.push_back(std::sqrt(p) * outer(c1, residual.vectors.column(n)));
  }
  return completion;
}

inline bool is_mfo(const Channel& ch, const FreeBasis& basis, double tol = 1e-9) {
  if (!ch.trace_preserving()) {
    throw Error(ErrorKind::NotTracePreserving, "is_mfo needs a trace-preserving channel");
  }
  for (std::size_t i = 0; i < basis.dim(); ++i) {
    const DensityMatrix out = apply_channel(ch, DensityMatrix(PureState(basis.vector(i))));
    if (!is_free(out, basis, tol)) return false;
  }
  return true;
}

/// Effective operators on A of rho -> tr_B L (rho (x) sigma_B) L^dag for a free
/// L on A (x) B and a free ancilla state sigma_B.
inline std::vector<CMatrix> reduce_ancilla(const CMatrix& l, const DensityMatrix& sigma_b,
                                           const FreeBasis& basis_a,
                                           const FreeBasis& basis_b, double tol = 1e-9) {
  const std::size_t da = basis_a.dim();
  const std::size_t db = basis_b.dim();
  if (l.rows() != da * db || l.cols() != da * db || sigma_b.dim() != db) {
    throw Error(ErrorKind::DimensionMismatch, "ancilla reduction shapes");
  }
  if (!is_free_kraus(l, product_basis(basis_a, basis_b), tol)) {
    throw Error(ErrorKind::NotFree, "L is not free on the product basis");
  }
  if (!is_free(sigma_b, basis_b, tol)) {
    throw Error(ErrorKind::NotFree, "ancilla state is not free");
  }
  const CMatrix weights = free_expansion(sigma_b, basis_b).coeffs;
  std::vector<CMatrix> out;
  for (std::size_t j = 0; j < db; ++j) {
    const double w = weights(j, j).real();
    if (w <= 1e-15) continue;
    const CVector cj = basis_b.vector(j);
    // L (1 (x) |c_j>) as a (da*db) x da block.
    CMatrix lj(da * db, da);
    for (std::size_t r = 0; r < da * db; ++r)
      for (std::size_t i = 0; i < da; ++i)
        for (std::size_t k = 0; k < db; ++k) lj(r, i) += l(r, i * db + k) * cj[k];
    for (std::size_t x = 0; x < db; ++x) {
      CMatrix f(da, da);
      for (std::size_t r = 0; r < da; ++r)
        for (std::size_t i = 0; i < da; ++i) f(r, i) = std::sqrt(w) * lj(r * db + x, i);
      if (max_abs(f) == 0.0) continue;
      out.push_back(std::move(f));
    }
  }
  return out;
}

}  // namespace superpose
