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
#include <vector>

#include "superpose/state.hpp"

namespace superpose {

/// Label copier S|c_i> = |s_i> (x) |s_i> followed by the local filter
/// sqrt(p) V_s^-1 on each side.
struct ConversionMap {
  CMatrix locals;    // columns |s_i>
  CMatrix splitter;  // d^2 x d
  CMatrix filter;    // sqrt(p) V_s^-1, one side
  double p = 1.0;    // per-side filter probability sigma_min(V_s)^2

  double success_probability() const { return p * p; }
  std::size_t dim() const { return locals.rows(); }
};

inline ConversionMap faithful_conversion(const FreeBasis& basis,
                                         std::optional<CMatrix> locals = std::nullopt) {
  const std::size_t d = basis.dim();
  ConversionMap map;
  map.locals = locals.value_or(CMatrix::identity(d));
  if (map.locals.rows() != d || map.locals.cols() != d) {
    throw Error(ErrorKind::DimensionMismatch, "need d local vectors of dimension d");
  }
  for (std::size_t i = 0; i < d; ++i) {
    if (std::abs(norm(map.locals.column(i)) - 1.0) > 1e-8) {
      throw Error(ErrorKind::NotNormalized, "local vectors must have unit norm");
    }
  }
  const double sigma_min = singular_values(map.locals).back();
  if (sigma_min <= 1e-8) {
    throw Error(ErrorKind::LinearlyDependent, "local vectors are linearly dependent");
  }
  map.p = sigma_min * sigma_min;
  map.filter = std::sqrt(map.p) * inverse(map.locals);
  map.splitter = CMatrix(d * d, d);
  for (std::size_t i = 0; i < d; ++i) {
    const CVector s = map.locals.column(i);
    map.splitter += outer(kron(s, s), basis.reciprocal_vector(i));
  }
  return map;
}

/// Unnormalized output (F (x) F) S |psi>; equals p sum_i psi_i |i>|i>.
inline CVector convert(const ConversionMap& map, const PureState& psi) {
  return kron(map.filter, map.filter) * (map.splitter * psi.amp());
}

struct FaithfulnessReport {
  std::size_t schmidt_rank = 0;
  std::size_t classical_rank = 0;
  double probability = 0.0;  // filter success probability p^2 of the map
};

inline FaithfulnessReport faithfulness_report(const ConversionMap& map, const PureState& psi,
                                              const FreeBasis& basis, double tol = 1e-9) {
  const CVector out = convert(map, psi);
  FaithfulnessReport r;
  r.classical_rank = superposition_rank(psi, basis, tol);
  r.probability = map.success_probability();
  const auto s = singular_values_bipartite(out, map.dim(), map.dim());
  for (double x : s)
    if (x > tol * s.front()) ++r.schmidt_rank;
  return r;
}

inline bool verify_faithful(const ConversionMap& map, const PureState& psi,
                            const FreeBasis& basis, double tol = 1e-9) {
  const auto r = faithfulness_report(map, psi, basis, tol);
  return r.schmidt_rank == r.classical_rank;
}

/// Image of v under the copier |c_i> -> |i>|i> extended linearly over the
/// basis. An extra vector appended to the basis as a further "free" state is
/// sent to an entangled state, so the copier cannot be faithful on a linearly
/// dependent set.
inline CVector linear_copier_image(const FreeBasis& basis, std::span<const Complex> v) {
  const std::size_t d = basis.dim();
  const CVector x = basis.coefficients(v);
  CVector out(d * d, 0.0);
  for (std::size_t i = 0; i < d; ++i) out[i * d + i] = x[i];
  return out;
}

}  // namespace superpose
