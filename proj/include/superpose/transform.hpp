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
#include <numbers>
#include <utility>
#include <vector>

#include "superpose/kraus.hpp"
#include "superpose/sdp.hpp"

namespace superpose {

/// Free operators F_n mapping psi to phi, one per bijection of supports.
struct TransformerSet {
  std::vector<std::size_t> source_support;  // R, ascending
  std::vector<std::size_t> target_support;  // S, ascending
  std::vector<std::vector<std::size_t>> assignments;  // image of R[k] under f_n
  std::vector<CMatrix> operators;
};

inline constexpr std::size_t kMaxTransformDim = 5;

inline TransformerSet enumerate_transformers(const PureState& psi, const PureState& phi,
                                             const FreeBasis& basis, double tol = 1e-9) {
  if (basis.dim() > kMaxTransformDim) {
    throw Error(ErrorKind::InvalidArgument,
                "transformer enumeration is limited to d <= 5");
  }
  TransformerSet set;
  set.source_support = superposition_support(psi, basis, tol);
  set.target_support = superposition_support(phi, basis, tol);
  if (set.source_support.size() != set.target_support.size()) {
    throw Error(ErrorKind::RankMismatch,
                "superposition ranks differ (" + std::to_string(set.source_support.size()) +
                    " vs " + std::to_string(set.target_support.size()) + ")");
  }
  const CVector x = free_coefficients(psi, basis);
  const CVector y = free_coefficients(phi, basis);
  std::vector<std::size_t> perm = set.target_support;
  do {
    CMatrix f(basis.dim(), basis.dim());
    for (std::size_t k = 0; k < perm.size(); ++k) {
      const std::size_t j = set.source_support[k];
      f += (y[perm[k]] / x[j]) * outer(basis.vector(perm[k]), basis.reciprocal_vector(j));
    }
    set.assignments.push_back(perm);
    set.operators.push_back(std::move(f));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return set;
}

struct ConversionResult {
  SdpSolution solution;
  double probability = 0.0;         // primal value clamped to [0, 1]
  std::vector<CMatrix> kraus;       // sqrt(p_n) F_n
  std::vector<CMatrix> completion;  // attached when the conversion is deterministic
};

inline LmiProblem conversion_problem(const TransformerSet& set) {
  LmiProblem problem;
  for (const CMatrix& f : set.operators) problem.a.push_back(hermitian_part(f.adjoint() * f));
  return problem;
}

inline ConversionResult max_conversion_prob(const PureState& psi, const PureState& phi,
                                            const FreeBasis& basis, double gap_tol = 1e-7) {
  const TransformerSet set = enumerate_transformers(psi, phi, basis);
  ConversionResult out;
  out.solution = solve_lmi(conversion_problem(set), gap_tol);
  out.probability = std::clamp(out.solution.primal, 0.0, 1.0);
  for (std::size_t n = 0; n < set.operators.size(); ++n) {
    out.kraus.push_back(std::sqrt(std::max(0.0, out.solution.p[n])) * set.operators[n]);
  }
  if (out.probability >= 1.0 - 1e-7) out.completion = complete_free(out.kraus, basis);
  return out;
}

/// Coefficients of qubit Kraus operators grouped by free-frame type:
/// type1 (alpha, beta), type2 (gamma, delta), type3 (mu, nu), type4 (epsilon, xi).
struct QubitKrausGroups {
  std::vector<std::pair<Complex, Complex>> type1;
  std::vector<std::pair<Complex, Complex>> type2;
  std::vector<std::pair<Complex, Complex>> type3;
  std::vector<std::pair<Complex, Complex>> type4;
};

struct TpResiduals {
  double first = 0.0;
  double second = 0.0;
  Complex cross = 0.0;
};

/// Left-minus-right residuals of the three trace-preservation conditions for
/// qubit free Kraus operators at overlap a.
inline TpResiduals qubit_tp_residuals(const QubitKrausGroups& g, double a) {
  TpResiduals r{-1.0, -1.0, 0.0};
  Complex diag_sum = 0.0;
  for (const auto& [alpha, beta] : g.type1) {
    r.first += std::norm(alpha);
    r.second += std::norm(beta);
    r.cross += std::conj(alpha) * beta;
  }
  for (const auto& [gamma, delta] : g.type2) {
    r.first += std::norm(gamma);
    r.second += std::norm(delta);
    diag_sum += std::conj(gamma) * delta;
  }
  for (const auto& [mu, nu] : g.type3) {
    r.first += std::norm(mu);
    r.second += std::norm(nu);
    r.cross += std::conj(mu) * nu;
  }
  for (const auto& [epsilon, xi] : g.type4) {
    r.first += std::norm(epsilon);
    r.second += std::norm(xi);
    diag_sum += std::conj(epsilon) * xi;
  }
  r.cross += a * (diag_sum - 1.0);
  return r;
}

/// The four d = 3 candidates for a maximally superposed state in the
/// half-overlap basis.
inline std::vector<PureState> candidate_states_d3() {
  const FreeBasis basis = half_overlap_basis_3d();
  const double n = std::sqrt(2.0 / 3.0);
  const double third = 2.0 * std::numbers::pi / 3.0;
  const double phases[4][2] = {
      {2.0 * third, third}, {third, 2.0 * third}, {third, -third}, {-third, third}};
  std::vector<PureState> out;
  for (const auto& ph : phases) {
    const CVector x{n * std::polar(1.0, ph[0]), n * std::polar(1.0, ph[1]), n};
    out.emplace_back(basis.vectors() * x);
  }
  return out;
}

/// |1> in the computational frame: (-|c_1> + |c_2> + |c_3>)/sqrt(2).
inline PureState d3_target_state() { return PureState(CVector{1.0, 0.0, 0.0}); }

}  // namespace superpose
