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
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string_view>
#include <utility>
#include <vector>

#include "superpose/sdp.hpp"
#include "superpose/state.hpp"

namespace superpose {

inline constexpr std::string_view kLogConvention = "natural-log";

struct MeasureCertificate {
  // Relative entropy: simplex weights q of the closest free state.
  // Robustness: the optimal x with sum_i x_i |c_i><c_i| >= rho.
  std::vector<double> weights;
  std::optional<CMatrix> free_state;  // closest free state, or delta for robustness
  std::optional<CMatrix> tau;
  double s = 0.0;
  std::vector<std::pair<double, CVector>> decomposition;
};

struct MeasureReport {
  double value = 0.0;
  std::string_view convention = kLogConvention;
  bool upper_bound = false;
  int iterations = 0;
  MeasureCertificate certificate;
};

inline MeasureReport l1_measure(const DensityMatrix& rho, const FreeBasis& basis) {
  const CMatrix c = free_expansion(rho, basis).coeffs;
  MeasureReport report;
  for (std::size_t i = 0; i < c.rows(); ++i)
    for (std::size_t j = 0; j < c.cols(); ++j)
      if (i != j) report.value += std::abs(c(i, j));
  return report;
}

namespace detail {

// f(q) = tr(rho log rho) - tr(rho log sigma(q)) with sigma(q) = V diag(q) V^dag.
class RelativeEntropyObjective {
 public:
  RelativeEntropyObjective(const DensityMatrix& rho, const FreeBasis& basis)
      : rho_(rho.mat()), v_(basis.vectors()) {
    for (double lambda : eigenvalues(rho_))
      if (lambda > 1e-300) entropy_term_ += lambda * std::log(lambda);
  }

  struct Eval {
    bool finite = false;
    double value = std::numeric_limits<double>::infinity();
    std::vector<double> grad;
  };

  Eval evaluate(const std::vector<double>& q, bool want_grad = true) const {
    const std::size_t d = q.size();
    Eval out;
    const CMatrix sigma = hermitian_part(v_ * CMatrix::diagonal(q) * v_.adjoint());
    const EigResult e = herm_eig(sigma);
    const double top = e.values.back();
    const CMatrix& u = e.vectors;
    const CMatrix r = u.adjoint() * rho_ * u;
    // Eigenvalues below the floor form ker(sigma); the divergence is finite
    // only if rho has no weight there, and then the kernel drops out.
    std::vector<bool> live(d);
    for (std::size_t k = 0; k < d; ++k) {
      live[k] = e.values[k] > 1e-13 * top;
      if (!live[k] && r(k, k).real() > 1e-12) return out;
    }
    std::vector<double> logs(d, 0.0);
    for (std::size_t k = 0; k < d; ++k)
      if (live[k]) logs[k] = std::log(e.values[k]);
    double cross = 0.0;
    for (std::size_t k = 0; k < d; ++k) cross += r(k, k).real() * logs[k];
    out.finite = true;
    out.value = entropy_term_ - cross;
    if (!want_grad) return out;

    CMatrix gamma(d, d);
    for (std::size_t k = 0; k < d; ++k) {
      for (std::size_t l = 0; l < d; ++l) {
        if (!live[k] || !live[l]) continue;
        const double lk = e.values[k];
        const double ll = e.values[l];
        gamma(k, l) = std::abs(lk - ll) <= 1e-12 * top ? 2.0 / (lk + ll)
                                                         : (logs[k] - logs[l]) / (lk - ll);
      }
    }
    const CMatrix y = u.adjoint() * v_;  // column i: U^dag |c_i>
    out.grad.assign(d, 0.0);
    for (std::size_t i = 0; i < d; ++i) {
      double s = 0.0;
      for (std::size_t k = 0; k < d; ++k)
        for (std::size_t l = 0; l < d; ++l)
          s += (r(l, k) * gamma(k, l).real() * y(k, i) * std::conj(y(l, i))).real();
      out.grad[i] = -s;
    }
    return out;
  }

 private:
  CMatrix rho_;
  CMatrix v_;
  double entropy_term_ = 0.0;
};

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace detail

/// min over the simplex of S(rho || sum_i q_i |c_i><c_i|), natural log.
/// Away-step Frank-Wolfe with exact line search; stops when the Frank-Wolfe
/// duality gap drops below tol.
inline MeasureReport rel_entropy_measure(const DensityMatrix& rho, const FreeBasis& basis,
                                         double tol = 1e-9, int max_iter = 10000) {
  const std::size_t d = basis.dim();
  MeasureReport report;
  if (is_free(rho, basis)) {
    const CMatrix c = free_expansion(rho, basis).coeffs;
    for (std::size_t i = 0; i < d; ++i) report.certificate.weights.push_back(c(i, i).real());
    report.certificate.free_state = rho.mat();
    return report;
  }
  const detail::RelativeEntropyObjective objective(rho, basis);
  std::vector<double> q(d, 1.0 / static_cast<double>(d));
  auto current = objective.evaluate(q);
  if (!current.finite) {
    throw Error(ErrorKind::NoConvergence, "relative entropy is infinite at the start point");
  }

  auto along = [&](const std::vector<double>& dir, double gamma) {
    std::vector<double> trial(d);
    for (std::size_t i = 0; i < d; ++i) trial[i] = std::max(0.0, q[i] + gamma * dir[i]);
    return trial;
  };

  int iter = 0;
  for (; iter < max_iter; ++iter) {
    const auto& g = current.grad;
    const double gq = detail::dot(g, q);
    std::size_t s = 0;
    std::size_t v = d;
    for (std::size_t i = 0; i < d; ++i) {
      if (g[i] < g[s]) s = i;
      if (q[i] > 0.0 && (v == d || g[i] > g[v])) v = i;
    }
    const double fw_gap = gq - g[s];
    if (fw_gap <= tol) break;
    const double away_gap = g[v] - gq;

    std::vector<double> dir(d);
    double gamma_max = 1.0;
    if (fw_gap >= away_gap || q[v] >= 1.0) {
      for (std::size_t i = 0; i < d; ++i) dir[i] = -q[i];
      dir[s] += 1.0;
    } else {
      for (std::size_t i = 0; i < d; ++i) dir[i] = q[i];
      dir[v] -= 1.0;
      gamma_max = q[v] / (1.0 - q[v]);
    }

    // Exact line search on the convex slice: root of the directional derivative.
    const double slope0 = detail::dot(g, dir);
    double lo = 0.0;
    double hi = gamma_max;
    double slope_lo = slope0;
    auto at_hi = objective.evaluate(along(dir, hi));
    double slope_hi = at_hi.finite ? detail::dot(at_hi.grad, dir)
                                   : std::numeric_limits<double>::infinity();
    double gamma = hi;
    if (!(slope_hi <= 0.0)) {
      for (int ls = 0; ls < 200; ++ls) {
        double mid;
        if (std::isfinite(slope_hi) && slope_hi > 0.0 && ls % 3 != 2) {
          mid = lo + (hi - lo) * (-slope_lo) / (slope_hi - slope_lo);
          if (!(mid > lo && mid < hi)) mid = 0.5 * (lo + hi);
        } else {
          mid = 0.5 * (lo + hi);
        }
        auto at_mid = objective.evaluate(along(dir, mid));
        const double slope_mid = at_mid.finite ? detail::dot(at_mid.grad, dir)
                                               : std::numeric_limits<double>::infinity();
        if (slope_mid > 0.0) {
          hi = mid;
          slope_hi = slope_mid;
        } else {
          lo = mid;
          slope_lo = slope_mid;
        }
        if (std::abs(slope_mid) <= 1e-13 * std::abs(slope0) || hi - lo <= 1e-15 * gamma_max) {
          break;
        }
      }
      gamma = lo;
    }
    auto next = objective.evaluate(along(dir, gamma));
    if (!next.finite || !(next.value <= current.value + 1e-15 * std::abs(current.value))) {
      break;
    }
    std::vector<double> moved = along(dir, gamma);
    double total = 0.0;
    for (double x : moved) total += x;
    for (double& x : moved) x /= total;
    auto renormalized = objective.evaluate(moved);
    if (!renormalized.finite) break;
    q = std::move(moved);
    current = std::move(renormalized);
  }
  if (iter >= max_iter) {
    throw Error(ErrorKind::NoConvergence, "relative entropy iteration cap reached");
  }
  report.value = std::max(0.0, current.value);
  report.iterations = iter;
  report.certificate.weights = q;
  report.certificate.free_state =
      basis.vectors() * CMatrix::diagonal(q) * basis.vectors().adjoint();
  return report;
}

inline MeasureReport rank_measure(const PureState& psi, const FreeBasis& basis) {
  MeasureReport report;
  const double rank = static_cast<double>(superposition_rank(psi, basis));
  report.value = std::log(rank);
  report.certificate.decomposition.emplace_back(1.0, psi.amp());
  return report;
}

namespace detail {

inline CMatrix haar_unitary(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  CMatrix u(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    CVector col(n);
    for (auto& z : col) z = Complex(gauss(rng), gauss(rng));
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t k = 0; k < j; ++k) {
        Complex proj = 0.0;
        for (std::size_t i = 0; i < n; ++i) proj += std::conj(u(i, k)) * col[i];
        for (std::size_t i = 0; i < n; ++i) col[i] -= proj * u(i, k);
      }
    }
    const double len = norm(col);
    for (std::size_t i = 0; i < n; ++i) u(i, j) = col[i] / len;
  }
  return u;
}

}  // namespace detail

/// Upper bound on the convex-roof rank measure of a mixed state: the best of
/// the free decomposition (if any), the eigendecomposition, and `samples`
/// random unitary remixings of the eigen-ensemble.
inline MeasureReport rank_measure(const DensityMatrix& rho, const FreeBasis& basis,
                                  int samples = 1000, std::uint64_t seed = 0x5eed) {
  MeasureReport report;
  report.upper_bound = true;
  const std::size_t d = basis.dim();
  if (is_free(rho, basis)) {
    const CMatrix c = free_expansion(rho, basis).coeffs;
    for (std::size_t i = 0; i < d; ++i) {
      const double w = c(i, i).real();
      if (w > 1e-12) report.certificate.decomposition.emplace_back(w, basis.vector(i));
    }
    return report;
  }
  const EigResult e = herm_eig(rho.mat());
  std::vector<double> weights;
  std::vector<CVector> vecs;
  for (std::size_t k = 0; k < d; ++k) {
    if (e.values[k] <= 1e-12) continue;
    weights.push_back(e.values[k]);
    vecs.push_back(e.vectors.column(k));
  }
  const std::size_t k = weights.size();

  auto score = [&](const std::vector<std::pair<double, CVector>>& ensemble) {
    double total = 0.0;
    for (const auto& [w, vec] : ensemble)
      total += w * std::log(static_cast<double>(
                       superposition_rank(PureState::normalized(vec), basis)));
    return total;
  };

  std::vector<std::pair<double, CVector>> best;
  for (std::size_t i = 0; i < k; ++i) best.emplace_back(weights[i], vecs[i]);
  double best_value = score(best);

  std::mt19937_64 rng(seed);
  for (int sample = 0; sample < samples && k > 1; ++sample) {
    const CMatrix u = detail::haar_unitary(k, rng);
    std::vector<std::pair<double, CVector>> ensemble;
    for (std::size_t j = 0; j < k; ++j) {
      CVector psi(d, 0.0);
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t r = 0; r < d; ++r) psi[r] += u(j, i) * std::sqrt(weights[i]) * vecs[i][r];
      const double w = norm(psi) * norm(psi);
      if (w < 1e-14) continue;
      ensemble.emplace_back(w, psi);
    }
    const double value = score(ensemble);
    if (value < best_value) {
      best_value = value;
      best = std::move(ensemble);
    }
  }
  for (auto& [w, vec] : best) {
    const double len = norm(vec);
    for (auto& z : vec) z /= len;
  }
  report.value = best_value;
  report.certificate.decomposition = std::move(best);
  return report;
}

/// min sum_i x_i - 1 subject to sum_i x_i |c_i><c_i| >= rho, x >= 0.
inline MeasureReport robustness(const DensityMatrix& rho, const FreeBasis& basis,
                                double gap_tol = 1e-10) {
  const std::size_t d = basis.dim();
  const CMatrix r = free_expansion(rho, basis).coeffs;
  BarrierProblem prob{std::vector<double>(d, -1.0), -hermitian_part(r), {}};
  for (std::size_t i = 0; i < d; ++i) {
    CMatrix e(d, d);
    e(i, i) = -1.0;
    prob.coeffs.push_back(std::move(e));
  }
  const double start = eigenvalues(hermitian_part(r)).back() + 1.0;
  const SdpSolution sol = barrier_solve(prob, std::vector<double>(d, start), {gap_tol, 60, 200});
  // Dual: max tr(R L) over L >= 0 with diag(L) <= 1. The central-path
  // L = S^-1 / t is made feasible by a diagonal congruence, either clipping
  // entries above 1 or scaling every diagonal entry to 1; both are valid
  // bounds and the larger one is kept.
  CMatrix slack = -hermitian_part(r);
  for (std::size_t i = 0; i < d; ++i) slack(i, i) += sol.p[i];
  const CMatrix raw = herm_function(inverse_pd(slack) / sol.barrier_t,
                                    [](double x) { return std::max(x, 0.0); });
  auto congruence = [&](bool unit_diagonal) {
    CMatrix l = raw;
    std::vector<double> f(d);
    for (std::size_t i = 0; i < d; ++i) {
      const double v = raw(i, i).real();
      f[i] = v > 0.0 && (unit_diagonal || v > 1.0) ? 1.0 / std::sqrt(v) : 1.0;
    }
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) l(i, j) *= f[i] * f[j];
    return trace_product(r, l).real();
  };
  const double dual = std::max(congruence(false), congruence(true));
  double primal = 0.0;
  for (double x : sol.p) primal += x;
  const double gap = primal - dual;
  if (!(gap <= 1e-6)) {
    throw Error(ErrorKind::SolverFailure,
                "robustness duality gap " + std::to_string(gap) + " above 1e-6");
  }
  const double total = primal;
  const double s = total - 1.0;
  MeasureReport report;
  report.value = std::max(0.0, s);
  report.iterations = sol.newton_steps;
  report.certificate.weights = sol.p;
  report.certificate.s = report.value;
  const CMatrix mix = basis.vectors() * CMatrix::diagonal(sol.p) * basis.vectors().adjoint();
  report.certificate.free_state = mix / total;
  if (s > 1e-12) report.certificate.tau = (mix - rho.mat()) / s;
  return report;
}

}  // namespace superpose
