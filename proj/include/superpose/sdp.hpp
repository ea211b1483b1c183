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
#include <limits>
#include <optional>
#include <vector>

#include "superpose/linalg.hpp"

namespace superpose {

/// maximize sum_n p_n  subject to  sum_n p_n A_n <= 1,  p >= 0.
struct LmiProblem {
  std::vector<CMatrix> a;

  std::size_t dim() const { return a.empty() ? 0 : a.front().rows(); }
};

struct SdpSolution {
  std::vector<double> p;
  double primal = 0.0;
  CMatrix dual_matrix;
  double dual = 0.0;
  double gap = 0.0;
  int newton_steps = 0;
  bool converged = false;
  double barrier_t = 0.0;  // final barrier weight; the raw dual is S^-1 / t
};

struct DualCheck {
  bool feasible = false;
  double bound = 0.0;
};

/// Linear objective over p >= 0 with a single affine matrix inequality:
///   maximize c.p  subject to  offset - sum_n p_n coeffs_n >= 0.
/// Its dual is: minimize tr(offset L)  subject to  tr(coeffs_n L) >= c_n, L >= 0.
struct BarrierProblem {
  std::vector<double> c;
  CMatrix offset;
  std::vector<CMatrix> coeffs;
};

struct BarrierOptions {
  double gap_tol = 1e-7;
  int max_outer = 40;
  int max_newton = 200;
};

namespace detail {

struct BarrierPoint {
  bool feasible = false;
  double value = 0.0;  // -t c.p - log det S - sum log p
  CMatrix s;
};

inline BarrierPoint barrier_value(const BarrierProblem& prob, const std::vector<double>& p,
                                  double t) {
  BarrierPoint out;
  double linear = 0.0;
  double log_p = 0.0;
  for (std::size_t n = 0; n < p.size(); ++n) {
    if (!(p[n] > 0.0)) return out;
    linear += prob.c[n] * p[n];
    log_p += std::log(p[n]);
  }
  CMatrix s = prob.offset;
  for (std::size_t n = 0; n < p.size(); ++n) s -= p[n] * prob.coeffs[n];
  s = hermitian_part(s);
  const auto l = cholesky(s);
  if (!l) return out;
  double log_det = 0.0;
  for (std::size_t i = 0; i < s.rows(); ++i) log_det += 2.0 * std::log((*l)(i, i).real());
  out.feasible = true;
  out.value = -t * linear - log_det - log_p;
  out.s = std::move(s);
  return out;
}

}  // namespace detail

/// Primal-dual pair from the central path of the log barrier. Does not throw
/// on slow convergence; inspect `converged` and `gap`.
inline SdpSolution barrier_solve(const BarrierProblem& prob, std::vector<double> p,
                                 const BarrierOptions& opts = {}) {
  const std::size_t m = p.size();
  const std::size_t d = prob.offset.rows();
  if (prob.c.size() != m || prob.coeffs.size() != m) {
    throw Error(ErrorKind::DimensionMismatch, "barrier problem sizes");
  }
  double t = 1.0;
  auto point = detail::barrier_value(prob, p, t);
  if (!point.feasible) {
    throw Error(ErrorKind::BadData, "starting point is not strictly feasible");
  }
  int newton_steps = 0;
  bool converged = false;
  for (int outer = 0; outer < opts.max_outer; ++outer) {
    for (int it = 0; it < opts.max_newton; ++it) {
      const CMatrix s_inv = inverse_pd(point.s);
      std::vector<CMatrix> y(m);
      for (std::size_t n = 0; n < m; ++n) y[n] = s_inv * prob.coeffs[n];
      std::vector<double> g(m);
      std::vector<double> h(m * m);
      for (std::size_t n = 0; n < m; ++n) {
        g[n] = -t * prob.c[n] + y[n].trace().real() - 1.0 / p[n];
        for (std::size_t k = n; k < m; ++k) {
          const double hk = trace_product(y[n], y[k]).real();
          h[n * m + k] = hk;
          h[k * m + n] = hk;
        }
        h[n * m + n] += 1.0 / (p[n] * p[n]);
      }
      std::vector<double> step = solve_psd_real(h, g);
      double decrement = 0.0;
      for (std::size_t n = 0; n < m; ++n) {
        step[n] = -step[n];
        decrement -= g[n] * step[n];
      }
      ++newton_steps;
      if (decrement * 0.5 <= 1e-10) break;
      double alpha = 1.0;
      for (std::size_t n = 0; n < m; ++n)
        if (step[n] < 0.0) alpha = std::min(alpha, -0.99 * p[n] / step[n]);
      bool moved = false;
      for (int ls = 0; ls < 60; ++ls) {
        std::vector<double> trial(m);
        for (std::size_t n = 0; n < m; ++n) trial[n] = p[n] + alpha * step[n];
        auto next = detail::barrier_value(prob, trial, t);
        if (next.feasible && next.value <= point.value - 0.25 * alpha * decrement) {
          p = std::move(trial);
          point = std::move(next);
          moved = true;
          break;
        }
        alpha *= 0.5;
      }
      if (!moved) break;
    }
    if (static_cast<double>(d + m) / t <= 0.5 * opts.gap_tol) {
      converged = true;
      break;
    }
    t *= 10.0;
    point = detail::barrier_value(prob, p, t);
  }

  // Dual candidate mu S^-1, projected onto the PSD cone.
  CMatrix lambda = herm_function(inverse_pd(point.s) / t,
                                 [](double x) { return std::max(x, 0.0); });
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
  bool dual_ok = true;
  for (std::size_t n = 0; n < m; ++n) {
    const double b = trace_product(prob.coeffs[n], lambda).real();
    if (b > 0.0) {
      lo = std::max(lo, prob.c[n] / b);
    } else if (b < 0.0) {
      hi = std::min(hi, prob.c[n] / b);
    } else if (prob.c[n] > 0.0) {
      dual_ok = false;
    }
  }
  const double objective = trace_product(prob.offset, lambda).real();
  double scale = objective >= 0.0 ? lo : hi;
  if (lo > hi * (1.0 + 1e-12) || !std::isfinite(scale)) dual_ok = false;

  SdpSolution sol;
  sol.p = p;
  for (std::size_t n = 0; n < m; ++n) sol.primal += prob.c[n] * p[n];
  sol.newton_steps = newton_steps;
  sol.barrier_t = t;
  if (dual_ok) {
    sol.dual_matrix = lambda * scale;
    sol.dual = objective * scale;
    sol.gap = sol.dual - sol.primal;
  } else {
    sol.dual_matrix = lambda;
    sol.dual = std::numeric_limits<double>::infinity();
    sol.gap = std::numeric_limits<double>::infinity();
  }
  sol.converged = converged && sol.gap <= opts.gap_tol;
  return sol;
}

inline SdpSolution solve_lmi(const LmiProblem& problem, double gap_tol = 1e-7) {
  if (problem.a.empty()) {
    throw Error(ErrorKind::BadData, "LMI problem needs at least one operator");
  }
  const std::size_t d = problem.dim();
  const std::size_t m = problem.a.size();
  BarrierProblem prob{std::vector<double>(m, 1.0), CMatrix::identity(d), {}};
  std::vector<double> start(m);
  for (std::size_t n = 0; n < m; ++n) {
    const CMatrix& a = problem.a[n];
    if (a.rows() != d || a.cols() != d) {
      throw Error(ErrorKind::DimensionMismatch, "LMI operators differ in shape");
    }
    if (!is_hermitian(a, 1e-9) || !psd_check(a, 1e-9)) {
      throw Error(ErrorKind::BadData, "operator " + std::to_string(n) + " is not PSD");
    }
    const double top = eigenvalues(hermitian_part(a)).back();
    if (!(top > 1e-14)) {
      throw Error(ErrorKind::BadData, "operator " + std::to_string(n) + " vanishes");
    }
    prob.coeffs.push_back(hermitian_part(a));
    start[n] = 1.0 / (2.0 * static_cast<double>(m) * top);
  }
  SdpSolution sol = barrier_solve(prob, std::move(start), {gap_tol, 40, 200});
  if (!sol.converged) {
    throw Error(ErrorKind::NoConvergence,
                "duality gap " + std::to_string(sol.gap) + " above tolerance");
  }
  return sol;
}

inline DualCheck verify_dual(const CMatrix& lambda, const LmiProblem& problem) {
  DualCheck out;
  if (!lambda.square() || lambda.rows() != problem.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "dual matrix shape");
  }
  const CMatrix l = hermitian_part(lambda);
  out.bound = l.trace().real();
  if (eigenvalues(l).front() < -1e-9) return out;
  for (const CMatrix& a : problem.a) {
    if (trace_product(l, a).real() < 1.0 - 1e-9) return out;
  }
  out.feasible = true;
  return out;
}

}  // namespace superpose
