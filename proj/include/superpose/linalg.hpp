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
#include <functional>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "superpose/matrix.hpp"

namespace superpose {

struct EigResult {
  std::vector<double> values;  // ascending
  CMatrix vectors;             // unitary, eigenvectors as columns
};

struct SvdResult {
  CMatrix u;                   // rows(M) x k, orthonormal columns
  std::vector<double> sigma;   // k = min(rows, cols), nonincreasing
  CMatrix v;                   // cols(M) x k, orthonormal columns
};

namespace detail {

// Unitary acting on coordinates (p, q) that diagonalizes the Hermitian block
// [[alpha, beta], [conj(beta), gamma]] by conjugation G^dag H G.
struct Rotation {
  Complex pp, pq, qp, qq;
};

inline Rotation jacobi_rotation(double alpha, double gamma, Complex beta) {
  const double b = std::abs(beta);
  const Complex phase = std::conj(beta / b);
  const double tau = (gamma - alpha) / (2.0 * b);
  const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                   (std::abs(tau) + std::sqrt(1.0 + tau * tau));
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  const double s = t * c;
  return {c, s, -s * phase, c * phase};
}

inline void rotate_columns(CMatrix& m, std::size_t p, std::size_t q,
                           const Rotation& g) {
  for (std::size_t k = 0; k < m.rows(); ++k) {
    const Complex mp = m(k, p);
    const Complex mq = m(k, q);
    m(k, p) = mp * g.pp + mq * g.qp;
    m(k, q) = mp * g.pq + mq * g.qq;
  }
}

inline void rotate_rows_adjoint(CMatrix& m, std::size_t p, std::size_t q,
                                const Rotation& g) {
  for (std::size_t k = 0; k < m.cols(); ++k) {
    const Complex mp = m(p, k);
    const Complex mq = m(q, k);
    m(p, k) = std::conj(g.pp) * mp + std::conj(g.qp) * mq;
    m(q, k) = std::conj(g.pq) * mp + std::conj(g.qq) * mq;
  }
}

inline double hermiticity_defect(const CMatrix& h) {
  double worst = 0.0;
  for (std::size_t i = 0; i < h.rows(); ++i)
    for (std::size_t j = i; j < h.cols(); ++j)
      worst = std::max(worst, std::abs(h(i, j) - std::conj(h(j, i))));
  return worst;
}

}  // namespace detail

inline bool is_hermitian(const CMatrix& h, double tol = 1e-10) {
  if (!h.square()) return false;
  return detail::hermiticity_defect(h) <= tol * std::max(1.0, frobenius_norm(h));
}

/// Cyclic complex Jacobi eigensolver for Hermitian matrices.
inline EigResult herm_eig(const CMatrix& input) {
  if (!input.square()) {
    throw Error(ErrorKind::DimensionMismatch, "herm_eig needs a square matrix");
  }
  const double scale = frobenius_norm(input);
  if (detail::hermiticity_defect(input) > 1e-8 * scale) {
    throw Error(ErrorKind::NonHermitian, "asymmetry exceeds 1e-8 * |H|");
  }
  const std::size_t n = input.rows();
  CMatrix h = hermitian_part(input);
  CMatrix q = CMatrix::identity(n);

  const double floor = 1e-300;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t r = p + 1; r < n; ++r) off += std::norm(h(p, r));
    if (off <= 1e-32 * scale * scale || off < floor) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t r = p + 1; r < n; ++r) {
        if (std::abs(h(p, r)) < floor) continue;
        const auto g = detail::jacobi_rotation(h(p, p).real(), h(r, r).real(),
                                               h(p, r));
        detail::rotate_columns(h, p, r, g);
        detail::rotate_rows_adjoint(h, p, r, g);
        detail::rotate_columns(q, p, r, g);
        h(p, r) = 0.0;
        h(r, p) = 0.0;
        h(p, p) = h(p, p).real();
        h(r, r) = h(r, r).real();
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return h(a, a).real() < h(b, b).real();
  });
  EigResult out{std::vector<double>(n), CMatrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = h(order[k], order[k]).real();
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = q(i, order[k]);
  }
  return out;
}

inline std::vector<double> eigenvalues(const CMatrix& h) {
  return herm_eig(h).values;
}

/// Applies a scalar function to the spectrum of a Hermitian matrix.
inline CMatrix herm_function(const CMatrix& h,
                             const std::function<double(double)>& f) {
  const EigResult e = herm_eig(h);
  const std::size_t n = h.rows();
  CMatrix out(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double fk = f(e.values[k]);
    if (fk == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        out(i, j) += fk * e.vectors(i, k) * std::conj(e.vectors(j, k));
  }
  return out;
}

/// True iff the smallest eigenvalue is at least -tol * max(1, |H|).
inline bool psd_check(const CMatrix& h, double tol = 1e-9) {
  const auto values = eigenvalues(h);
  if (values.empty()) return true;
  const double spectral = std::max(std::abs(values.front()), std::abs(values.back()));
  return values.front() >= -tol * std::max(1.0, spectral);
}

/// One-sided (Hestenes) Jacobi SVD.
inline SvdResult svd(const CMatrix& m) {
  if (m.rows() < m.cols()) {
    SvdResult t = svd(m.adjoint());
    return {std::move(t.v), std::move(t.sigma), std::move(t.u)};
  }
  const std::size_t rows = m.rows();
  const std::size_t n = m.cols();
  CMatrix a = m;
  CMatrix v = CMatrix::identity(n);

  auto column_gram = [&](std::size_t i, std::size_t j) {
    Complex s = 0.0;
    for (std::size_t k = 0; k < rows; ++k) s += std::conj(a(k, i)) * a(k, j);
    return s;
  };

  for (int sweep = 0; sweep < 100; ++sweep) {
    bool rotated = false;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double alpha = column_gram(i, i).real();
        const double beta = column_gram(j, j).real();
        const Complex gamma = column_gram(i, j);
        if (std::abs(gamma) <= 1e-15 * std::sqrt(alpha * beta) ||
            std::abs(gamma) < 1e-300) {
          continue;
        }
        rotated = true;
        const auto g = detail::jacobi_rotation(alpha, beta, gamma);
        detail::rotate_columns(a, i, j, g);
        detail::rotate_columns(v, i, j, g);
      }
    }
    if (!rotated) break;
  }

  std::vector<double> sigma(n);
  for (std::size_t j = 0; j < n; ++j) sigma[j] = std::sqrt(column_gram(j, j).real());
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return sigma[x] > sigma[y]; });

  SvdResult out{CMatrix(rows, n), std::vector<double>(n), CMatrix(n, n)};
  const double top = n == 0 ? 0.0 : sigma[order[0]];
  std::vector<bool> filled(n, false);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t j = order[k];
    out.sigma[k] = sigma[j];
    for (std::size_t i = 0; i < n; ++i) out.v(i, k) = v(i, j);
    if (sigma[j] > 1e-13 * top && sigma[j] > 0.0) {
      for (std::size_t i = 0; i < rows; ++i) out.u(i, k) = a(i, j) / sigma[j];
      filled[k] = true;
    }
  }
  // Complete left vectors for (numerically) zero singular values.
  std::size_t candidate = 0;
  for (std::size_t k = 0; k < n; ++k) {
    if (filled[k]) continue;
    while (candidate < rows) {
      CVector e(rows, 0.0);
      e[candidate++] = 1.0;
      for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t c = 0; c < n; ++c) {
          if (!filled[c]) continue;
          Complex proj = 0.0;
          for (std::size_t i = 0; i < rows; ++i) proj += std::conj(out.u(i, c)) * e[i];
          for (std::size_t i = 0; i < rows; ++i) e[i] -= proj * out.u(i, c);
        }
      }
      const double len = norm(e);
      if (len > 1e-6) {
        for (std::size_t i = 0; i < rows; ++i) out.u(i, k) = e[i] / len;
        filled[k] = true;
        break;
      }
    }
  }
  return out;
}

inline std::vector<double> singular_values(const CMatrix& m) { return svd(m).sigma; }

inline double spectral_norm(const CMatrix& m) {
  const auto s = singular_values(m);
  return s.empty() ? 0.0 : s.front();
}

/// Gauss-Jordan elimination with partial pivoting; solves A X = B.
inline CMatrix solve(const CMatrix& a_in, const CMatrix& b_in) {
  if (!a_in.square() || a_in.rows() != b_in.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "solve shapes");
  }
  const std::size_t n = a_in.rows();
  CMatrix a = a_in;
  CMatrix b = b_in;
  const double scale = max_abs(a_in);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a(r, col)) > std::abs(a(pivot, col))) pivot = r;
    if (std::abs(a(pivot, col)) <= 1e-14 * scale || scale == 0.0) {
      throw Error(ErrorKind::Singular, "matrix is numerically singular");
    }
    if (pivot != col) {
      for (std::size_t k = 0; k < n; ++k) std::swap(a(col, k), a(pivot, k));
      for (std::size_t k = 0; k < b.cols(); ++k) std::swap(b(col, k), b(pivot, k));
    }
    const Complex inv = 1.0 / a(col, col);
    for (std::size_t k = 0; k < n; ++k) a(col, k) *= inv;
    for (std::size_t k = 0; k < b.cols(); ++k) b(col, k) *= inv;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const Complex f = a(r, col);
      if (f == 0.0) continue;
      for (std::size_t k = 0; k < n; ++k) a(r, k) -= f * a(col, k);
      for (std::size_t k = 0; k < b.cols(); ++k) b(r, k) -= f * b(col, k);
    }
  }
  return b;
}

inline CMatrix inverse(const CMatrix& a) {
  return solve(a, CMatrix::identity(a.rows()));
}

/// Lower-triangular L with H = L L^dag, or nothing if H is not positive definite.
inline std::optional<CMatrix> cholesky(const CMatrix& h) {
  const std::size_t n = h.rows();
  CMatrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double diag = h(j, j).real();
    for (std::size_t k = 0; k < j; ++k) diag -= std::norm(l(j, k));
    if (!(diag > 0.0)) return std::nullopt;
    const double root = std::sqrt(diag);
    l(j, j) = root;
    for (std::size_t i = j + 1; i < n; ++i) {
      Complex s = h(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * std::conj(l(j, k));
      l(i, j) = s / root;
    }
  }
  return l;
}

/// Inverse of a positive definite matrix through its Cholesky factor. Unlike
/// solve(), accepts any matrix the factorization succeeds on.
inline CMatrix inverse_pd(const CMatrix& h) {
  const auto l = cholesky(hermitian_part(h));
  if (!l) throw Error(ErrorKind::Singular, "matrix is not positive definite");
  const std::size_t n = h.rows();
  // L^-1 by forward substitution, then H^-1 = L^-dag L^-1.
  CMatrix li(n, n);
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t i = c; i < n; ++i) {
      Complex s = i == c ? 1.0 : 0.0;
      for (std::size_t k = c; k < i; ++k) s -= (*l)(i, k) * li(k, c);
      li(i, c) = s / (*l)(i, i);
    }
  }
  return li.adjoint() * li;
}

/// Dense real solve with partial pivoting; `a` is n x n row-major.
inline std::vector<double> solve_real(std::vector<double> a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a[r * n + col]) > std::abs(a[pivot * n + col])) pivot = r;
    if (a[pivot * n + col] == 0.0) {
      throw Error(ErrorKind::Singular, "real system is singular");
    }
    if (pivot != col) {
      for (std::size_t k = 0; k < n; ++k) std::swap(a[col * n + k], a[pivot * n + k]);
      std::swap(b[col], b[pivot]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a[r * n + col] / a[col * n + col];
      if (f == 0.0) continue;
      for (std::size_t k = col; k < n; ++k) a[r * n + k] -= f * a[col * n + k];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= a[i * n + k] * x[k];
    x[i] = s / a[i * n + i];
  }
  return x;
}

/// Solves H x = b for symmetric positive semidefinite H (row-major), robust to
/// near-duplicate rows: Jacobi-scaled Cholesky, falling back to a spectral
/// pseudo-inverse that discards directions below rel_floor of the top eigenvalue.
inline std::vector<double> solve_psd_real(const std::vector<double>& h,
                                          const std::vector<double>& b,
                                          double rel_floor = 1e-14) {
  const std::size_t n = b.size();
  std::vector<double> scale(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double dii = h[i * n + i];
    scale[i] = dii > 0.0 ? 1.0 / std::sqrt(dii) : 1.0;
  }
  std::vector<double> a(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i * n + j] = scale[i] * h[i * n + j] * scale[j];
  std::vector<double> rhs(n);
  for (std::size_t i = 0; i < n; ++i) rhs[i] = scale[i] * b[i];

  std::vector<double> l(n * n, 0.0);
  bool ok = true;
  for (std::size_t j = 0; j < n && ok; ++j) {
    double diag = a[j * n + j];
    for (std::size_t k = 0; k < j; ++k) diag -= l[j * n + k] * l[j * n + k];
    if (!(diag > 1e-13)) {
      ok = false;
      break;
    }
    const double root = std::sqrt(diag);
    l[j * n + j] = root;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a[i * n + j];
      for (std::size_t k = 0; k < j; ++k) s -= l[i * n + k] * l[j * n + k];
      l[i * n + j] = s / root;
    }
  }
  std::vector<double> x(n);
  if (ok) {
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      double s = rhs[i];
      for (std::size_t k = 0; k < i; ++k) s -= l[i * n + k] * y[k];
      y[i] = s / l[i * n + i];
    }
    for (std::size_t i = n; i-- > 0;) {
      double s = y[i];
      for (std::size_t k = i + 1; k < n; ++k) s -= l[k * n + i] * x[k];
      x[i] = s / l[i * n + i];
    }
  } else {
    CMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m(i, j) = a[i * n + j];
    const EigResult e = herm_eig(m);
    const double top = std::max(e.values.back(), 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      if (!(e.values[k] > rel_floor * top)) continue;
      double proj = 0.0;
      for (std::size_t i = 0; i < n; ++i) proj += e.vectors(i, k).real() * rhs[i];
      proj /= e.values[k];
      for (std::size_t i = 0; i < n; ++i) x[i] += proj * e.vectors(i, k).real();
    }
  }
  for (std::size_t i = 0; i < n; ++i) x[i] *= scale[i];
  return x;
}

}  // namespace superpose
