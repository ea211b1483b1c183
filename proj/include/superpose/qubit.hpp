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
#include <array>
#include <cmath>
#include <future>
#include <limits>
#include <numbers>
#include <optional>
#include <thread>
#include <vector>

#include "superpose/transform.hpp"

namespace superpose {

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<Vec3, 3>;

inline const std::array<CMatrix, 3>& pauli() {
  static const std::array<CMatrix, 3> sigma{
      CMatrix{{0.0, 1.0}, {1.0, 0.0}},
      CMatrix{{0.0, Complex(0.0, -1.0)}, {Complex(0.0, 1.0), 0.0}},
      CMatrix{{1.0, 0.0}, {0.0, -1.0}}};
  return sigma;
}

struct BlochVector {
  Vec3 r{};

  double length() const { return std::sqrt(r[0] * r[0] + r[1] * r[1] + r[2] * r[2]); }

  static BlochVector from_density(const DensityMatrix& rho) {
    if (rho.dim() != 2) {
      throw Error(ErrorKind::DimensionMismatch, "Bloch vectors need a qubit state");
    }
    BlochVector b;
    for (std::size_t k = 0; k < 3; ++k) b.r[k] = trace_product(pauli()[k], rho.mat()).real();
    return b;
  }

  DensityMatrix to_density() const {
    if (length() > 1.0 + 1e-10) {
      throw Error(ErrorKind::InvalidState, "Bloch vector outside the unit ball");
    }
    CMatrix m = CMatrix::identity(2);
    for (std::size_t k = 0; k < 3; ++k) m += r[k] * pauli()[k];
    return DensityMatrix(m * 0.5);
  }
};

/// Affine action r -> t + T r of a trace-preserving qubit map.
struct BlochMap {
  Vec3 t{};
  Mat3 T{};

  Vec3 apply(const Vec3& r) const {
    Vec3 out = t;
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) out[i] += T[i][j] * r[j];
    return out;
  }

  /// Linear extension to arbitrary 2x2 operators through their Pauli expansion.
  CMatrix apply(const CMatrix& x) const {
    const Complex v0 = x.trace();
    std::array<Complex, 3> v{};
    for (std::size_t k = 0; k < 3; ++k) v[k] = trace_product(pauli()[k], x);
    CMatrix out = CMatrix::identity(2) * v0;
    for (std::size_t i = 0; i < 3; ++i) {
      Complex vi = v0 * t[i];
      for (std::size_t j = 0; j < 3; ++j) vi += T[i][j] * v[j];
      out += vi * pauli()[i];
    }
    return out * 0.5;
  }

  static BlochMap identity() {
    BlochMap m;
    for (std::size_t i = 0; i < 3; ++i) m.T[i][i] = 1.0;
    return m;
  }
};

/// The map fixing the free segment pointwise in x and sending (-1, 0, 0) to
/// the Bloch vector with polar angle theta and azimuth phi.
inline BlochMap build_phi(double a, double theta, double phi) {
  if (!(a >= 0.0 && a < 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "overlap must lie in [0, 1)");
  }
  const double ct = std::cos(theta), st = std::sin(theta);
  const double cp = std::cos(phi), sp = std::sin(phi);
  BlochMap m;
  m.t = {a / (1.0 + a) * (1.0 + cp * st), a / (1.0 + a) * sp * st, 0.5 * ct};
  const Vec3 w{(a - cp * st) / (1.0 + a), -sp * st / (1.0 + a), -0.5 * ct};
  for (std::size_t i = 0; i < 3; ++i) m.T[i][0] = w[i];
  return m;
}

/// C = sum_ij |i><j| (x) Psi(|i><j|).
inline CMatrix choi(const BlochMap& map) {
  CMatrix c(4, 4);
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      CMatrix e(2, 2);
      e(i, j) = 1.0;
      const CMatrix block = map.apply(e);
      for (std::size_t r = 0; r < 2; ++r)
        for (std::size_t s = 0; s < 2; ++s) c(2 * i + r, 2 * j + s) = block(r, s);
    }
  }
  return c;
}

/// Kraus operators K[r][i] = sqrt(lambda) v[i * d_out + r] from a PSD Choi matrix.
inline std::vector<CMatrix> kraus_from_choi(const CMatrix& c, std::size_t d_in,
                                            std::size_t d_out, double tol = 1e-12) {
  const EigResult e = herm_eig(c);
  if (e.values.front() < -1e-9) {
    throw Error(ErrorKind::BadData, "Choi matrix is not positive semidefinite");
  }
  std::vector<CMatrix> out;
  for (std::size_t k = 0; k < e.values.size(); ++k) {
    if (e.values[k] <= tol) continue;
    const double root = std::sqrt(e.values[k]);
    CMatrix kraus(d_out, d_in);
    for (std::size_t i = 0; i < d_in; ++i)
      for (std::size_t r = 0; r < d_out; ++r) kraus(r, i) = root * e.vectors(i * d_out + r, k);
    out.push_back(std::move(kraus));
  }
  return out;
}

inline Channel to_channel(const BlochMap& map) { return Channel(kraus_from_choi(choi(map), 2, 2)); }

enum class QubitKrausKind { AlphaBeta = 1, GammaDelta = 2, MuNu = 3, EpsilonXi = 4 };

/// Free qubit Kraus operator of the given type in the computational frame of
/// symmetric_qubit_basis(a).
inline CMatrix free_qubit_kraus(QubitKrausKind kind, Complex x, Complex y, double a) {
  const double root = std::sqrt(1.0 - a * a);
  const double A = 1.0 + root;
  const double B = 1.0 - root;
  const double C = 1.0 / (2.0 * root);
  switch (kind) {
    case QubitKrausKind::AlphaBeta:
      return C * CMatrix{{A * x - a * y, -a * x + A * y}, {a * x - B * y, -B * x + a * y}};
    case QubitKrausKind::GammaDelta:
      return C * CMatrix{{A * x - B * y, a * (-x + y)}, {-a * (-x + y), -B * x + A * y}};
    case QubitKrausKind::MuNu:
      return C * CMatrix{{a * x - B * y, -B * x + a * y}, {A * x - a * y, -a * x + A * y}};
    case QubitKrausKind::EpsilonXi:
      return C * CMatrix{{a * (x - y), A * y - B * x}, {-B * y + A * x, -a * (x - y)}};
  }
  throw Error(ErrorKind::InvalidArgument, "unknown Kraus type");
}

/// (cos(theta/2), e^{i phi} sin(theta/2)).
inline PureState qubit_state(double theta, double phi) {
  return PureState(CVector{std::cos(theta / 2.0), std::polar(std::sin(theta / 2.0), phi)});
}

/// (|0> - |1>)/sqrt(2), Bloch vector (-1, 0, 0).
inline PureState maximal_superposition_state() {
  return PureState(CVector{1.0 / std::numbers::sqrt2, -1.0 / std::numbers::sqrt2});
}

/// Four free Kraus operators, one of each type, converting the maximal
/// superposition state into qubit_state(theta_t, phi_t) with certainty.
inline Channel generate_from_m2(double theta_t, double phi_t, double a) {
  if (!(a >= 0.0 && a < 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "overlap must lie in [0, 1)");
  }
  const double root = std::sqrt(1.0 - a * a);
  const double A = 1.0 + root;
  const double B = 1.0 - root;
  const double c = std::cos(theta_t / 2.0);
  const Complex s = std::polar(std::sin(theta_t / 2.0), phi_t);
  const double n = 2.0 * (1.0 + a);
  const Complex delta = ((B + a) * c - (a + A) * s) / n;
  const Complex gamma = ((A + a) * c - (a + B) * s) / n;
  const Complex epsilon = -delta;
  const Complex xi = -gamma;
  const double same =
      std::sqrt(a * (1.0 + std::cos(phi_t) * std::sin(theta_t)) / (2.0 * (1.0 + a)));
  return Channel({free_qubit_kraus(QubitKrausKind::AlphaBeta, same, same, a),
                  free_qubit_kraus(QubitKrausKind::GammaDelta, gamma, delta, a),
                  free_qubit_kraus(QubitKrausKind::MuNu, same, same, a),
                  free_qubit_kraus(QubitKrausKind::EpsilonXi, epsilon, xi, a)});
}

/// Two-qubit free channel implementing U on the first qubit, consuming the
/// maximal superposition state on the second. The first two operators are
/// F_0 and F_1; the rest is the free completion.
inline Channel inject_unitary(const CMatrix& u, double a) {
  if (u.rows() != 2 || u.cols() != 2 ||
      max_abs(u.adjoint() * u - CMatrix::identity(2)) > 1e-10) {
    throw Error(ErrorKind::NotUnitary, "injection needs a 2x2 unitary");
  }
  const FreeBasis basis = symmetric_qubit_basis(a);
  const FreeBasis pair = product_basis(basis, basis);
  const double root = std::sqrt(1.0 - a * a);
  const double A = 1.0 + root;
  const double B = 1.0 - root;
  const double n = 2.0 * std::sqrt(1.0 + a);
  const Complex u00 = u(0, 0), u01 = u(0, 1), u10 = u(1, 0), u11 = u(1, 1);
  const Complex c00 = (A * u00 + a * (u01 - u10) - B * u11) / n;
  const Complex c01 = (A * u01 + a * (u00 - u11) - B * u10) / n;
  const Complex c10 = (B * u01 + a * (u00 - u11) - A * u10) / n;
  const Complex c11 = (B * u00 + a * (u01 - u10) - A * u11) / n;
  const Complex d00 = (B * u11 + a * (u10 - u01) - A * u00) / n;
  const Complex d01 = (B * u10 + a * (u11 - u00) - A * u01) / n;
  const Complex d10 = (A * u10 + a * (u11 - u00) - B * u01) / n;
  const Complex d11 = (A * u11 + a * (u10 - u01) - B * u00) / n;

  // |c_i c_j><c_k^perp c_l^perp| with zero-based labels.
  auto term = [&](std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
    return outer(pair.vector(2 * i + j), pair.reciprocal_vector(2 * k + l));
  };
  const CMatrix f0 = c00 * term(0, 0, 0, 0) + c10 * term(1, 0, 0, 1) + c01 * term(0, 0, 1, 0) +
                     c11 * term(1, 0, 1, 1);
  const CMatrix f1 = d00 * term(0, 1, 0, 1) + d10 * term(1, 1, 0, 0) + d01 * term(0, 1, 1, 1) +
                     d11 * term(1, 1, 1, 0);
  std::vector<CMatrix> ops{f0, f1};
  for (CMatrix& f : complete_free(ops, pair)) ops.push_back(std::move(f));
  return Channel(std::move(ops));
}

/// Euclidean distance from a Bloch vector to the segment of free states at overlap a.
inline double distance_to_free_segment(const Vec3& r, double a) {
  const double h = std::sqrt(1.0 - a * a);
  const double z = std::clamp(r[2], -h, h);
  return std::sqrt((r[0] - a) * (r[0] - a) + r[1] * r[1] + (r[2] - z) * (r[2] - z));
}

struct HeatmapCell {
  double theta = 0.0;
  double phi = 0.0;
  double p = 0.0;
};

/// Optimal free conversion probability between two qubit pure states. Targets
/// of lower superposition rank are free states and always reachable; targets
/// of higher rank never are.
inline double qubit_conversion_probability(const PureState& initial, const PureState& target,
                                           const FreeBasis& basis) {
  const std::size_t r0 = superposition_rank(initial, basis);
  const std::size_t r1 = superposition_rank(target, basis);
  if (r1 > r0) return 0.0;
  if (r1 == 1) return 1.0;
  return max_conversion_prob(initial, target, basis).probability;
}

/// Rows theta_i = i pi / n (i < n), columns phi_j = 2 pi j / (2n) (j < 2n).
inline std::vector<HeatmapCell> conversion_heatmap(double a, double theta0, double phi0,
                                                   std::size_t grid_n) {
  if (grid_n < 8) throw Error(ErrorKind::InvalidArgument, "grid_n must be at least 8");
  const FreeBasis basis = symmetric_qubit_basis(a);
  const PureState initial = qubit_state(theta0, phi0);
  const std::size_t cols = 2 * grid_n;
  std::vector<HeatmapCell> cells(grid_n * cols);

  auto run_row = [&](std::size_t i) {
    const double theta = std::numbers::pi * static_cast<double>(i) / static_cast<double>(grid_n);
    for (std::size_t j = 0; j < cols; ++j) {
      const double phi = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(cols);
      HeatmapCell& cell = cells[i * cols + j];
      cell.theta = theta;
      cell.phi = phi;
      try {
        cell.p = qubit_conversion_probability(initial, qubit_state(theta, phi), basis);
      } catch (const Error&) {
        cell.p = std::numeric_limits<double>::quiet_NaN();
      }
    }
  };

  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(grid_n, std::thread::hardware_concurrency()));
  std::vector<std::future<void>> jobs;
  for (std::size_t w = 0; w < workers; ++w) {
    jobs.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t i = w; i < grid_n; i += workers) run_row(i);
    }));
  }
  for (auto& job : jobs) job.get();
  return cells;
}

/// Remainder obtained by adding the two computational-diagonal conditions for a
/// one-operator-per-type free decomposition of build_phi(a, theta, .). The
/// coefficient-dependent terms cancel, leaving cos(theta) (1 - a).
struct DiagonalConditionResiduals {
  double first = 0.0;
  double second = 0.0;
  double summed = 0.0;
};

inline DiagonalConditionResiduals phi_diagonal_residuals(double a, double theta,
                                                         const QubitKrausGroups& g) {
  const double root = std::sqrt(1.0 - a * a);
  const double A = 1.0 + root;
  const double B = 1.0 - root;
  const double ct = std::cos(theta);
  double ab = 0.0;
  for (const auto& [alpha, beta] : g.type1) ab += 2.0 * (std::conj(alpha) * beta).real();
  double gd = 0.0;
  for (const auto& [gamma, delta] : g.type2) gd += 2.0 * (std::conj(gamma) * delta).real();
  for (const auto& [epsilon, xi] : g.type4) gd += 2.0 * (std::conj(xi) * epsilon).real();
  const double lhs1 = 2.0 * (1.0 - a * a) * (1.0 + ct / 2.0);
  const double rhs1 = 2.0 + ct * (1.0 - a) - 2.0 * a * a * B - 2.0 * a * ab * root -
                      gd * a * a * root;
  const double lhs2 = 2.0 * (1.0 - a * a) * (1.0 - ct / 2.0);
  const double rhs2 = 2.0 + ct * (1.0 - a) - 2.0 * a * a * A + 2.0 * a * ab * root +
                      gd * a * a * root;
  DiagonalConditionResiduals r;
  r.first = rhs1 - lhs1;
  r.second = rhs2 - lhs2;
  r.summed = 0.5 * (r.first + r.second);
  return r;
}

struct FreeDecomposition {
  bool exists = false;
  double margin = 0.0;         // >= 0 iff the cycle condition is met
  double off_support = 0.0;    // largest Choi weight outside the free pattern
  std::vector<CMatrix> kraus;  // free Kraus operators when exists
};

/// Decides whether a qubit channel, given by its Choi matrix, has a Kraus
/// decomposition into free operators of symmetric_qubit_basis(a).
///
/// In the free frame the Choi matrix must be a sum of PSD 2x2 blocks on the
/// four index pairs {0,2}, {0,3}, {1,3}, {1,2} (one per Kraus type), which is
/// a one-parameter family; the parameter is scanned and then refined.
inline FreeDecomposition free_kraus_decomposition(const CMatrix& choi_matrix, double a,
                                                  double tol = 1e-9) {
  const FreeBasis basis = symmetric_qubit_basis(a);
  const CMatrix l_inv = kron(basis.vectors().transpose(), inverse(basis.vectors()));
  const CMatrix c = hermitian_part(l_inv * choi_matrix * l_inv.adjoint());
  FreeDecomposition out;
  out.off_support = std::max(std::abs(c(0, 1)), std::abs(c(2, 3)));

  const double c00 = c(0, 0).real(), c11 = c(1, 1).real();
  const double c22 = c(2, 2).real(), c33 = c(3, 3).real();
  const double n02 = std::norm(c(0, 2)), n03 = std::norm(c(0, 3));
  const double n12 = std::norm(c(1, 2)), n13 = std::norm(c(1, 3));
  const double floor = -std::numeric_limits<double>::infinity();

  // Weight u0 on node 0 goes to the {0,2} block, the rest to {0,3}; each block
  // takes the least weight on its other node that keeps it PSD.
  struct Split {
    double u0, u2, u3, u1, slack;
  };
  auto split = [&](double u0) -> Split {
    Split s{u0, 0.0, 0.0, 0.0, floor};
    if (u0 < 0.0 || u0 > c00) return s;
    s.u2 = n02 == 0.0 ? 0.0 : (u0 > 0.0 ? n02 / u0 : std::numeric_limits<double>::infinity());
    s.u3 = n03 == 0.0 ? 0.0 : (u0 < c00 ? n03 / (c00 - u0) : std::numeric_limits<double>::infinity());
    const double rest2 = c22 - s.u2;
    const double rest3 = c33 - s.u3;
    if (rest2 < -tol || rest3 < -tol) return s;
    s.u1 = n12 == 0.0 ? c11 : (rest2 > 0.0 ? c11 - n12 / rest2 : floor);
    if (!(s.u1 >= -tol)) return s;
    s.slack = std::max(0.0, s.u1) * std::max(0.0, rest3) - n13;
    return s;
  };

  double best_u0 = 0.0;
  double best = floor;
  const int samples = 4000;
  for (int k = 0; k <= samples; ++k) {
    const double u0 = c00 * static_cast<double>(k) / samples;
    const double v = split(u0).slack;
    if (v > best) {
      best = v;
      best_u0 = u0;
    }
  }
  double lo = std::max(0.0, best_u0 - c00 / samples);
  double hi = std::min(c00, best_u0 + c00 / samples);
  for (int it = 0; it < 200 && hi - lo > 1e-16 * std::max(1.0, c00); ++it) {
    const double m1 = lo + (hi - lo) * 0.381966011250105;
    const double m2 = hi - (hi - lo) * 0.381966011250105;
    if (split(m1).slack >= split(m2).slack) hi = m2; else lo = m1;
  }
  const double refined = 0.5 * (lo + hi);
  if (split(refined).slack > best) {
    best = split(refined).slack;
    best_u0 = refined;
  }
  out.margin = best;
  out.exists = best >= -tol && out.off_support <= tol;
  if (!out.exists) return out;

  const Split s = split(best_u0);
  // Free-frame Kraus operators from each PSD block; entry (row, col) of the
  // operator sits at Choi index 2 * col + row.
  const CMatrix& v = basis.vectors();
  const CMatrix v_inv = inverse(v);
  auto emit = [&](std::size_t p, std::size_t q, double wp, double wq) {
    CMatrix block{{std::max(0.0, wp), c(p, q)}, {c(q, p), std::max(0.0, wq)}};
    const EigResult e = herm_eig(block);
    for (std::size_t k = 0; k < 2; ++k) {
      if (e.values[k] <= 1e-14) continue;
      CMatrix kt(2, 2);
      const double root = std::sqrt(e.values[k]);
      kt(p % 2, p / 2) = root * e.vectors(0, k);
      kt(q % 2, q / 2) = root * e.vectors(1, k);
      out.kraus.push_back(v * kt * v_inv);
    }
  };
  emit(0, 2, s.u0, s.u2);
  emit(0, 3, c00 - s.u0, s.u3);
  emit(1, 3, s.u1, c33 - s.u3);
  emit(1, 2, c11 - s.u1, c22 - s.u2);
  return out;
}

}  // namespace superpose
