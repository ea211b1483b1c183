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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "support.hpp"

namespace superpose {
namespace {

using namespace testing;
constexpr double kPi = std::numbers::pi;

Vec3 bloch(const CMatrix& rho) { return BlochVector::from_density(DensityMatrix(rho)).r; }

double gap(const CVector& u, const CVector& v) {
  double m = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) m = std::max(m, std::abs(u[i] - v[i]));
  return m;
}

CVector scaled(CVector v, Complex z) {
  for (Complex& x : v) x *= z;
  return v;
}

double gap(const CVector& u) { return gap(u, CVector(u.size())); }

void expect_vec_near(const Vec3& got, const Vec3& want, double tol) {
  for (std::size_t k = 0; k < 3; ++k) EXPECT_NEAR(got[k], want[k], tol) << "component " << k;
}

TEST(Qubit, BlochRoundTrip) {
  EXPECT_NEAR(BlochVector::from_density(DensityMatrix(CMatrix::identity(2) * 0.5)).length(), 0.0,
              1e-15);
  for (double a : {0.0, 0.3, 0.5, 0.9}) {
    const FreeBasis b = symmetric_qubit_basis(a);
    expect_vec_near(bloch(outer(b.vector(0), b.vector(0))), {a, 0.0, std::sqrt(1.0 - a * a)},
                    1e-12);
  }
  expect_vec_near(bloch(maximal_superposition_state().projector()), {-1.0, 0.0, 0.0}, 1e-12);

  Rng rng(101);
  for (int trial = 0; trial < 50; ++trial) {
    const DensityMatrix rho(random_density(2, rng, 2));
    const DensityMatrix back = BlochVector::from_density(rho).to_density();
    EXPECT_LE(max_abs(back.mat() - rho.mat()), 1e-12);
  }
  EXPECT_THROW(BlochVector::from_density(DensityMatrix(CMatrix::identity(3) / 3.0)), Error);
}

TEST(Qubit, ChoiOfSimpleMaps) {
  const Eigen::VectorXd id = eigen_eigenvalues(choi(BlochMap::identity()));
  EXPECT_NEAR(id[0], 0.0, 1e-12);
  EXPECT_NEAR(id[1], 0.0, 1e-12);
  EXPECT_NEAR(id[2], 0.0, 1e-12);
  EXPECT_NEAR(id[3], 2.0, 1e-12);
  EXPECT_LE(max_abs(choi(BlochMap{}) - CMatrix::identity(4) * 0.5), 1e-15);
}

TEST(Qubit, PhiChoiMatchesClosedForm) {
  const double a = 0.3, ct = std::cos(kPi / 4), st = std::sin(kPi / 4);
  const double n = 1.0 + a;
  for (double ph : {0.0, 0.7, 4.0}) {
    const Complex e = std::polar(1.0, -ph);
    const Complex p = (a + a * e * st) / n, q = (a - e * st) / n;
    const CMatrix expected =
        0.5 * CMatrix{{0.5 * (2 + ct), p, -ct / 2, q},
                      {std::conj(p), 0.5 * (2 - ct), std::conj(q), ct / 2},
                      {-ct / 2, q, 0.5 * (2 + ct), p},
                      {std::conj(q), ct / 2, std::conj(p), 0.5 * (2 - ct)}};
    EXPECT_LE(max_abs(choi(build_phi(a, kPi / 4, ph)) - expected), 1e-12) << "phi=" << ph;
  }
}

TEST(Qubit, PhiChoiEigenvaluesOnSamples) {
  Rng rng(102);
  for (int trial = 0; trial < 200; ++trial) {
    const double a = uniform(rng, 0.0, 0.99);
    const double th = uniform(rng, 0.0, kPi), ph = uniform(rng, 0.0, 2 * kPi);
    const CMatrix c = choi(build_phi(a, th, ph));
    const double r = std::sqrt(2.0) *
                     std::sqrt(std::max(0.0, 1 - 2 * a + 9 * a * a - (a - 1) * (a - 1) * std::cos(2 * th) +
                                                 8 * (a - 1) * a * std::cos(ph) * std::sin(th)));
    std::vector<double> want{0.0, 1.0, (2 + 2 * a + r) / (4 * (1 + a)),
                             (2 + 2 * a - r) / (4 * (1 + a))};
    std::sort(want.begin(), want.end());
    const Eigen::VectorXd got = eigen_eigenvalues(c);
    for (std::size_t k = 0; k < 4; ++k) EXPECT_NEAR(got[k], want[k], 1e-9) << "a=" << a;
    EXPECT_GE(got[0], -1e-9);

    const BlochMap m = build_phi(a, th, ph);
    const double h = std::sqrt(1 - a * a);
    expect_vec_near(m.apply(Vec3{a, 0, h}), {a, 0, std::cos(th) / 2 * (1 - a)}, 1e-12);
    expect_vec_near(m.apply(Vec3{a, 0, -h}), {a, 0, std::cos(th) / 2 * (1 - a)}, 1e-12);
    expect_vec_near(m.apply(Vec3{-1, 0, 0}),
                    {std::cos(ph) * std::sin(th), std::sin(ph) * std::sin(th), std::cos(th)}, 1e-12);
  }
}

TEST(Qubit, PhiChannelMatchesBlochAction) {
  Rng rng(103);
  const BlochMap m = build_phi(0.4, 1.1, 0.7);
  const Channel ch = to_channel(m);
  EXPECT_TRUE(ch.trace_preserving(1e-9));
  for (int trial = 0; trial < 20; ++trial) {
    const CMatrix rho = random_density(2, rng, 2).mat();
    expect_vec_near(bloch(ch.apply(rho)), m.apply(bloch(rho)), 1e-10);
  }
}

TEST(Qubit, PhiIsMaximallyFreeButNotAlwaysFree) {
  Rng rng(104);
  for (int trial = 0; trial < 20; ++trial) {
    const double a = uniform(rng, 0.05, 0.95);
    const double th = uniform(rng, 0.0, kPi);
    if (std::abs(th - kPi / 2) < 0.05) continue;
    const FreeBasis b = symmetric_qubit_basis(a);
    EXPECT_TRUE(is_mfo(to_channel(build_phi(a, th, uniform(rng, 0, 2 * kPi))), b, 1e-8));
    // One operator of each type with random coefficients.
    QubitKrausGroups g;
    g.type1 = {{gauss(rng), gauss(rng)}};
    g.type2 = {{gauss(rng), gauss(rng)}};
    g.type3 = {{gauss(rng), gauss(rng)}};
    g.type4 = {{gauss(rng), gauss(rng)}};
    const auto res = phi_diagonal_residuals(a, th, g);
    EXPECT_NEAR(res.summed, std::cos(th) * (1 - a), 1e-12);
    EXPECT_GT(std::abs(res.summed), 0.0);
  }
}

TEST(Qubit, FreeDecompositionReconstructsChannel) {
  Rng rng(105);
  for (double a : {0.5, 0.8}) {
    const BlochMap m = build_phi(a, kPi / 4, 0.0);
    const FreeDecomposition dec = free_kraus_decomposition(choi(m), a);
    ASSERT_TRUE(dec.exists) << "a=" << a;
    const FreeBasis b = symmetric_qubit_basis(a);
    for (const CMatrix& k : dec.kraus) EXPECT_TRUE(is_free_kraus(k, b, 1e-7));
    const Channel ch(dec.kraus);
    EXPECT_TRUE(ch.trace_preserving(1e-7));
    for (int trial = 0; trial < 10; ++trial) {
      const CMatrix rho = random_density(2, rng, 2).mat();
      expect_vec_near(bloch(ch.apply(rho)), m.apply(bloch(rho)), 1e-7);
    }
  }
  // Orthonormal limit: every free operator is incoherent, and Phi creates
  // coherence from the maximally mixed state.
  EXPECT_FALSE(free_kraus_decomposition(choi(build_phi(0.0, kPi / 4, 0.0)), 0.0).exists);
}

TEST(Qubit, FreeKrausTypes) {
  for (double a : {0.0, 0.3, 0.5, 0.9}) {
    const FreeBasis b = symmetric_qubit_basis(a);
    EXPECT_LE(max_abs(free_qubit_kraus(QubitKrausKind::GammaDelta, 1.0, 1.0, a) -
                      CMatrix::identity(2)),
              1e-12);
    const CMatrix swap = free_qubit_kraus(QubitKrausKind::EpsilonXi, 1.0, 1.0, a);
    EXPECT_LE(gap(swap * b.vector(0), b.vector(1)), 1e-12);
    EXPECT_LE(gap(swap * b.vector(1), b.vector(0)), 1e-12);
  }
  const FreeBasis half = symmetric_qubit_basis(0.5);
  const CMatrix k1 = free_qubit_kraus(QubitKrausKind::AlphaBeta, 1.0, 0.0, 0.5);
  EXPECT_LE(gap(k1 * half.vector(0), half.vector(0)), 1e-12);
  EXPECT_LE(gap(k1 * half.vector(1)), 1e-12);

  Rng rng(106);
  for (int trial = 0; trial < 40; ++trial) {
    const double a = uniform(rng, 0.0, 0.95);
    const FreeBasis b = symmetric_qubit_basis(a);
    const Complex x = gauss(rng), y = gauss(rng);
    const auto kind = static_cast<QubitKrausKind>(1 + trial % 4);
    const CMatrix k = free_qubit_kraus(kind, x, y, a);
    EXPECT_TRUE(is_free_kraus(k, b, 1e-9));
    const CVector k1v = k * b.vector(0), k2v = k * b.vector(1);
    // c1 -> x c_t1 and c2 -> y c_t2, with targets fixed by the type.
    const std::size_t t1 = kind == QubitKrausKind::MuNu || kind == QubitKrausKind::EpsilonXi ? 1 : 0;
    const std::size_t t2 = kind == QubitKrausKind::AlphaBeta || kind == QubitKrausKind::EpsilonXi ? 0 : 1;
    EXPECT_LE(gap(k1v, scaled(b.vector(t1), x)), 1e-10);
    EXPECT_LE(gap(k2v, scaled(b.vector(t2), y)), 1e-10);
  }
}

TEST(Qubit, GenerationFromMaximalSuperposition) {
  Rng rng(107);
  const PureState m2 = maximal_superposition_state();
  for (int trial = 0; trial < 100; ++trial) {
    const double a = trial == 0 ? 0.5 : uniform(rng, 0.0, 0.95);
    const double th = trial == 0 ? kPi / 2 : uniform(rng, 0.0, kPi);
    const double ph = trial == 0 ? 0.0 : uniform(rng, 0.0, 2 * kPi);
    const FreeBasis b = symmetric_qubit_basis(a);
    const Channel ch = generate_from_m2(th, ph, a);
    ASSERT_EQ(ch.kraus().size(), 4u);
    EXPECT_TRUE(ch.trace_preserving(1e-9));
    for (const CMatrix& k : ch.kraus()) EXPECT_TRUE(is_free_kraus(k, b, 1e-9));
    const PureState target = qubit_state(th, ph);
    const CVector half = scaled(target.amp(), 1.0 / std::sqrt(2.0));
    EXPECT_LE(gap(ch.kraus()[0] * m2.amp()), 1e-10);
    EXPECT_LE(gap(ch.kraus()[2] * m2.amp()), 1e-10);
    EXPECT_LE(gap(ch.kraus()[1] * m2.amp(), half), 1e-10);
    EXPECT_LE(gap(ch.kraus()[3] * m2.amp(), half), 1e-10);
  }
  // Self-map.
  const Channel self = generate_from_m2(kPi / 2, kPi, 0.4);
  EXPECT_LE(max_abs(self.apply(m2.projector()) - m2.projector()), 1e-10);
}

TEST(Qubit, MixedTargetsByConvexMixing) {
  Rng rng(108);
  const double a = 0.6;
  const PureState m2 = maximal_superposition_state();
  for (int trial = 0; trial < 10; ++trial) {
    const std::vector<double> w = random_simplex(3, rng);
    std::vector<CMatrix> ops;
    CMatrix want(2, 2);
    for (std::size_t i = 0; i < 3; ++i) {
      const double th = uniform(rng, 0, kPi), ph = uniform(rng, 0, 2 * kPi);
      const Channel part = generate_from_m2(th, ph, a);
      for (const CMatrix& k : part.kraus()) ops.push_back(k * std::sqrt(w[i]));
      want += qubit_state(th, ph).projector() * w[i];
    }
    EXPECT_LE(max_abs(Channel(ops).apply(m2.projector()) - want), 1e-10);
  }
}

TEST(Qubit, MaximalSuperpositionIsUniqueGridArgmax) {
  for (double a : {0.2, 0.5, 0.8}) {
    double best = -1.0;
    int best_i = -1, best_j = -1, ties = 0;
    for (int i = 0; i < 100; ++i) {
      for (int j = 0; j < 100; ++j) {
        const double th = kPi * i / 100.0, ph = 2 * kPi * j / 100.0;
        const Vec3 r{std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th)};
        const double dist = distance_to_free_segment(r, a);
        if (dist > best + 1e-12) {
          best = dist;
          best_i = i;
          best_j = j;
          ties = 0;
        } else if (std::abs(dist - best) <= 1e-12) {
          ++ties;
        }
      }
    }
    EXPECT_EQ(best_i, 50);
    EXPECT_EQ(best_j, 50);
    EXPECT_EQ(ties, 0);
    EXPECT_NEAR(best, 1.0 + a, 1e-12);
  }
}

TEST(Qubit, UnitaryInjection) {
  Rng rng(109);
  const PureState m2 = maximal_superposition_state();
  for (int trial = 0; trial < 100; ++trial) {
    const double a = trial == 0 ? 0.5 : uniform(rng, 0.0, 0.95);
    const CMatrix u = random_unitary(2, rng);
    const Channel ch = inject_unitary(u, a);
    const FreeBasis b = symmetric_qubit_basis(a);
    const FreeBasis pair = product_basis(b, b);
    EXPECT_TRUE(ch.trace_preserving(1e-9));
    for (const CMatrix& k : ch.kraus()) EXPECT_TRUE(is_free_kraus(k, pair, 1e-8));

    const CMatrix f0 = ch.kraus()[0], f1 = ch.kraus()[1];
    const Eigen::VectorXd ev = eigen_eigenvalues(f0.adjoint() * f0 + f1.adjoint() * f1);
    const double r = (1 - a) / (1 + a);
    EXPECT_NEAR(ev[0], r * r, 1e-9);
    for (std::size_t k = 1; k < 4; ++k) EXPECT_NEAR(ev[k], 1.0, 1e-9);

    for (std::size_t s = 0; s < 2; ++s) {
      CVector e(2);
      e[s] = 1.0;
      const CVector in = kron(e, m2.amp());
      const CVector us = u * e;
      EXPECT_LE(gap(f0 * in, scaled(kron(us, b.vector(0)), 1 / std::sqrt(2.0))), 1e-9);
      EXPECT_LE(gap(f1 * in, scaled(kron(us, b.vector(1)), 1 / std::sqrt(2.0))), 1e-9);
      for (std::size_t k = 2; k < ch.kraus().size(); ++k) {
        EXPECT_LE(gap(ch.kraus()[k] * in), 1e-9);
      }
    }

    const CMatrix rho = random_density(2, rng, 2).mat();
    const CMatrix out = partial_trace_second(ch.apply(kron(rho, m2.projector())), 2, 2);
    EXPECT_LE(max_abs(out - u * rho * u.adjoint()), 1e-8);
  }
  const Channel plain = inject_unitary(CMatrix::identity(2), 0.0);
  EXPECT_EQ(plain.kraus().size(), 2u);
  EXPECT_THROW(inject_unitary(CMatrix{{1.0, 1.0}, {0.0, 1.0}}, 0.5), Error);
}

TEST(Qubit, HeatmapQualitative) {
  const double a = 0.5;
  const FreeBasis b = symmetric_qubit_basis(a);
  const PureState initial = qubit_state(kPi / 2, 0.0);
  EXPECT_NEAR(qubit_conversion_probability(initial, initial, b), 1.0, 1e-6);
  EXPECT_NEAR(qubit_conversion_probability(initial, PureState(b.vector(0)), b), 1.0, 0.0);
  EXPECT_NEAR(qubit_conversion_probability(initial, PureState(b.vector(1)), b), 1.0, 0.0);

  const auto cells = conversion_heatmap(a, kPi / 2, 0.0, 8);
  ASSERT_EQ(cells.size(), 8u * 16u);
  for (const HeatmapCell& c : cells) {
    ASSERT_TRUE(std::isfinite(c.p));
    EXPECT_GE(c.p, -1e-9);
    EXPECT_LE(c.p, 1.0 + 1e-6);
    const bool self = std::abs(c.theta - kPi / 2) < 1e-12 && c.phi == 0.0;
    if (self) {
      EXPECT_NEAR(c.p, 1.0, 1e-6);
    } else {
      EXPECT_LT(c.p, 1.0 - 1e-6) << c.theta << " " << c.phi;
    }
  }
  EXPECT_THROW(conversion_heatmap(a, 0.0, 0.0, 4), Error);
}

}  // namespace
}  // namespace superpose
