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

#include "support.hpp"

namespace superpose {
namespace {

using namespace testing;

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorKind::InvalidArgument;
}

void expect_transformers_valid(const TransformerSet& set, const PureState& psi,
                               const PureState& phi, const FreeBasis& b) {
  for (const CMatrix& f : set.operators) {
    const CVector out = f * psi.amp();
    for (std::size_t i = 0; i < out.size(); ++i) EXPECT_NEAR(std::abs(out[i] - phi[i]), 0.0, 1e-10);
    EXPECT_TRUE(is_free_kraus(f, b, 1e-9));
  }
}

TEST(Transform, RankOneSingleOperator) {
  const FreeBasis b = half_overlap_basis_3d();
  const PureState c1(b.vector(0));
  const TransformerSet set = enumerate_transformers(c1, c1, b);
  ASSERT_EQ(set.operators.size(), 1u);
  EXPECT_LE(frobenius_norm(set.operators[0] - outer(b.vector(0), b.reciprocal_vector(0))), 1e-12);
}

TEST(Transform, RankTwoAndThreeCounts) {
  Rng rng(61);
  const FreeBasis b = random_basis(3, rng);
  const PureState psi = random_pure_of_rank(b, 2, rng);
  const PureState phi = random_pure_of_rank(b, 2, rng);
  const TransformerSet two = enumerate_transformers(psi, phi, b);
  EXPECT_EQ(two.operators.size(), 2u);
  expect_transformers_valid(two, psi, phi, b);

  const FreeBasis h = half_overlap_basis_3d();
  for (const PureState& cand : candidate_states_d3()) {
    const TransformerSet six = enumerate_transformers(cand, d3_target_state(), h);
    EXPECT_EQ(six.operators.size(), 6u);
    expect_transformers_valid(six, cand, d3_target_state(), h);
    EXPECT_TRUE(std::is_sorted(six.assignments.begin(), six.assignments.end()));
  }
}

TEST(Transform, RandomTransformersAreValid) {
  Rng rng(62);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t d = 2 + trial % 3;
    const std::size_t r = 1 + trial % d;
    const FreeBasis b = random_basis(d, rng);
    const PureState psi = random_pure_of_rank(b, r, rng);
    const PureState phi = random_pure_of_rank(b, r, rng);
    const TransformerSet set = enumerate_transformers(psi, phi, b);
    std::size_t fact = 1;
    for (std::size_t k = 2; k <= r; ++k) fact *= k;
    EXPECT_EQ(set.operators.size(), fact);
    expect_transformers_valid(set, psi, phi, b);
  }
}

TEST(Transform, Refusals) {
  const FreeBasis b = half_overlap_basis_3d();
  EXPECT_EQ(kind_of([&] {
              enumerate_transformers(PureState(b.vector(0)), d3_target_state(), b);
            }),
            ErrorKind::RankMismatch);
  EXPECT_EQ(kind_of([&] {
              max_conversion_prob(PureState(b.vector(0)), d3_target_state(), b);
            }),
            ErrorKind::RankMismatch);
  const FreeBasis big = orthonormal_basis(6);
  const PureState e(CVector{1.0, 0.0, 0.0, 0.0, 0.0, 0.0});
  EXPECT_EQ(kind_of([&] { enumerate_transformers(e, e, big); }), ErrorKind::InvalidArgument);
}

TEST(Transform, SelfConversionIsDeterministic) {
  Rng rng(63);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t d = 2 + trial % 3;
    const FreeBasis b = random_basis(d, rng);
    const PureState psi = random_pure(d, rng);
    const ConversionResult r = max_conversion_prob(psi, psi, b);
    EXPECT_NEAR(r.probability, 1.0, 1e-6);
    std::vector<CMatrix> all = r.kraus;
    all.insert(all.end(), r.completion.begin(), r.completion.end());
    CMatrix sum(d, d);
    for (const auto& k : all) {
      EXPECT_TRUE(is_free_kraus(k, b, 1e-8));
      sum += k.adjoint() * k;
    }
    EXPECT_LE(spectral_norm(sum - CMatrix::identity(d)), 1e-6);
  }
}

TEST(Transform, CoherenceLimitPlusToAnyCoherentState) {
  const FreeBasis b = orthonormal_basis(2);
  const PureState plus(CVector{1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)});
  Rng rng(64);
  for (int trial = 0; trial < 20; ++trial) {
    const PureState phi = random_pure(2, rng);
    // Oracle: K1 = diag(x0, x1), K2 = x0|0><1| + x1|1><0| is incoherent,
    // trace preserving, and sends |+> to |phi> in both branches.
    const CMatrix k1{{phi[0], 0.0}, {0.0, phi[1]}};
    const CMatrix k2{{0.0, phi[0]}, {phi[1], 0.0}};
    EXPECT_LE(frobenius_norm(k1.adjoint() * k1 + k2.adjoint() * k2 - CMatrix::identity(2)),
              1e-12);
    const CVector o1 = k1 * plus.amp(), o2 = k2 * plus.amp();
    EXPECT_NEAR(norm(o1) * norm(o1) + norm(o2) * norm(o2), 1.0, 1e-12);
    EXPECT_NEAR(std::abs(inner(o1, phi.amp())), norm(o1), 1e-12);
    EXPECT_NEAR(max_conversion_prob(plus, phi, b).probability, 1.0, 1e-6);
  }
}

TEST(Transform, CandidateStates) {
  const FreeBasis b = half_overlap_basis_3d();
  const auto cands = candidate_states_d3();
  ASSERT_EQ(cands.size(), 4u);
  for (const PureState& c : cands) {
    EXPECT_NEAR(norm(c.amp()), 1.0, 1e-10);
    EXPECT_EQ(superposition_rank(c, b), 3u);
    const CMatrix e = free_expansion(c, b).coeffs;
    double l1 = 0.0;
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j)
        if (i != j) l1 += std::abs(e(i, j));
    EXPECT_NEAR(l1, 4.0, 1e-10);
  }
}

TEST(Transform, RelabelingSymmetry) {
  Rng rng(65);
  for (int trial = 0; trial < 10; ++trial) {
    const FreeBasis b = random_basis(3, rng);
    const CVector x = random_vector(3, rng), y = random_vector(3, rng);
    const PureState psi = PureState::from_free_coefficients(b, x);
    const PureState phi = PureState::from_free_coefficients(b, y);
    const double base = max_conversion_prob(psi, phi, b).probability;
    const std::vector<std::size_t> perm{2, 0, 1};
    std::vector<CVector> cols;
    CVector xp(3), yp(3);
    for (std::size_t k = 0; k < 3; ++k) {
      cols.push_back(b.vector(perm[k]));
      xp[k] = x[perm[k]];
      yp[k] = y[perm[k]];
    }
    const FreeBasis pb(cols);
    const double permuted = max_conversion_prob(PureState::from_free_coefficients(pb, xp),
                                                PureState::from_free_coefficients(pb, yp), pb)
                                .probability;
    EXPECT_NEAR(base, permuted, 1e-7);
  }
}

TEST(Transform, ResidualsOfSimpleChannels) {
  QubitKrausGroups id;
  id.type2.push_back({1.0, 1.0});
  QubitKrausGroups flip;
  flip.type4.push_back({1.0, 1.0});
  for (double a : {0.0, 0.3, 0.8}) {
    for (const auto& g : {id, flip}) {
      const TpResiduals r = qubit_tp_residuals(g, a);
      EXPECT_NEAR(r.first, 0.0, 1e-15);
      EXPECT_NEAR(r.second, 0.0, 1e-15);
      EXPECT_NEAR(std::abs(r.cross), 0.0, 1e-15);
    }
  }
}

/// V^dag (sum K^dag K) V - G for operators in the computational frame.
CMatrix frame_defect(const QubitKrausGroups& g, double a) {
  const FreeBasis b = symmetric_qubit_basis(a);
  CMatrix sum(2, 2);
  auto add = [&](QubitKrausKind kind, const auto& list) {
    for (const auto& [x, y] : list) {
      const CMatrix k = free_qubit_kraus(kind, x, y, a);
      sum += k.adjoint() * k;
    }
  };
  add(QubitKrausKind::AlphaBeta, g.type1);
  add(QubitKrausKind::GammaDelta, g.type2);
  add(QubitKrausKind::MuNu, g.type3);
  add(QubitKrausKind::EpsilonXi, g.type4);
  return b.vectors().adjoint() * sum * b.vectors() - b.gram();
}

TEST(Transform, ResidualsOfIncoherentPair) {
  const double r = 1.0 / std::sqrt(2.0);
  QubitKrausGroups g;
  g.type1 = {{r, r}, {r, -r}};
  const TpResiduals res = qubit_tp_residuals(g, 0.5);
  EXPECT_NEAR(res.first, 0.0, 1e-15);
  EXPECT_NEAR(res.second, 0.0, 1e-15);
  EXPECT_NEAR(res.cross.real(), -0.5, 1e-15);
  EXPECT_NEAR(res.cross.imag(), 0.0, 1e-15);
  const CMatrix m = frame_defect(g, 0.5);
  EXPECT_NEAR(m(0, 0).real(), res.first, 1e-12);
  EXPECT_NEAR(m(1, 1).real(), res.second, 1e-12);
  EXPECT_NEAR(std::abs(m(0, 1) - res.cross), 0.0, 1e-12);
}

TEST(Transform, ResidualsMatchOperatorSums) {
  Rng rng(66);
  for (int trial = 0; trial < 200; ++trial) {
    const double a = uniform(rng, 0.0, 0.95);
    QubitKrausGroups g;
    for (auto* list : {&g.type1, &g.type2, &g.type3, &g.type4}) {
      const int count = static_cast<int>(uniform(rng, 0.0, 3.0));
      for (int n = 0; n < count; ++n) list->push_back({gauss(rng), gauss(rng)});
    }
    const TpResiduals res = qubit_tp_residuals(g, a);
    const CMatrix m = frame_defect(g, a);
    EXPECT_NEAR(m(0, 0).real(), res.first, 1e-9);
    EXPECT_NEAR(m(1, 1).real(), res.second, 1e-9);
    EXPECT_NEAR(std::abs(m(0, 1) - res.cross), 0.0, 1e-9);
  }
}

}  // namespace
}  // namespace superpose
