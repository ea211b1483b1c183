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

// Optimal free conversion of the four d = 3 candidate states into |1>, with
// the dual certificate that bounds each probability.

#include <cstdio>

#include "superpose/superpose.hpp"

int main() {
  using namespace superpose;
  const FreeBasis basis = half_overlap_basis_3d();
  const PureState target = d3_target_state();

  const CMatrix lambda = (16.0 / 17.0 / 3.0) * CMatrix::identity(3);
  int k = 0;
  for (const PureState& psi : candidate_states_d3()) {
    const TransformerSet set = enumerate_transformers(psi, target, basis);
    const ConversionResult r = max_conversion_prob(psi, target, basis);
    const DualCheck cert = verify_dual(lambda, conversion_problem(set));
    std::printf("candidate %d: p_max = %.9f  gap = %.2e  certificate %s bound %.9f\n", k++,
                r.probability, r.solution.gap, cert.feasible ? "valid," : "invalid,",
                cert.bound);
  }

  // Qubit: every target is reachable from the maximal superposition state.
  const double a = 0.5;
  const Channel ch = generate_from_m2(1.0, 0.3, a);
  const DensityMatrix out =
      apply_channel(ch, DensityMatrix(maximal_superposition_state()));
  const BlochVector r = BlochVector::from_density(out);
  std::printf("m2 -> (theta, phi) = (1, 0.3): Bloch (%.6f, %.6f, %.6f)\n", r.r[0], r.r[1],
              r.r[2]);
  return 0;
}
