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
#include <numbers>
#include <optional>
#include <vector>

#include "superpose/kraus.hpp"

namespace superpose {

/// Counter-based SplitMix64: output k is mix(seed + (k + 1) * golden_gamma).
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  std::size_t below(std::size_t n) {
    return static_cast<std::size_t>(uniform() * static_cast<double>(n));
  }

 private:
  std::uint64_t state_;
};

struct GameSpec {
  FreeBasis basis;
  double p = 1.0;
  std::vector<CMatrix> outcomes;    // K_1 .. K_d
  std::vector<CMatrix> completion;  // the K_0 family

  std::size_t dim() const { return basis.dim(); }
};

inline GameSpec build_game(const FreeBasis& basis) {
  const std::size_t d = basis.dim();
  GameSpec spec{basis, filter_probability(basis), {}, {}};
  const double scale = std::sqrt(spec.p / static_cast<double>(d));
  for (std::size_t n = 1; n <= d; ++n) {
    CMatrix k(d, d);
    for (std::size_t j = 1; j <= d; ++j) {
      const double angle = 2.0 * std::numbers::pi * static_cast<double>(j * n) / static_cast<double>(d);
      k += scale * std::polar(1.0, angle) *
           outer(basis.vector(j - 1), basis.reciprocal_vector(j - 1));
    }
    spec.outcomes.push_back(std::move(k));
  }
  spec.completion = complete_free(spec.outcomes, basis);
  return spec;
}

inline Channel game_channel(const GameSpec& spec) {
  std::vector<CMatrix> all = spec.completion;
  all.insert(all.end(), spec.outcomes.begin(), spec.outcomes.end());
  return Channel(std::move(all));
}

/// (1/N) sum_j |c_j> with N^2 = sum_ij <c_i|c_j>.
inline PureState superposed_input(const FreeBasis& basis) {
  CVector v(basis.dim(), 0.0);
  for (std::size_t j = 0; j < basis.dim(); ++j) {
    const CVector c = basis.vector(j);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += c[i];
  }
  return PureState::normalized(std::move(v));
}

struct GameOutcome {
  std::size_t n = 0;  // 1..d
  double probability = 0.0;
  PureState state;
};

/// Probabilities and post-measurement states of outcomes n = 1..d.
inline std::vector<GameOutcome> outcome_states(const GameSpec& spec, const PureState& input) {
  std::vector<GameOutcome> out;
  for (std::size_t n = 0; n < spec.outcomes.size(); ++n) {
    const CVector v = spec.outcomes[n] * input.amp();
    const double len = norm(v);
    if (len * len < 1e-12) continue;
    out.push_back({n + 1, len * len, PureState::normalized(v)});
  }
  return out;
}

/// Zero-error discrimination of linearly independent pure states. Element n is
/// s |r_n><r_n| with r_n the reciprocal frame of the ensemble, s the largest
/// factor keeping the inconclusive element positive.
class UnambiguousDiscriminator {
 public:
  explicit UnambiguousDiscriminator(const std::vector<PureState>& states) {
    if (states.empty()) {
      throw Error(ErrorKind::LinearlyDependentEnsemble, "empty ensemble");
    }
    std::vector<CVector> cols;
    for (const PureState& s : states) cols.push_back(s.amp());
    const CMatrix phi = CMatrix::from_columns(cols);
    if (phi.cols() > phi.rows() || singular_values(phi).back() <= 1e-8) {
      throw Error(ErrorKind::LinearlyDependentEnsemble, "states are not linearly independent");
    }
    const CMatrix recip = phi * inverse(phi.adjoint() * phi);
    const double top = eigenvalues(hermitian_part(recip * recip.adjoint())).back();
    for (std::size_t n = 0; n < recip.cols(); ++n) {
      const CVector r = recip.column(n);
      elements_.push_back(outer(r, r) / top);
    }
  }

  const std::vector<CMatrix>& elements() const noexcept { return elements_; }

  /// Index of the identified state, or nothing on an inconclusive result.
  std::optional<std::size_t> measure(const PureState& received, SplitMix64& rng) const {
    const double u = rng.uniform();
    double acc = 0.0;
    for (std::size_t n = 0; n < elements_.size(); ++n) {
      acc += inner(received.amp(), elements_[n] * received.amp()).real();
      if (u < acc) return n;
    }
    return std::nullopt;
  }

 private:
  std::vector<CMatrix> elements_;
};

inline std::optional<std::size_t> discriminate(const std::vector<PureState>& states,
                                               const PureState& received,
                                               std::uint64_t rng_seed) {
  SplitMix64 rng(rng_seed);
  return UnambiguousDiscriminator(states).measure(received, rng);
}

enum class GameInput { Free, Superposed };

struct GameStats {
  std::uint64_t turns = 0;
  std::uint64_t conclusive_turns = 0;
  std::uint64_t wins = 0;
  std::uint64_t losses = 0;
  std::uint64_t restarts = 0;  // Alice measured n = 0

  double win_rate() const {
    const auto answered = wins + losses;
    return answered == 0 ? 0.0 : static_cast<double>(wins) / static_cast<double>(answered);
  }
};

/// One turn: Alice applies the selective operation until she obtains some
/// n >= 1 (n = 0 restarts the turn), then Bob names n. With the superposed
/// input Bob answers only on a conclusive discrimination result; with the free
/// input (each turn a uniformly random |c_j>) the post-measurement state
/// carries no information and Bob guesses uniformly.
inline GameStats simulate(const GameSpec& spec, GameInput input, std::uint64_t turns,
                          std::uint64_t rng_seed) {
  if (turns == 0) throw Error(ErrorKind::InvalidArgument, "turns must be at least 1");
  const std::size_t d = spec.dim();
  SplitMix64 rng(rng_seed);
  const PureState phi = superposed_input(spec.basis);
  std::vector<PureState> family;
  std::vector<std::size_t> labels;
  for (const auto& o : outcome_states(spec, phi)) {
    family.push_back(o.state);
    labels.push_back(o.n);
  }
  const UnambiguousDiscriminator bob(family);

  GameStats stats;
  for (std::uint64_t turn = 0; turn < turns; ++turn) {
    ++stats.turns;
    const PureState sent =
        input == GameInput::Superposed ? phi : PureState(spec.basis.vector(rng.below(d)));
    const auto outcomes = outcome_states(spec, sent);
    std::size_t n = 0;
    std::optional<PureState> post;
    for (int attempt = 0; attempt < 1'000'000 && n == 0; ++attempt) {
      const double u = rng.uniform();
      double acc = 0.0;
      for (const auto& o : outcomes) {
        acc += o.probability;
        if (u < acc) {
          n = o.n;
          post = o.state;
          break;
        }
      }
      if (n == 0) ++stats.restarts;
    }
    if (n == 0) continue;
    std::size_t answer = 0;
    if (input == GameInput::Superposed) {
      const auto guess = bob.measure(*post, rng);
      if (!guess) continue;
      answer = labels[*guess];
    } else {
      answer = rng.below(d) + 1;
    }
    ++stats.conclusive_turns;
    if (answer == n) ++stats.wins; else ++stats.losses;
  }
  return stats;
}

}  // namespace superpose
