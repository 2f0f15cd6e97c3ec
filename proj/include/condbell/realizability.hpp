// Copyright 2026 The condbell Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CONDBELL_REALIZABILITY_HPP
#define CONDBELL_REALIZABILITY_HPP

#include <array>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "condbell/probability.hpp"
#include "condbell/random.hpp"

namespace condbell {

/// Whether a conditional triple admits a classical joint distribution with
/// symmetric marginals reproducing it.
///
/// feasible  => witness holds such a distribution and max_violation == 0.
/// !feasible => no witness; max_violation > 0 is the smallest amount by which
///              the three measured pair probabilities must each be allowed to
///              move for a joint to exist.
struct RealizabilityVerdict {
  bool feasible = false;
  std::optional<JointPmf> witness;
  double max_violation = 0.0;
};

/// Decides realizability exactly: the seven linear equalities (unit mass,
/// three marginals of 1/2, three pair probabilities t_i / 2) are reduced by
/// Gauss-Jordan elimination, the remaining null space is parametrized and
/// intersected with the nonnegativity half-spaces. The witness is the
/// centroid of the feasible set, so it lies in its relative interior.
RealizabilityVerdict realize(const ConditionalTriple& t);

/// Half-space `normal . t <= bound` over (P(a+|b+), P(c+|b-), P(a+|c+)).
struct HalfSpace {
  std::array<double, 3> normal{};
  double bound = 0.0;

  double slack(const ConditionalTriple& t) const noexcept {
    return bound - (normal[0] * t.p_a_given_b_plus + normal[1] * t.p_c_given_b_minus +
                    normal[2] * t.p_a_given_c_plus);
  }
};

/// Facets of the realizable region inside the unit cube. The first one is the
/// conditional Bell inequality itself; the other three are its relabelings
/// plus the upper cut x + y + z <= 2.
const std::array<HalfSpace, 4>& realizable_facets() noexcept;

/// Random joint with all three marginals equal to 1/2: a Dirichlet(1,1,1,1)
/// draw over the four antipodal pairs {s, -s}, each split evenly.
JointPmf random_symmetric_joint(std::uint64_t seed);

struct LatentTriple {
  Outcome a = Outcome::Plus;
  Outcome b = Outcome::Plus;
  Outcome c = Outcome::Plus;

  Outcome operator[](Observable o) const noexcept {
    switch (o) {
      case Observable::A: return a;
      case Observable::B: return b;
      case Observable::C: return c;
    }
    return a;
  }
  bool operator==(const LatentTriple&) const = default;
};

/// Draws one atom with probability equal to its mass.
LatentTriple sample_latent_triple(const JointPmf& pmf, RandomStream& rng) noexcept;

namespace detail {

/// Result of intersecting {x : A x = b} with the nonnegative orthant when the
/// affine solution set has dimension at most two.
struct NonnegativeSolution {
  bool consistent = true;           // A x = b has a solution at all
  std::size_t null_dimension = 0;   // dimension of the affine solution set
  std::optional<std::vector<double>> point;  // centroid of the feasible set
};

/// Throws ErrorCode::InvalidState if the null space has dimension > 2.
NonnegativeSolution nonnegative_centroid(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                                         double tol = kExactTolerance);

}  // namespace detail

}  // namespace condbell

#endif  // CONDBELL_REALIZABILITY_HPP
