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

#ifndef CONDBELL_QUBIT_HPP
#define CONDBELL_QUBIT_HPP

#include <array>
#include <optional>

#include <Eigen/Dense>

#include "condbell/probability.hpp"

namespace condbell {

using Matrix2c = Eigen::Matrix2cd;

/// Spin-1/2 projection along a direction in the x-z plane of the Bloch
/// sphere, at `degrees` from +z towards +x. Stored normalized to [0, 360).
class PlanarObservable {
 public:
  PlanarObservable() = default;
  explicit PlanarObservable(double degrees);

  double degrees() const noexcept { return degrees_; }
  double radians() const noexcept;

  bool operator==(const PlanarObservable&) const = default;

 private:
  double degrees_ = 0.0;
};

/// Qubit density matrix: Hermitian, unit trace, positive semidefinite
/// (all within 1e-12).
class DensityMatrix2 {
 public:
  /// diag(1/2, 1/2).
  static DensityMatrix2 maximally_mixed();
  /// (I + x X + y Y + z Z) / 2; requires |(x,y,z)| <= 1.
  static DensityMatrix2 from_bloch(double x, double y, double z);
  /// Throws ErrorCode::InvalidState unless `m` is a valid density matrix.
  static DensityMatrix2 from_matrix(const Matrix2c& m);

  const Matrix2c& matrix() const noexcept { return rho_; }
  std::array<double, 3> bloch() const noexcept;
  bool is_maximally_mixed() const noexcept;

 private:
  explicit DensityMatrix2(const Matrix2c& m) : rho_(m) {}
  Matrix2c rho_;
};

/// Three questions as spin projections plus the population's initial state.
struct QubitExperiment {
  PlanarObservable theta_a;
  PlanarObservable theta_b;
  PlanarObservable theta_c;
  DensityMatrix2 state = DensityMatrix2::maximally_mixed();

  const PlanarObservable& observable(Observable o) const noexcept;
  /// Single-question P(u=+1) = Tr(P_u+ rho). All equal 1/2 for the mixed state.
  MarginalVector marginals() const;
};

/// Rank-1 projector onto the `outcome` eigenspace of the spin operator
/// cos(theta) Z + sin(theta) X.
Matrix2c projector(const PlanarObservable& obs, Outcome outcome);

/// Born probability Tr(P rho).
double born_probability(const DensityMatrix2& rho, const PlanarObservable& obs,
                        Outcome outcome);

/// Lueders update: P rho P / Tr(P rho).
/// Throws ErrorCode::ZeroConditioningEvent if Tr(P rho) <= 1e-12.
DensityMatrix2 post_measurement_state(const DensityMatrix2& rho, const PlanarObservable& obs,
                                      Outcome outcome);

/// P(second=+1 | first=first_outcome) for the sequence: measure `first`,
/// keep the `first_outcome` branch, update the state, measure `second`.
/// Throws SameObservable if first == second and ZeroConditioningEvent if the
/// kept branch has zero probability.
double sequential_conditional(const QubitExperiment& exp, Observable first,
                              Outcome first_outcome, Observable second);

/// (P(a+|b+), P(c+|b-), P(a+|c+)) by sequential measurement.
ConditionalTriple exact_conditional_triple(const QubitExperiment& exp);

struct ViolationMaximum {
  PlanarObservable theta_a;
  PlanarObservable theta_b;
  PlanarObservable theta_c;
  double delta_max = 0.0;
};

/// Searches planar directions, maximally mixed state, for the largest
/// P(a+|c+) - P(a+|b+) - P(c+|b-). theta_b is pinned at 0 (the triple only
/// depends on angle differences); a grid over the two differences with
/// spacing `grid_step` degrees is refined by `refine_iterations` rounds of
/// compass search. Ties go to the lexicographically smallest pair.
/// Throws ErrorCode::InvalidGridStep unless 0 < grid_step <= 30.
ViolationMaximum maximize_violation(double grid_step, int refine_iterations);

}  // namespace condbell

#endif  // CONDBELL_QUBIT_HPP
