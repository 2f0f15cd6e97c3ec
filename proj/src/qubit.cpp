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

#include "condbell/qubit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>

#include "condbell/error.hpp"
#include "condbell/search.hpp"

namespace condbell {

namespace {

using cd = std::complex<double>;

double normalize_degrees(double degrees) {
  if (!std::isfinite(degrees)) {
    throw Error(ErrorCode::InvalidArgument, "angle must be finite");
  }
  double d = std::fmod(degrees, 360.0);
  if (d < 0.0) d += 360.0;
  if (d >= 360.0) d = 0.0;
  return d;
}

}  // namespace

PlanarObservable::PlanarObservable(double degrees) : degrees_(normalize_degrees(degrees)) {}

double PlanarObservable::radians() const noexcept {
  return degrees_ * std::numbers::pi / 180.0;
}

DensityMatrix2 DensityMatrix2::maximally_mixed() {
  Matrix2c m = Matrix2c::Identity() * 0.5;
  return DensityMatrix2(m);
}

DensityMatrix2 DensityMatrix2::from_bloch(double x, double y, double z) {
  const double norm = std::sqrt(x * x + y * y + z * z);
  if (!std::isfinite(norm) || norm > 1.0 + kExactTolerance) {
    throw Error(ErrorCode::InvalidState,
                "Bloch vector length " + std::to_string(norm) + " exceeds 1");
  }
  Matrix2c m;
  m << cd(0.5 * (1.0 + z), 0.0), cd(0.5 * x, -0.5 * y), cd(0.5 * x, 0.5 * y),
      cd(0.5 * (1.0 - z), 0.0);
  return DensityMatrix2(m);
}

DensityMatrix2 DensityMatrix2::from_matrix(const Matrix2c& m) {
  if (!m.allFinite()) throw Error(ErrorCode::InvalidState, "density matrix is not finite");
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > kExactTolerance) {
    throw Error(ErrorCode::InvalidState, "density matrix is not Hermitian");
  }
  const cd tr = m.trace();
  if (std::abs(tr - cd(1.0, 0.0)) > kExactTolerance) {
    throw Error(ErrorCode::InvalidState, "density matrix trace is not 1");
  }
  const Matrix2c h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix2c> es(h, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -kExactTolerance) {
    throw Error(ErrorCode::InvalidState, "density matrix is not positive semidefinite");
  }
  return DensityMatrix2(h);
}

std::array<double, 3> DensityMatrix2::bloch() const noexcept {
  // rho = (I + r.sigma)/2  =>  x = 2 Re rho10, y = 2 Im rho10, z = rho00 - rho11
  return {2.0 * rho_(1, 0).real(), 2.0 * rho_(1, 0).imag(),
          rho_(0, 0).real() - rho_(1, 1).real()};
}

bool DensityMatrix2::is_maximally_mixed() const noexcept {
  const auto r = bloch();
  return std::sqrt(r[0] * r[0] + r[1] * r[1] + r[2] * r[2]) <= kExactTolerance;
}

const PlanarObservable& QubitExperiment::observable(Observable o) const noexcept {
  switch (o) {
    case Observable::A: return theta_a;
    case Observable::B: return theta_b;
    case Observable::C: return theta_c;
  }
  return theta_a;
}

MarginalVector QubitExperiment::marginals() const {
  return MarginalVector{{born_probability(state, theta_a, Outcome::Plus),
                         born_probability(state, theta_b, Outcome::Plus),
                         born_probability(state, theta_c, Outcome::Plus)}};
}

Matrix2c projector(const PlanarObservable& obs, Outcome outcome) {
  const double th = obs.radians();
  const double c = std::cos(th);
  const double s = std::sin(th);
  Matrix2c spin;
  spin << cd(c, 0.0), cd(s, 0.0), cd(s, 0.0), cd(-c, 0.0);
  const double sign = outcome == Outcome::Plus ? 1.0 : -1.0;
  return 0.5 * (Matrix2c::Identity() + sign * spin);
}

double born_probability(const DensityMatrix2& rho, const PlanarObservable& obs,
                        Outcome outcome) {
  const double p = (projector(obs, outcome) * rho.matrix()).trace().real();
  return std::clamp(p, 0.0, 1.0);
}

DensityMatrix2 post_measurement_state(const DensityMatrix2& rho, const PlanarObservable& obs,
                                      Outcome outcome) {
  const Matrix2c p = projector(obs, outcome);
  const double prob = (p * rho.matrix()).trace().real();
  if (prob <= kExactTolerance) {
    throw Error(ErrorCode::ZeroConditioningEvent,
                "post-selected measurement branch has zero probability");
  }
  const Matrix2c updated = p * rho.matrix() * p / prob;
  return DensityMatrix2::from_matrix(0.5 * (updated + updated.adjoint()));
}

double sequential_conditional(const QubitExperiment& exp, Observable first,
                              Outcome first_outcome, Observable second) {
  if (first == second) {
    throw Error(ErrorCode::SameObservable,
                "sequential measurement needs two distinct questions");
  }
  const DensityMatrix2 after =
      post_measurement_state(exp.state, exp.observable(first), first_outcome);
  return born_probability(after, exp.observable(second), Outcome::Plus);
}

ConditionalTriple exact_conditional_triple(const QubitExperiment& exp) {
  ConditionalTriple t;
  t.p_a_given_b_plus = sequential_conditional(exp, Observable::B, Outcome::Plus, Observable::A);
  t.p_c_given_b_minus =
      sequential_conditional(exp, Observable::B, Outcome::Minus, Observable::C);
  t.p_a_given_c_plus = sequential_conditional(exp, Observable::C, Outcome::Plus, Observable::A);
  return t;
}

ViolationMaximum maximize_violation(double grid_step, int refine_iterations) {
  if (!std::isfinite(grid_step) || grid_step <= 0.0 || grid_step > 30.0) {
    throw Error(ErrorCode::InvalidGridStep,
                "grid step must lie in (0, 30] degrees, got " + std::to_string(grid_step));
  }
  if (refine_iterations < 0) {
    throw Error(ErrorCode::InvalidArgument, "refine iterations must be nonnegative");
  }
  // x = theta_a - theta_b, y = theta_c - theta_b, theta_b = 0.
  const auto delta_at = [](Point2 p) {
    QubitExperiment exp{PlanarObservable(p.x), PlanarObservable(0.0), PlanarObservable(p.y)};
    return cond_bell_delta(exact_conditional_triple(exp)).delta;
  };
  const auto nodes = static_cast<std::size_t>(std::ceil(360.0 / grid_step - 1e-9));
  const SearchResult coarse = grid_maximize(delta_at, {0.0, 0.0}, grid_step, nodes, nodes);
  const SearchResult fine =
      coordinate_ascent(delta_at, coarse.arg, grid_step, refine_iterations);
  return ViolationMaximum{PlanarObservable(fine.arg.x), PlanarObservable(0.0),
                          PlanarObservable(fine.arg.y), fine.value};
}

}  // namespace condbell
