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

#include "condbell/probability.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "condbell/error.hpp"

namespace condbell {

Outcome outcome_from_int(long value) {
  if (value == 1) return Outcome::Plus;
  if (value == -1) return Outcome::Minus;
  throw Error(ErrorCode::InvalidArgument,
              "outcome must be +1 or -1, got " + std::to_string(value));
}

char label(Observable o) noexcept {
  switch (o) {
    case Observable::A: return 'a';
    case Observable::B: return 'b';
    case Observable::C: return 'c';
  }
  return '?';
}

JointPmf JointPmf::from_atoms(std::span<const double> atoms) {
  if (atoms.size() != kAtoms) {
    throw Error(ErrorCode::InvalidPmf,
                "joint pmf needs 8 atoms, got " + std::to_string(atoms.size()));
  }
  std::array<double, kAtoms> a{};
  double total = 0.0;
  for (std::size_t i = 0; i < kAtoms; ++i) {
    if (!std::isfinite(atoms[i]) || atoms[i] < 0.0) {
      throw Error(ErrorCode::InvalidPmf,
                  "atom " + std::to_string(i) + " is negative or not finite");
    }
    a[i] = atoms[i];
    total += atoms[i];
  }
  if (std::abs(total - 1.0) > kDataTolerance) {
    throw Error(ErrorCode::InvalidPmf,
                "atoms sum to " + std::to_string(total) + ", expected 1");
  }
  // Leave exactly-normalized input untouched so serialized pmfs round-trip.
  if (std::abs(total - 1.0) > kExactTolerance) {
    for (double& x : a) x /= total;
  }
  return JointPmf(a);
}

JointPmf JointPmf::uniform() {
  std::array<double, kAtoms> a{};
  a.fill(1.0 / kAtoms);
  return JointPmf(a);
}

JointPmf JointPmf::point_mass(Outcome a, Outcome b, Outcome c) {
  std::array<double, kAtoms> atoms{};
  atoms[index(a, b, c)] = 1.0;
  return JointPmf(atoms);
}

void ConditionalTriple::validate() const {
  for (double p : {p_a_given_b_plus, p_c_given_b_minus, p_a_given_c_plus}) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw Error(ErrorCode::InvalidArgument,
                  "conditional probability outside [0, 1]: " + std::to_string(p));
    }
  }
}

bool MarginalVector::symmetric() const noexcept {
  for (double p : p_plus) {
    if (!(std::abs(p - 0.5) <= kDataTolerance)) return false;
  }
  return true;
}

void MarginalVector::validate() const {
  for (double p : p_plus) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw Error(ErrorCode::InvalidArgument,
                  "marginal probability outside [0, 1]: " + std::to_string(p));
    }
  }
}

double marginal(const JointPmf& pmf, Observable which) noexcept {
  double sum = 0.0;
  for (std::size_t i = 0; i < JointPmf::kAtoms; ++i) {
    if (JointPmf::outcome_at(i, which) == Outcome::Plus) sum += pmf[i];
  }
  return sum;
}

MarginalVector marginals(const JointPmf& pmf) noexcept {
  return MarginalVector{{marginal(pmf, Observable::A), marginal(pmf, Observable::B),
                         marginal(pmf, Observable::C)}};
}

double pair_probability(const JointPmf& pmf, Event first, Event second) {
  if (first.observable == second.observable) {
    throw Error(ErrorCode::SameObservable,
                std::string("pair probability needs two distinct observables, got ") +
                    label(first.observable) + " twice");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < JointPmf::kAtoms; ++i) {
    if (JointPmf::outcome_at(i, first.observable) == first.outcome &&
        JointPmf::outcome_at(i, second.observable) == second.outcome) {
      sum += pmf[i];
    }
  }
  return sum;
}

double bayes_conditional(const JointPmf& pmf, Event target, Event given) {
  double denom = 0.0;
  for (std::size_t i = 0; i < JointPmf::kAtoms; ++i) {
    if (JointPmf::outcome_at(i, given.observable) == given.outcome) denom += pmf[i];
  }
  if (denom <= kExactTolerance) {
    throw Error(ErrorCode::ZeroConditioningEvent,
                std::string("conditioning event ") + label(given.observable) + "=" +
                    (given.outcome == Outcome::Plus ? "+1" : "-1") +
                    " has zero probability");
  }
  const double joint = pair_probability(pmf, target, given);
  return std::clamp(joint / denom, 0.0, 1.0);
}

WignerCheck wigner_check(const JointPmf& pmf) noexcept {
  WignerCheck w;
  w.lhs = pair_probability(pmf, {Observable::A, Outcome::Plus}, {Observable::B, Outcome::Plus}) +
          pair_probability(pmf, {Observable::B, Outcome::Minus}, {Observable::C, Outcome::Plus});
  w.rhs = pair_probability(pmf, {Observable::A, Outcome::Plus}, {Observable::C, Outcome::Plus});
  w.holds = w.lhs >= w.rhs - kExactTolerance;
  return w;
}

ConditionalTriple conditionals_from_joint(const JointPmf& pmf) {
  ConditionalTriple t;
  t.p_a_given_b_plus =
      bayes_conditional(pmf, {Observable::A, Outcome::Plus}, {Observable::B, Outcome::Plus});
  t.p_c_given_b_minus =
      bayes_conditional(pmf, {Observable::C, Outcome::Plus}, {Observable::B, Outcome::Minus});
  t.p_a_given_c_plus =
      bayes_conditional(pmf, {Observable::A, Outcome::Plus}, {Observable::C, Outcome::Plus});
  return t;
}

BellDelta cond_bell_delta(const ConditionalTriple& t) noexcept {
  BellDelta d;
  d.delta = t.p_a_given_c_plus - t.p_a_given_b_plus - t.p_c_given_b_minus;
  d.violated = d.delta > kExactTolerance;
  return d;
}

bool conditional_pair_identity_check(const JointPmf& pmf) {
  if (!marginals(pmf).symmetric()) {
    throw Error(ErrorCode::AsymmetricMarginals,
                "identity P(u|v) = 2 P(u,v) needs every marginal equal to 1/2");
  }
  const ConditionalTriple t = conditionals_from_joint(pmf);
  const Event a_plus{Observable::A, Outcome::Plus};
  const Event b_plus{Observable::B, Outcome::Plus};
  const Event b_minus{Observable::B, Outcome::Minus};
  const Event c_plus{Observable::C, Outcome::Plus};
  auto close = [](double x, double y) { return std::abs(x - y) <= kExactTolerance; };
  return close(t.p_a_given_b_plus, 2.0 * pair_probability(pmf, a_plus, b_plus)) &&
         close(t.p_c_given_b_minus, 2.0 * pair_probability(pmf, c_plus, b_minus)) &&
         close(t.p_a_given_c_plus, 2.0 * pair_probability(pmf, a_plus, c_plus));
}

}  // namespace condbell
