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

#ifndef CONDBELL_PROBABILITY_HPP
#define CONDBELL_PROBABILITY_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>

namespace condbell {

/// Tolerance for identities that hold exactly in real arithmetic.
inline constexpr double kExactTolerance = 1e-12;
/// Tolerance for validating user-supplied probabilities.
inline constexpr double kDataTolerance = 1e-9;

/// The three questions. Declaration order fixes the atom indexing.
enum class Observable : std::uint8_t { A = 0, B = 1, C = 2 };

/// A dichotomous answer. "yes" is +1, "no" is -1; nothing else is valid.
enum class Outcome : int { Plus = 1, Minus = -1 };

/// Throws ErrorCode::InvalidArgument unless value is +1 or -1.
Outcome outcome_from_int(long value);

constexpr int to_int(Outcome o) noexcept { return static_cast<int>(o); }
constexpr Outcome flip(Outcome o) noexcept {
  return o == Outcome::Plus ? Outcome::Minus : Outcome::Plus;
}
constexpr std::size_t index_of(Observable o) noexcept {
  return static_cast<std::size_t>(o);
}
char label(Observable o) noexcept;

/// "u = x", the elementary event for one observable.
struct Event {
  Observable observable;
  Outcome outcome;
};

/// Probability mass function on the 8-point space {+1,-1}^3 of (a, b, c).
///
/// Atoms are stored lexicographically with +1 ordered before -1:
///   0:(+,+,+) 1:(+,+,-) 2:(+,-,+) 3:(+,-,-)
///   4:(-,+,+) 5:(-,+,-) 6:(-,-,+) 7:(-,-,-)
/// Every instance satisfies: atoms >= 0 and sum(atoms) = 1 within 1e-12.
class JointPmf {
 public:
  static constexpr std::size_t kAtoms = 8;

  /// Validates nonnegativity and unit mass (within 1e-9). Input off by more
  /// than 1e-12 is renormalized; anything closer is kept bit-for-bit.
  /// Throws ErrorCode::InvalidPmf.
  static JointPmf from_atoms(std::span<const double> atoms);
  static JointPmf uniform();
  static JointPmf point_mass(Outcome a, Outcome b, Outcome c);

  static constexpr std::size_t index(Outcome a, Outcome b, Outcome c) noexcept {
    return (a == Outcome::Minus ? 4u : 0u) + (b == Outcome::Minus ? 2u : 0u) +
           (c == Outcome::Minus ? 1u : 0u);
  }
  /// Value of `which` at atom `atom`.
  static constexpr Outcome outcome_at(std::size_t atom, Observable which) noexcept {
    const unsigned bit = 2u - static_cast<unsigned>(which);
    return ((atom >> bit) & 1u) ? Outcome::Minus : Outcome::Plus;
  }

  const std::array<double, kAtoms>& atoms() const noexcept { return atoms_; }
  double operator[](std::size_t i) const noexcept { return atoms_[i]; }
  double probability(Outcome a, Outcome b, Outcome c) const noexcept {
    return atoms_[index(a, b, c)];
  }

  bool operator==(const JointPmf&) const = default;

 private:
  explicit JointPmf(const std::array<double, kAtoms>& atoms) : atoms_(atoms) {}
  std::array<double, kAtoms> atoms_{};
};

/// The three conditionals the experiment estimates.
struct ConditionalTriple {
  double p_a_given_b_plus = 0.0;   // P(a=+1 | b=+1)
  double p_c_given_b_minus = 0.0;  // P(c=+1 | b=-1)
  double p_a_given_c_plus = 0.0;   // P(a=+1 | c=+1)

  /// Throws ErrorCode::InvalidArgument if any entry is outside [0, 1].
  void validate() const;
  bool operator==(const ConditionalTriple&) const = default;
};

/// P(u=+1) for u = a, b, c.
struct MarginalVector {
  std::array<double, 3> p_plus{0.5, 0.5, 0.5};

  double operator[](Observable o) const noexcept { return p_plus[index_of(o)]; }
  /// All three marginals equal 1/2 within 1e-9.
  bool symmetric() const noexcept;
  void validate() const;
};

double marginal(const JointPmf& pmf, Observable which) noexcept;
MarginalVector marginals(const JointPmf& pmf) noexcept;

/// P(u=x, v=y). Throws ErrorCode::SameObservable when u == v.
double pair_probability(const JointPmf& pmf, Event first, Event second);

/// P(target | given) by Bayes' formula.
/// Throws ErrorCode::ZeroConditioningEvent if P(given) <= 1e-12.
double bayes_conditional(const JointPmf& pmf, Event target, Event given);

struct WignerCheck {
  double lhs = 0.0;  // P(a+,b+) + P(b-,c+)
  double rhs = 0.0;  // P(a+,c+)
  bool holds = false;
};

/// Wigner's inequality P(a+,b+) + P(b-,c+) >= P(a+,c+); holds for every
/// joint distribution.
WignerCheck wigner_check(const JointPmf& pmf) noexcept;

ConditionalTriple conditionals_from_joint(const JointPmf& pmf);

struct BellDelta {
  double delta = 0.0;
  bool violated = false;
};

/// delta = P(a+|c+) - P(a+|b+) - P(c+|b-); violated iff delta > 1e-12.
BellDelta cond_bell_delta(const ConditionalTriple& t) noexcept;

/// For symmetric marginals each conditional equals twice the matching pair
/// probability. Returns whether all three identities hold within 1e-12.
/// Throws ErrorCode::AsymmetricMarginals if any marginal differs from 1/2.
bool conditional_pair_identity_check(const JointPmf& pmf);

}  // namespace condbell

#endif  // CONDBELL_PROBABILITY_HPP
