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

#ifndef CONDBELL_PROTOCOL_HPP
#define CONDBELL_PROTOCOL_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "condbell/probability.hpp"
#include "condbell/qubit.hpp"
#include "condbell/realizability.hpp"

namespace condbell {

/// A population answering from an explicit conditional table: the first
/// question by its marginal, the second by the matching conditional. The
/// table need not be classically realizable.
struct TableAgent {
  ConditionalTriple triple;
  MarginalVector marginals;
};

/// How simulated subjects answer.
///   JointPmf        - classical: one latent (a, b, c) per subject.
///   QubitExperiment - quantum: Born rule, Lueders update between questions.
///   TableAgent      - conditional table.
using AgentModel = std::variant<JointPmf, QubitExperiment, TableAgent>;

/// Classical and table agents must have all marginals at 1/2
/// (ErrorCode::AsymmetricMarginals); table entries must lie in [0, 1].
void validate_agent(const AgentModel& agent);

/// Exact (P(a+|b+), P(c+|b-), P(a+|c+)) implied by the agent.
ConditionalTriple exact_conditionals(const AgentModel& agent);
/// Exact single-question marginals implied by the agent.
MarginalVector exact_marginals(const AgentModel& agent);

/// Everything the exact model says about the inequality.
struct ExactSummary {
  ConditionalTriple triple;
  BellDelta delta;
  MarginalVector marginals;
  /// All marginals are 1/2, so the inequality is a valid classicality test.
  bool premise_holds = false;
  RealizabilityVerdict realizability;
};

ExactSummary exact_summary(const AgentModel& agent);

enum class Branch { U, V };

/// One subject's answers. Branch U is asked b first, branch V c first; the
/// second question is a after b=+1, c after b=-1, a after c=+1, and none after
/// c=-1.
struct ResponseRecord {
  std::string subject_id;
  Branch branch = Branch::U;
  Observable first_question = Observable::B;
  Outcome first_answer = Outcome::Plus;
  std::optional<Observable> second_question;
  std::optional<Outcome> second_answer;

  /// Throws ErrorCode::SchemaViolation if the record breaks the routing above.
  void validate() const;
  bool operator==(const ResponseRecord&) const = default;
};

/// Count table of one run of the two-branch protocol.
struct ProtocolResult {
  std::uint64_t n_total = 0;
  std::uint64_t n_u = 0;
  std::uint64_t n_v = 0;
  std::uint64_t u_b_plus = 0;
  std::uint64_t u_b_minus = 0;
  std::uint64_t v_c_plus = 0;
  std::uint64_t v_c_minus = 0;
  std::uint64_t a_plus_given_b_plus = 0;   // out of u_b_plus
  std::uint64_t c_plus_given_b_minus = 0;  // out of u_b_minus
  std::uint64_t a_plus_given_c_plus = 0;   // out of v_c_plus
  std::optional<std::uint64_t> seed;       // absent for ingested data

  /// Throws ErrorCode::InvalidArgument if the bookkeeping identities fail.
  void validate() const;
  bool operator==(const ProtocolResult&) const = default;
};

struct ProtocolRun {
  ProtocolResult result;
  std::vector<ResponseRecord> records;  // in subject order
};

/// Simulates the experiment: a seeded shuffle splits n_total subjects into
/// equal halves U and V; U is asked b and V is asked c; U_b+ and V_c+ are
/// then asked a, U_b- is asked c, and V_c- is asked nothing.
///
/// Subject i draws from RandomStream::derive(seed, i), so results do not
/// depend on evaluation order.
///
/// Throws InvalidArgument (n_total < 4), OddPopulation, or ZeroBranch when one
/// of the three post-selected groups is empty.
ProtocolRun run_protocol(const AgentModel& agent, std::uint64_t n_total, std::uint64_t seed);

/// Aggregates validated records. Throws SchemaViolation / DuplicateSubject.
ProtocolResult tally(std::span<const ResponseRecord> records,
                     std::optional<std::uint64_t> seed = std::nullopt);

struct Frequency {
  std::uint64_t successes = 0;
  std::uint64_t trials = 0;

  double value() const noexcept {
    return static_cast<double>(successes) / static_cast<double>(trials);
  }
  bool boundary() const noexcept { return successes == 0 || successes == trials; }
  bool operator==(const Frequency&) const = default;
};

/// nu(a+|b+), nu(c+|b-), nu(a+|c+) with their denominators n1, n2, n3.
struct FrequencyTriple {
  Frequency a_given_b_plus;
  Frequency c_given_b_minus;
  Frequency a_given_c_plus;

  /// Throws ErrorCode::ZeroBranch if a denominator is zero or a numerator
  /// exceeds it.
  void validate() const;
  ConditionalTriple point_estimate() const noexcept;
  bool operator==(const FrequencyTriple&) const = default;
};

/// Throws ErrorCode::ZeroBranch if n1, n2 or n3 is zero.
FrequencyTriple frequencies(const ProtocolResult& r);

struct HomogeneityResult {
  double chi2_u = 0.0;    // Pearson statistic of b answers in U against 50/50
  double chi2_v = 0.0;    // same for c answers in V
  double chi2 = 0.0;      // chi2_u + chi2_v, 2 degrees of freedom
  double critical = 0.0;  // (1 - alpha) quantile of chi-square(2)
  bool pass = false;
};

/// Tests the first answers in both branches against P(+1) = 1/2.
/// Requires n_U, n_V > 0 and alpha in (0, 1).
HomogeneityResult homogeneity_check(const ProtocolResult& r, double alpha);

}  // namespace condbell

#endif  // CONDBELL_PROTOCOL_HPP
