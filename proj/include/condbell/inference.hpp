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

#ifndef CONDBELL_INFERENCE_HPP
#define CONDBELL_INFERENCE_HPP

#include <cstdint>
#include <optional>

#include "condbell/probability.hpp"
#include "condbell/protocol.hpp"
#include "condbell/random.hpp"
#include "condbell/realizability.hpp"

namespace condbell {

enum class TestMethod {
  ZTest,    // one-sided z-test of H0: delta <= 0
  Chi2Fit,  // minimum Pearson chi-square distance to the realizable region
};

struct TestConfig {
  double delta_threshold = 0.01;  // delta in "Delta >= delta"
  double alpha = 0.05;            // significance level of the test
  double confidence = 0.95;       // level p of the lower bound on Delta
  TestMethod method = TestMethod::ZTest;

  /// Throws ErrorCode::InvalidArgument on out-of-range fields.
  void validate() const;
  bool operator==(const TestConfig&) const = default;
};

enum class Verdict { ClassicalConsistent, QuantumLike, Inconclusive };

const char* to_string(Verdict v) noexcept;
const char* to_string(TestMethod m) noexcept;

struct DeltaEstimate {
  double value = 0.0;
  /// sqrt(sum p(1-p)/n) over the three independent branches.
  double std_error = 0.0;
  /// Some frequency is 0 or 1; the plug-in standard error is unreliable there.
  bool boundary = false;
};

/// Delta-hat = nu(a+|c+) - nu(a+|b+) - nu(c+|b-). Throws ErrorCode::ZeroBranch.
DeltaEstimate delta_hat(const FrequencyTriple& f);

struct Interval {
  double lower = 0.0;
  double upper = 1.0;
};

/// Wilson score interval for a binomial proportion with critical value z.
Interval wilson_interval(const Frequency& f, double z);

struct Chi2Fit {
  ConditionalTriple fitted;
  double statistic = 0.0;
};

/// Minimizes sum_i n_i (nu_i - pi_i)^2 / (pi_i (1 - pi_i)) over realizable
/// triples pi. Zero when the observed triple is itself realizable.
Chi2Fit min_chi2_fit(const FrequencyTriple& f);

struct TestReport {
  TestConfig config;
  FrequencyTriple frequencies;
  double delta_hat = 0.0;
  double std_error = 0.0;
  double statistic = 0.0;
  double p_value = 1.0;
  double lower_bound = 0.0;        // one-sided lower confidence bound on Delta
  bool exceeds_threshold = false;  // lower_bound > delta_threshold
  bool boundary = false;
  Verdict verdict = Verdict::Inconclusive;
  bool homogeneity_pass = true;
  std::optional<HomogeneityResult> homogeneity;
  RealizabilityVerdict realizability;  // of the point estimates
  std::optional<ConditionalTriple> fitted;  // Chi2Fit only
};

/// quantum_like if p < alpha, Delta-hat > 0 and homogeneity passed;
/// otherwise classical_consistent if the point estimate is realizable or
/// p >= alpha; otherwise inconclusive.
Verdict decide_verdict(double p_value, double alpha, double delta_hat, bool homogeneity_pass,
                       bool realizable) noexcept;

/// Runs the configured test. Without `homogeneity` the equal-marginals
/// premise is taken as satisfied.
///
/// z-test: statistic = Delta-hat / SE, upper-tail normal p-value. When any
/// frequency sits at 0 or 1 the SE uses Wilson-centred proportions and the
/// lower bound combines Wilson intervals (MOVER), so a zero plug-in variance
/// never produces an infinite statistic.
TestReport test_quantum_like(const FrequencyTriple& f, const TestConfig& cfg,
                             std::optional<HomogeneityResult> homogeneity = std::nullopt);

/// frequencies + homogeneity_check(alpha) + test_quantum_like.
TestReport analyze(const ProtocolResult& r, const TestConfig& cfg);

/// The z-test decision used for Monte Carlo rates: p < alpha and Delta-hat > 0.
bool rejects_classical(const TestReport& report) noexcept;

/// Triple on the segment through (1/4, 1/4, 3/4) and (0, 0, 1) whose Delta is
/// `delta`: ((1-delta)/3, (1-delta)/3, (2+delta)/3).
ConditionalTriple scaled_canonical_triple(double delta);

struct SampleSizePlan {
  std::uint64_t per_branch = 1;
  double exact = 0.0;  // (z_{1-alpha} + z_power)^2 sum p(1-p) / delta^2
  ConditionalTriple triple;
  bool boundary = false;    // the target triple has a 0/1 entry
  bool degenerate = false;  // alpha >= 1/2 or z_{1-alpha} + z_power <= 0
};

/// Per-branch n for the one-sided z-test to reach `power` at the triple
/// scaled_canonical_triple(target_delta). Throws ErrorCode::InvalidTarget
/// unless target_delta is in (0, 1]; InvalidArgument unless power is in (0, 1).
SampleSizePlan required_sample_size(double target_delta, const TestConfig& cfg, double power);

/// Three independent binomial branches of n trials each.
FrequencyTriple simulate_frequencies(const ConditionalTriple& truth, std::uint64_t n_per_branch,
                                     RandomStream& rng);

struct RejectionCount {
  std::uint64_t rejections = 0;
  std::uint64_t replications = 0;
  double rate() const noexcept {
    return replications ? static_cast<double>(rejections) / static_cast<double>(replications)
                        : 0.0;
  }
};

/// Monte Carlo rejection rate with exactly n trials per branch. Replication r
/// draws from RandomStream::derive(seed, r).
RejectionCount branch_rejection_rate(const ConditionalTriple& truth, std::uint64_t n_per_branch,
                                     const TestConfig& cfg, std::uint64_t replications,
                                     std::uint64_t seed);

/// Monte Carlo rejection rate through the full protocol simulator. Runs that
/// leave a post-selected group empty count as non-rejections.
RejectionCount protocol_rejection_rate(const AgentModel& agent, std::uint64_t n_total,
                                       const TestConfig& cfg, std::uint64_t replications,
                                       std::uint64_t seed);

}  // namespace condbell

#endif  // CONDBELL_INFERENCE_HPP
