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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "condbell/error.hpp"
#include "condbell/inference.hpp"

namespace condbell {
namespace {

FrequencyTriple counts(std::uint64_t k1, std::uint64_t n1, std::uint64_t k2, std::uint64_t n2,
                       std::uint64_t k3, std::uint64_t n3) {
  return {{k1, n1}, {k2, n2}, {k3, n3}};
}

TestConfig config(double delta, double alpha = 0.05, TestMethod m = TestMethod::ZTest) {
  TestConfig c;
  c.delta_threshold = delta;
  c.alpha = alpha;
  c.method = m;
  return c;
}

TEST(DeltaHat, Examples) {
  const auto d = delta_hat(counts(250, 1000, 250, 1000, 750, 1000));
  EXPECT_DOUBLE_EQ(d.value, 0.25);
  EXPECT_NEAR(d.std_error, std::sqrt(3 * 0.1875 / 1000), 1e-15);
  EXPECT_NEAR(d.std_error, 0.02372, 5e-6);
  EXPECT_FALSE(d.boundary);

  EXPECT_DOUBLE_EQ(delta_hat(counts(50, 100, 50, 100, 50, 100)).value, -0.5);

  const auto b = delta_hat(counts(0, 10, 0, 10, 10, 10));
  EXPECT_DOUBLE_EQ(b.value, 1.0);
  EXPECT_EQ(b.std_error, 0.0);
  EXPECT_TRUE(b.boundary);

  EXPECT_THROW(delta_hat(counts(0, 0, 1, 2, 1, 2)), Error);
}

TEST(DeltaHat, ExactOnRationalInputs) {
  // Denominators that are powers of two make every frequency exact in binary.
  std::mt19937_64 gen(51);
  for (int k = 0; k < 500; ++k) {
    const std::uint64_t n1 = 1ull << (gen() % 10), n2 = 1ull << (gen() % 10),
                        n3 = 1ull << (gen() % 10);
    const std::uint64_t k1 = gen() % (n1 + 1), k2 = gen() % (n2 + 1), k3 = gen() % (n3 + 1);
    const double expected = static_cast<double>(k3) / n3 - static_cast<double>(k1) / n1 -
                            static_cast<double>(k2) / n2;
    EXPECT_EQ(delta_hat(counts(k1, n1, k2, n2, k3, n3)).value, expected);
  }
}

TEST(TestQuantumLike, StrongViolation) {
  const auto r = test_quantum_like(counts(250, 1000, 250, 1000, 750, 1000), config(0.1));
  EXPECT_NEAR(r.statistic, 0.25 / std::sqrt(3 * 0.1875 / 1000), 1e-12);
  EXPECT_NEAR(r.statistic, 10.54, 5e-3);
  EXPECT_LT(r.p_value, 1e-15);
  // Lower bound at confidence 0.95: Delta-hat - 1.6449 * SE.
  EXPECT_NEAR(r.lower_bound, 0.25 - 1.6448536269514722 * std::sqrt(3 * 0.1875 / 1000), 1e-12);
  EXPECT_NEAR(r.lower_bound, 0.211, 1e-3);
  EXPECT_TRUE(r.exceeds_threshold);
  EXPECT_EQ(r.verdict, Verdict::QuantumLike);
  EXPECT_FALSE(r.realizability.feasible);
}

TEST(TestQuantumLike, UniformIsClassical) {
  const auto r = test_quantum_like(counts(500, 1000, 500, 1000, 500, 1000), config(0.01));
  EXPECT_DOUBLE_EQ(r.delta_hat, -0.5);
  EXPECT_LT(r.statistic, 0.0);
  EXPECT_EQ(r.verdict, Verdict::ClassicalConsistent);
  EXPECT_TRUE(r.realizability.feasible);
}

TEST(TestQuantumLike, HomogeneityFailureBlocksQuantumLike) {
  HomogeneityResult h;
  h.pass = false;
  const auto r =
      test_quantum_like(counts(250, 1000, 250, 1000, 750, 1000), config(0.1), h);
  EXPECT_NE(r.verdict, Verdict::QuantumLike);
  EXPECT_EQ(r.verdict, Verdict::Inconclusive);
}

TEST(TestQuantumLike, BoundaryUsesWilson) {
  // Zero sample variance must not be read as infinite significance.
  const auto r = test_quantum_like(counts(0, 10, 0, 10, 10, 10), config(0.01));
  EXPECT_TRUE(r.boundary);
  EXPECT_TRUE(std::isfinite(r.statistic));
  const double z = 1.6448536269514722;
  const double p = (0.5 * z * z) / (10 + z * z);
  const double se = std::sqrt(3 * p * (1 - p) / (10 + z * z));
  EXPECT_NEAR(r.statistic, 1.0 / se, 1e-9);
  EXPECT_GT(r.p_value, 0.0);
  EXPECT_LT(r.lower_bound, 1.0);

  // The perfectly correlated table sits exactly on the inequality.
  const auto eq = test_quantum_like(counts(40, 40, 0, 40, 40, 40), config(0.01));
  EXPECT_EQ(eq.delta_hat, 0.0);
  EXPECT_EQ(eq.statistic, 0.0);
  EXPECT_EQ(eq.p_value, 0.5);
  EXPECT_EQ(eq.verdict, Verdict::ClassicalConsistent);
}

TEST(WilsonInterval, KnownValues) {
  // 0 successes out of 10 at z = 1.96: upper = z^2 / (n + z^2).
  const auto i = wilson_interval({0, 10}, 1.96);
  EXPECT_NEAR(i.lower, 0.0, 1e-15);
  EXPECT_NEAR(i.upper, 1.96 * 1.96 / (10 + 1.96 * 1.96), 1e-12);
  const auto mid = wilson_interval({50, 100}, 1.96);
  EXPECT_NEAR(mid.lower + mid.upper, 1.0, 1e-12);
}

TEST(Chi2Fit, ZeroWhenRealizable) {
  std::mt19937_64 gen(52);
  for (int k = 0; k < 200; ++k) {
    const std::uint64_t n = 50 + gen() % 500;
    const auto f = counts(gen() % (n + 1), n, gen() % (n + 1), n, gen() % (n + 1), n);
    if (!realize(f.point_estimate()).feasible) continue;
    EXPECT_NEAR(min_chi2_fit(f).statistic, 0.0, 1e-9);
    EXPECT_EQ(test_quantum_like(f, config(0.01, 0.05, TestMethod::Chi2Fit)).p_value, 1.0);
  }
}

TEST(Chi2Fit, FittedPointOnBoundaryAndMinimal) {
  const auto f = counts(250, 1000, 250, 1000, 750, 1000);
  const auto fit = min_chi2_fit(f);
  const auto v = realize(fit.fitted);
  EXPECT_TRUE(v.feasible);
  EXPECT_NEAR(cond_bell_delta(fit.fitted).delta, 0.0, 1e-6);
  // By symmetry of this example the optimum satisfies x = y.
  EXPECT_NEAR(fit.fitted.p_a_given_b_plus, fit.fitted.p_c_given_b_minus, 1e-4);
  // Brute force over the facet x + y = z with a finer lattice.
  const auto pearson = [&](double x, double y, double z) {
    const double e[3] = {x, y, z}, o[3] = {0.25, 0.25, 0.75};
    double s = 0;
    for (int i = 0; i < 3; ++i) s += 1000 * (o[i] - e[i]) * (o[i] - e[i]) / (e[i] * (1 - e[i]));
    return s;
  };
  double best = 1e300;
  for (int i = 1; i < 1000; ++i) {
    for (int j = 1; i + j < 1000; ++j) {
      best = std::min(best, pearson(i / 1000.0, j / 1000.0, (i + j) / 1000.0));
    }
  }
  EXPECT_LE(fit.statistic, best + 1e-6);
  EXPECT_GT(fit.statistic, best - 0.5);
  const auto r = test_quantum_like(f, config(0.1, 0.05, TestMethod::Chi2Fit));
  EXPECT_EQ(r.verdict, Verdict::QuantumLike);
  EXPECT_TRUE(r.fitted.has_value());
}

TEST(DecideVerdict, Rules) {
  EXPECT_EQ(decide_verdict(0.01, 0.05, 0.1, true, false), Verdict::QuantumLike);
  EXPECT_EQ(decide_verdict(0.01, 0.05, 0.1, false, false), Verdict::Inconclusive);
  EXPECT_EQ(decide_verdict(0.01, 0.05, 0.1, false, true), Verdict::ClassicalConsistent);
  EXPECT_EQ(decide_verdict(0.20, 0.05, 0.1, true, false), Verdict::ClassicalConsistent);
  EXPECT_EQ(decide_verdict(0.01, 0.05, -0.1, true, false), Verdict::Inconclusive);
}

TEST(TestConfig, Validation) {
  TestConfig c;
  EXPECT_NO_THROW(c.validate());
  c.alpha = 0.0;
  EXPECT_THROW(c.validate(), Error);
  c = TestConfig{};
  c.confidence = 1.0;
  EXPECT_THROW(c.validate(), Error);
  c = TestConfig{};
  c.delta_threshold = -0.1;
  EXPECT_THROW(c.validate(), Error);
}

TEST(RequiredSampleSize, CanonicalTarget) {
  const auto plan = required_sample_size(0.25, config(0.01), 0.9);
  const double za = 1.6448536269514722, zb = 1.2815515655446004;
  const double exact = (za + zb) * (za + zb) * 0.5625 / 0.0625;
  EXPECT_NEAR(plan.exact, exact, 1e-9);
  EXPECT_NEAR(plan.exact, 77.1, 0.05);
  EXPECT_EQ(plan.per_branch, 78u);
  EXPECT_EQ(plan.triple, (ConditionalTriple{0.25, 0.25, 0.75}));
  EXPECT_FALSE(plan.boundary);
  EXPECT_FALSE(plan.degenerate);
}

TEST(RequiredSampleSize, MonteCarloConfirmsWithinTenPercent) {
  const auto plan = required_sample_size(0.25, config(0.01), 0.9);
  const auto power = branch_rejection_rate(plan.triple, plan.per_branch, config(0.01), 4000, 7);
  EXPECT_NEAR(power.rate(), 0.9, 0.09);
  // One step down should not beat the target by much.
  const auto smaller =
      branch_rejection_rate(plan.triple, plan.per_branch * 3 / 4, config(0.01), 4000, 7);
  EXPECT_LT(smaller.rate(), power.rate());
}

TEST(RequiredSampleSize, EdgeCases) {
  const auto full = required_sample_size(1.0, config(0.01), 0.9);
  EXPECT_TRUE(full.boundary);
  EXPECT_EQ(full.triple, (ConditionalTriple{0.0, 0.0, 1.0}));
  EXPECT_EQ(full.per_branch, 1u);

  const auto degenerate = required_sample_size(0.25, config(0.01, 0.5), 0.5);
  EXPECT_TRUE(degenerate.degenerate);
  EXPECT_EQ(degenerate.per_branch, 1u);

  for (double bad : {0.0, -0.1, 1.5}) {
    try {
      required_sample_size(bad, config(0.01), 0.9);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::InvalidTarget);
    }
  }
  EXPECT_THROW(required_sample_size(0.25, config(0.01), 1.0), Error);
}

TEST(Calibration, InteriorClassicalModelsStayBelowAlpha) {
  // Delta < 0 strictly inside the realizable region.
  for (const ConditionalTriple t : {ConditionalTriple{0.5, 0.5, 0.5},
                                    ConditionalTriple{0.3, 0.3, 0.55}}) {
    const auto rate = branch_rejection_rate(t, 200, config(0.01), 4000, 11);
    EXPECT_LE(rate.rate(), 0.05);
  }
}

TEST(Calibration, BoundaryInteriorTripleNearNominal) {
  // Delta = 0 with no 0/1 entries: the z-test should be close to its level.
  const auto rate = branch_rejection_rate({0.3, 0.3, 0.6}, 500, config(0.01), 10000, 12);
  EXPECT_NEAR(rate.rate(), 0.05, 0.01);
}

TEST(Calibration, DeterministicCounts) {
  const auto a = branch_rejection_rate({0.3, 0.3, 0.6}, 100, config(0.01), 500, 3);
  const auto b = branch_rejection_rate({0.3, 0.3, 0.6}, 100, config(0.01), 500, 3);
  EXPECT_EQ(a.rejections, b.rejections);
}

}  // namespace
}  // namespace condbell
