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

#include <algorithm>
#include <cmath>
#include <random>

#include "condbell/error.hpp"
#include "condbell/realizability.hpp"
#include "condbell/random.hpp"
#include "test_support.hpp"

namespace condbell {
namespace {

using testing::atoms_of;
using testing::binomial_sigma;

// Pair probabilities the triple fixes once all marginals are 1/2.
std::array<double, 3> pair_targets(const ConditionalTriple& t) {
  return {t.p_a_given_b_plus / 2, t.p_c_given_b_minus / 2, t.p_a_given_c_plus / 2};
}

std::array<double, 3> pairs_of(const std::array<double, 8>& w) {
  // P(a+,b+), P(b-,c+), P(a+,c+) with index = 4[a-] + 2[b-] + [c-].
  return {w[0] + w[1], w[2] + w[6], w[0] + w[2]};
}

double linf(const std::array<double, 3>& x, const std::array<double, 3>& y) {
  double m = 0.0;
  for (int i = 0; i < 3; ++i) m = std::max(m, std::abs(x[i] - y[i]));
  return m;
}

// Smallest sup-distance between the target pair probabilities and those of a
// mirrored joint on the 1/64 lattice. Mirroring loses nothing: the average of a
// feasible joint and its mirror image is feasible.
double mirrored_grid_distance(const ConditionalTriple& t) {
  const auto target = pair_targets(t);
  double best = 1e9;
  constexpr int kHalf = 32;
  for (int k0 = 0; k0 <= kHalf; ++k0) {
    for (int k1 = 0; k0 + k1 <= kHalf; ++k1) {
      for (int k2 = 0; k0 + k1 + k2 <= kHalf; ++k2) {
        const int k4 = kHalf - k0 - k1 - k2;
        std::array<double, 8> w{};
        w[0] = w[7] = k0 / 64.0;
        w[1] = w[6] = k1 / 64.0;
        w[2] = w[5] = k2 / 64.0;
        w[4] = w[3] = k4 / 64.0;
        best = std::min(best, linf(pairs_of(w), target));
      }
    }
  }
  return best;
}

// Same search over every joint on the 1/16 lattice of the full simplex whose
// marginals are exactly 1/2.
double full_grid_distance(const ConditionalTriple& t) {
  const auto target = pair_targets(t);
  double best = 1e9;
  std::array<int, 8> k{};
  const auto recurse = [&](auto&& self, int pos, int left) -> void {
    if (pos == 7) {
      k[7] = left;
      std::array<double, 8> w{};
      for (int i = 0; i < 8; ++i) w[i] = k[i] / 16.0;
      const int a_plus = k[0] + k[1] + k[2] + k[3];
      const int b_plus = k[0] + k[1] + k[4] + k[5];
      const int c_plus = k[0] + k[2] + k[4] + k[6];
      if (a_plus == 8 && b_plus == 8 && c_plus == 8) {
        best = std::min(best, linf(pairs_of(w), target));
      }
      return;
    }
    for (int v = 0; v <= left; ++v) {
      k[pos] = v;
      self(self, pos + 1, left - v);
    }
  };
  recurse(recurse, 0, 16);
  return best;
}

void expect_witness_reproduces(const ConditionalTriple& t, const RealizabilityVerdict& v,
                               double tol) {
  ASSERT_TRUE(v.witness.has_value());
  const auto m = marginals(*v.witness);
  for (double p : m.p_plus) EXPECT_NEAR(p, 0.5, tol);
  const auto back = conditionals_from_joint(*v.witness);
  EXPECT_NEAR(back.p_a_given_b_plus, t.p_a_given_b_plus, tol);
  EXPECT_NEAR(back.p_c_given_b_minus, t.p_c_given_b_minus, tol);
  EXPECT_NEAR(back.p_a_given_c_plus, t.p_a_given_c_plus, tol);
}

TEST(Realize, UniformTriple) {
  const auto v = realize({0.5, 0.5, 0.5});
  ASSERT_TRUE(v.feasible);
  EXPECT_EQ(v.max_violation, 0.0);
  for (double w : v.witness->atoms()) EXPECT_NEAR(w, 0.125, 1e-12);
}

TEST(Realize, PerfectCorrelation) {
  const auto v = realize({1.0, 0.0, 1.0});
  ASSERT_TRUE(v.feasible);
  const auto expected = atoms_of({{{1, 1, 1}, 0.5}, {{-1, -1, -1}, 0.5}});
  for (std::size_t i = 0; i < 8; ++i) EXPECT_NEAR((*v.witness)[i], expected[i], 1e-12);
}

TEST(Realize, CanonicalQuantumTripleInfeasible) {
  const ConditionalTriple t{0.25, 0.25, 0.75};
  const auto v = realize(t);
  EXPECT_FALSE(v.feasible);
  EXPECT_FALSE(v.witness.has_value());
  EXPECT_NEAR(v.max_violation, 1.0 / 24.0, 1e-12);
}

TEST(Realize, GridOracleAgreesOnCanonicalTriple) {
  const ConditionalTriple t{0.25, 0.25, 0.75};
  const double d64 = mirrored_grid_distance(t);
  EXPECT_GE(d64, 1.0 / 24.0 - 1e-12);
  EXPECT_LE(d64, 1.0 / 24.0 + 1.0 / 64.0);
  EXPECT_GE(full_grid_distance(t), 1.0 / 24.0 - 1e-12);
  // The same oracle finds exact matches for realizable triples.
  EXPECT_LT(mirrored_grid_distance({0.5, 0.5, 0.5}), 1e-12);
  EXPECT_LT(full_grid_distance({0.5, 0.5, 0.5}), 1e-12);
  EXPECT_LT(mirrored_grid_distance({0.25, 0.25, 0.5}), 1e-12);
}

TEST(Realize, GridOracleMatchesMaxViolation) {
  std::mt19937_64 gen(21);
  std::uniform_int_distribution<int> q(0, 16);
  for (int k = 0; k < 40; ++k) {
    const ConditionalTriple t{q(gen) / 16.0, q(gen) / 16.0, q(gen) / 16.0};
    const auto v = realize(t);
    const double d = mirrored_grid_distance(t);
    EXPECT_GE(d, v.max_violation - 1e-12);
    EXPECT_LE(d, v.max_violation + 1.0 / 64.0);
    if (v.feasible) EXPECT_EQ(v.max_violation, 0.0);
  }
}

TEST(Realize, FacetsAgreeWithElimination) {
  std::mt19937_64 gen(22);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int feasible = 0;
  for (int k = 0; k < 5000; ++k) {
    const ConditionalTriple t{u(gen), u(gen), u(gen)};
    bool inside = true;
    int violated = 0;
    for (const auto& f : realizable_facets()) {
      if (f.slack(t) < -kExactTolerance) {
        inside = false;
        ++violated;
      }
    }
    EXPECT_LE(violated, 1);
    const auto v = realize(t);
    ASSERT_EQ(v.feasible, inside) << t.p_a_given_b_plus << " " << t.p_c_given_b_minus << " "
                                  << t.p_a_given_c_plus;
    if (inside) {
      ++feasible;
      expect_witness_reproduces(t, v, 1e-9);
      for (double w : v.witness->atoms()) EXPECT_GE(w, 0.0);
    } else {
      EXPECT_GT(v.max_violation, 0.0);
    }
  }
  EXPECT_GT(feasible, 1000);
}

TEST(Realize, MaxViolationIsTheMinimalUniformShift) {
  std::mt19937_64 gen(23);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int checked = 0;
  for (int k = 0; k < 5000 && checked < 300; ++k) {
    const ConditionalTriple t{u(gen), u(gen), u(gen)};
    const auto v = realize(t);
    if (v.feasible) continue;
    const HalfSpace* worst = nullptr;
    for (const auto& f : realizable_facets()) {
      if (!worst || f.slack(t) < worst->slack(t)) worst = &f;
    }
    const auto moved = [&](double s) {
      // Shift each pair probability by s against the violated facet's normal.
      return ConditionalTriple{t.p_a_given_b_plus - 2 * s * worst->normal[0],
                               t.p_c_given_b_minus - 2 * s * worst->normal[1],
                               t.p_a_given_c_plus - 2 * s * worst->normal[2]};
    };
    const auto full = moved(v.max_violation * (1 + 1e-9));
    const auto part = moved(v.max_violation * 0.98);
    const auto in_cube = [](const ConditionalTriple& x) {
      return x.p_a_given_b_plus >= 0 && x.p_a_given_b_plus <= 1 && x.p_c_given_b_minus >= 0 &&
             x.p_c_given_b_minus <= 1 && x.p_a_given_c_plus >= 0 && x.p_a_given_c_plus <= 1;
    };
    if (!in_cube(full)) continue;
    ++checked;
    EXPECT_TRUE(realize(full).feasible);
    EXPECT_FALSE(realize(part).feasible);
  }
  EXPECT_GT(checked, 100);
}

TEST(Realize, Deterministic) {
  const ConditionalTriple t{0.3, 0.6, 0.55};
  const auto a = realize(t);
  const auto b = realize(t);
  ASSERT_TRUE(a.feasible);
  EXPECT_EQ(*a.witness, *b.witness);
}

TEST(Realize, RejectsOutOfRange) {
  EXPECT_THROW(realize({1.2, 0.5, 0.5}), Error);
}

TEST(NonnegativeCentroid, TwoDimensionalNullSpace) {
  Eigen::MatrixXd a(1, 3);
  a << 1, 1, 1;
  Eigen::VectorXd b(1);
  b << 1;
  const auto s = detail::nonnegative_centroid(a, b);
  EXPECT_TRUE(s.consistent);
  EXPECT_EQ(s.null_dimension, 2u);
  ASSERT_TRUE(s.point.has_value());
  for (double x : *s.point) EXPECT_NEAR(x, 1.0 / 3.0, 1e-12);
}

TEST(NonnegativeCentroid, IntervalAndEmptyCases) {
  Eigen::MatrixXd a(1, 2);
  a << 1, 1;
  Eigen::VectorXd b(1);
  b << 1;
  const auto s = detail::nonnegative_centroid(a, b);
  ASSERT_TRUE(s.point.has_value());
  EXPECT_NEAR((*s.point)[0], 0.5, 1e-12);
  b << -1;
  const auto empty = detail::nonnegative_centroid(a, b);
  EXPECT_TRUE(empty.consistent);
  EXPECT_FALSE(empty.point.has_value());

  Eigen::MatrixXd twice(2, 2);
  twice << 1, 1, 1, 1;
  Eigen::VectorXd rhs(2);
  rhs << 1, 2;
  EXPECT_FALSE(detail::nonnegative_centroid(twice, rhs).consistent);
}

TEST(RandomSymmetricJoint, MarginalsAndDeterminism) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const JointPmf p = random_symmetric_joint(seed);
    for (double m : marginals(p).p_plus) EXPECT_NEAR(m, 0.5, 1e-12);
    EXPECT_EQ(p, random_symmetric_joint(seed));
  }
  EXPECT_NE(random_symmetric_joint(1), random_symmetric_joint(2));
}

TEST(RandomSymmetricJoint, SatisfiesBothInequalities) {
  for (std::uint64_t seed = 0; seed < 10000; ++seed) {
    const JointPmf p = random_symmetric_joint(seed);
    ASSERT_TRUE(wigner_check(p).holds);
    ASSERT_LE(cond_bell_delta(conditionals_from_joint(p)).delta, kExactTolerance);
  }
}

TEST(RandomSymmetricJoint, TriplesRealizable) {
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const auto t = conditionals_from_joint(random_symmetric_joint(seed));
    const auto v = realize(t);
    ASSERT_TRUE(v.feasible);
    expect_witness_reproduces(t, v, 1e-9);
  }
}

TEST(SampleLatentTriple, PointMass) {
  const JointPmf p = JointPmf::point_mass(Outcome::Plus, Outcome::Minus, Outcome::Plus);
  RandomStream rng(5);
  for (int i = 0; i < 1000; ++i) {
    EXPECT_EQ(sample_latent_triple(p, rng), (LatentTriple{Outcome::Plus, Outcome::Minus,
                                                          Outcome::Plus}));
  }
}

TEST(SampleLatentTriple, UniformFrequencies) {
  RandomStream rng(6);
  std::array<int, 8> counts{};
  constexpr int kDraws = 80000;
  for (int i = 0; i < kDraws; ++i) {
    const auto l = sample_latent_triple(JointPmf::uniform(), rng);
    ++counts[JointPmf::index(l.a, l.b, l.c)];
  }
  const double sigma = binomial_sigma(0.125, kDraws);
  for (int c : counts) EXPECT_NEAR(c / double(kDraws), 0.125, 3 * sigma);
}

TEST(SampleLatentTriple, Reproducible) {
  const JointPmf p = random_symmetric_joint(9);
  RandomStream r1(77), r2(77);
  for (int i = 0; i < 500; ++i) EXPECT_EQ(sample_latent_triple(p, r1), sample_latent_triple(p, r2));
}

}  // namespace
}  // namespace condbell
