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

#include "condbell/inference.hpp"

#include <algorithm>
#include <atomic>
#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <exception>
#include <limits>
#include <random>
#include <thread>
#include <vector>

#include "condbell/error.hpp"
#include "condbell/search.hpp"

namespace condbell {

namespace {

const boost::math::normal kStdNormal(0.0, 1.0);

double normal_quantile(double p) { return boost::math::quantile(kStdNormal, p); }
double normal_upper_tail(double z) { return boost::math::cdf(boost::math::complement(kStdNormal, z)); }

double chi2_upper_tail(double x, double dof) {
  if (x <= 0.0) return 1.0;
  return boost::math::cdf(boost::math::complement(boost::math::chi_squared(dof), x));
}

double binomial_variance_term(const Frequency& f) {
  const double p = f.value();
  return p * (1.0 - p) / static_cast<double>(f.trials);
}

// Wilson-centred proportion and its variance, (x + z^2/2)/(n + z^2).
double wilson_variance_term(const Frequency& f, double z) {
  const double z2 = z * z;
  const double n = static_cast<double>(f.trials) + z2;
  const double p = (static_cast<double>(f.successes) + 0.5 * z2) / n;
  return p * (1.0 - p) / n;
}

template <class Fn>
RejectionCount parallel_count(std::uint64_t replications, Fn&& rejects_at) {
  const unsigned workers =
      static_cast<unsigned>(std::max<std::uint64_t>(1, std::min<std::uint64_t>(
                                                          std::thread::hardware_concurrency(),
                                                          replications)));
  std::atomic<std::uint64_t> rejections{0};
  std::vector<std::exception_ptr> failures(workers);
  auto work = [&](unsigned w) {
    try {
      std::uint64_t local = 0;
      for (std::uint64_t r = w; r < replications; r += workers) {
        if (rejects_at(r)) ++local;
      }
      rejections += local;
    } catch (...) {
      failures[w] = std::current_exception();
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
  return RejectionCount{rejections.load(), replications};
}

}  // namespace

void TestConfig::validate() const {
  if (!(delta_threshold >= 0.0) || !std::isfinite(delta_threshold)) {
    throw Error(ErrorCode::InvalidArgument, "delta threshold must be a finite value >= 0");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "alpha must lie in (0, 1)");
  }
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "confidence must lie in (0, 1)");
  }
}

const char* to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::ClassicalConsistent: return "classical_consistent";
    case Verdict::QuantumLike: return "quantum_like";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

const char* to_string(TestMethod m) noexcept {
  return m == TestMethod::ZTest ? "z_test" : "chi2_fit";
}

DeltaEstimate delta_hat(const FrequencyTriple& f) {
  f.validate();
  DeltaEstimate d;
  d.value = f.a_given_c_plus.value() - f.a_given_b_plus.value() - f.c_given_b_minus.value();
  d.std_error = std::sqrt(binomial_variance_term(f.a_given_b_plus) +
                          binomial_variance_term(f.c_given_b_minus) +
                          binomial_variance_term(f.a_given_c_plus));
  d.boundary = f.a_given_b_plus.boundary() || f.c_given_b_minus.boundary() ||
               f.a_given_c_plus.boundary();
  return d;
}

Interval wilson_interval(const Frequency& f, double z) {
  if (f.trials == 0) throw Error(ErrorCode::ZeroBranch, "Wilson interval of an empty branch");
  const double n = static_cast<double>(f.trials);
  const double p = f.value();
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double centre = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  return Interval{std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

Chi2Fit min_chi2_fit(const FrequencyTriple& f) {
  f.validate();
  const ConditionalTriple observed = f.point_estimate();
  if (realize(observed).feasible) return Chi2Fit{observed, 0.0};

  const std::array<const Frequency*, 3> branch{&f.a_given_b_plus, &f.c_given_b_minus,
                                               &f.a_given_c_plus};
  constexpr double kEdge = 1e-9;
  auto pearson = [&](const std::array<double, 3>& pi) {
    double chi2 = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
      const double p = std::clamp(pi[i], kEdge, 1.0 - kEdge);
      const double d = branch[i]->value() - p;
      chi2 += static_cast<double>(branch[i]->trials) * d * d / (p * (1.0 - p));
    }
    return chi2;
  };
  auto inside = [](const std::array<double, 3>& pi) {
    for (double p : pi) {
      if (p < -kExactTolerance || p > 1.0 + kExactTolerance) return false;
    }
    const ConditionalTriple t{pi[0], pi[1], pi[2]};
    for (const HalfSpace& h : realizable_facets()) {
      if (h.slack(t) < -kExactTolerance) return false;
    }
    return true;
  };

  // The constrained minimum lies on a facet; search each facet plane,
  // parametrized by the first two coordinates.
  Chi2Fit best{observed, std::numeric_limits<double>::infinity()};
  for (const HalfSpace& h : realizable_facets()) {
    auto lift = [&h](Point2 q) {
      const double third = (h.bound - h.normal[0] * q.x - h.normal[1] * q.y) / h.normal[2];
      return std::array<double, 3>{q.x, q.y, third};
    };
    const Objective2 neg_chi2 = [&](Point2 q) {
      const auto pi = lift(q);
      return inside(pi) ? -pearson(pi) : -std::numeric_limits<double>::infinity();
    };
    constexpr std::size_t kNodes = 201;
    constexpr double kStep = 1.0 / (kNodes - 1);
    const SearchResult coarse = grid_maximize(neg_chi2, {0.0, 0.0}, kStep, kNodes, kNodes);
    if (!std::isfinite(coarse.value)) continue;
    const SearchResult fine = coordinate_ascent(neg_chi2, coarse.arg, kStep, 80);
    if (-fine.value < best.statistic) {
      const auto pi = lift(fine.arg);
      best = Chi2Fit{ConditionalTriple{std::clamp(pi[0], 0.0, 1.0), std::clamp(pi[1], 0.0, 1.0),
                                       std::clamp(pi[2], 0.0, 1.0)},
                     -fine.value};
    }
  }
  return best;
}

Verdict decide_verdict(double p_value, double alpha, double delta_hat, bool homogeneity_pass,
                       bool realizable) noexcept {
  if (p_value < alpha && delta_hat > 0.0 && homogeneity_pass) return Verdict::QuantumLike;
  if (realizable || p_value >= alpha) return Verdict::ClassicalConsistent;
  return Verdict::Inconclusive;
}

TestReport test_quantum_like(const FrequencyTriple& f, const TestConfig& cfg,
                             std::optional<HomogeneityResult> homogeneity) {
  cfg.validate();
  const DeltaEstimate est = delta_hat(f);

  TestReport rep;
  rep.config = cfg;
  rep.frequencies = f;
  rep.delta_hat = est.value;
  rep.std_error = est.std_error;
  rep.boundary = est.boundary;
  rep.homogeneity = homogeneity;
  rep.homogeneity_pass = homogeneity ? homogeneity->pass : true;
  rep.realizability = realize(f.point_estimate());

  const double z_conf = normal_quantile(cfg.confidence);
  if (!est.boundary) {
    rep.lower_bound = est.value - z_conf * est.std_error;
  } else {
    // MOVER: +nu3 contributes its lower distance, -nu1 and -nu2 their upper.
    const Interval i1 = wilson_interval(f.a_given_b_plus, z_conf);
    const Interval i2 = wilson_interval(f.c_given_b_minus, z_conf);
    const Interval i3 = wilson_interval(f.a_given_c_plus, z_conf);
    const double d1 = i1.upper - f.a_given_b_plus.value();
    const double d2 = i2.upper - f.c_given_b_minus.value();
    const double d3 = f.a_given_c_plus.value() - i3.lower;
    rep.lower_bound = est.value - std::sqrt(d1 * d1 + d2 * d2 + d3 * d3);
  }
  rep.exceeds_threshold = rep.lower_bound > cfg.delta_threshold;

  if (cfg.method == TestMethod::ZTest) {
    double se = est.std_error;
    if (est.boundary) {
      const double z_alpha = normal_quantile(1.0 - cfg.alpha);
      se = std::sqrt(wilson_variance_term(f.a_given_b_plus, z_alpha) +
                     wilson_variance_term(f.c_given_b_minus, z_alpha) +
                     wilson_variance_term(f.a_given_c_plus, z_alpha));
    }
    rep.statistic = est.value / se;
    rep.p_value = std::clamp(normal_upper_tail(rep.statistic), 0.0, 1.0);
  } else {
    const Chi2Fit fit = min_chi2_fit(f);
    rep.fitted = fit.fitted;
    rep.statistic = fit.statistic;
    rep.p_value = std::clamp(chi2_upper_tail(fit.statistic, 1.0), 0.0, 1.0);
  }
  rep.verdict = decide_verdict(rep.p_value, cfg.alpha, rep.delta_hat, rep.homogeneity_pass,
                               rep.realizability.feasible);
  return rep;
}

TestReport analyze(const ProtocolResult& r, const TestConfig& cfg) {
  cfg.validate();
  const FrequencyTriple f = frequencies(r);
  return test_quantum_like(f, cfg, homogeneity_check(r, cfg.alpha));
}

bool rejects_classical(const TestReport& report) noexcept {
  return report.p_value < report.config.alpha && report.delta_hat > 0.0;
}

ConditionalTriple scaled_canonical_triple(double delta) {
  return ConditionalTriple{(1.0 - delta) / 3.0, (1.0 - delta) / 3.0, (2.0 + delta) / 3.0};
}

SampleSizePlan required_sample_size(double target_delta, const TestConfig& cfg, double power) {
  if (!(target_delta > 0.0 && target_delta <= 1.0)) {
    throw Error(ErrorCode::InvalidTarget, "target delta must lie in (0, 1]");
  }
  if (!(power > 0.0 && power < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "power must lie in (0, 1)");
  }
  cfg.validate();
  SampleSizePlan plan;
  plan.triple = scaled_canonical_triple(target_delta);
  double variance = 0.0;
  for (double p : {plan.triple.p_a_given_b_plus, plan.triple.p_c_given_b_minus,
                   plan.triple.p_a_given_c_plus}) {
    variance += p * (1.0 - p);
    if (p <= kExactTolerance || p >= 1.0 - kExactTolerance) plan.boundary = true;
  }
  const double z_alpha = normal_quantile(1.0 - cfg.alpha);
  const double z_power = normal_quantile(power);
  const double z_sum = z_alpha + z_power;
  plan.degenerate = z_alpha <= kExactTolerance || z_sum <= kExactTolerance;
  plan.exact = z_sum > 0.0 ? z_sum * z_sum * variance / (target_delta * target_delta) : 0.0;
  plan.per_branch =
      std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(plan.exact - 1e-9)));
  return plan;
}

FrequencyTriple simulate_frequencies(const ConditionalTriple& truth, std::uint64_t n_per_branch,
                                     RandomStream& rng) {
  truth.validate();
  auto draw = [&](double p) {
    std::binomial_distribution<std::uint64_t> dist(n_per_branch, p);
    return Frequency{dist(rng), n_per_branch};
  };
  FrequencyTriple f;
  f.a_given_b_plus = draw(truth.p_a_given_b_plus);
  f.c_given_b_minus = draw(truth.p_c_given_b_minus);
  f.a_given_c_plus = draw(truth.p_a_given_c_plus);
  return f;
}

RejectionCount branch_rejection_rate(const ConditionalTriple& truth, std::uint64_t n_per_branch,
                                     const TestConfig& cfg, std::uint64_t replications,
                                     std::uint64_t seed) {
  cfg.validate();
  truth.validate();
  if (n_per_branch == 0) throw Error(ErrorCode::ZeroBranch, "n per branch must be positive");
  return parallel_count(replications, [&](std::uint64_t r) {
    RandomStream rng = RandomStream::derive(seed, r);
    return rejects_classical(test_quantum_like(simulate_frequencies(truth, n_per_branch, rng), cfg));
  });
}

RejectionCount protocol_rejection_rate(const AgentModel& agent, std::uint64_t n_total,
                                       const TestConfig& cfg, std::uint64_t replications,
                                       std::uint64_t seed) {
  cfg.validate();
  validate_agent(agent);
  return parallel_count(replications, [&](std::uint64_t r) {
    const std::uint64_t run_seed = RandomStream::derive(seed, r)();
    try {
      const ProtocolRun run = run_protocol(agent, n_total, run_seed);
      return rejects_classical(test_quantum_like(frequencies(run.result), cfg));
    } catch (const Error& e) {
      if (e.code() == ErrorCode::ZeroBranch) return false;
      throw;
    }
  });
}

}  // namespace condbell
