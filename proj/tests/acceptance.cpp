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

// Acceptance checks. Prints one PASS/FAIL line per criterion; the exit status
// is nonzero when a criterion fails, except those named with --known-failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <set>
#include <string>

#include "condbell/condbell.h"
#include "condbell/inference.hpp"
#include "condbell/probability.hpp"
#include "condbell/protocol.hpp"
#include "condbell/qubit.hpp"
#include "condbell/realizability.hpp"
#include "test_support.hpp"

namespace {

using namespace condbell;

struct Outcome_ {
  bool pass = false;
  std::string detail;
};

QubitExperiment canonical() {
  return {PlanarObservable(120), PlanarObservable(0), PlanarObservable(60),
          DensityMatrix2::maximally_mixed()};
}

Outcome_ criterion1() {
  std::mt19937_64 gen(20261016);
  int holds = 0;
  constexpr int kTotal = 10000;
  const auto t0 = std::chrono::steady_clock::now();
  for (int k = 0; k < kTotal; ++k) {
    JointPmf pmf = JointPmf::uniform();
    if (k < 8) {
      std::array<double, 8> w{};
      w[static_cast<std::size_t>(k)] = 1.0;
      pmf = JointPmf::from_atoms(w);
    } else if (k < 100) {
      pmf = testing::random_sparse_joint(gen, 1 + k % 3);
    } else {
      pmf = testing::random_joint(gen);
    }
    holds += wigner_check(pmf).holds;
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  char buf[160];
  std::snprintf(buf, sizeof buf, "Wigner holds %d/%d (100 boundary cases), %.3f s", holds, kTotal,
                secs);
  return {holds == kTotal && secs < 5.0, buf};
}

Outcome_ criterion2() {
  int ok = 0;
  double worst = -1e9;
  constexpr int kTotal = 10000;
  for (std::uint64_t seed = 1; seed <= kTotal; ++seed) {
    const JointPmf pmf = random_symmetric_joint(seed);
    const double d = cond_bell_delta(conditionals_from_joint(pmf)).delta;
    worst = std::max(worst, d);
    ok += d <= kExactTolerance && conditional_pair_identity_check(pmf);
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "Delta <= 1e-12 and identity %d/%d, max Delta %.3g", ok, kTotal,
                worst);
  return {ok == kTotal, buf};
}

Outcome_ criterion3() {
  const ConditionalTriple t = exact_conditional_triple(canonical());
  const double err = std::max({std::abs(t.p_a_given_b_plus - 0.25),
                               std::abs(t.p_c_given_b_minus - 0.25),
                               std::abs(t.p_a_given_c_plus - 0.75)});
  const double delta = cond_bell_delta(t).delta;
  const auto t0 = std::chrono::steady_clock::now();
  const ViolationMaximum m = maximize_violation(1.0, 50);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "triple error %.2g, Delta %.15g, Delta_max %.12g at (%.6g, %.6g, %.6g), %.3f s", err,
                delta, m.delta_max, m.theta_a.degrees(), m.theta_b.degrees(), m.theta_c.degrees(),
                secs);
  return {err <= 1e-12 && std::abs(delta - 0.25) <= 1e-12 &&
              std::abs(m.delta_max - 0.25) <= 1e-6 && secs < 10.0,
          buf};
}

Outcome_ criterion4() {
  const bool canonical_infeasible = !realize({0.25, 0.25, 0.75}).feasible;
  int ok = 0;
  double worst = 0.0;
  constexpr int kTotal = 1000;
  for (std::uint64_t seed = 1; seed <= kTotal; ++seed) {
    const ConditionalTriple t = conditionals_from_joint(random_symmetric_joint(seed));
    const RealizabilityVerdict v = realize(t);
    if (!v.feasible || !v.witness) continue;
    const ConditionalTriple back = conditionals_from_joint(*v.witness);
    double err = std::max({std::abs(back.p_a_given_b_plus - t.p_a_given_b_plus),
                           std::abs(back.p_c_given_b_minus - t.p_c_given_b_minus),
                           std::abs(back.p_a_given_c_plus - t.p_a_given_c_plus)});
    for (double m : marginals(*v.witness).p_plus) err = std::max(err, std::abs(m - 0.5));
    worst = std::max(worst, err);
    ok += err <= 1e-9;
  }
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "canonical infeasible: %s, verified witnesses %d/%d, max round-trip error %.2g",
                canonical_infeasible ? "yes" : "no", ok, kTotal, worst);
  return {canonical_infeasible && ok == kTotal, buf};
}

Outcome_ criterion5() {
  const ConditionalTriple t = exact_conditional_triple(canonical());
  constexpr int kSeeds = 100;
  int good = 0;
  const auto t0 = std::chrono::steady_clock::now();
  for (std::uint64_t seed = 1; seed <= kSeeds; ++seed) {
    const FrequencyTriple f = frequencies(run_protocol(canonical(), 40000, seed).result);
    const auto within = [](const Frequency& fr, double p) {
      const double sigma = std::sqrt(p * (1 - p) / static_cast<double>(fr.trials));
      return std::abs(fr.value() - p) <= 3 * sigma;
    };
    good += within(f.a_given_b_plus, t.p_a_given_b_plus) &&
            within(f.c_given_b_minus, t.p_c_given_b_minus) &&
            within(f.a_given_c_plus, t.p_a_given_c_plus);
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  char buf[160];
  std::snprintf(buf, sizeof buf, "runs with all frequencies within 3 sigma: %d/%d, %.3f s", good,
                kSeeds, secs);
  return {good >= 99 && secs < 30.0, buf};
}

Outcome_ criterion6() {
  TestConfig cfg;
  cfg.alpha = 0.05;
  const TableAgent table{{1.0, 0.0, 1.0}, {}};
  const RejectionCount r = protocol_rejection_rate(table, 1000, cfg, 10000, 6);
  // For comparison: a Delta = 0 triple with no 0/1 entries.
  const RejectionCount interior =
      protocol_rejection_rate(TableAgent{{0.5, 0.25, 0.75}, {}}, 1000, cfg, 10000, 6);
  char buf[240];
  std::snprintf(buf, sizeof buf,
                "table (1, 0, 1): rejection rate %.4f over %llu runs (required [0.03, 0.07]); "
                "interior Delta = 0 table (0.5, 0.25, 0.75): %.4f",
                r.rate(), static_cast<unsigned long long>(r.replications), interior.rate());
  return {r.rate() >= 0.03 && r.rate() <= 0.07, buf};
}

Outcome_ criterion7() {
  TestConfig cfg;
  cfg.alpha = 0.05;
  const SampleSizePlan plan = required_sample_size(0.25, cfg, 0.9);
  const RejectionCount r = branch_rejection_rate({0.25, 0.25, 0.75}, 78, cfg, 10000, 7);
  char buf[160];
  std::snprintf(buf, sizeof buf, "analytic n = %.4f -> %llu; empirical power at n = 78: %.4f",
                plan.exact, static_cast<unsigned long long>(plan.per_branch), r.rate());
  return {plan.per_branch == 78 && std::abs(r.rate() - 0.9) <= 0.05, buf};
}

struct Analysis {
  cb_status status = CB_OK;
  cb_report_summary summary{};
  std::string json;
};

Analysis simulate_and_analyze(const char* model_json, std::uint64_t n, std::uint64_t seed) {
  Analysis out;
  cb_model* model = nullptr;
  cb_run* run = nullptr;
  cb_report* report = nullptr;
  char* doc = nullptr;
  const std::string manifest =
      R"({"command":"analyze","seed":)" + std::to_string(seed) + "}";
  if ((out.status = cb_model_from_json(model_json, &model)) == CB_OK &&
      (out.status = cb_simulate(model, n, seed, &run)) == CB_OK &&
      (out.status = cb_analyze(run, nullptr, &report)) == CB_OK &&
      (out.status = cb_report_get_summary(report, &out.summary)) == CB_OK &&
      (out.status = cb_report_write(report, manifest.c_str(), CB_FORMAT_JSON, &doc)) == CB_OK) {
    out.json = doc;
  }
  cb_string_free(doc);
  cb_report_free(report);
  cb_run_free(run);
  cb_model_free(model);
  return out;
}

const char* verdict_name(cb_verdict v) {
  switch (v) {
    case CB_VERDICT_QUANTUM_LIKE: return "quantum_like";
    case CB_VERDICT_CLASSICAL_CONSISTENT: return "classical_consistent";
    default: return "inconclusive";
  }
}

Outcome_ criterion8() {
  constexpr const char* kQuantum =
      R"({"kind":"quantum","experiment":{"theta_a":120,"theta_b":0,"theta_c":60,"state":"mixed"}})";
  constexpr const char* kUniform =
      R"({"kind":"classical","pmf":{"atoms":[0.125,0.125,0.125,0.125,0.125,0.125,0.125,0.125]}})";
  const Analysis q1 = simulate_and_analyze(kQuantum, 10000, 8);
  const Analysis q2 = simulate_and_analyze(kQuantum, 10000, 8);
  const Analysis c1 = simulate_and_analyze(kUniform, 4000, 7);
  const Analysis c2 = simulate_and_analyze(kUniform, 4000, 7);
  const bool ok_status =
      q1.status == CB_OK && q2.status == CB_OK && c1.status == CB_OK && c2.status == CB_OK;
  const bool quantum = q1.summary.verdict == CB_VERDICT_QUANTUM_LIKE && q1.summary.p_value < 1e-6;
  const bool classical = c1.summary.verdict == CB_VERDICT_CLASSICAL_CONSISTENT;
  const bool identical = !q1.json.empty() && q1.json == q2.json && c1.json == c2.json;
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "quantum: %s, p %.3g; uniform classical: %s; byte-identical: %s",
                verdict_name(q1.summary.verdict), q1.summary.p_value,
                verdict_name(c1.summary.verdict), identical ? "yes" : "no");
  return {ok_status && quantum && classical && identical, buf};
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> known;
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--known-failure") known.insert(std::atoi(argv[++i]));
  }
  const std::function<Outcome_()> criteria[] = {criterion1, criterion2, criterion3, criterion4,
                                                 criterion5, criterion6, criterion7, criterion8};
  int unexpected = 0;
  for (int i = 0; i < 8; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome_ o;
    try {
      o = criteria[i]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const int n = i + 1;
    std::printf("criterion %d: %s  %s  [%.2f s]%s\n", n, o.pass ? "PASS" : "FAIL",
                o.detail.c_str(), secs,
                (!o.pass && known.count(n)) ? "  (known failure)" : "");
    std::fflush(stdout);
    if (!o.pass && !known.count(n)) ++unexpected;
  }
  return unexpected == 0 ? 0 : 1;
}
