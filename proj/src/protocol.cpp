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

#include "condbell/protocol.hpp"

#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <numeric>
#include <unordered_set>

#include "condbell/error.hpp"
#include "condbell/random.hpp"
#include "condbell/realizability.hpp"

namespace condbell {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr std::uint64_t kSplitStream = ~std::uint64_t{0};

Observable first_question_for(Branch branch) noexcept {
  return branch == Branch::U ? Observable::B : Observable::C;
}

std::optional<Observable> second_question_for(Branch branch, Outcome first) noexcept {
  if (branch == Branch::U) return first == Outcome::Plus ? Observable::A : Observable::C;
  if (first == Outcome::Plus) return Observable::A;
  return std::nullopt;
}

// Table entry used for the second answer after (branch, first answer).
double table_conditional(const ConditionalTriple& t, Branch branch, Outcome first) noexcept {
  if (branch == Branch::U) {
    return first == Outcome::Plus ? t.p_a_given_b_plus : t.p_c_given_b_minus;
  }
  return t.p_a_given_c_plus;
}

Outcome draw(RandomStream& rng, double p_plus) noexcept {
  return rng.bernoulli(p_plus) ? Outcome::Plus : Outcome::Minus;
}

struct Answers {
  Outcome first = Outcome::Plus;
  std::optional<Outcome> second;
};

Answers answer(const AgentModel& agent, Branch branch, RandomStream& rng) {
  const Observable q1 = first_question_for(branch);
  return std::visit(
      overloaded{
          [&](const JointPmf& pmf) {
            const LatentTriple latent = sample_latent_triple(pmf, rng);
            Answers out{latent[q1], std::nullopt};
            if (const auto q2 = second_question_for(branch, out.first)) out.second = latent[*q2];
            return out;
          },
          [&](const QubitExperiment& exp) {
            const PlanarObservable& o1 = exp.observable(q1);
            Answers out{draw(rng, born_probability(exp.state, o1, Outcome::Plus)), std::nullopt};
            if (const auto q2 = second_question_for(branch, out.first)) {
              const DensityMatrix2 after = post_measurement_state(exp.state, o1, out.first);
              out.second = draw(rng, born_probability(after, exp.observable(*q2), Outcome::Plus));
            }
            return out;
          },
          [&](const TableAgent& table) {
            Answers out{draw(rng, table.marginals[q1]), std::nullopt};
            if (second_question_for(branch, out.first)) {
              out.second = draw(rng, table_conditional(table.triple, branch, out.first));
            }
            return out;
          },
      },
      agent);
}

void require_nonempty_branches(const ProtocolResult& r) {
  const struct {
    std::uint64_t n;
    const char* name;
  } groups[] = {{r.u_b_plus, "U_b+ (n1)"}, {r.u_b_minus, "U_b- (n2)"}, {r.v_c_plus, "V_c+ (n3)"}};
  for (const auto& g : groups) {
    if (g.n == 0) {
      throw Error(ErrorCode::ZeroBranch, std::string("post-selected group ") + g.name +
                                             " is empty; rerun with a larger n_total");
    }
  }
}

}  // namespace

void validate_agent(const AgentModel& agent) {
  std::visit(overloaded{
                 [](const JointPmf& pmf) {
                   if (!marginals(pmf).symmetric()) {
                     throw Error(ErrorCode::AsymmetricMarginals,
                                 "classical agent needs every marginal equal to 1/2");
                   }
                 },
                 [](const QubitExperiment&) {},
                 [](const TableAgent& table) {
                   table.triple.validate();
                   table.marginals.validate();
                   if (!table.marginals.symmetric()) {
                     throw Error(ErrorCode::AsymmetricMarginals,
                                 "table agent needs every marginal equal to 1/2");
                   }
                 },
             },
             agent);
}

ConditionalTriple exact_conditionals(const AgentModel& agent) {
  return std::visit(overloaded{
                        [](const JointPmf& pmf) { return conditionals_from_joint(pmf); },
                        [](const QubitExperiment& exp) { return exact_conditional_triple(exp); },
                        [](const TableAgent& table) { return table.triple; },
                    },
                    agent);
}

MarginalVector exact_marginals(const AgentModel& agent) {
  return std::visit(overloaded{
                        [](const JointPmf& pmf) { return marginals(pmf); },
                        [](const QubitExperiment& exp) { return exp.marginals(); },
                        [](const TableAgent& table) { return table.marginals; },
                    },
                    agent);
}

ExactSummary exact_summary(const AgentModel& agent) {
  ExactSummary s;
  s.triple = exact_conditionals(agent);
  s.delta = cond_bell_delta(s.triple);
  s.marginals = exact_marginals(agent);
  s.premise_holds = s.marginals.symmetric();
  s.realizability = realize(s.triple);
  return s;
}

void ResponseRecord::validate() const {
  if (first_question != first_question_for(branch)) {
    throw Error(ErrorCode::SchemaViolation,
                std::string("branch ") + (branch == Branch::U ? "U" : "V") +
                    " must be asked " + label(first_question_for(branch)) + " first");
  }
  if (second_question.has_value() != second_answer.has_value()) {
    throw Error(ErrorCode::SchemaViolation,
                "second question and second answer must both be present or both absent");
  }
  const auto expected = second_question_for(branch, first_answer);
  if (expected != second_question) {
    throw Error(ErrorCode::SchemaViolation,
                expected ? std::string("second question must be ") + label(*expected)
                         : std::string("branch V with first answer -1 gets no second question"));
  }
}

void ProtocolResult::validate() const {
  auto fail = [](const char* what) { throw Error(ErrorCode::InvalidArgument, what); };
  if (n_u + n_v != n_total) fail("n_U + n_V must equal n_total");
  if (u_b_plus + u_b_minus != n_u) fail("U_b_plus + U_b_minus must equal n_U");
  if (v_c_plus + v_c_minus != n_v) fail("V_c_plus + V_c_minus must equal n_V");
  if (a_plus_given_b_plus > u_b_plus) fail("a_plus_given_b_plus exceeds U_b_plus");
  if (c_plus_given_b_minus > u_b_minus) fail("c_plus_given_b_minus exceeds U_b_minus");
  if (a_plus_given_c_plus > v_c_plus) fail("a_plus_given_c_plus exceeds V_c_plus");
}

ProtocolRun run_protocol(const AgentModel& agent, std::uint64_t n_total, std::uint64_t seed) {
  if (n_total < 4) {
    throw Error(ErrorCode::InvalidArgument, "n_total must be at least 4");
  }
  if (n_total % 2 != 0) {
    throw Error(ErrorCode::OddPopulation,
                "n_total must be even to split into equal halves, got " +
                    std::to_string(n_total));
  }
  validate_agent(agent);

  std::vector<std::uint64_t> order(n_total);
  std::iota(order.begin(), order.end(), std::uint64_t{0});
  RandomStream split = RandomStream::derive(seed, kSplitStream);
  std::shuffle(order.begin(), order.end(), split);
  std::vector<Branch> branch(n_total, Branch::V);
  for (std::uint64_t k = 0; k < n_total / 2; ++k) branch[order[k]] = Branch::U;

  ProtocolRun run;
  run.records.reserve(n_total);
  for (std::uint64_t i = 0; i < n_total; ++i) {
    RandomStream rng = RandomStream::derive(seed, i);
    const Answers ans = answer(agent, branch[i], rng);
    ResponseRecord rec;
    rec.subject_id = "s" + std::to_string(i);
    rec.branch = branch[i];
    rec.first_question = first_question_for(branch[i]);
    rec.first_answer = ans.first;
    rec.second_question = second_question_for(branch[i], ans.first);
    rec.second_answer = ans.second;
    run.records.push_back(std::move(rec));
  }
  run.result = tally(run.records, seed);
  require_nonempty_branches(run.result);
  return run;
}

ProtocolResult tally(std::span<const ResponseRecord> records, std::optional<std::uint64_t> seed) {
  ProtocolResult r;
  r.seed = seed;
  std::unordered_set<std::string> seen;
  seen.reserve(records.size());
  for (const ResponseRecord& rec : records) {
    rec.validate();
    if (!seen.insert(rec.subject_id).second) {
      throw Error(ErrorCode::DuplicateSubject, "duplicate subject_id '" + rec.subject_id + "'");
    }
    ++r.n_total;
    const bool plus = rec.first_answer == Outcome::Plus;
    const bool second_plus = rec.second_answer == Outcome::Plus;
    if (rec.branch == Branch::U) {
      ++r.n_u;
      if (plus) {
        ++r.u_b_plus;
        if (second_plus) ++r.a_plus_given_b_plus;
      } else {
        ++r.u_b_minus;
        if (second_plus) ++r.c_plus_given_b_minus;
      }
    } else {
      ++r.n_v;
      if (plus) {
        ++r.v_c_plus;
        if (second_plus) ++r.a_plus_given_c_plus;
      } else {
        ++r.v_c_minus;
      }
    }
  }
  return r;
}

void FrequencyTriple::validate() const {
  for (const Frequency* f : {&a_given_b_plus, &c_given_b_minus, &a_given_c_plus}) {
    if (f->trials == 0) {
      throw Error(ErrorCode::ZeroBranch, "frequency has an empty denominator");
    }
    if (f->successes > f->trials) {
      throw Error(ErrorCode::InvalidArgument, "frequency numerator exceeds its denominator");
    }
  }
}

ConditionalTriple FrequencyTriple::point_estimate() const noexcept {
  return ConditionalTriple{a_given_b_plus.value(), c_given_b_minus.value(),
                           a_given_c_plus.value()};
}

FrequencyTriple frequencies(const ProtocolResult& r) {
  r.validate();
  require_nonempty_branches(r);
  return FrequencyTriple{{r.a_plus_given_b_plus, r.u_b_plus},
                         {r.c_plus_given_b_minus, r.u_b_minus},
                         {r.a_plus_given_c_plus, r.v_c_plus}};
}

HomogeneityResult homogeneity_check(const ProtocolResult& r, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "alpha must lie in (0, 1)");
  }
  if (r.n_u == 0 || r.n_v == 0) {
    throw Error(ErrorCode::InvalidArgument, "homogeneity check needs both branches nonempty");
  }
  auto pearson = [](std::uint64_t plus, std::uint64_t n) {
    const double expected = 0.5 * static_cast<double>(n);
    const double dp = static_cast<double>(plus) - expected;
    const double dm = static_cast<double>(n - plus) - expected;
    return (dp * dp + dm * dm) / expected;
  };
  HomogeneityResult h;
  h.chi2_u = pearson(r.u_b_plus, r.n_u);
  h.chi2_v = pearson(r.v_c_plus, r.n_v);
  h.chi2 = h.chi2_u + h.chi2_v;
  h.critical = boost::math::quantile(boost::math::chi_squared(2.0), 1.0 - alpha);
  h.pass = h.chi2 < h.critical;
  return h;
}

}  // namespace condbell
