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

#include "condbell/condbell.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <sstream>
#include <string>

#include "condbell/error.hpp"
#include "condbell/inference.hpp"
#include "condbell/io.hpp"
#include "condbell/protocol.hpp"
#include "condbell/qubit.hpp"
#include "condbell/realizability.hpp"

struct cb_model {
  condbell::AgentModel model;
};

struct cb_run {
  condbell::ProtocolResult result;
  std::vector<condbell::ResponseRecord> records;
  bool has_records = false;
};

struct cb_report {
  condbell::TestReport report;
};

namespace {

using namespace condbell;

thread_local std::string g_last_error;

cb_status status_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return CB_ERR_INVALID_ARGUMENT;
    case ErrorCode::InvalidPmf: return CB_ERR_INVALID_PMF;
    case ErrorCode::SameObservable: return CB_ERR_SAME_OBSERVABLE;
    case ErrorCode::ZeroConditioningEvent: return CB_ERR_ZERO_CONDITIONING_EVENT;
    case ErrorCode::AsymmetricMarginals: return CB_ERR_ASYMMETRIC_MARGINALS;
    case ErrorCode::InvalidState: return CB_ERR_INVALID_STATE;
    case ErrorCode::InvalidGridStep: return CB_ERR_INVALID_GRID_STEP;
    case ErrorCode::OddPopulation: return CB_ERR_ODD_POPULATION;
    case ErrorCode::ZeroBranch: return CB_ERR_ZERO_BRANCH;
    case ErrorCode::InvalidTarget: return CB_ERR_INVALID_TARGET;
    case ErrorCode::MalformedRow: return CB_ERR_MALFORMED_ROW;
    case ErrorCode::DuplicateSubject: return CB_ERR_DUPLICATE_SUBJECT;
    case ErrorCode::SchemaViolation: return CB_ERR_SCHEMA_VIOLATION;
    case ErrorCode::IoFailure: return CB_ERR_IO_FAILURE;
    case ErrorCode::Internal: return CB_ERR_INTERNAL;
  }
  return CB_ERR_INTERNAL;
}

// Runs `fn`, translating exceptions into status codes.
template <class Fn>
cb_status guarded(Fn&& fn) noexcept {
  try {
    g_last_error.clear();
    fn();
    return CB_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return CB_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return CB_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown failure";
    return CB_ERR_INTERNAL;
  }
}

template <class... Ptrs>
void require(Ptrs... ptrs) {
  if (((ptrs == nullptr) || ...)) throw Error(ErrorCode::InvalidArgument, "null pointer argument");
}

char* duplicate(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

Format format_of(cb_format f) {
  if (f == CB_FORMAT_TEXT) return Format::Text;
  if (f == CB_FORMAT_JSON) return Format::Json;
  throw Error(ErrorCode::InvalidArgument, "unknown output format");
}

TestConfig config_of(const cb_test_config* c) {
  TestConfig cfg;
  if (c) {
    cfg.delta_threshold = c->delta_threshold;
    cfg.alpha = c->alpha;
    cfg.confidence = c->confidence;
    if (c->method == CB_METHOD_Z_TEST) {
      cfg.method = TestMethod::ZTest;
    } else if (c->method == CB_METHOD_CHI2_FIT) {
      cfg.method = TestMethod::Chi2Fit;
    } else {
      throw Error(ErrorCode::InvalidArgument, "unknown test method");
    }
  }
  cfg.validate();
  return cfg;
}

ConditionalTriple triple_of(const cb_triple* t) {
  ConditionalTriple out{t->p_a_given_b_plus, t->p_c_given_b_minus, t->p_a_given_c_plus};
  out.validate();
  return out;
}

cb_triple to_c(const ConditionalTriple& t) {
  return cb_triple{t.p_a_given_b_plus, t.p_c_given_b_minus, t.p_a_given_c_plus};
}

cb_realizability to_c(const RealizabilityVerdict& v) {
  cb_realizability out{};
  out.feasible = v.feasible ? 1 : 0;
  if (v.witness) {
    for (std::size_t i = 0; i < JointPmf::kAtoms; ++i) out.witness[i] = (*v.witness)[i];
  }
  out.max_violation = v.max_violation;
  return out;
}

RunManifest manifest_of(const char* manifest_json) {
  const Json j = parse_json(manifest_json);
  if (!j.is_object() || !j.contains("command") || !j.at("command").is_string()) {
    throw Error(ErrorCode::InvalidArgument, "manifest needs a string 'command'");
  }
  RunManifest m;
  m.command = j.at("command").get<std::string>();
  if (j.contains("config")) m.config = j.at("config");
  if (j.contains("seed") && !j.at("seed").is_null()) {
    if (!j.at("seed").is_number_unsigned()) {
      throw Error(ErrorCode::InvalidArgument, "manifest seed must be a nonnegative integer");
    }
    m.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("inputs")) {
    if (!j.at("inputs").is_object()) {
      throw Error(ErrorCode::InvalidArgument, "manifest inputs must be an object");
    }
    for (const auto& [role, info] : j.at("inputs").items()) m.inputs[role] = info;
  }
  if (j.contains("created_at") && j.at("created_at").is_string()) {
    m.created_at = j.at("created_at").get<std::string>();
  }
  return m;
}

}  // namespace

extern "C" {

const char* cb_version(void) { return condbell::version(); }

const char* cb_status_name(cb_status status) {
  switch (status) {
    case CB_OK: return "Ok";
    case CB_ERR_INVALID_ARGUMENT: return "InvalidArgument";
    case CB_ERR_INVALID_PMF: return "InvalidPmf";
    case CB_ERR_SAME_OBSERVABLE: return "SameObservable";
    case CB_ERR_ZERO_CONDITIONING_EVENT: return "ZeroConditioningEvent";
    case CB_ERR_ASYMMETRIC_MARGINALS: return "AsymmetricMarginals";
    case CB_ERR_INVALID_STATE: return "InvalidState";
    case CB_ERR_INVALID_GRID_STEP: return "InvalidGridStep";
    case CB_ERR_ODD_POPULATION: return "OddPopulation";
    case CB_ERR_ZERO_BRANCH: return "ZeroBranch";
    case CB_ERR_INVALID_TARGET: return "InvalidTarget";
    case CB_ERR_MALFORMED_ROW: return "MalformedRow";
    case CB_ERR_DUPLICATE_SUBJECT: return "DuplicateSubject";
    case CB_ERR_SCHEMA_VIOLATION: return "SchemaViolation";
    case CB_ERR_IO_FAILURE: return "IoFailure";
    case CB_ERR_INTERNAL: return "Internal";
  }
  return "Unknown";
}

const char* cb_last_error(void) { return g_last_error.c_str(); }

void cb_string_free(char* s) { std::free(s); }

void cb_default_config(cb_test_config* out) {
  if (!out) return;
  const TestConfig cfg;
  *out = cb_test_config{cfg.delta_threshold, cfg.alpha, cfg.confidence, CB_METHOD_Z_TEST};
}

cb_status cb_model_from_json(const char* json, cb_model** out) {
  return guarded([&] {
    require(json, out);
    *out = nullptr;
    auto model = std::make_unique<cb_model>(cb_model{model_from_json(parse_json(json))});
    *out = model.release();
  });
}

void cb_model_free(cb_model* model) { delete model; }

cb_status cb_model_exact(const cb_model* model, cb_exact_summary* out) {
  return guarded([&] {
    require(model, out);
    const ExactSummary s = exact_summary(model->model);
    cb_exact_summary r{};
    r.triple = to_c(s.triple);
    r.delta = s.delta.delta;
    r.violated = s.delta.violated ? 1 : 0;
    for (std::size_t i = 0; i < 3; ++i) r.marginals[i] = s.marginals.p_plus[i];
    r.premise_holds = s.premise_holds ? 1 : 0;
    r.realizability = to_c(s.realizability);
    *out = r;
  });
}

cb_status cb_model_render_exact(const cb_model* model, cb_format format, char** out) {
  return guarded([&] {
    require(model, out);
    *out = duplicate(render_exact(model->model, exact_summary(model->model), format_of(format)));
  });
}

cb_status cb_simulate(const cb_model* model, uint64_t n_total, uint64_t seed, cb_run** out) {
  return guarded([&] {
    require(model, out);
    *out = nullptr;
    ProtocolRun run = run_protocol(model->model, n_total, seed);
    auto handle = std::make_unique<cb_run>();
    handle->result = run.result;
    handle->records = std::move(run.records);
    handle->has_records = true;
    *out = handle.release();
  });
}

cb_status cb_run_from_json(const char* json, cb_run** out) {
  return guarded([&] {
    require(json, out);
    *out = nullptr;
    auto handle = std::make_unique<cb_run>();
    handle->result = result_from_json(parse_json(json));
    *out = handle.release();
  });
}

cb_status cb_run_from_csv(const char* data, size_t size, cb_run** out) {
  return guarded([&] {
    require(data, out);
    *out = nullptr;
    std::istringstream in(std::string(data, size));
    auto handle = std::make_unique<cb_run>();
    handle->records = parse_response_records(in);
    handle->result = tally(handle->records);
    handle->has_records = true;
    *out = handle.release();
  });
}

void cb_run_free(cb_run* run) { delete run; }

cb_status cb_run_counts(const cb_run* run, cb_counts* out) {
  return guarded([&] {
    require(run, out);
    const ProtocolResult& r = run->result;
    *out = cb_counts{r.n_total,
                     r.n_u,
                     r.n_v,
                     r.u_b_plus,
                     r.u_b_minus,
                     r.v_c_plus,
                     r.v_c_minus,
                     r.a_plus_given_b_plus,
                     r.c_plus_given_b_minus,
                     r.a_plus_given_c_plus,
                     r.seed ? 1 : 0,
                     r.seed.value_or(0)};
  });
}

cb_status cb_run_to_json(const cb_run* run, char** out) {
  return guarded([&] {
    require(run, out);
    *out = duplicate(result_to_json(run->result).dump(2) + "\n");
  });
}

cb_status cb_run_to_csv(const cb_run* run, char** out) {
  return guarded([&] {
    require(run, out);
    if (!run->has_records) {
      throw Error(ErrorCode::InvalidState, "run has no per-subject rows to export");
    }
    *out = duplicate(export_csv(run->records));
  });
}

cb_status cb_run_render(const cb_run* run, cb_format format, char** out) {
  return guarded([&] {
    require(run, out);
    *out = duplicate(render_result(run->result, format_of(format)));
  });
}

cb_status cb_analyze(const cb_run* run, const cb_test_config* config, cb_report** out) {
  return guarded([&] {
    require(run, out);
    *out = nullptr;
    auto handle = std::make_unique<cb_report>(cb_report{analyze(run->result, config_of(config))});
    *out = handle.release();
  });
}

void cb_report_free(cb_report* report) { delete report; }

cb_status cb_report_get_summary(const cb_report* report, cb_report_summary* out) {
  return guarded([&] {
    require(report, out);
    const TestReport& r = report->report;
    cb_report_summary s{};
    s.delta_hat = r.delta_hat;
    s.std_error = r.std_error;
    s.statistic = r.statistic;
    s.p_value = r.p_value;
    s.lower_bound = r.lower_bound;
    s.exceeds_threshold = r.exceeds_threshold ? 1 : 0;
    s.boundary = r.boundary ? 1 : 0;
    s.homogeneity_pass = r.homogeneity_pass ? 1 : 0;
    s.realizable = r.realizability.feasible ? 1 : 0;
    switch (r.verdict) {
      case Verdict::ClassicalConsistent: s.verdict = CB_VERDICT_CLASSICAL_CONSISTENT; break;
      case Verdict::QuantumLike: s.verdict = CB_VERDICT_QUANTUM_LIKE; break;
      case Verdict::Inconclusive: s.verdict = CB_VERDICT_INCONCLUSIVE; break;
    }
    *out = s;
  });
}

cb_status cb_report_write(const cb_report* report, const char* manifest_json, cb_format format,
                          char** out) {
  return guarded([&] {
    require(report, manifest_json, out);
    *out = duplicate(write_report(report->report, manifest_of(manifest_json), format_of(format)));
  });
}

cb_status cb_triple_from_json(const char* json, cb_triple* out) {
  return guarded([&] {
    require(json, out);
    *out = to_c(triple_from_json(parse_json(json)));
  });
}

cb_status cb_realize(const cb_triple* triple, cb_realizability* out) {
  return guarded([&] {
    require(triple, out);
    *out = to_c(realize(triple_of(triple)));
  });
}

cb_status cb_render_realizability(const cb_triple* triple, cb_format format, char** out) {
  return guarded([&] {
    require(triple, out);
    const ConditionalTriple t = triple_of(triple);
    *out = duplicate(render_realizability(t, realize(t), format_of(format)));
  });
}

cb_status cb_maximize(double grid_step, int refine_iterations, cb_maximum* out) {
  return guarded([&] {
    require(out);
    const ViolationMaximum m = maximize_violation(grid_step, refine_iterations);
    *out = cb_maximum{m.theta_a.degrees(), m.theta_b.degrees(), m.theta_c.degrees(), m.delta_max};
  });
}

cb_status cb_render_maximum(const cb_maximum* maximum, cb_format format, char** out) {
  return guarded([&] {
    require(maximum, out);
    const ViolationMaximum m{PlanarObservable(maximum->theta_a), PlanarObservable(maximum->theta_b),
                             PlanarObservable(maximum->theta_c), maximum->delta_max};
    *out = duplicate(render_maximum(m, format_of(format)));
  });
}

cb_status cb_required_sample_size(double target_delta, const cb_test_config* config, double power,
                                  cb_sample_size* out) {
  return guarded([&] {
    require(out);
    const SampleSizePlan p = required_sample_size(target_delta, config_of(config), power);
    *out = cb_sample_size{p.per_branch, p.exact, to_c(p.triple), p.boundary ? 1 : 0,
                          p.degenerate ? 1 : 0};
  });
}

cb_status cb_render_sample_size(double target_delta, const cb_test_config* config, double power,
                                cb_format format, char** out) {
  return guarded([&] {
    require(out);
    const TestConfig cfg = config_of(config);
    const SampleSizePlan p = required_sample_size(target_delta, cfg, power);
    *out = duplicate(render_sample_size(p, target_delta, cfg, power, format_of(format)));
  });
}

cb_status cb_sha256_hex(const void* data, size_t size, char out[65]) {
  return guarded([&] {
    require(out);
    if (size > 0) require(data);
    const std::string hex =
        sha256_hex(std::string_view(static_cast<const char*>(data ? data : ""), size));
    std::memcpy(out, hex.c_str(), 65);
  });
}

}  // extern "C"
