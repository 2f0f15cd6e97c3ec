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

#include "condbell/io.hpp"

#include <fmt/format.h>
#include <openssl/evp.h>

#include <array>
#include <sstream>
#include <unordered_set>

#include "condbell/error.hpp"

namespace condbell {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

[[noreturn]] void bad_input(const std::string& what) {
  throw Error(ErrorCode::InvalidArgument, what);
}

// Runs a decoder, turning nlohmann type/key errors into InvalidArgument.
template <class Fn>
auto decode(const char* what, Fn&& fn) {
  try {
    return fn();
  } catch (const nlohmann::json::exception& e) {
    bad_input(std::string("invalid ") + what + " JSON: " + e.what());
  }
}

double number_at(const Json& j, const char* key) {
  const Json& v = j.at(key);
  if (!v.is_number()) bad_input(std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

std::uint64_t count_at(const Json& j, const char* key) {
  const Json& v = j.at(key);
  if (!v.is_number_unsigned()) {
    bad_input(std::string("field '") + key + "' must be a nonnegative integer");
  }
  return v.get<std::uint64_t>();
}

bool bool_at(const Json& j, const char* key) {
  const Json& v = j.at(key);
  if (!v.is_boolean()) bad_input(std::string("field '") + key + "' must be a boolean");
  return v.get<bool>();
}

std::string g(double x) { return fmt::format("{:.10g}", x); }

const char* method_name(TestMethod m) { return to_string(m); }

TestMethod method_from(const std::string& s) {
  if (s == "z_test" || s == "z") return TestMethod::ZTest;
  if (s == "chi2_fit" || s == "chi2") return TestMethod::Chi2Fit;
  bad_input("unknown test method '" + s + "'");
}

Verdict verdict_from(const std::string& s) {
  if (s == "classical_consistent") return Verdict::ClassicalConsistent;
  if (s == "quantum_like") return Verdict::QuantumLike;
  if (s == "inconclusive") return Verdict::Inconclusive;
  bad_input("unknown verdict '" + s + "'");
}

Json frequency_to_json(const Frequency& f) {
  return Json{{"successes", f.successes}, {"trials", f.trials}, {"value", f.value()}};
}

Frequency frequency_from_json(const Json& j) {
  return Frequency{count_at(j, "successes"), count_at(j, "trials")};
}

Json homogeneity_to_json(const HomogeneityResult& h) {
  return Json{{"chi2_u", h.chi2_u}, {"chi2_v", h.chi2_v}, {"chi2", h.chi2},
              {"critical", h.critical}, {"pass", h.pass}};
}

HomogeneityResult homogeneity_from_json(const Json& j) {
  HomogeneityResult h;
  h.chi2_u = number_at(j, "chi2_u");
  h.chi2_v = number_at(j, "chi2_v");
  h.chi2 = number_at(j, "chi2");
  h.critical = number_at(j, "critical");
  h.pass = bool_at(j, "pass");
  return h;
}

Json marginals_to_json(const MarginalVector& m) {
  return Json::array({m.p_plus[0], m.p_plus[1], m.p_plus[2]});
}

std::string triple_text(const ConditionalTriple& t) {
  return fmt::format("P(a=+1|b=+1) = {}\nP(c=+1|b=-1) = {}\nP(a=+1|c=+1) = {}\n",
                     g(t.p_a_given_b_plus), g(t.p_c_given_b_minus), g(t.p_a_given_c_plus));
}

std::string verdict_text(const RealizabilityVerdict& v) {
  if (v.feasible) {
    std::string atoms;
    for (std::size_t i = 0; i < JointPmf::kAtoms; ++i) {
      atoms += (i ? ", " : "") + g((*v.witness)[i]);
    }
    return "realizable: yes\nwitness atoms (+++ ++- +-+ +-- -++ -+- --+ ---): [" + atoms + "]\n";
  }
  return "realizable: no (quantum-like)\nmax violation: " + g(v.max_violation) + "\n";
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::optional<std::vector<std::string>> split_csv_line(const std::string& line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          fields.back() += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        fields.back() += c;
      }
    } else if (c == '"' && fields.back().empty()) {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back() += c;
    }
  }
  if (quoted) return std::nullopt;
  return fields;
}

char observable_letter(Observable o) {
  return static_cast<char>(label(o) - 'a' + 'A');
}

const char* outcome_token(Outcome o) { return o == Outcome::Plus ? "+1" : "-1"; }

}  // namespace

const char* version() noexcept { return "0.1.0"; }

Format parse_format(std::string_view name) {
  if (name == "text") return Format::Text;
  if (name == "json") return Format::Json;
  bad_input("format must be 'text' or 'json', got '" + std::string(name) + "'");
}

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    bad_input(std::string("malformed JSON: ") + e.what());
  }
}

Json pmf_to_json(const JointPmf& pmf) {
  return Json{{"atoms", pmf.atoms()}};
}

JointPmf pmf_from_json(const Json& j) {
  return decode("joint pmf", [&] {
    const Json& atoms = j.at("atoms");
    if (!atoms.is_array()) bad_input("'atoms' must be an array");
    std::vector<double> values;
    for (const Json& a : atoms) {
      if (!a.is_number()) bad_input("'atoms' entries must be numbers");
      values.push_back(a.get<double>());
    }
    return JointPmf::from_atoms(values);
  });
}

Json triple_to_json(const ConditionalTriple& t) {
  return Json{{"p_a_given_b_plus", t.p_a_given_b_plus},
              {"p_c_given_b_minus", t.p_c_given_b_minus},
              {"p_a_given_c_plus", t.p_a_given_c_plus}};
}

ConditionalTriple triple_from_json(const Json& j) {
  return decode("conditional triple", [&] {
    ConditionalTriple t;
    if (j.is_array()) {
      if (j.size() != 3) bad_input("triple array needs exactly 3 numbers");
      t = {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()};
    } else {
      t = {number_at(j, "p_a_given_b_plus"), number_at(j, "p_c_given_b_minus"),
           number_at(j, "p_a_given_c_plus")};
    }
    t.validate();
    return t;
  });
}

Json verdict_to_json(const RealizabilityVerdict& v) {
  return Json{{"feasible", v.feasible},
              {"witness", v.witness ? pmf_to_json(*v.witness) : Json(nullptr)},
              {"max_violation", v.max_violation}};
}

RealizabilityVerdict verdict_from_json(const Json& j) {
  return decode("realizability verdict", [&] {
    RealizabilityVerdict v;
    v.feasible = bool_at(j, "feasible");
    if (!j.at("witness").is_null()) v.witness = pmf_from_json(j.at("witness"));
    v.max_violation = number_at(j, "max_violation");
    return v;
  });
}

Json experiment_to_json(const QubitExperiment& e) {
  Json state = "mixed";
  if (!e.state.is_maximally_mixed()) {
    const auto r = e.state.bloch();
    state = Json{{"bloch", {r[0], r[1], r[2]}}};
  }
  return Json{{"theta_a", e.theta_a.degrees()},
              {"theta_b", e.theta_b.degrees()},
              {"theta_c", e.theta_c.degrees()},
              {"state", state}};
}

QubitExperiment experiment_from_json(const Json& j) {
  return decode("qubit experiment", [&] {
    QubitExperiment e;
    e.theta_a = PlanarObservable(number_at(j, "theta_a"));
    e.theta_b = PlanarObservable(number_at(j, "theta_b"));
    e.theta_c = PlanarObservable(number_at(j, "theta_c"));
    if (j.contains("state")) {
      const Json& s = j.at("state");
      if (s.is_string()) {
        if (s.get<std::string>() != "mixed") bad_input("state must be \"mixed\" or {\"bloch\": [x,y,z]}");
      } else {
        const Json& b = s.at("bloch");
        if (!b.is_array() || b.size() != 3) bad_input("'bloch' must hold 3 numbers");
        e.state = DensityMatrix2::from_bloch(b.at(0).get<double>(), b.at(1).get<double>(),
                                             b.at(2).get<double>());
      }
    }
    return e;
  });
}

Json model_to_json(const AgentModel& m) {
  return std::visit(
      overloaded{
          [](const JointPmf& pmf) { return Json{{"kind", "classical"}, {"pmf", pmf_to_json(pmf)}}; },
          [](const QubitExperiment& e) {
            return Json{{"kind", "quantum"}, {"experiment", experiment_to_json(e)}};
          },
          [](const TableAgent& t) {
            return Json{{"kind", "table"},
                        {"triple", triple_to_json(t.triple)},
                        {"marginals", marginals_to_json(t.marginals)}};
          },
      },
      m);
}

AgentModel model_from_json(const Json& j) {
  return decode("model", [&]() -> AgentModel {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "classical") return pmf_from_json(j.at("pmf"));
    if (kind == "quantum") return experiment_from_json(j.at("experiment"));
    if (kind == "table") {
      TableAgent t;
      t.triple = triple_from_json(j.at("triple"));
      if (j.contains("marginals")) {
        const Json& m = j.at("marginals");
        if (!m.is_array() || m.size() != 3) bad_input("'marginals' must hold 3 numbers");
        for (std::size_t i = 0; i < 3; ++i) t.marginals.p_plus[i] = m.at(i).get<double>();
      }
      t.marginals.validate();
      return t;
    }
    bad_input("model kind must be classical, quantum or table, got '" + kind + "'");
  });
}

Json result_to_json(const ProtocolResult& r) {
  return Json{{"n_total", r.n_total},
              {"n_U", r.n_u},
              {"n_V", r.n_v},
              {"U_b_plus", r.u_b_plus},
              {"U_b_minus", r.u_b_minus},
              {"V_c_plus", r.v_c_plus},
              {"V_c_minus", r.v_c_minus},
              {"a_plus_given_b_plus", r.a_plus_given_b_plus},
              {"c_plus_given_b_minus", r.c_plus_given_b_minus},
              {"a_plus_given_c_plus", r.a_plus_given_c_plus},
              {"seed", r.seed ? Json(*r.seed) : Json(nullptr)}};
}

ProtocolResult result_from_json(const Json& j) {
  return decode("protocol result", [&] {
    ProtocolResult r;
    r.n_total = count_at(j, "n_total");
    r.n_u = count_at(j, "n_U");
    r.n_v = count_at(j, "n_V");
    r.u_b_plus = count_at(j, "U_b_plus");
    r.u_b_minus = count_at(j, "U_b_minus");
    r.v_c_plus = count_at(j, "V_c_plus");
    r.v_c_minus = count_at(j, "V_c_minus");
    r.a_plus_given_b_plus = count_at(j, "a_plus_given_b_plus");
    r.c_plus_given_b_minus = count_at(j, "c_plus_given_b_minus");
    r.a_plus_given_c_plus = count_at(j, "a_plus_given_c_plus");
    if (j.contains("seed") && !j.at("seed").is_null()) r.seed = count_at(j, "seed");
    r.validate();
    return r;
  });
}

Json config_to_json(const TestConfig& c) {
  return Json{{"delta_threshold", c.delta_threshold},
              {"alpha", c.alpha},
              {"confidence", c.confidence},
              {"method", method_name(c.method)}};
}

TestConfig config_from_json(const Json& j) {
  return decode("test config", [&] {
    TestConfig c;
    c.delta_threshold = number_at(j, "delta_threshold");
    c.alpha = number_at(j, "alpha");
    c.confidence = number_at(j, "confidence");
    c.method = method_from(j.at("method").get<std::string>());
    c.validate();
    return c;
  });
}

Json report_to_json(const TestReport& r) {
  return Json{
      {"config", config_to_json(r.config)},
      {"frequencies",
       {{"a_given_b_plus", frequency_to_json(r.frequencies.a_given_b_plus)},
        {"c_given_b_minus", frequency_to_json(r.frequencies.c_given_b_minus)},
        {"a_given_c_plus", frequency_to_json(r.frequencies.a_given_c_plus)}}},
      {"delta_hat", r.delta_hat},
      {"std_error", r.std_error},
      {"statistic", r.statistic},
      {"p_value", r.p_value},
      {"lower_bound", r.lower_bound},
      {"exceeds_threshold", r.exceeds_threshold},
      {"boundary", r.boundary},
      {"verdict", to_string(r.verdict)},
      {"homogeneity_pass", r.homogeneity_pass},
      {"homogeneity", r.homogeneity ? homogeneity_to_json(*r.homogeneity) : Json(nullptr)},
      {"realizability", verdict_to_json(r.realizability)},
      {"fitted", r.fitted ? triple_to_json(*r.fitted) : Json(nullptr)},
  };
}

TestReport report_from_json(const Json& j) {
  return decode("test report", [&] {
    TestReport r;
    r.config = config_from_json(j.at("config"));
    const Json& f = j.at("frequencies");
    r.frequencies.a_given_b_plus = frequency_from_json(f.at("a_given_b_plus"));
    r.frequencies.c_given_b_minus = frequency_from_json(f.at("c_given_b_minus"));
    r.frequencies.a_given_c_plus = frequency_from_json(f.at("a_given_c_plus"));
    r.delta_hat = number_at(j, "delta_hat");
    r.std_error = number_at(j, "std_error");
    r.statistic = number_at(j, "statistic");
    r.p_value = number_at(j, "p_value");
    r.lower_bound = number_at(j, "lower_bound");
    r.exceeds_threshold = bool_at(j, "exceeds_threshold");
    r.boundary = bool_at(j, "boundary");
    r.verdict = verdict_from(j.at("verdict").get<std::string>());
    r.homogeneity_pass = bool_at(j, "homogeneity_pass");
    if (!j.at("homogeneity").is_null()) r.homogeneity = homogeneity_from_json(j.at("homogeneity"));
    r.realizability = verdict_from_json(j.at("realizability"));
    if (!j.at("fitted").is_null()) r.fitted = triple_from_json(j.at("fitted"));
    return r;
  });
}

Json maximum_to_json(const ViolationMaximum& m) {
  return Json{{"theta_a", m.theta_a.degrees()},
              {"theta_b", m.theta_b.degrees()},
              {"theta_c", m.theta_c.degrees()},
              {"delta_max", m.delta_max}};
}

Json sample_size_to_json(const SampleSizePlan& p) {
  return Json{{"per_branch", p.per_branch},
              {"exact", p.exact},
              {"triple", triple_to_json(p.triple)},
              {"boundary", p.boundary},
              {"degenerate", p.degenerate}};
}

Json exact_summary_to_json(const ExactSummary& s) {
  return Json{{"triple", triple_to_json(s.triple)},
              {"delta", s.delta.delta},
              {"violated", s.delta.violated},
              {"marginals", marginals_to_json(s.marginals)},
              {"premise_holds", s.premise_holds},
              {"realizability", verdict_to_json(s.realizability)}};
}

std::vector<ResponseRecord> parse_response_records(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) {
    throw Error(ErrorCode::MalformedRow, 1, "missing header");
  }
  ++line_no;
  if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader) {
    throw Error(ErrorCode::MalformedRow, 1,
                "header must be exactly '" + std::string(kCsvHeader) + "'");
  }

  auto malformed = [&](const std::string& why) {
    return Error(ErrorCode::MalformedRow, line_no, why);
  };
  auto branch_of = [&](const std::string& s) {
    if (s == "U") return Branch::U;
    if (s == "V") return Branch::V;
    throw malformed("branch must be U or V, got '" + s + "'");
  };
  auto question_of = [&](const std::string& s) {
    if (s == "A") return Observable::A;
    if (s == "B") return Observable::B;
    if (s == "C") return Observable::C;
    throw malformed("question must be A, B or C, got '" + s + "'");
  };
  auto answer_of = [&](const std::string& s) {
    if (s == "+1") return Outcome::Plus;
    if (s == "-1") return Outcome::Minus;
    throw malformed("answer must be +1 or -1, got '" + s + "'");
  };

  std::vector<ResponseRecord> records;
  std::unordered_set<std::string> seen;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (!fields) throw malformed("unterminated quoted field");
    if (fields->size() != 6) {
      throw malformed("expected 6 fields, got " + std::to_string(fields->size()));
    }
    const auto& f = *fields;
    if (f[0].empty()) throw malformed("subject_id is empty");
    ResponseRecord rec;
    rec.subject_id = f[0];
    rec.branch = branch_of(f[1]);
    rec.first_question = question_of(f[2]);
    rec.first_answer = answer_of(f[3]);
    if (!f[4].empty()) rec.second_question = question_of(f[4]);
    if (!f[5].empty()) rec.second_answer = answer_of(f[5]);
    try {
      rec.validate();
    } catch (const Error& e) {
      throw Error(e.code(), line_no, e.what());
    }
    if (!seen.insert(rec.subject_id).second) {
      throw Error(ErrorCode::DuplicateSubject, line_no,
                  "duplicate subject_id '" + rec.subject_id + "'");
    }
    records.push_back(std::move(rec));
  }
  if (in.bad()) throw Error(ErrorCode::IoFailure, "failed reading response CSV");
  return records;
}

ProtocolResult parse_responses(std::istream& in) {
  const auto records = parse_response_records(in);
  return tally(records);
}

std::string export_csv(std::span<const ResponseRecord> records) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const ResponseRecord& r : records) {
    out += csv_field(r.subject_id);
    out += r.branch == Branch::U ? ",U," : ",V,";
    out += observable_letter(r.first_question);
    out += ',';
    out += outcome_token(r.first_answer);
    out += ',';
    if (r.second_question) out += observable_letter(*r.second_question);
    out += ',';
    if (r.second_answer) out += outcome_token(*r.second_answer);
    out += '\n';
  }
  return out;
}

Json manifest_to_json(const RunManifest& m) {
  Json inputs = Json::object();
  for (const auto& [role, info] : m.inputs) inputs[role] = info;
  return Json{{"command", m.command},
              {"config", m.config},
              {"seed", m.seed ? Json(*m.seed) : Json(nullptr)},
              {"tool_version", m.tool_version},
              {"inputs", inputs},
              {"created_at", m.created_at ? Json(*m.created_at) : Json(nullptr)}};
}

RunManifest manifest_from_json(const Json& j) {
  return decode("manifest", [&] {
    RunManifest m;
    m.command = j.at("command").get<std::string>();
    m.config = j.at("config");
    if (!j.at("seed").is_null()) m.seed = count_at(j, "seed");
    m.tool_version = j.at("tool_version").get<std::string>();
    for (const auto& [role, info] : j.at("inputs").items()) m.inputs[role] = info;
    if (!j.at("created_at").is_null()) m.created_at = j.at("created_at").get<std::string>();
    return m;
  });
}

std::string sha256_hex(std::string_view bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorCode::Internal, "SHA-256 computation failed");
  }
  std::string hex;
  hex.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

std::string write_report(const TestReport& report, const RunManifest& manifest, Format format) {
  if (format == Format::Json) {
    const Json doc{{"manifest", manifest_to_json(manifest)}, {"report", report_to_json(report)}};
    return doc.dump(2) + "\n";
  }
  const auto& f = report.frequencies;
  auto freq = [](const char* name, const Frequency& fr) {
    return fmt::format("{} = {}/{} = {}\n", name, fr.successes, fr.trials, g(fr.value()));
  };
  std::string out;
  out += fmt::format("method: {}  alpha: {}  confidence: {}  delta threshold: {}\n",
                     to_string(report.config.method), g(report.config.alpha),
                     g(report.config.confidence), g(report.config.delta_threshold));
  out += freq("nu(a=+1|b=+1)", f.a_given_b_plus);
  out += freq("nu(c=+1|b=-1)", f.c_given_b_minus);
  out += freq("nu(a=+1|c=+1)", f.a_given_c_plus);
  out += fmt::format("Delta-hat = {}  (std. error {}{})\n", g(report.delta_hat),
                     g(report.std_error), report.boundary ? ", boundary estimate" : "");
  out += fmt::format("statistic = {}  p-value = {}\n", g(report.statistic), g(report.p_value));
  if (report.fitted) out += "closest realizable triple:\n" + triple_text(*report.fitted);
  out += fmt::format("lower {}% bound on Delta = {}  (exceeds {}: {})\n",
                     g(100.0 * report.config.confidence), g(report.lower_bound),
                     g(report.config.delta_threshold), report.exceeds_threshold ? "yes" : "no");
  if (report.homogeneity) {
    out += fmt::format("homogeneity: chi2 = {} (critical {}) {}\n", g(report.homogeneity->chi2),
                       g(report.homogeneity->critical),
                       report.homogeneity->pass ? "pass" : "FAIL");
  } else {
    out += "homogeneity: not checked (no first-answer counts)\n";
  }
  out += "point estimate " + verdict_text(report.realizability);
  out += fmt::format("verdict: {}\n", to_string(report.verdict));
  out += fmt::format("run: {} (condbell {}{})\n", manifest.command, manifest.tool_version,
                     manifest.seed ? ", seed " + std::to_string(*manifest.seed) : "");
  for (const auto& [role, info] : manifest.inputs) {
    out += fmt::format("input {}: {} sha256 {}\n", role, info.value("path", ""),
                       info.value("sha256", ""));
  }
  return out;
}

ReportDocument read_report(std::string_view json_text) {
  const Json doc = parse_json(json_text);
  return decode("report document", [&] {
    return ReportDocument{report_from_json(doc.at("report")), manifest_from_json(doc.at("manifest"))};
  });
}

std::string render_exact(const AgentModel& model, const ExactSummary& s, Format format) {
  if (format == Format::Json) {
    Json j = exact_summary_to_json(s);
    j["model"] = model_to_json(model);
    return j.dump(2) + "\n";
  }
  std::string out = fmt::format("model: {}\n", model_to_json(model).at("kind").get<std::string>());
  out += triple_text(s.triple);
  out += fmt::format("marginals P(u=+1): a={} b={} c={} ({})\n", g(s.marginals.p_plus[0]),
                     g(s.marginals.p_plus[1]), g(s.marginals.p_plus[2]),
                     s.premise_holds ? "symmetric" : "NOT symmetric");
  out += fmt::format("Delta = {}\n", g(s.delta.delta));
  if (!s.premise_holds) {
    out += "inequality not applicable: marginals are not all 1/2\n";
  } else {
    out += s.delta.violated ? "inequality VIOLATED\n" : "inequality holds\n";
  }
  out += verdict_text(s.realizability);
  return out;
}

std::string render_realizability(const ConditionalTriple& t, const RealizabilityVerdict& v,
                                 Format format) {
  if (format == Format::Json) {
    Json j = verdict_to_json(v);
    j["triple"] = triple_to_json(t);
    return j.dump(2) + "\n";
  }
  return triple_text(t) + fmt::format("Delta = {}\n", g(cond_bell_delta(t).delta)) +
         verdict_text(v);
}

std::string render_maximum(const ViolationMaximum& m, Format format) {
  if (format == Format::Json) return maximum_to_json(m).dump(2) + "\n";
  return fmt::format("theta_a = {} deg\ntheta_b = {} deg\ntheta_c = {} deg\ndelta_max = {}\n",
                     g(m.theta_a.degrees()), g(m.theta_b.degrees()), g(m.theta_c.degrees()),
                     g(m.delta_max));
}

std::string render_sample_size(const SampleSizePlan& plan, double target_delta,
                               const TestConfig& cfg, double power, Format format) {
  if (format == Format::Json) {
    Json j = sample_size_to_json(plan);
    j["target_delta"] = target_delta;
    j["alpha"] = cfg.alpha;
    j["power"] = power;
    return j.dump(2) + "\n";
  }
  std::string out = fmt::format("target Delta = {}  alpha = {}  power = {}\n", g(target_delta),
                                g(cfg.alpha), g(power));
  out += "assumed triple:\n" + triple_text(plan.triple);
  out += fmt::format("n per branch = {}  (exact {})\n", plan.per_branch, g(plan.exact));
  if (plan.boundary) out += "warning: boundary triple, variance degenerates\n";
  if (plan.degenerate) out += "warning: degenerate configuration (alpha >= 0.5 or power <= alpha)\n";
  return out;
}

std::string render_result(const ProtocolResult& r, Format format) {
  if (format == Format::Json) return result_to_json(r).dump(2) + "\n";
  return fmt::format(
      "n_total = {}  (U: {}, V: {})\n"
      "U: b=+1 {}  b=-1 {}\nV: c=+1 {}  c=-1 {}\n"
      "a=+1 after b=+1: {}/{}\nc=+1 after b=-1: {}/{}\na=+1 after c=+1: {}/{}\n",
      r.n_total, r.n_u, r.n_v, r.u_b_plus, r.u_b_minus, r.v_c_plus, r.v_c_minus,
      r.a_plus_given_b_plus, r.u_b_plus, r.c_plus_given_b_minus, r.u_b_minus,
      r.a_plus_given_c_plus, r.v_c_plus);
}

}  // namespace condbell
