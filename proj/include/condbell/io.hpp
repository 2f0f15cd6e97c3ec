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

#ifndef CONDBELL_IO_HPP
#define CONDBELL_IO_HPP

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "condbell/inference.hpp"
#include "condbell/probability.hpp"
#include "condbell/protocol.hpp"
#include "condbell/qubit.hpp"
#include "condbell/realizability.hpp"

namespace condbell {

using Json = nlohmann::json;

const char* version() noexcept;

enum class Format { Text, Json };

/// "text" or "json"; anything else is ErrorCode::InvalidArgument.
Format parse_format(std::string_view name);

// JSON schemas. Every *_from_json throws ErrorCode::InvalidArgument (or the
// domain validation error) on malformed input.

/// {"atoms": [8 numbers]} in the JointPmf index order.
Json pmf_to_json(const JointPmf& pmf);
JointPmf pmf_from_json(const Json& j);

/// {"p_a_given_b_plus": x, "p_c_given_b_minus": y, "p_a_given_c_plus": z};
/// a bare [x, y, z] array is also accepted on input.
Json triple_to_json(const ConditionalTriple& t);
ConditionalTriple triple_from_json(const Json& j);

/// {"feasible": bool, "witness": {"atoms": [...]} | null, "max_violation": x}
Json verdict_to_json(const RealizabilityVerdict& v);
RealizabilityVerdict verdict_from_json(const Json& j);

/// {"theta_a": deg, "theta_b": deg, "theta_c": deg,
///  "state": "mixed" | {"bloch": [x, y, z]}}
Json experiment_to_json(const QubitExperiment& e);
QubitExperiment experiment_from_json(const Json& j);

/// {"kind": "classical", "pmf": {...}}
/// {"kind": "quantum", "experiment": {...}}
/// {"kind": "table", "triple": {...}, "marginals": [pa, pb, pc]}  (marginals optional)
Json model_to_json(const AgentModel& m);
AgentModel model_from_json(const Json& j);

Json result_to_json(const ProtocolResult& r);
ProtocolResult result_from_json(const Json& j);

Json config_to_json(const TestConfig& c);
TestConfig config_from_json(const Json& j);

Json report_to_json(const TestReport& r);
TestReport report_from_json(const Json& j);

Json maximum_to_json(const ViolationMaximum& m);
Json sample_size_to_json(const SampleSizePlan& p);
Json exact_summary_to_json(const ExactSummary& s);

/// Parses a JSON document; syntax errors become ErrorCode::InvalidArgument.
Json parse_json(std::string_view text);

// Response CSV.

inline constexpr std::string_view kCsvHeader =
    "subject_id,branch,first_question,first_answer,second_question,second_answer";

/// Reads and validates per-subject rows. Errors: MalformedRow (bad field
/// count or encoding), SchemaViolation (routing), DuplicateSubject. Each
/// carries the 1-based line number.
std::vector<ResponseRecord> parse_response_records(std::istream& in);
ProtocolResult parse_responses(std::istream& in);
std::string export_csv(std::span<const ResponseRecord> records);

// Reports.

/// What is needed to rerun a command and get the same bytes.
struct RunManifest {
  std::string command;
  Json config = Json::object();
  std::optional<std::uint64_t> seed;
  std::string tool_version = version();
  /// role -> {"path": ..., "sha256": ...}
  std::map<std::string, Json> inputs;
  /// Only set on request; a timestamp makes otherwise identical runs differ.
  std::optional<std::string> created_at;

  bool operator==(const RunManifest&) const = default;
};

Json manifest_to_json(const RunManifest& m);
RunManifest manifest_from_json(const Json& j);

/// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view bytes);

/// JSON: {"manifest": ..., "report": ...} with sorted keys, 2-space indent,
/// trailing newline. Text: a terminal summary including the verdict line and
/// the three frequencies with their denominators.
std::string write_report(const TestReport& report, const RunManifest& manifest, Format format);

struct ReportDocument {
  TestReport report;
  RunManifest manifest;
};

ReportDocument read_report(std::string_view json_text);

std::string render_exact(const AgentModel& model, const ExactSummary& s, Format format);
std::string render_realizability(const ConditionalTriple& t, const RealizabilityVerdict& v,
                                 Format format);
std::string render_maximum(const ViolationMaximum& m, Format format);
std::string render_sample_size(const SampleSizePlan& plan, double target_delta,
                               const TestConfig& cfg, double power, Format format);
std::string render_result(const ProtocolResult& r, Format format);

}  // namespace condbell

#endif  // CONDBELL_IO_HPP
