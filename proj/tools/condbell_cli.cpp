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

// condbell command-line tool. Talks to the library only through the C API.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>

#include "CLI11.hpp"
#include "json.hpp"

#include "condbell/condbell.h"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitInternal = 3;

// Failure carrying the diagnostic category printed as "error[<kind>]".
struct CliError {
  std::string kind;
  std::string message;
  int exit_code = kExitInput;
};

void check(cb_status status) {
  if (status == CB_OK) return;
  throw CliError{cb_status_name(status), cb_last_error(),
                 status == CB_ERR_INTERNAL ? kExitInternal : kExitInput};
}

struct StringDeleter {
  void operator()(char* s) const { cb_string_free(s); }
};
using CString = std::unique_ptr<char, StringDeleter>;

template <class Fn>
std::string take_string(Fn&& fn) {
  char* raw = nullptr;
  check(fn(&raw));
  CString owned(raw);
  return std::string(owned.get());
}

struct ModelDeleter {
  void operator()(cb_model* m) const { cb_model_free(m); }
};
struct RunDeleter {
  void operator()(cb_run* r) const { cb_run_free(r); }
};
struct ReportDeleter {
  void operator()(cb_report* r) const { cb_report_free(r); }
};
using Model = std::unique_ptr<cb_model, ModelDeleter>;
using Run = std::unique_ptr<cb_run, RunDeleter>;
using Report = std::unique_ptr<cb_report, ReportDeleter>;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError{"IoFailure", "cannot open '" + path + "'"};
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw CliError{"IoFailure", "failed reading '" + path + "'"};
  return ss.str();
}

// Relative output paths resolve against CONDBELL_OUTPUT_DIR when it is set.
std::string output_path(const std::string& path) {
  const char* dir = std::getenv("CONDBELL_OUTPUT_DIR");
  if (!dir || !*dir || fs::path(path).is_absolute()) return path;
  return (fs::path(dir) / path).string();
}

void write_file(const std::string& path, const std::string& content) {
  const std::string target = output_path(path);
  std::ofstream out(target, std::ios::binary | std::ios::trunc);
  if (!out) throw CliError{"IoFailure", "cannot write '" + target + "'"};
  out << content;
  if (!out) throw CliError{"IoFailure", "failed writing '" + target + "'"};
}

void emit(const std::string& content, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << content;
  } else {
    write_file(out_path, content);
  }
}

std::string sha256(const std::string& bytes) {
  char hex[65] = {};
  check(cb_sha256_hex(bytes.data(), bytes.size(), hex));
  return hex;
}

cb_format format_of(const std::string& name) {
  return name == "json" ? CB_FORMAT_JSON : CB_FORMAT_TEXT;
}

Model load_model(const std::string& path) {
  cb_model* raw = nullptr;
  check(cb_model_from_json(read_file(path).c_str(), &raw));
  return Model(raw);
}

bool looks_like_json(const std::string& path, const std::string& bytes) {
  const std::string ext = fs::path(path).extension().string();
  if (ext == ".json") return true;
  if (ext == ".csv") return false;
  const auto pos = bytes.find_first_not_of(" \t\r\n");
  return pos != std::string::npos && bytes[pos] == '{';
}

std::string utc_now() {
  const std::time_t now = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buf;
}

struct Options {
  std::string format = "text";
  // exact / simulate
  std::string model;
  std::uint64_t n_total = 0;
  std::uint64_t seed = 0;
  std::string out;
  std::string csv;
  // analyze
  std::string data;
  double delta = 0.01;
  double alpha = 0.05;
  double confidence = 0.95;
  std::string method = "z";
  bool timestamp = false;
  // realizable
  std::string triple;
  // maximize
  double grid_step = 1.0;
  int refine = 50;
  // power
  double target_delta = 0.25;
  double power = 0.9;
};

int cmd_exact(const Options& o) {
  const Model model = load_model(o.model);
  emit(take_string([&](char** s) { return cb_model_render_exact(model.get(), format_of(o.format), s); }),
       o.out);
  return kExitOk;
}

int cmd_simulate(const Options& o) {
  const Model model = load_model(o.model);
  cb_run* raw = nullptr;
  check(cb_simulate(model.get(), o.n_total, o.seed, &raw));
  const Run run(raw);
  const std::string result_json = take_string([&](char** s) { return cb_run_to_json(run.get(), s); });
  if (!o.csv.empty()) {
    write_file(o.csv, take_string([&](char** s) { return cb_run_to_csv(run.get(), s); }));
  }
  if (o.out.empty()) {
    std::cout << (o.format == "json" ? result_json
                                     : take_string([&](char** s) {
                                         return cb_run_render(run.get(), CB_FORMAT_TEXT, s);
                                       }));
  } else {
    write_file(o.out, result_json);
    if (o.format == "text") {
      std::cout << take_string([&](char** s) { return cb_run_render(run.get(), CB_FORMAT_TEXT, s); });
    }
  }
  return kExitOk;
}

int cmd_analyze(const Options& o) {
  const std::string bytes = read_file(o.data);
  cb_run* raw = nullptr;
  if (looks_like_json(o.data, bytes)) {
    check(cb_run_from_json(bytes.c_str(), &raw));
  } else {
    check(cb_run_from_csv(bytes.data(), bytes.size(), &raw));
  }
  const Run run(raw);

  cb_test_config cfg;
  cb_default_config(&cfg);
  cfg.delta_threshold = o.delta;
  cfg.alpha = o.alpha;
  cfg.confidence = o.confidence;
  cfg.method = o.method == "chi2" ? CB_METHOD_CHI2_FIT : CB_METHOD_Z_TEST;

  cb_report* rep_raw = nullptr;
  check(cb_analyze(run.get(), &cfg, &rep_raw));
  const Report report(rep_raw);

  cb_counts counts{};
  check(cb_run_counts(run.get(), &counts));
  json manifest{
      {"command", "analyze"},
      {"config",
       {{"delta", o.delta},
        {"alpha", o.alpha},
        {"confidence", o.confidence},
        {"method", o.method},
        {"format", o.format}}},
      {"seed", counts.has_seed ? json(counts.seed) : json(nullptr)},
      {"inputs", {{"data", {{"path", o.data}, {"sha256", sha256(bytes)}}}}},
      {"created_at", o.timestamp ? json(utc_now()) : json(nullptr)},
  };
  const std::string manifest_text = manifest.dump();
  emit(take_string([&](char** s) {
         return cb_report_write(report.get(), manifest_text.c_str(), format_of(o.format), s);
       }),
       o.out);
  return kExitOk;
}

int cmd_realizable(const Options& o) {
  cb_triple t{};
  check(cb_triple_from_json(read_file(o.triple).c_str(), &t));
  emit(take_string([&](char** s) { return cb_render_realizability(&t, format_of(o.format), s); }),
       o.out);
  return kExitOk;
}

int cmd_maximize(const Options& o) {
  cb_maximum m{};
  check(cb_maximize(o.grid_step, o.refine, &m));
  emit(take_string([&](char** s) { return cb_render_maximum(&m, format_of(o.format), s); }), o.out);
  return kExitOk;
}

int cmd_power(const Options& o) {
  cb_test_config cfg;
  cb_default_config(&cfg);
  cfg.alpha = o.alpha;
  emit(take_string([&](char** s) {
         return cb_render_sample_size(o.target_delta, &cfg, o.power, format_of(o.format), s);
       }),
       o.out);
  return kExitOk;
}

constexpr std::string_view kSubcommands[] = {"exact", "simulate", "analyze",
                                             "realizable", "maximize", "power"};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"condbell: conditional-probability Bell test for quantum-like behaviour"};
  app.set_version_flag("--version", std::string(cb_version()));
  app.require_subcommand(1);

  Options o;
  auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", o.format, "Output format")
        ->check(CLI::IsMember({"text", "json"}))
        ->capture_default_str();
  };

  auto* exact = app.add_subcommand("exact", "Exact conditionals and Delta of a model");
  exact->add_option("--model", o.model, "Model JSON file")->required();
  exact->add_option("--out", o.out, "Write output to this file instead of stdout");
  add_format(exact);

  auto* simulate = app.add_subcommand("simulate", "Simulate the two-branch protocol");
  simulate->add_option("--model", o.model, "Model JSON file")->required();
  simulate->add_option("--n", o.n_total, "Population size (even, >= 4)")->required();
  simulate->add_option("--seed", o.seed, "Random seed")->required();
  simulate->add_option("--out", o.out, "Write the count table (JSON) here");
  simulate->add_option("--csv", o.csv, "Also write per-subject rows as CSV");
  add_format(simulate);

  auto* analyze = app.add_subcommand("analyze", "Test recorded or simulated responses");
  analyze->add_option("--data", o.data, "Response CSV or count-table JSON")->required();
  analyze->add_option("--delta", o.delta, "Delta threshold")->capture_default_str();
  analyze->add_option("--alpha", o.alpha, "Significance level")->capture_default_str();
  analyze->add_option("--confidence", o.confidence, "Confidence of the lower bound on Delta")
      ->capture_default_str();
  analyze->add_option("--method", o.method, "Test method")
      ->check(CLI::IsMember({"z", "chi2"}))
      ->capture_default_str();
  analyze->add_option("--out", o.out, "Write the report here instead of stdout");
  analyze->add_flag("--timestamp", o.timestamp, "Record the wall-clock time in the manifest");
  add_format(analyze);

  auto* realizable = app.add_subcommand("realizable", "Decide classical realizability of a triple");
  realizable->add_option("--triple", o.triple, "Triple JSON file")->required();
  realizable->add_option("--out", o.out, "Write output to this file instead of stdout");
  add_format(realizable);

  auto* maximize = app.add_subcommand("maximize", "Search qubit directions for maximal Delta");
  maximize->add_option("--grid-step", o.grid_step, "Grid spacing in degrees")->capture_default_str();
  maximize->add_option("--refine", o.refine, "Refinement iterations")->capture_default_str();
  maximize->add_option("--out", o.out, "Write output to this file instead of stdout");
  add_format(maximize);

  auto* power = app.add_subcommand("power", "Per-branch sample size for the z-test");
  power->add_option("--target-delta", o.target_delta, "Delta to detect")->capture_default_str();
  power->add_option("--alpha", o.alpha, "Significance level")->capture_default_str();
  power->add_option("--power", o.power, "Requested power")->capture_default_str();
  power->add_option("--out", o.out, "Write output to this file instead of stdout");
  add_format(power);

  if (argc > 1 && argv[1][0] != '-') {
    const std::string_view first = argv[1];
    bool known = false;
    for (auto s : kSubcommands) known = known || s == first;
    if (!known) {
      std::cerr << "condbell: error[UnknownSubcommand]: '" << first << "'\n" << app.help();
      return kExitInput;
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    std::cout << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    std::cout << cb_version() << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    std::string message = e.what();
    for (char& c : message) {
      if (c == '\n') c = ' ';
    }
    std::cerr << "condbell: error[Usage]: " << message << "\n";
    const auto* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    std::cerr << sub->help();
    return kExitInput;
  }

  try {
    if (exact->parsed()) return cmd_exact(o);
    if (simulate->parsed()) return cmd_simulate(o);
    if (analyze->parsed()) return cmd_analyze(o);
    if (realizable->parsed()) return cmd_realizable(o);
    if (maximize->parsed()) return cmd_maximize(o);
    if (power->parsed()) return cmd_power(o);
  } catch (const CliError& e) {
    std::string message = e.message;
    for (char& c : message) {
      if (c == '\n') c = ' ';
    }
    std::cerr << "condbell: error[" << e.kind << "]: " << message << "\n";
    return e.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "condbell: error[Internal]: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInput;
}
