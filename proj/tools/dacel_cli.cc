// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// dacel: command line front end for sweeps, summaries and protocol traces.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "CLI11.hpp"
#include "dacel/allocators.h"
#include "dacel/errors.h"
#include "dacel/experiment.h"
#include "dacel/protocol.h"
#include "dacel/scenario.h"

namespace fs = std::filesystem;

namespace dacel {
namespace {

constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw fs::filesystem_error("cannot open for reading", path,
                               std::make_error_code(std::errc::io_error));
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void WriteFile(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  out.close();
  if (!out) {
    throw fs::filesystem_error("cannot write", path,
                               std::make_error_code(std::errc::io_error));
  }
}

std::vector<std::string> Split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::size_t ParseCount(const std::string& text, const char* field) {
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(text, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != text.size()) {
    throw ValidationError(field, "expected a count, got '" + text + "'");
  }
  return static_cast<std::size_t>(v);
}

// "m=4..10" or "n=2,3,4,8"; either form works for both variables.
void ApplySweep(const std::string& text, SweepSpec& spec) {
  const auto eq = text.find('=');
  const std::string var = text.substr(0, eq);
  if (eq == std::string::npos || (var != "m" && var != "n")) {
    throw ValidationError("sweep", "expected m=<a>..<b> or n=<list>");
  }
  spec.variable = var == "m" ? SweepVariable::kDevices
                             : SweepVariable::kChannels;
  const std::string rest = text.substr(eq + 1);
  spec.values.clear();
  if (const auto dots = rest.find(".."); dots != std::string::npos) {
    const std::size_t a = ParseCount(rest.substr(0, dots), "sweep");
    const std::size_t b = ParseCount(rest.substr(dots + 2), "sweep");
    if (a > b) throw ValidationError("sweep", "empty range");
    for (std::size_t v = a; v <= b; ++v) spec.values.push_back(v);
  } else {
    for (const std::string& item : Split(rest, ',')) {
      spec.values.push_back(ParseCount(item, "sweep"));
    }
  }
}

std::vector<AllocatorKind> ParseAlgorithms(const std::string& text) {
  if (text == "all") return AllAllocators();
  if (text == "heuristics") return HeuristicAllocators();
  std::vector<AllocatorKind> out;
  for (const std::string& item : Split(text, ',')) {
    out.push_back(ParseAllocatorKind(item));
  }
  return out;
}

// "maxh" means the max-h rule; anything else is a deadline in seconds.
std::optional<double> ParseDeadline(const std::string& text) {
  if (text == "maxh") return std::nullopt;
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != text.size() || !(v >= 0.0)) {
    throw ValidationError("deadline", "expected maxh or seconds >= 0");
  }
  return v;
}

struct RunArgs {
  std::string config;
  std::uint64_t seed = 1;
  std::size_t seeds = 100;
  std::string sweep = "m=4..10";
  std::string algorithms = "heuristics";
  std::string deadline = "maxh";
  std::string out = "results";
  std::size_t jobs = 1;
};

int Run(const RunArgs& args) {
  SweepSpec spec;
  ApplySweep(args.sweep, spec);
  spec.fixed = spec.variable == SweepVariable::kDevices
                   ? DeviceSweepSpec(1).fixed
                   : ChannelSweepSpec(1).fixed;
  if (!args.config.empty()) {
    const std::string text = ReadFile(args.config);
    if (IsExplicitScenario(text)) {
      throw ValidationError("config",
                            "run needs a generator config; use trace for "
                            "explicit scenarios");
    }
    spec.fixed = ParseGenSpec(text, spec.fixed);
  }
  spec.algorithms = ParseAlgorithms(args.algorithms);
  spec.seeds = SeedRange(args.seed, args.seeds);
  spec.fixed_deadline = ParseDeadline(args.deadline);

  const SweepResult result = RunSweep(spec, args.jobs);
  const auto summary = Summarize(result.rows);
  const fs::path out(args.out);
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw fs::filesystem_error("cannot create directory", out, ec);
  WriteFile(out / "sweep.csv", FormatCsv(result.rows));
  WriteFile(out / "summary.csv", FormatSummaryCsv(summary));
  WriteFile(out / "metadata.txt", FormatMetadata(result));
  std::cout << FormatSummaryTable(summary);
  return 0;
}

int Summarize(const std::string& in, const std::string& out) {
  const auto summary = Summarize(ParseCsv(ReadFile(in)));
  std::cout << FormatSummaryTable(summary);
  if (!out.empty()) WriteFile(out, FormatSummaryCsv(summary));
  return 0;
}

struct TraceArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string algorithm = "dd-maxh";
  std::string deadline;
  std::string out;
};

int Trace(const TraceArgs& args) {
  const std::string text = ReadFile(args.config);
  Scenario s;
  if (IsExplicitScenario(text)) {
    s = ParseScenario(text);
  } else {
    GenSpec gen = ParseGenSpec(text);
    if (args.seed) gen.seed = *args.seed;
    s = Generate(gen);
  }
  if (!args.deadline.empty()) {
    const auto fixed = ParseDeadline(args.deadline);
    s.deadline = fixed ? *fixed : DeadlineRule(s);
  } else if (!s.deadline) {
    s.deadline = DeadlineRule(s);
  }
  const std::string trace =
      SerializeTrace(RunDacel(s, ParseAllocatorKind(args.algorithm)));
  if (args.out.empty()) {
    std::cout << trace;
  } else {
    WriteFile(args.out, trace);
  }
  return 0;
}

int Main(int argc, char** argv) {
  CLI::App app{"Delay-aware collaborative edge learning simulator", "dacel"};
  app.require_subcommand(0, 1);
  bool metadata = false;
  app.add_flag("--metadata", metadata, "Print generator and version, then exit");

  RunArgs run;
  CLI::App* run_cmd = app.add_subcommand("run", "Monte Carlo sweep");
  run_cmd->add_option("--config", run.config, "Generator config file")
      ->check(CLI::ExistingFile);
  run_cmd->add_option("--seed", run.seed, "First seed")->capture_default_str();
  run_cmd->add_option("--seeds", run.seeds, "Number of seeds")
      ->capture_default_str();
  run_cmd->add_option("--sweep", run.sweep, "m=<a>..<b> or n=<list>")
      ->capture_default_str();
  run_cmd->add_option("--algorithms", run.algorithms,
                      "Comma list, 'heuristics' or 'all'")
      ->capture_default_str();
  run_cmd->add_option("--deadline", run.deadline, "maxh or seconds")
      ->capture_default_str();
  run_cmd->add_option("--out", run.out, "Output directory")
      ->capture_default_str();
  run_cmd->add_option("--jobs", run.jobs, "Worker threads")
      ->capture_default_str();

  std::string summarize_in, summarize_out;
  CLI::App* sum_cmd =
      app.add_subcommand("summarize", "Summary table of a sweep CSV");
  sum_cmd->add_option("--in", summarize_in, "sweep.csv")->required();
  sum_cmd->add_option("--out", summarize_out, "Also write summary CSV here");

  TraceArgs trace;
  CLI::App* trace_cmd = app.add_subcommand("trace", "Protocol event trace");
  trace_cmd->add_option("--config", trace.config,
                        "Scenario file or generator config")
      ->required();
  trace_cmd->add_option("--seed", trace.seed, "Generator seed");
  trace_cmd->add_option("--algorithm", trace.algorithm, "Allocator")
      ->capture_default_str();
  trace_cmd->add_option("--deadline", trace.deadline,
                        "maxh or seconds (default: file value, else maxh)");
  trace_cmd->add_option("--out", trace.out, "Write trace here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (metadata) {
      std::cout << "generator=" << kGeneratorName << "\nversion=" << kVersion
                << '\n';
      return 0;
    }
    if (*run_cmd) return Run(run);
    if (*sum_cmd) return Summarize(summarize_in, summarize_out);
    if (*trace_cmd) return Trace(trace);
    std::cerr << app.help();
    return kExitValidation;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "dacel: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "dacel: " << e.what() << '\n';
    return kExitValidation;
  }
}

}  // namespace
}  // namespace dacel

int main(int argc, char** argv) { return dacel::Main(argc, argv); }
