// Copyright 2026 The bhtest Authors
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

#include "bhtest/cli.h"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <optional>
#include <sstream>
#include <string>

namespace bhtest {
namespace {

using json = nlohmann::json;

void Invalid(const std::string& message) {
  throw Error(ErrorCode::kInvalidConfig, message);
}

// Parses with one of the library parsers, re-labelling failures with `flag`.
template <typename F>
auto ParseFlag(const std::string& flag, const std::string& value, F parse) {
  try {
    return parse(value);
  } catch (const Error& e) {
    Invalid(flag + ": " + e.what());
  }
  __builtin_unreachable();
}

ScoreSet ScoresFromJson(const json& v) {
  if (v.is_string()) {
    return ParseFlag("scores", v.get<std::string>(), ScoreSet::Parse);
  }
  if (!v.is_array()) Invalid("scores: expected a string or an array");
  std::string joined;
  for (const auto& item : v) {
    if (item.is_number_integer()) {
      joined += std::to_string(item.get<int>());
    } else if (item.is_string()) {
      joined += item.get<std::string>();
    } else {
      Invalid("scores: array entries must be integers or strings");
    }
    joined += ',';
  }
  return ParseFlag("scores", joined, ScoreSet::Parse);
}

// Command-line values. Only the flags actually given override the spec.
struct Flags {
  std::string config_path;
  std::optional<std::string> behaviour_class;
  std::optional<std::string> opponent_class;
  std::optional<int> actions;
  std::optional<int> n;
  std::optional<double> alpha;
  std::optional<std::string> scores;
  std::optional<std::string> scheme;
  std::optional<int> processes;
  std::optional<std::int64_t> steps;
  std::optional<double> null_fraction;
  std::optional<std::uint64_t> seed;
};

void AddSpecFlags(CLI::App* app, Flags& f) {
  app->add_option("--config", f.config_path, "JSON run-config file")
      ->check(CLI::ExistingFile);
  app->add_option("--class", f.behaviour_class,
                  "behaviour class: random, lft, cdt, cnn");
  app->add_option("--opponent-class", f.opponent_class,
                  "opponent class (defaults to --class)");
  app->add_option("--actions", f.actions, "action count A");
  app->add_option("--n", f.n, "replicate count N");
  app->add_option("--alpha", f.alpha, "significance level");
  app->add_option("--scores", f.scores, "score ids, e.g. z1,z2,z3");
  app->add_option("--scheme", f.scheme,
                  "weighting: uniform, truemax, truemin, max, min");
  app->add_option("--processes", f.processes, "process count");
  app->add_option("--steps", f.steps, "steps per process");
  app->add_option("--null-fraction", f.null_fraction,
                  "fraction of processes with a correct hypothesis");
  app->add_option("--seed", f.seed, "master seed");
}

ExperimentSpec BuildSpec(const Flags& f) {
  ExperimentSpec spec;
  if (!f.config_path.empty()) {
    std::ifstream in(f.config_path);
    if (!in) throw Error(ErrorCode::kIoError, "cannot read " + f.config_path);
    std::stringstream buf;
    buf << in.rdbuf();
    ApplyJsonConfig(buf.str(), spec);
  }
  if (f.behaviour_class) {
    spec.behaviour_class =
        ParseFlag("--class", *f.behaviour_class, ParseBehaviourClass);
  }
  if (f.opponent_class) {
    spec.opponent_class =
        ParseFlag("--opponent-class", *f.opponent_class, ParseBehaviourClass);
  }
  if (f.actions) spec.num_actions = *f.actions;
  if (f.n) spec.n_replicates = *f.n;
  if (f.alpha) spec.alpha = *f.alpha;
  if (f.scores) spec.scores = ParseFlag("--scores", *f.scores, ScoreSet::Parse);
  if (f.scheme) {
    spec.scheme = ParseFlag("--scheme", *f.scheme, ParseWeightingScheme);
  }
  if (f.processes) spec.processes = *f.processes;
  if (f.steps) spec.steps = *f.steps;
  if (f.null_fraction) spec.null_fraction = *f.null_fraction;
  if (f.seed) spec.master_seed = *f.seed;
  spec.Validate();
  return spec;
}

// Runs `write` against --out when given, else against `out`.
template <typename W>
void Emit(const std::string& path, std::ostream& out, W write) {
  if (path.empty()) {
    write(out);
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorCode::kIoError, "cannot open " + path);
  write(file);
  if (!file) throw Error(ErrorCode::kIoError, "write failed: " + path);
}

json ParamsJson(const SkewNormalParams& p) {
  return {{"xi", p.xi}, {"omega", p.omega}, {"beta", p.beta}};
}

json PlanJson(const ProcessPlan& plan) {
  return {{"process", plan.index},
          {"is_null", plan.is_null},
          {"process_seed", plan.process_seed},
          {"opponent", json::parse(DescribeDescriptor(plan.opponent))},
          {"truth", json::parse(DescribeDescriptor(plan.truth))},
          {"hypothesis", json::parse(DescribeDescriptor(plan.hypothesis))}};
}

int CheckIndex(const ExperimentSpec& spec, int index) {
  if (index < 0 || index >= spec.processes) {
    Invalid("--process must lie in [0, --processes)");
  }
  return index;
}

}  // namespace

void ApplyJsonConfig(const std::string& json_text, ExperimentSpec& spec) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    Invalid(std::string("--config: ") + e.what());
  }
  if (!root.is_object()) Invalid("--config: top level must be an object");
  for (const auto& [raw_key, v] : root.items()) {
    std::string key = raw_key;
    for (char& c : key) {
      if (c == '_') c = '-';
    }
    try {
      if (key == "class" || key == "behaviour-class") {
        spec.behaviour_class = ParseFlag(raw_key, v.get<std::string>(),
                                         ParseBehaviourClass);
      } else if (key == "opponent-class") {
        spec.opponent_class = ParseFlag(raw_key, v.get<std::string>(),
                                        ParseBehaviourClass);
      } else if (key == "actions") {
        spec.num_actions = v.get<int>();
      } else if (key == "n") {
        spec.n_replicates = v.get<int>();
      } else if (key == "alpha") {
        spec.alpha = v.get<double>();
      } else if (key == "scores") {
        spec.scores = ScoresFromJson(v);
      } else if (key == "scheme") {
        spec.scheme =
            ParseFlag(raw_key, v.get<std::string>(), ParseWeightingScheme);
      } else if (key == "processes") {
        spec.processes = v.get<int>();
      } else if (key == "steps") {
        spec.steps = v.get<std::int64_t>();
      } else if (key == "null-fraction") {
        spec.null_fraction = v.get<double>();
      } else if (key == "seed" || key == "master-seed") {
        spec.master_seed = v.get<std::uint64_t>();
      } else {
        Invalid("--config: unknown key '" + raw_key + "'");
      }
    } catch (const json::exception& e) {
      Invalid("--config: bad value for '" + raw_key + "': " + e.what());
    }
  }
}

int CliMain(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Online behavioural hypothesis testing", "bhtest"};
  app.require_subcommand(1);

  Flags sim_flags, exp_flags, fit_flags;
  std::string sim_out, exp_out, exp_traces, exp_p_trace;
  int sim_process = 0, fit_process = 0, threads = 0, reference = 0;
  bool describe = false;
  std::int64_t at = 10;

  CLI::App* simulate =
      app.add_subcommand("simulate", "run one process and emit its trace CSV");
  AddSpecFlags(simulate, sim_flags);
  simulate->add_option("--process", sim_process, "process index");
  simulate->add_option("--out", sim_out, "trace CSV path (default stdout)");
  simulate->add_flag("--describe", describe,
                     "print the process plan as JSON to stderr");

  CLI::App* experiment =
      app.add_subcommand("experiment", "run a batch and emit the report CSV");
  AddSpecFlags(experiment, exp_flags);
  experiment->add_option("--out", exp_out, "report CSV path (default stdout)");
  experiment->add_option("--threads", threads, "worker threads (0 = auto)");
  experiment->add_option("--traces", exp_traces,
                         "directory for per-process trace CSVs");
  experiment->add_option("--p-trace", exp_p_trace,
                         "CSV of the mean p-value per step and group");

  CLI::App* fit_check = app.add_subcommand(
      "fit-check", "dump D and the fitted skew-normal at one time step");
  AddSpecFlags(fit_check, fit_flags);
  fit_check->add_option("--process", fit_process, "process index");
  fit_check->add_option("--at", at, "time step");
  fit_check->add_option("--reference", reference,
                        "replicate count of a reference sample (0 = none)");

  try {
    std::vector<std::string> args;
    for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "bhtest: " << e.what() << "\n";
    return kExitInvalidConfig;
  }

  try {
    if (simulate->parsed()) {
      const ExperimentSpec spec = BuildSpec(sim_flags);
      const ProcessPlan plan = PlanProcess(spec, CheckIndex(spec, sim_process));
      if (describe) err << PlanJson(plan).dump() << "\n";
      const auto trace = RunPlannedProcess(spec, plan);
      Emit(sim_out, out, [&](std::ostream& os) { WriteTraceCsv(os, trace); });
    } else if (experiment->parsed()) {
      const ExperimentSpec spec = BuildSpec(exp_flags);
      if (threads < 0) Invalid("--threads must be >= 0");
      RunOptions options;
      options.threads = threads;
      options.keep_traces = !exp_traces.empty();
      const AccuracyReport report = RunExperiment(spec, options);
      if (!exp_traces.empty()) {
        std::filesystem::create_directories(exp_traces);
        for (const auto& proc : report.processes) {
          WriteTraceCsv(exp_traces + "/process_" + std::to_string(proc.index) +
                            ".csv",
                        proc.trace);
        }
      }
      if (!exp_p_trace.empty()) {
        Emit(exp_p_trace, out, [&](std::ostream& os) {
          os << "t,mean_p_null,mean_p_alt\n";
          for (std::int64_t t = 0; t < spec.steps; ++t) {
            auto at_t = [&](const std::vector<double>& v) {
              return t < static_cast<std::int64_t>(v.size())
                         ? json(v[t]).dump()
                         : std::string("nan");
            };
            os << t + 1 << ',' << at_t(report.mean_p_null) << ','
               << at_t(report.mean_p_alt) << '\n';
          }
        });
      }
      Emit(exp_out, out,
           [&](std::ostream& os) { WriteReportCsv(os, spec, report); });
    } else if (fit_check->parsed()) {
      const ExperimentSpec spec = BuildSpec(fit_flags);
      CheckIndex(spec, fit_process);
      if (at > spec.steps) Invalid("--at must be <= --steps");
      const FitCheckResult r = RunFitCheck(spec, fit_process, at, reference);
      json doc = {{"process", fit_process},
                  {"t", r.t},
                  {"q", r.q},
                  {"scores", spec.scores.ToString()},
                  {"n", spec.n_replicates},
                  {"params", ParamsJson(r.fit.params)},
                  {"mode", r.fit.mode},
                  {"nll", r.fit.nll},
                  {"degenerate", r.fit.degenerate},
                  {"p", SnPValue(r.q, r.fit)},
                  {"replicates", r.replicates},
                  {"reference", r.reference}};
      out << doc.dump(2) << "\n";
    }
  } catch (const Error& e) {
    err << "bhtest: " << e.what() << "\n";
    return e.code() == ErrorCode::kInvalidConfig ? kExitInvalidConfig
                                                 : kExitRuntimeError;
  } catch (const std::exception& e) {
    err << "bhtest: " << e.what() << "\n";
    return kExitRuntimeError;
  }
  return kExitOk;
}

}  // namespace bhtest
