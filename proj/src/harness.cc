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

#include "bhtest/harness.h"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

namespace bhtest {
namespace {

constexpr std::uint64_t kPlanStream = 100;

void Require(bool ok, const std::string& message) {
  if (!ok) throw Error(ErrorCode::kInvalidConfig, message);
}

std::string FormatDouble(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double ParseDouble(std::string_view field) {
  if (field == "nan") return std::numeric_limits<double>::quiet_NaN();
  double v = 0.0;
  auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (res.ec != std::errc() || res.ptr != field.data() + field.size()) {
    throw Error(ErrorCode::kIoError,
                "malformed number '" + std::string(field) + "' in CSV");
  }
  return v;
}

bool IsAdaptive(BehaviourClass c) { return c != BehaviourClass::kRandom; }

}  // namespace

void ExperimentSpec::Validate() const {
  Require(num_actions >= 2, "--actions must be >= 2");
  Require(!(IsAdaptive(behaviour_class) || IsAdaptive(opponent())) ||
              num_actions == 2,
          "--actions must be 2 for the lft/cdt/cnn classes (2x2 games)");
  Require(n_replicates > 0, "--n must be > 0");
  Require(alpha > 0.0 && alpha < 1.0, "--alpha must lie in (0, 1)");
  Require(processes >= 2, "--processes must be >= 2");
  Require(steps >= 1, "--steps must be >= 1");
  Require(null_fraction >= 0.0 && null_fraction <= 1.0,
          "--null-fraction must lie in [0, 1]");
}

EngineConfig ExperimentSpec::engine_config() const {
  EngineConfig cfg;
  cfg.scores = scores;
  cfg.scheme = scheme;
  cfg.n_replicates = n_replicates;
  cfg.alpha = alpha;
  return cfg;
}

ProcessPlan PlanProcess(const ExperimentSpec& spec, int index) {
  ProcessPlan plan;
  plan.index = index;
  const auto n_null = static_cast<std::int64_t>(
      std::llround(spec.null_fraction * spec.processes));
  plan.is_null = (static_cast<std::int64_t>(index) + 1) * n_null / spec.processes >
                 static_cast<std::int64_t>(index) * n_null / spec.processes;
  plan.process_seed = DeriveSeed(spec.master_seed, static_cast<std::uint64_t>(index));

  RandomSource rng(plan.process_seed, kPlanStream);
  const MatrixGame game = GenerateGame(rng.NextU64());
  plan.opponent =
      GenerateBehaviour(spec.opponent(), rng.NextU64(), spec.num_actions, game);
  plan.truth = GenerateBehaviour(spec.behaviour_class, rng.NextU64(),
                                 spec.num_actions, game);
  if (plan.is_null) {
    plan.hypothesis = plan.truth;
  } else {
    do {
      plan.hypothesis = GenerateBehaviour(spec.behaviour_class, rng.NextU64(),
                                          spec.num_actions, game);
    } while (plan.hypothesis == plan.truth);
  }
  return plan;
}

std::vector<TraceRow> RunPlannedProcess(const ExperimentSpec& spec,
                                        const ProcessPlan& plan) {
  const DescribedBehaviour hypothesis(plan.hypothesis);
  const DescribedBehaviour truth(plan.truth);
  const DescribedBehaviour opponent(plan.opponent);
  return RunProcess(spec.engine_config(), hypothesis, truth, opponent,
                    spec.steps, ProcessSeeds::From(plan.process_seed));
}

FitCheckResult RunFitCheck(const ExperimentSpec& spec, int process_index,
                           std::int64_t at, int reference_replicates) {
  spec.Validate();
  if (at < 1) throw Error(ErrorCode::kInvalidConfig, "--at must be >= 1");
  if (reference_replicates < 0) {
    throw Error(ErrorCode::kInvalidConfig, "--reference must be >= 0");
  }
  const ProcessPlan plan = PlanProcess(spec, process_index);
  const DescribedBehaviour hypothesis(plan.hypothesis);
  const DescribedBehaviour truth(plan.truth);
  const DescribedBehaviour opponent(plan.opponent);
  const ProcessSeeds seeds = ProcessSeeds::From(plan.process_seed);
  InteractionSimulator sim(hypothesis, truth, opponent, seeds);

  EngineConfig cfg = spec.engine_config();
  cfg.seed = seeds.engine;
  Engine engine(cfg);
  std::optional<Engine> reference;
  if (reference_replicates > 0) {
    cfg.n_replicates = reference_replicates;
    // The reference only needs D, not its own fits.
    cfg.schedule = {RefitSchedule::Kind::kFixedInterval,
                    std::numeric_limits<std::int64_t>::max() / 2};
    reference.emplace(cfg);
  }
  for (std::int64_t s = 0; s < at; ++s) {
    const auto step = sim.Next();
    engine.Step(step.observed, step.hypothesis);
    if (reference) reference->Step(step.observed, step.hypothesis);
  }
  FitCheckResult result;
  result.t = at;
  result.q = engine.q();
  result.replicates = engine.ReplicateStatistics();
  result.fit = SnFitMle(result.replicates, cfg.fit);
  if (reference) result.reference = reference->ReplicateStatistics();
  return result;
}

double ProcessAccuracy(std::span<const TraceRow> trace, bool is_null) {
  if (trace.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::int64_t correct = 0;
  for (const auto& row : trace) {
    if (row.reject != is_null) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(trace.size());
}

AccuracyReport Aggregate(std::vector<ProcessOutcome> outcomes) {
  std::sort(outcomes.begin(), outcomes.end(),
            [](const auto& a, const auto& b) { return a.index < b.index; });
  AccuracyReport report;
  double sum_null = 0.0, sum_alt = 0.0;
  for (const auto& o : outcomes) {
    auto& mean_p = o.is_null ? report.mean_p_null : report.mean_p_alt;
    if (mean_p.size() < o.p_trace.size()) mean_p.resize(o.p_trace.size(), 0.0);
    for (std::size_t s = 0; s < o.p_trace.size(); ++s) mean_p[s] += o.p_trace[s];
    if (o.is_null) {
      sum_null += o.accuracy;
      ++report.n_null;
    } else {
      sum_alt += o.accuracy;
      ++report.n_alt;
    }
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  report.acc_null = report.n_null > 0 ? sum_null / report.n_null : nan;
  report.acc_alt = report.n_alt > 0 ? sum_alt / report.n_alt : nan;
  for (double& p : report.mean_p_null) p /= report.n_null;
  for (double& p : report.mean_p_alt) p /= report.n_alt;
  report.processes = std::move(outcomes);
  return report;
}

AccuracyReport RunExperiment(const ExperimentSpec& spec,
                             const RunOptions& options) {
  spec.Validate();
  std::vector<ProcessOutcome> outcomes(spec.processes);
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;

  auto worker = [&] {
    while (true) {
      const int k = next.fetch_add(1);
      if (k >= spec.processes) return;
      try {
        const ProcessPlan plan = PlanProcess(spec, k);
        std::vector<TraceRow> trace = RunPlannedProcess(spec, plan);
        ProcessOutcome& o = outcomes[k];
        o.index = k;
        o.is_null = plan.is_null;
        o.accuracy = ProcessAccuracy(trace, plan.is_null);
        o.p_trace.reserve(trace.size());
        for (const auto& row : trace) o.p_trace.push_back(row.p);
        if (options.keep_traces) o.trace = std::move(trace);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mu);
        if (!failure) failure = std::current_exception();
        next.store(spec.processes);
        return;
      }
    }
  };

  int threads = options.threads > 0
                    ? options.threads
                    : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::clamp(threads, 1, spec.processes);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < threads; ++w) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return Aggregate(std::move(outcomes));
}

void WriteTraceCsv(std::ostream& out, std::span<const TraceRow> trace) {
  out << kTraceCsvHeader << '\n';
  for (const auto& row : trace) {
    out << row.t << ',' << FormatDouble(row.q) << ','
        << FormatDouble(row.params.xi) << ',' << FormatDouble(row.params.omega)
        << ',' << FormatDouble(row.params.beta) << ',' << FormatDouble(row.p)
        << ',' << (row.reject ? 1 : 0) << ',' << (row.refit ? 1 : 0) << '\n';
  }
}

std::vector<TraceRow> ReadTraceCsv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kTraceCsvHeader) {
    throw Error(ErrorCode::kIoError, "trace CSV header mismatch");
  }
  std::vector<TraceRow> trace;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string_view> fields;
    std::string_view rest(line);
    while (true) {
      const auto comma = rest.find(',');
      fields.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (fields.size() != 8) {
      throw Error(ErrorCode::kIoError, "trace CSV row has wrong field count");
    }
    TraceRow row;
    row.t = static_cast<std::int64_t>(ParseDouble(fields[0]));
    row.q = ParseDouble(fields[1]);
    row.params = {ParseDouble(fields[2]), ParseDouble(fields[3]),
                  ParseDouble(fields[4])};
    row.p = ParseDouble(fields[5]);
    row.reject = fields[6] == "1";
    row.refit = fields[7] == "1";
    trace.push_back(row);
  }
  return trace;
}

void WriteReportCsv(std::ostream& out, const ExperimentSpec& spec,
                    const AccuracyReport& report) {
  out << kReportCsvHeader << '\n'
      << BehaviourClassName(spec.behaviour_class) << ','
      << BehaviourClassName(spec.opponent()) << ',' << spec.num_actions << ','
      << spec.n_replicates << ',' << FormatDouble(spec.alpha) << ",\""
      << spec.scores.ToString() << "\"," << WeightingSchemeName(spec.scheme)
      << ',' << spec.processes << ',' << spec.steps << ','
      << FormatDouble(spec.null_fraction) << ',' << spec.master_seed << ','
      << FormatDouble(report.acc_null) << ',' << FormatDouble(report.acc_alt)
      << '\n';
}

namespace {

template <class Fn>
void WithOutputFile(const std::string& path, Fn&& fn) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot open '" + path + "'");
  fn(out);
  out.flush();
  if (!out) throw Error(ErrorCode::kIoError, "write failed for '" + path + "'");
}

}  // namespace

void WriteTraceCsv(const std::string& path, std::span<const TraceRow> trace) {
  WithOutputFile(path, [&](std::ostream& out) { WriteTraceCsv(out, trace); });
}

std::vector<TraceRow> ReadTraceCsv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open '" + path + "'");
  return ReadTraceCsv(in);
}

void WriteReportCsv(const std::string& path, const ExperimentSpec& spec,
                    const AccuracyReport& report) {
  WithOutputFile(path,
                 [&](std::ostream& out) { WriteReportCsv(out, spec, report); });
}

}  // namespace bhtest
