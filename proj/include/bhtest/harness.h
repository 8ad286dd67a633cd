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

#ifndef BHTEST_HARNESS_H_
#define BHTEST_HARNESS_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bhtest/behaviours.h"
#include "bhtest/engine.h"

namespace bhtest {

struct ExperimentSpec {
  BehaviourClass behaviour_class = BehaviourClass::kRandom;
  // Defaults to behaviour_class.
  std::optional<BehaviourClass> opponent_class;
  int num_actions = 2;
  int n_replicates = 50;
  double alpha = 0.01;
  ScoreSet scores = ScoreSet::All();
  WeightingScheme scheme = WeightingScheme::kUniform;
  int processes = 100;
  std::int64_t steps = 2000;
  double null_fraction = 0.5;
  std::uint64_t master_seed = 0;

  BehaviourClass opponent() const {
    return opponent_class.value_or(behaviour_class);
  }
  // Throws kInvalidConfig; messages name the offending CLI flag.
  void Validate() const;
  EngineConfig engine_config() const;
};

// Everything needed to replay one process of an experiment.
struct ProcessPlan {
  int index = 0;
  bool is_null = false;
  std::uint64_t process_seed = 0;
  BehaviourDescriptor opponent;
  BehaviourDescriptor truth;
  BehaviourDescriptor hypothesis;
};

// Deterministic in (spec, index). Exactly round(null_fraction * processes)
// processes are null, spread evenly over the index range.
ProcessPlan PlanProcess(const ExperimentSpec& spec, int index);

std::vector<TraceRow> RunPlannedProcess(const ExperimentSpec& spec,
                                        const ProcessPlan& plan);

// Fraction of steps with the correct decision: no reject when the hypothesis
// is true, reject when it is false.
double ProcessAccuracy(std::span<const TraceRow> trace, bool is_null);

struct ProcessOutcome {
  int index = 0;
  bool is_null = false;
  double accuracy = 0.0;
  std::vector<double> p_trace;
  std::vector<TraceRow> trace;  // only with RunOptions::keep_traces
};

struct AccuracyReport {
  // Macro-averages over processes; NaN when the group is empty.
  double acc_null = 0.0;
  double acc_alt = 0.0;
  int n_null = 0;
  int n_alt = 0;
  // Per-step p-value averaged over the processes of each group.
  std::vector<double> mean_p_null;
  std::vector<double> mean_p_alt;
  std::vector<ProcessOutcome> processes;
};

struct RunOptions {
  // 0 uses the hardware concurrency.
  int threads = 0;
  bool keep_traces = false;
};

AccuracyReport RunExperiment(const ExperimentSpec& spec,
                             const RunOptions& options = {});

// Reduces per-process outcomes (in any order) to a report.
AccuracyReport Aggregate(std::vector<ProcessOutcome> outcomes);

// Snapshot of the learned test distribution at one time step of a process.
struct FitCheckResult {
  std::int64_t t = 0;
  double q = 0.0;
  std::vector<double> replicates;  // D with spec.n_replicates entries
  FitResult fit;                   // fresh fit of D at t
  // D of a larger engine sharing the hat vector and the first N replicate
  // streams; empty when no reference was requested.
  std::vector<double> reference;
};

FitCheckResult RunFitCheck(const ExperimentSpec& spec, int process_index,
                           std::int64_t at, int reference_replicates);

// CSV boundary. Numbers use the shortest round-trip representation so files
// are byte-stable and re-read exactly.
void WriteTraceCsv(std::ostream& out, std::span<const TraceRow> trace);
std::vector<TraceRow> ReadTraceCsv(std::istream& in);
void WriteReportCsv(std::ostream& out, const ExperimentSpec& spec,
                    const AccuracyReport& report);

// File variants; throw kIoError.
void WriteTraceCsv(const std::string& path, std::span<const TraceRow> trace);
std::vector<TraceRow> ReadTraceCsv(const std::string& path);
void WriteReportCsv(const std::string& path, const ExperimentSpec& spec,
                    const AccuracyReport& report);

inline constexpr const char* kTraceCsvHeader =
    "t,q,xi,omega,beta,p,reject,refit_flag";
inline constexpr const char* kReportCsvHeader =
    "behaviour_class,opponent_class,actions,n,alpha,scores,scheme,processes,"
    "steps,null_fraction,seed,acc_null,acc_alt";

}  // namespace bhtest

#endif  // BHTEST_HARNESS_H_
