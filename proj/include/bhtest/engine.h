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

// Online behavioural hypothesis test.
//
// Each step the engine extends three kinds of action vectors: the observed
// one, a "hat" vector sampled from the hypothesis, and N replicate vectors
// also sampled from the hypothesis. The statistic q = T(observed, hat) is
// compared against the learned distribution of D = {T(replicate_n, hat)},
// modelled as a skew-normal that is re-fitted on a sparse schedule.

#ifndef BHTEST_ENGINE_H_
#define BHTEST_ENGINE_H_

#include <cstdint>
#include <optional>
#include <vector>

#include "bhtest/core.h"
#include "bhtest/scores.h"
#include "bhtest/skew_normal.h"
#include "bhtest/statistic.h"

namespace bhtest {

// When the skew-normal is re-fitted. The first fit is always at t = 1.
struct RefitSchedule {
  enum class Kind {
    kSqrt,           // next = t + floor(sqrt(t))
    kEveryStep,      // next = t + 1
    kFixedInterval,  // next = t + interval
  };
  Kind kind = Kind::kSqrt;
  std::int64_t interval = 1;

  std::int64_t Next(std::int64_t t) const;
};

struct EngineConfig {
  ScoreSet scores = ScoreSet::All();
  WeightingScheme scheme = WeightingScheme::kUniform;
  int n_replicates = 50;
  double alpha = 0.01;
  std::uint64_t seed = 0;
  RefitSchedule schedule;
  FitOptions fit;

  // Throws kInvalidConfig.
  void Validate() const;
};

struct StepResult {
  double q = 0.0;
  double p = 1.0;
  bool reject = false;
  bool refit = false;
};

class Engine {
 public:
  explicit Engine(EngineConfig config);

  // `hypothesis` is the hypothesised distribution for the step being
  // observed, evaluated on the history before that step.
  StepResult Step(ActionId observed, const ActionDistribution& hypothesis);

  const EngineConfig& config() const { return config_; }
  std::int64_t t() const { return t_; }
  std::int64_t next_fit_at() const { return next_fit_at_; }
  double last_p() const { return last_p_; }
  const std::optional<FitResult>& fit() const { return fit_; }
  // Current T(observed, hat); throws kEmptyState at t = 0.
  double q() const { return q_pair_.value(); }
  // Current D = {T(replicate_n, hat)}.
  std::vector<double> ReplicateStatistics() const;

  const ScoreState& observed_state() const { return observed_; }
  const ScoreState& hat_state() const { return hat_; }
  const HypothesisTrack& track() const { return track_; }

 private:
  EngineConfig config_;
  std::int64_t t_ = 0;
  HypothesisTrack track_;
  ScoreState observed_;
  ScoreState hat_;
  RandomSource hat_rng_;
  std::vector<ScoreState> replicates_;
  std::vector<RandomSource> replicate_rngs_;
  PairStatistic q_pair_;
  std::vector<PairStatistic> d_pairs_;
  std::optional<FitResult> fit_;
  std::int64_t next_fit_at_ = 1;
  double last_p_ = 1.0;
  std::vector<double> scratch_;
};

struct TraceRow {
  std::int64_t t = 0;
  double q = 0.0;
  SkewNormalParams params;
  double p = 1.0;
  bool reject = false;
  bool refit = false;

  bool operator==(const TraceRow&) const = default;
};

struct ProcessSeeds {
  std::uint64_t engine;
  std::uint64_t agent_i;
  std::uint64_t agent_j;

  // Fans one process seed out into the three independent streams.
  static ProcessSeeds From(std::uint64_t process_seed);
};

// Drives the two-agent loop: each call draws both agents' actions, evaluates
// the hypothesis on the pre-step history, then appends the joint action.
class InteractionSimulator {
 public:
  struct Step {
    ActionId observed;
    ActionDistribution hypothesis;
  };

  // The behaviours must outlive the simulator.
  InteractionSimulator(const Behaviour& hypothesis, const Behaviour& truth,
                       const Behaviour& opponent, const ProcessSeeds& seeds);

  Step Next();
  const InteractionHistory& history() const { return history_; }

 private:
  const Behaviour& hypothesis_;
  const Behaviour& truth_;
  const Behaviour& opponent_;
  InteractionHistory history_;
  RandomSource rng_i_;
  RandomSource rng_j_;
};

// Simulates `steps` rounds between `opponent` (agent i) and `truth` (agent
// j), testing `hypothesis` against j's actions. config.seed is overridden by
// seeds.engine.
std::vector<TraceRow> RunProcess(const EngineConfig& config,
                                 const Behaviour& hypothesis,
                                 const Behaviour& truth,
                                 const Behaviour& opponent,
                                 std::int64_t steps,
                                 const ProcessSeeds& seeds);

}  // namespace bhtest

#endif  // BHTEST_ENGINE_H_
