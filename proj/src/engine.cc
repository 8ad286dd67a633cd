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

#include "bhtest/engine.h"

#include <algorithm>
#include <array>
#include <cmath>

namespace bhtest {

std::int64_t RefitSchedule::Next(std::int64_t t) const {
  switch (kind) {
    case Kind::kSqrt: {
      auto root = static_cast<std::int64_t>(std::sqrt(static_cast<double>(t)));
      while (root * root > t) --root;
      while ((root + 1) * (root + 1) <= t) ++root;
      return t + std::max<std::int64_t>(root, 1);
    }
    case Kind::kEveryStep: return t + 1;
    case Kind::kFixedInterval: return t + std::max<std::int64_t>(interval, 1);
  }
  return t + 1;
}

void EngineConfig::Validate() const {
  if (n_replicates <= 0) {
    throw Error(ErrorCode::kInvalidConfig, "n_replicates must be > 0");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorCode::kInvalidConfig, "alpha must lie in (0, 1)");
  }
  if (schedule.kind == RefitSchedule::Kind::kFixedInterval &&
      schedule.interval < 1) {
    throw Error(ErrorCode::kInvalidConfig, "refit interval must be >= 1");
  }
  if (!(fit.beta_cap > 0.0)) {
    throw Error(ErrorCode::kInvalidConfig, "beta_cap must be > 0");
  }
}

Engine::Engine(EngineConfig config)
    : config_((config.Validate(), std::move(config))),
      hat_rng_(config_.seed, 0),
      q_pair_(config_.scheme, config_.scores) {
  const int n = config_.n_replicates;
  replicates_.resize(n);
  replicate_rngs_.reserve(n);
  d_pairs_.reserve(n);
  for (int k = 0; k < n; ++k) {
    replicate_rngs_.emplace_back(config_.seed, static_cast<std::uint64_t>(k) + 1);
    d_pairs_.emplace_back(config_.scheme, config_.scores);
  }
}

StepResult Engine::Step(ActionId observed,
                        const ActionDistribution& hypothesis) {
  const StepRecord step(hypothesis);
  track_.Absorb(step);
  observed_.Absorb(observed, step);
  hat_.Absorb(SampleAction(hypothesis, hat_rng_), step);
  for (std::size_t n = 0; n < replicates_.size(); ++n) {
    replicates_[n].Absorb(SampleAction(hypothesis, replicate_rngs_[n]), step);
  }
  ++t_;

  const ScoreSet& ids = config_.scores;
  const std::size_t k = ids.ids().size();
  std::array<double, kNumScoreIds> hat_z{}, z{};
  const auto hat_span = std::span(hat_z).first(k);
  const auto z_span = std::span(z).first(k);
  ScoreValues(hat_, track_, ids, hat_span);
  ScoreValues(observed_, track_, ids, z_span);
  q_pair_.Update(z_span, hat_span);
  for (std::size_t n = 0; n < replicates_.size(); ++n) {
    ScoreValues(replicates_[n], track_, ids, z_span);
    d_pairs_[n].Update(z_span, hat_span);
  }

  StepResult result;
  if (t_ == next_fit_at_) {
    scratch_.resize(d_pairs_.size());
    for (std::size_t n = 0; n < d_pairs_.size(); ++n) {
      scratch_[n] = d_pairs_[n].value();
    }
    fit_ = SnFitMle(scratch_, config_.fit);
    next_fit_at_ = config_.schedule.Next(t_);
    result.refit = true;
  }
  result.q = q_pair_.value();
  result.p = SnPValue(result.q, *fit_);
  result.reject = result.p < config_.alpha;
  last_p_ = result.p;
  return result;
}

std::vector<double> Engine::ReplicateStatistics() const {
  std::vector<double> d;
  d.reserve(d_pairs_.size());
  for (const auto& pair : d_pairs_) d.push_back(pair.value());
  return d;
}

ProcessSeeds ProcessSeeds::From(std::uint64_t process_seed) {
  return {DeriveSeed(process_seed, 1), DeriveSeed(process_seed, 2),
          DeriveSeed(process_seed, 3)};
}

InteractionSimulator::InteractionSimulator(const Behaviour& hypothesis,
                                           const Behaviour& truth,
                                           const Behaviour& opponent,
                                           const ProcessSeeds& seeds)
    : hypothesis_(hypothesis),
      truth_(truth),
      opponent_(opponent),
      history_(opponent.num_actions(), truth.num_actions()),
      rng_i_(seeds.agent_i, 0),
      rng_j_(seeds.agent_j, 0) {
  if (hypothesis.num_actions() != truth.num_actions()) {
    throw Error(ErrorCode::kLengthMismatch,
                "hypothesis and true behaviour disagree on the action count");
  }
}

InteractionSimulator::Step InteractionSimulator::Next() {
  const ActionId a_i =
      SampleAction(opponent_.Distribution(history_, Agent::kI), rng_i_);
  const ActionId a_j =
      SampleAction(truth_.Distribution(history_, Agent::kJ), rng_j_);
  Step step{a_j, hypothesis_.Distribution(history_, Agent::kJ)};
  history_.Append({a_i, a_j});
  return step;
}

std::vector<TraceRow> RunProcess(const EngineConfig& config,
                                 const Behaviour& hypothesis,
                                 const Behaviour& truth,
                                 const Behaviour& opponent,
                                 std::int64_t steps,
                                 const ProcessSeeds& seeds) {
  if (steps < 1) throw Error(ErrorCode::kInvalidConfig, "steps must be >= 1");
  InteractionSimulator sim(hypothesis, truth, opponent, seeds);
  EngineConfig cfg = config;
  cfg.seed = seeds.engine;
  Engine engine(std::move(cfg));

  std::vector<TraceRow> trace;
  trace.reserve(static_cast<std::size_t>(steps));
  for (std::int64_t s = 0; s < steps; ++s) {
    const auto step = sim.Next();
    const StepResult r = engine.Step(step.observed, step.hypothesis);
    trace.push_back({engine.t(), r.q, engine.fit()->params, r.p, r.reject,
                     r.refit});
  }
  return trace;
}

}  // namespace bhtest
