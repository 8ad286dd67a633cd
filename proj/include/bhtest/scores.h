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

// Incremental score functions over growing action vectors.
//
// Every score compares a vector of actions against the sequence of
// hypothesised distributions that was in force when each action was taken:
//
//   Z1  mean of p(a) / max_k p(k)                  (relative likelihood)
//   Z2  mean of 1 - E_{k~p} |p(a) - p(k)|          (probability similarity)
//   Z3  sum_k min(freq(k), mean p(k))              (frequency overlap)
//
// All three lie in [0, 1]. The hypothesised sequence is shared by every
// vector scored against the same hypothesis, so it is tracked once in a
// HypothesisTrack and each per-vector ScoreState only keeps what depends on
// the vector's own actions.

#ifndef BHTEST_SCORES_H_
#define BHTEST_SCORES_H_

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bhtest/core.h"

namespace bhtest {

enum class ScoreId { kZ1 = 0, kZ2 = 1, kZ3 = 2 };

inline constexpr int kNumScoreIds = 3;

const char* ScoreIdName(ScoreId id);  // "z1", "z2", "z3"

// A nonempty set of score ids, kept in ascending order.
class ScoreSet {
 public:
  // Throws kInvalidConfig on an empty or duplicated list.
  explicit ScoreSet(std::vector<ScoreId> ids);
  static ScoreSet All();
  // Parses "z1,z3" (also "1,3" and "[1 3]"-style separators).
  static ScoreSet Parse(std::string_view text);

  std::span<const ScoreId> ids() const { return ids_; }
  int size() const { return static_cast<int>(ids_.size()); }
  bool contains(ScoreId id) const;
  std::string ToString() const;  // "z1,z3"

  bool operator==(const ScoreSet&) const = default;

 private:
  std::vector<ScoreId> ids_;
};

// Everything the scores need from one hypothesised distribution, computed
// once per time step and reused for every vector.
class StepRecord {
 public:
  explicit StepRecord(ActionDistribution d);

  const ActionDistribution& distribution() const { return dist_; }
  int num_actions() const { return dist_.num_actions(); }
  double z1_term(ActionId a) const { return z1_terms_[a.index]; }
  double z2_term(ActionId a) const { return z2_terms_[a.index]; }

 private:
  ActionDistribution dist_;
  std::vector<double> z1_terms_;
  std::vector<double> z2_terms_;
};

// Running sum of the hypothesised distributions (shared across vectors).
class HypothesisTrack {
 public:
  HypothesisTrack() = default;
  explicit HypothesisTrack(int num_actions);

  void Absorb(const StepRecord& step);

  std::int64_t t() const { return t_; }
  std::span<const double> dist_sum() const { return dist_sum_; }

 private:
  std::int64_t t_ = 0;
  std::vector<double> dist_sum_;
};

// Per-vector sufficient statistics.
struct ScoreState {
  std::int64_t t = 0;
  double sum_z1 = 0.0;
  double sum_z2 = 0.0;
  std::vector<std::int64_t> counts;

  ScoreState() = default;
  explicit ScoreState(int num_actions) : counts(num_actions, 0) {}

  void Absorb(ActionId a, const StepRecord& step);
};

// Throws kEmptyState when state.t == 0 and kLengthMismatch when the state and
// the track have absorbed different numbers of steps.
double ScoreValue(const ScoreState& state, const HypothesisTrack& track,
                  ScoreId id);

// Writes the values of `ids` (in order) to `out`, which must have ids.size()
// entries.
void ScoreValues(const ScoreState& state, const HypothesisTrack& track,
                 const ScoreSet& ids, std::span<double> out);

// A single vector scored on its own, owning its hypothesis track.
class ScoreTracker {
 public:
  explicit ScoreTracker(int num_actions)
      : state_(num_actions), track_(num_actions) {}

  void Update(ActionId a, const ActionDistribution& d);
  double Value(ScoreId id) const { return ScoreValue(state_, track_, id); }

  const ScoreState& state() const { return state_; }
  const HypothesisTrack& track() const { return track_; }

 private:
  ScoreState state_;
  HypothesisTrack track_;
};

}  // namespace bhtest

#endif  // BHTEST_SCORES_H_
