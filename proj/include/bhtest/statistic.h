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

// Two-vector test statistic.
//
// T(x, y) = (1/t) sum_{tau=1..t} T_tau, where T_tau combines the per-score
// differences z_k(x[:tau]) - z_k(y[:tau]) with weights chosen by a
// WeightingScheme. Each step only needs the current prefix scores, so the
// statistic is a running sum.

#ifndef BHTEST_STATISTIC_H_
#define BHTEST_STATISTIC_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "bhtest/scores.h"

namespace bhtest {

enum class WeightingScheme { kUniform, kTrueMax, kTrueMin, kMax, kMin };

const char* WeightingSchemeName(WeightingScheme scheme);
WeightingScheme ParseWeightingScheme(std::string_view name);

// Weighted combination of per-score differences. Selector schemes put all
// weight on the first maximiser/minimiser (of |diff| for TrueMax/TrueMin, of
// the signed diff for Max/Min).
double CombineDifferences(std::span<const double> diffs,
                          WeightingScheme scheme);

// T_tau for two states that absorbed the same number of steps.
double TTau(const ScoreState& left, const ScoreState& right,
            const HypothesisTrack& track, WeightingScheme scheme,
            const ScoreSet& ids);

class PairStatistic {
 public:
  PairStatistic(WeightingScheme scheme, ScoreSet ids)
      : scheme_(scheme), ids_(std::move(ids)) {}

  // Both states must already hold step t() + 1.
  void Update(const ScoreState& left, const ScoreState& right,
              const HypothesisTrack& track);
  // Same, from precomputed score values in ScoreSet order.
  void Update(std::span<const double> left_scores,
              std::span<const double> right_scores);

  std::int64_t t() const { return t_; }
  double cumulative() const { return cum_; }
  // Throws kEmptyState before the first update.
  double value() const;

  WeightingScheme scheme() const { return scheme_; }
  const ScoreSet& ids() const { return ids_; }

 private:
  WeightingScheme scheme_;
  ScoreSet ids_;
  std::int64_t t_ = 0;
  double cum_ = 0.0;
};

}  // namespace bhtest

#endif  // BHTEST_STATISTIC_H_
