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

#include "bhtest/statistic.h"

#include <array>
#include <cmath>

namespace bhtest {

const char* WeightingSchemeName(WeightingScheme scheme) {
  switch (scheme) {
    case WeightingScheme::kUniform: return "uniform";
    case WeightingScheme::kTrueMax: return "truemax";
    case WeightingScheme::kTrueMin: return "truemin";
    case WeightingScheme::kMax: return "max";
    case WeightingScheme::kMin: return "min";
  }
  return "?";
}

WeightingScheme ParseWeightingScheme(std::string_view name) {
  for (auto s : {WeightingScheme::kUniform, WeightingScheme::kTrueMax,
                 WeightingScheme::kTrueMin, WeightingScheme::kMax,
                 WeightingScheme::kMin}) {
    if (name == WeightingSchemeName(s)) return s;
  }
  throw Error(ErrorCode::kInvalidConfig,
              "unknown weighting scheme '" + std::string(name) + "'");
}

double CombineDifferences(std::span<const double> diffs,
                          WeightingScheme scheme) {
  if (diffs.empty()) {
    throw Error(ErrorCode::kLengthMismatch, "no score differences");
  }
  if (scheme == WeightingScheme::kUniform) {
    double sum = 0.0;
    for (double d : diffs) sum += d;
    return sum / static_cast<double>(diffs.size());
  }
  // Strict comparisons keep the first index on ties.
  std::size_t pick = 0;
  for (std::size_t k = 1; k < diffs.size(); ++k) {
    const double cand = diffs[k];
    const double best = diffs[pick];
    bool better = false;
    switch (scheme) {
      case WeightingScheme::kTrueMax:
        better = std::abs(cand) > std::abs(best);
        break;
      case WeightingScheme::kTrueMin:
        better = std::abs(cand) < std::abs(best);
        break;
      case WeightingScheme::kMax: better = cand > best; break;
      case WeightingScheme::kMin: better = cand < best; break;
      case WeightingScheme::kUniform: break;
    }
    if (better) pick = k;
  }
  return diffs[pick];
}

double TTau(const ScoreState& left, const ScoreState& right,
            const HypothesisTrack& track, WeightingScheme scheme,
            const ScoreSet& ids) {
  if (left.t != right.t) {
    throw Error(ErrorCode::kLengthMismatch, "T_tau on unequal prefixes");
  }
  std::array<double, kNumScoreIds> lz{}, rz{}, diff{};
  const std::size_t k = ids.ids().size();
  ScoreValues(left, track, ids, std::span(lz).first(k));
  ScoreValues(right, track, ids, std::span(rz).first(k));
  for (std::size_t i = 0; i < k; ++i) diff[i] = lz[i] - rz[i];
  return CombineDifferences(std::span<const double>(diff).first(k), scheme);
}

void PairStatistic::Update(const ScoreState& left, const ScoreState& right,
                           const HypothesisTrack& track) {
  if (left.t != t_ + 1 || right.t != t_ + 1) {
    throw Error(ErrorCode::kLengthMismatch,
                "pair update expects both states one step ahead");
  }
  cum_ += TTau(left, right, track, scheme_, ids_);
  ++t_;
}

void PairStatistic::Update(std::span<const double> left_scores,
                           std::span<const double> right_scores) {
  const std::size_t k = ids_.ids().size();
  if (left_scores.size() != k || right_scores.size() != k) {
    throw Error(ErrorCode::kLengthMismatch, "score vector size mismatch");
  }
  std::array<double, kNumScoreIds> diff{};
  for (std::size_t i = 0; i < k; ++i) diff[i] = left_scores[i] - right_scores[i];
  cum_ += CombineDifferences(std::span<const double>(diff).first(k), scheme_);
  ++t_;
}

double PairStatistic::value() const {
  if (t_ == 0) throw Error(ErrorCode::kEmptyState, "statistic has no steps");
  return cum_ / static_cast<double>(t_);
}

}  // namespace bhtest
