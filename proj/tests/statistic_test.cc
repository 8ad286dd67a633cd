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

#include <algorithm>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "bhtest/behaviours.h"

namespace bhtest {
namespace {

constexpr WeightingScheme kSchemes[] = {
    WeightingScheme::kUniform, WeightingScheme::kTrueMax,
    WeightingScheme::kTrueMin, WeightingScheme::kMax, WeightingScheme::kMin};

// Recomputes the scheme from its definition on a fresh copy of the diffs.
double OracleCombine(const std::vector<double>& diffs, WeightingScheme s) {
  const std::size_t k = diffs.size();
  std::size_t pick = 0;
  for (std::size_t i = 1; i < k; ++i) {
    const double a = diffs[i], b = diffs[pick];
    switch (s) {
      case WeightingScheme::kTrueMax:
        if (std::abs(a) > std::abs(b)) pick = i;
        break;
      case WeightingScheme::kTrueMin:
        if (std::abs(a) < std::abs(b)) pick = i;
        break;
      case WeightingScheme::kMax:
        if (a > b) pick = i;
        break;
      case WeightingScheme::kMin:
        if (a < b) pick = i;
        break;
      case WeightingScheme::kUniform: break;
    }
  }
  if (s == WeightingScheme::kUniform) {
    double sum = 0.0;
    for (double d : diffs) sum += d / static_cast<double>(k);
    return sum;
  }
  return diffs[pick];
}

TEST(CombineDifferencesTest, WorkedExample) {
  const std::vector<double> d = {0.2, -0.5, 0.1};
  EXPECT_NEAR(CombineDifferences(d, WeightingScheme::kUniform), -0.2 / 3,
              1e-15);
  EXPECT_NEAR(CombineDifferences(d, WeightingScheme::kUniform), -0.0667,
              5e-5);
  EXPECT_DOUBLE_EQ(CombineDifferences(d, WeightingScheme::kTrueMax), -0.5);
  EXPECT_DOUBLE_EQ(CombineDifferences(d, WeightingScheme::kTrueMin), 0.1);
  EXPECT_DOUBLE_EQ(CombineDifferences(d, WeightingScheme::kMax), 0.2);
  EXPECT_DOUBLE_EQ(CombineDifferences(d, WeightingScheme::kMin), -0.5);
}

TEST(CombineDifferencesTest, SingleScoreMakesSchemesCoincide) {
  const std::vector<double> d = {-0.37};
  for (auto s : kSchemes) EXPECT_DOUBLE_EQ(CombineDifferences(d, s), -0.37);
}

TEST(CombineDifferencesTest, TiesGoToFirstIndex) {
  const std::vector<double> d = {0.3, -0.3};
  EXPECT_DOUBLE_EQ(CombineDifferences(d, WeightingScheme::kTrueMax), 0.3);
  EXPECT_DOUBLE_EQ(CombineDifferences(d, WeightingScheme::kTrueMin), 0.3);
}

TEST(WeightingSchemeTest, NamesRoundTrip) {
  for (auto s : kSchemes) {
    EXPECT_EQ(ParseWeightingScheme(WeightingSchemeName(s)), s);
  }
  EXPECT_THROW(ParseWeightingScheme("median"), Error);
}

TEST(PairStatisticTest, IdenticalStreamsGiveZero) {
  for (auto s : kSchemes) {
    PairStatistic pair(s, ScoreSet::All());
    HypothesisTrack track;
    ScoreState x, y;
    RandomSource rng(4, 0);
    const RandomBehaviourDescriptor desc{77, 5};
    for (int t = 0; t < 100; ++t) {
      const StepRecord step(RandomBehaviourDist(desc, t));
      const ActionId a = SampleAction(step.distribution(), rng);
      track.Absorb(step);
      x.Absorb(a, step);
      y.Absorb(a, step);
      pair.Update(x, y, track);
      EXPECT_EQ(pair.value(), 0.0);
    }
  }
}

TEST(PairStatisticTest, EmptyStatisticThrows) {
  PairStatistic pair(WeightingScheme::kUniform, ScoreSet::All());
  EXPECT_THROW(pair.value(), Error);
}

TEST(PairStatisticTest, MatchesBatchRecomputation) {
  const std::vector<ScoreSet> sets = {
      ScoreSet::Parse("z1"), ScoreSet::Parse("z2,z3"), ScoreSet::All()};
  RandomSource rng(21, 0);
  const RandomBehaviourDescriptor px{5, 4}, py{6, 4}, hyp{7, 4};
  constexpr int kSteps = 150;
  std::vector<std::vector<double>> dists;
  std::vector<int> xs, ys;
  for (int t = 0; t < kSteps; ++t) {
    const auto d = RandomBehaviourDist(hyp, t);
    dists.emplace_back(d.probs().begin(), d.probs().end());
    xs.push_back(SampleAction(RandomBehaviourDist(px, t), rng).index);
    ys.push_back(SampleAction(RandomBehaviourDist(py, t), rng).index);
  }
  // Prefix scores straight from the definitions.
  auto z = [&](const std::vector<int>& acts, int tau, ScoreId id) {
    double s = 0.0;
    if (id == ScoreId::kZ3) {
      for (int j = 0; j < 4; ++j) {
        double f = 0.0, m = 0.0;
        for (int k = 0; k < tau; ++k) {
          f += acts[k] == j;
          m += dists[k][j];
        }
        s += std::min(f / tau, m / tau);
      }
      return s;
    }
    for (int k = 0; k < tau; ++k) {
      const auto& d = dists[k];
      const double pa = d[acts[k]];
      if (id == ScoreId::kZ1) {
        s += pa / *std::max_element(d.begin(), d.end());
      } else {
        double e = 0.0;
        for (double dk : d) e += dk * std::abs(pa - dk);
        s += 1.0 - e;
      }
    }
    return s / tau;
  };
  for (const auto& ids : sets) {
    for (auto scheme : kSchemes) {
      PairStatistic pair(scheme, ids);
      HypothesisTrack track;
      ScoreState x, y;
      double oracle_sum = 0.0;
      for (int t = 1; t <= kSteps; ++t) {
        const StepRecord step(ActionDistribution(dists[t - 1]));
        track.Absorb(step);
        x.Absorb(ActionId(xs[t - 1]), step);
        y.Absorb(ActionId(ys[t - 1]), step);
        pair.Update(x, y, track);
        std::vector<double> diffs;
        for (ScoreId id : ids.ids()) diffs.push_back(z(xs, t, id) - z(ys, t, id));
        oracle_sum += OracleCombine(diffs, scheme);
        EXPECT_NEAR(pair.value(), oracle_sum / t, 1e-9)
            << ids.ToString() << " " << WeightingSchemeName(scheme) << " t=" << t;
      }
    }
  }
}

TEST(PairStatisticTest, UniformIsAntisymmetric) {
  RandomSource rng(8, 0);
  const RandomBehaviourDescriptor hyp{3, 6};
  PairStatistic xy(WeightingScheme::kUniform, ScoreSet::All());
  PairStatistic yx(WeightingScheme::kUniform, ScoreSet::All());
  HypothesisTrack track;
  ScoreState x, y;
  for (int t = 0; t < 300; ++t) {
    const StepRecord step(RandomBehaviourDist(hyp, t));
    track.Absorb(step);
    x.Absorb(ActionId(rng.UniformInt(6)), step);
    y.Absorb(SampleAction(step.distribution(), rng), step);
    xy.Update(x, y, track);
    yx.Update(y, x, track);
    EXPECT_NEAR(xy.value(), -yx.value(), 1e-12);
  }
}

TEST(PairStatisticTest, NullPairsCentreNearZero) {
  constexpr int kPairs = 1000, kSteps = 100;
  const RandomBehaviourDescriptor hyp{99, 5};
  std::vector<StepRecord> steps;
  for (int t = 0; t < kSteps; ++t) steps.emplace_back(RandomBehaviourDist(hyp, t));
  double mean = 0.0;
  for (int n = 0; n < kPairs; ++n) {
    RandomSource rng(1234, static_cast<std::uint64_t>(n));
    PairStatistic pair(WeightingScheme::kUniform, ScoreSet::Parse("z1"));
    HypothesisTrack track;
    ScoreState x, y;
    for (const auto& step : steps) {
      track.Absorb(step);
      x.Absorb(SampleAction(step.distribution(), rng), step);
      y.Absorb(SampleAction(step.distribution(), rng), step);
      pair.Update(x, y, track);
    }
    mean += pair.value() / kPairs;
  }
  EXPECT_NEAR(mean, 0.0, 0.02);
}

}  // namespace
}  // namespace bhtest
