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

#include "bhtest/scores.h"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace bhtest {

const char* ScoreIdName(ScoreId id) {
  switch (id) {
    case ScoreId::kZ1: return "z1";
    case ScoreId::kZ2: return "z2";
    case ScoreId::kZ3: return "z3";
  }
  return "?";
}

ScoreSet::ScoreSet(std::vector<ScoreId> ids) : ids_(std::move(ids)) {
  if (ids_.empty()) {
    throw Error(ErrorCode::kInvalidConfig, "score set must not be empty");
  }
  std::sort(ids_.begin(), ids_.end());
  if (std::adjacent_find(ids_.begin(), ids_.end()) != ids_.end()) {
    throw Error(ErrorCode::kInvalidConfig, "score set has duplicates");
  }
}

ScoreSet ScoreSet::All() {
  return ScoreSet({ScoreId::kZ1, ScoreId::kZ2, ScoreId::kZ3});
}

ScoreSet ScoreSet::Parse(std::string_view text) {
  std::vector<ScoreId> ids;
  for (char c : text) {
    if (c >= '1' && c <= '3') {
      ids.push_back(static_cast<ScoreId>(c - '1'));
    } else if (c == 'z' || c == 'Z' || c == ',' || c == ' ' || c == '[' ||
               c == ']') {
      continue;
    } else {
      throw Error(ErrorCode::kInvalidConfig,
                  "cannot parse score set '" + std::string(text) + "'");
    }
  }
  return ScoreSet(std::move(ids));
}

bool ScoreSet::contains(ScoreId id) const {
  return std::find(ids_.begin(), ids_.end(), id) != ids_.end();
}

std::string ScoreSet::ToString() const {
  std::string out;
  for (ScoreId id : ids_) {
    if (!out.empty()) out += ',';
    out += ScoreIdName(id);
  }
  return out;
}

StepRecord::StepRecord(ActionDistribution d)
    : dist_(std::move(d)),
      z1_terms_(dist_.num_actions()),
      z2_terms_(dist_.num_actions()) {
  const auto p = dist_.probs();
  const double max_p = *std::max_element(p.begin(), p.end());
  for (std::size_t a = 0; a < p.size(); ++a) {
    z1_terms_[a] = p[a] / max_p;
    double expected_gap = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) {
      expected_gap += p[k] * std::abs(p[a] - p[k]);
    }
    z2_terms_[a] = 1.0 - expected_gap;
  }
}

HypothesisTrack::HypothesisTrack(int num_actions)
    : dist_sum_(num_actions, 0.0) {}

void HypothesisTrack::Absorb(const StepRecord& step) {
  if (dist_sum_.empty()) dist_sum_.assign(step.num_actions(), 0.0);
  if (static_cast<int>(dist_sum_.size()) != step.num_actions()) {
    throw Error(ErrorCode::kLengthMismatch, "action count changed mid-run");
  }
  const auto p = step.distribution().probs();
  for (std::size_t k = 0; k < p.size(); ++k) dist_sum_[k] += p[k];
  ++t_;
}

void ScoreState::Absorb(ActionId a, const StepRecord& step) {
  if (counts.empty()) counts.assign(step.num_actions(), 0);
  if (a.index < 0 || a.index >= static_cast<int>(counts.size())) {
    throw Error(ErrorCode::kInvalidAction, "action outside the action set");
  }
  sum_z1 += step.z1_term(a);
  sum_z2 += step.z2_term(a);
  ++counts[a.index];
  ++t;
}

namespace {

void CheckAligned(const ScoreState& state, const HypothesisTrack& track) {
  if (state.t == 0) {
    throw Error(ErrorCode::kEmptyState, "score of an empty action vector");
  }
  if (state.t != track.t()) {
    throw Error(ErrorCode::kLengthMismatch,
                "score state and hypothesis track differ in length");
  }
}

double Z3(const ScoreState& state, const HypothesisTrack& track) {
  const auto dist_sum = track.dist_sum();
  double overlap = 0.0;
  for (std::size_t k = 0; k < dist_sum.size(); ++k) {
    overlap += std::min(static_cast<double>(state.counts[k]), dist_sum[k]);
  }
  return overlap / static_cast<double>(state.t);
}

double ValueUnchecked(const ScoreState& state, const HypothesisTrack& track,
                      ScoreId id) {
  const double t = static_cast<double>(state.t);
  switch (id) {
    case ScoreId::kZ1: return state.sum_z1 / t;
    case ScoreId::kZ2: return state.sum_z2 / t;
    case ScoreId::kZ3: return Z3(state, track);
  }
  return 0.0;
}

}  // namespace

double ScoreValue(const ScoreState& state, const HypothesisTrack& track,
                  ScoreId id) {
  CheckAligned(state, track);
  return ValueUnchecked(state, track, id);
}

void ScoreValues(const ScoreState& state, const HypothesisTrack& track,
                 const ScoreSet& ids, std::span<double> out) {
  CheckAligned(state, track);
  const auto list = ids.ids();
  for (std::size_t k = 0; k < list.size(); ++k) {
    out[k] = ValueUnchecked(state, track, list[k]);
  }
}

void ScoreTracker::Update(ActionId a, const ActionDistribution& d) {
  StepRecord step(d);
  state_.Absorb(a, step);
  track_.Absorb(step);
}

}  // namespace bhtest
