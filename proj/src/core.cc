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

#include "bhtest/core.h"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace bhtest {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNegativeProbability: return "NegativeProbability";
    case ErrorCode::kNotNormalized: return "NotNormalized";
    case ErrorCode::kTooFewActions: return "TooFewActions";
    case ErrorCode::kInvalidAction: return "InvalidAction";
    case ErrorCode::kEmptyState: return "EmptyState";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kDegenerateSample: return "DegenerateSample";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
      code_(code) {}

std::optional<ErrorCode> ValidateDistribution(std::span<const double> probs) {
  if (probs.size() < 2) return ErrorCode::kTooFewActions;
  double sum = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0)) return ErrorCode::kNegativeProbability;  // also NaN
    sum += p;
  }
  if (std::abs(sum - 1.0) > kNormalizationTolerance) {
    return ErrorCode::kNotNormalized;
  }
  return std::nullopt;
}

ActionDistribution::ActionDistribution(std::vector<double> probs)
    : probs_(std::move(probs)) {
  if (auto err = ValidateDistribution(probs_)) {
    std::ostringstream msg;
    msg << "invalid action distribution of length " << probs_.size();
    throw Error(*err, msg.str());
  }
}

ActionDistribution ActionDistribution::Uniform(int num_actions) {
  return ActionDistribution(std::vector<double>(
      num_actions > 0 ? num_actions : 0, 1.0 / std::max(num_actions, 1)));
}

ActionDistribution ActionDistribution::PointMass(int num_actions,
                                                 ActionId action) {
  if (action.index < 0 || action.index >= num_actions) {
    throw Error(ErrorCode::kInvalidAction, "point mass outside action set");
  }
  std::vector<double> probs(num_actions, 0.0);
  probs[action.index] = 1.0;
  return ActionDistribution(std::move(probs));
}

namespace {

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::mt19937_64 SeededEngine(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{
      static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
      static_cast<std::uint32_t>(stream),
      static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace

std::uint64_t DeriveSeed(std::uint64_t seed, std::uint64_t stream) {
  return SplitMix64(SplitMix64(seed) ^ SplitMix64(stream + 0x632be59bd9b4e019ULL));
}

RandomSource::RandomSource(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), stream_(stream), engine_(SeededEngine(seed, stream)) {}

double RandomSource::Uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RandomSource::UniformOpen() {
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

int RandomSource::UniformInt(int n) {
  // Multiply-shift keeps this platform independent; bias is < n / 2^64.
  const unsigned __int128 wide =
      static_cast<unsigned __int128>(engine_()) * static_cast<unsigned>(n);
  return static_cast<int>(wide >> 64);
}

ActionId SampleAction(const ActionDistribution& d, RandomSource& rng) {
  const double u = rng.Uniform();
  const auto probs = d.probs();
  double cumulative = 0.0;
  int last_positive = 0;
  for (int k = 0; k < static_cast<int>(probs.size()); ++k) {
    if (probs[k] <= 0.0) continue;
    cumulative += probs[k];
    last_positive = k;
    if (u < cumulative) return ActionId(k);
  }
  // Rounding left u above the final cumulative sum.
  return ActionId(last_positive);
}

InteractionHistory::InteractionHistory(int num_actions_i, int num_actions_j)
    : num_actions_i_(num_actions_i), num_actions_j_(num_actions_j) {
  if (num_actions_i < 2 || num_actions_j < 2) {
    throw Error(ErrorCode::kTooFewActions, "each agent needs >= 2 actions");
  }
}

void InteractionHistory::Append(JointAction joint) {
  if (joint.i.index < 0 || joint.i.index >= num_actions_i_ ||
      joint.j.index < 0 || joint.j.index >= num_actions_j_) {
    throw Error(ErrorCode::kInvalidAction, "joint action out of range");
  }
  joint_.push_back(joint);
}

int InteractionHistory::num_actions(Agent a) const {
  return a == Agent::kI ? num_actions_i_ : num_actions_j_;
}

}  // namespace bhtest
