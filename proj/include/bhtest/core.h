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

#ifndef BHTEST_CORE_H_
#define BHTEST_CORE_H_

#include <compare>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace bhtest {

enum class ErrorCode {
  kNegativeProbability,
  kNotNormalized,
  kTooFewActions,
  kInvalidAction,
  kEmptyState,
  kLengthMismatch,
  kDegenerateSample,
  kInvalidConfig,
  kIoError,
};

const char* ErrorCodeName(ErrorCode code);

// All library failures are reported through this exception type.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

struct ActionId {
  int index = 0;

  constexpr ActionId() = default;
  constexpr explicit ActionId(int i) : index(i) {}
  auto operator<=>(const ActionId&) const = default;
};

// The two participants of an interaction. kI is the observing agent, kJ the
// agent whose behaviour is under test.
enum class Agent { kI = 0, kJ = 1 };

constexpr Agent Other(Agent a) { return a == Agent::kI ? Agent::kJ : Agent::kI; }

inline constexpr double kNormalizationTolerance = 1e-9;

// Returns the first violated invariant of a probability vector, if any.
std::optional<ErrorCode> ValidateDistribution(std::span<const double> probs);

// A validated probability vector over a finite action set.
class ActionDistribution {
 public:
  // Throws Error when `probs` is not a valid distribution.
  explicit ActionDistribution(std::vector<double> probs);

  static ActionDistribution Uniform(int num_actions);
  static ActionDistribution PointMass(int num_actions, ActionId action);

  int num_actions() const { return static_cast<int>(probs_.size()); }
  double operator[](ActionId a) const { return probs_[a.index]; }
  double operator[](int k) const { return probs_[k]; }
  std::span<const double> probs() const { return probs_; }

  bool operator==(const ActionDistribution&) const = default;

 private:
  std::vector<double> probs_;
};

// Mixes a 64-bit seed with a stream index; used to fan a master seed out into
// independent sub-seeds.
std::uint64_t DeriveSeed(std::uint64_t seed, std::uint64_t stream);

// A reproducible stream of random numbers identified by (seed, stream id).
// Instances are single-owner; parallel consumers use distinct stream ids.
class RandomSource {
 public:
  RandomSource(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  std::uint64_t NextU64() { return engine_(); }
  // Uniform on [0, 1), 53 bits of resolution.
  double Uniform();
  // Uniform on the open interval (0, 1).
  double UniformOpen();
  // Uniform integer in [0, n).
  int UniformInt(int n);

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
};

// Inverse-CDF draw; consumes exactly one uniform. Ties resolve toward the
// lower index.
ActionId SampleAction(const ActionDistribution& d, RandomSource& rng);

struct JointAction {
  ActionId i;
  ActionId j;

  ActionId of(Agent a) const { return a == Agent::kI ? i : j; }
  bool operator==(const JointAction&) const = default;
};

// Append-only record of joint actions; entry k was played at time k.
class InteractionHistory {
 public:
  InteractionHistory(int num_actions_i, int num_actions_j);

  void Append(JointAction joint);

  std::int64_t t() const { return static_cast<std::int64_t>(joint_.size()); }
  const JointAction& at(std::int64_t k) const { return joint_[k]; }
  std::span<const JointAction> joint_actions() const { return joint_; }
  int num_actions(Agent a) const;

 private:
  int num_actions_i_;
  int num_actions_j_;
  std::vector<JointAction> joint_;
};

// A (possibly adaptive) mapping from histories to action distributions.
// Implementations must be deterministic in (descriptor, history).
class Behaviour {
 public:
  virtual ~Behaviour() = default;

  virtual ActionDistribution Distribution(const InteractionHistory& history,
                                          Agent perspective) const = 0;
  virtual int num_actions() const = 0;
  // Human-readable identification of the behaviour's parameters.
  virtual std::string Describe() const = 0;
};

}  // namespace bhtest

#endif  // BHTEST_CORE_H_
