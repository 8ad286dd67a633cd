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

// Seeded behaviour families used by the experiments.
//
//   random  a fresh random distribution every step, ignoring the history
//   lft     leader-follower-trigger: follows a short target cycle of joint
//           actions and punishes deviations with its maximin action
//   cdt     deterministic decision tree over the opponent's last d actions
//   cnn     small tanh network over the last d joint actions, softmax output
//
// Each family is described by a plain value (a descriptor). Equal descriptors
// always produce equal distributions; unequal cdt/cnn descriptors can still
// be indistinguishable against a given opponent.

#ifndef BHTEST_BEHAVIOURS_H_
#define BHTEST_BEHAVIOURS_H_

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "bhtest/core.h"

namespace bhtest {

enum class BehaviourClass { kRandom, kLft, kCdt, kCnn };

const char* BehaviourClassName(BehaviourClass c);
BehaviourClass ParseBehaviourClass(std::string_view name);

// Two-player 2x2 game; payoffs[player][action of i][action of j].
struct MatrixGame {
  std::uint64_t seed = 0;
  std::array<std::array<std::array<double, 2>, 2>, 2> payoffs{};

  double payoff(Agent player, ActionId own, ActionId other) const;
  // Action maximising the worst-case payoff of `player` (lower index on ties).
  ActionId Maximin(Agent player) const;

  bool operator==(const MatrixGame&) const = default;
};

MatrixGame GenerateGame(std::uint64_t seed);

struct RandomBehaviourDescriptor {
  std::uint64_t seed = 0;
  int num_actions = 2;

  bool operator==(const RandomBehaviourDescriptor&) const = default;
};

// For the adaptive classes `seed` only records where a descriptor came from;
// equality compares the structure.

struct LftDescriptor {
  std::uint64_t seed = 0;
  MatrixGame game;
  std::vector<JointAction> target_cycle;
  // Maximin action of the game, per role the behaviour may play.
  std::array<ActionId, 2> punish_action{};
  int punish_len = 1;
  double noise = 0.0;

  bool operator==(const LftDescriptor& o) const {
    return game == o.game && target_cycle == o.target_cycle &&
           punish_action == o.punish_action && punish_len == o.punish_len &&
           noise == o.noise;
  }
};

struct CdtDescriptor {
  std::uint64_t seed = 0;
  int depth = 1;
  int num_actions = 2;
  int opponent_actions = 2;
  // leaves[sum_k opp[t-1-k] * opponent_actions^k]; size opponent_actions^depth.
  std::vector<ActionId> leaves;

  bool operator==(const CdtDescriptor& o) const {
    return depth == o.depth && num_actions == o.num_actions &&
           opponent_actions == o.opponent_actions && leaves == o.leaves;
  }
};

struct CnnDescriptor {
  static constexpr int kHidden = 8;

  std::uint64_t seed = 0;
  int window = 1;
  int num_actions = 2;
  int opponent_actions = 2;
  // Row-major [kHidden x inputs] with inputs = window * num_actions *
  // opponent_actions, then [num_actions x kHidden].
  std::vector<double> w_hidden;
  std::vector<double> b_hidden;
  std::vector<double> w_out;
  std::vector<double> b_out;

  int inputs() const { return window * num_actions * opponent_actions; }
  bool operator==(const CnnDescriptor& o) const {
    return window == o.window && num_actions == o.num_actions &&
           opponent_actions == o.opponent_actions && w_hidden == o.w_hidden &&
           b_hidden == o.b_hidden && w_out == o.w_out && b_out == o.b_out;
  }
};

using BehaviourDescriptor = std::variant<RandomBehaviourDescriptor,
                                         LftDescriptor, CdtDescriptor,
                                         CnnDescriptor>;

ActionDistribution RandomBehaviourDist(const RandomBehaviourDescriptor& desc,
                                       std::int64_t t);
ActionDistribution LftDist(const LftDescriptor& desc,
                           const InteractionHistory& history, Agent perspective);
ActionDistribution TreeDist(const CdtDescriptor& desc,
                            const InteractionHistory& history,
                            Agent perspective);
ActionDistribution NetDist(const CnnDescriptor& desc,
                           const InteractionHistory& history, Agent perspective);

LftDescriptor GenerateLft(std::uint64_t seed, const MatrixGame& game);
CdtDescriptor GenerateCdt(std::uint64_t seed, const MatrixGame& game);
CnnDescriptor GenerateCnn(std::uint64_t seed, const MatrixGame& game);

// Draws a behaviour of class `c`. `num_actions` applies to the random class;
// the adaptive classes play `game` and therefore have two actions.
BehaviourDescriptor GenerateBehaviour(BehaviourClass c, std::uint64_t seed,
                                      int num_actions, const MatrixGame& game);

BehaviourClass ClassOf(const BehaviourDescriptor& desc);
std::string DescribeDescriptor(const BehaviourDescriptor& desc);

class DescribedBehaviour : public Behaviour {
 public:
  explicit DescribedBehaviour(BehaviourDescriptor desc)
      : desc_(std::move(desc)) {}

  ActionDistribution Distribution(const InteractionHistory& history,
                                  Agent perspective) const override;
  int num_actions() const override;
  std::string Describe() const override { return DescribeDescriptor(desc_); }

  const BehaviourDescriptor& descriptor() const { return desc_; }

 private:
  BehaviourDescriptor desc_;
};

}  // namespace bhtest

#endif  // BHTEST_BEHAVIOURS_H_
