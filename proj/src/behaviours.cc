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

#include "bhtest/behaviours.h"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

namespace bhtest {
namespace {

// Stream ids used when generating descriptors from a seed.
constexpr std::uint64_t kStructureStream = 11;
constexpr std::uint64_t kGameStream = 12;

double UnitFromBits(std::uint64_t bits) {
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

const char* BehaviourClassName(BehaviourClass c) {
  switch (c) {
    case BehaviourClass::kRandom: return "random";
    case BehaviourClass::kLft: return "lft";
    case BehaviourClass::kCdt: return "cdt";
    case BehaviourClass::kCnn: return "cnn";
  }
  return "?";
}

BehaviourClass ParseBehaviourClass(std::string_view name) {
  for (auto c : {BehaviourClass::kRandom, BehaviourClass::kLft,
                 BehaviourClass::kCdt, BehaviourClass::kCnn}) {
    if (name == BehaviourClassName(c)) return c;
  }
  throw Error(ErrorCode::kInvalidConfig,
              "unknown behaviour class '" + std::string(name) + "'");
}

double MatrixGame::payoff(Agent player, ActionId own, ActionId other) const {
  const auto& table = payoffs[static_cast<int>(player)];
  return player == Agent::kI ? table[own.index][other.index]
                             : table[other.index][own.index];
}

ActionId MatrixGame::Maximin(Agent player) const {
  ActionId best(0);
  double best_floor = -1e300;
  for (int a = 0; a < 2; ++a) {
    double floor = 1e300;
    for (int b = 0; b < 2; ++b) {
      floor = std::min(floor, payoff(player, ActionId(a), ActionId(b)));
    }
    if (floor > best_floor) {
      best_floor = floor;
      best = ActionId(a);
    }
  }
  return best;
}

MatrixGame GenerateGame(std::uint64_t seed) {
  RandomSource rng(seed, kGameStream);
  MatrixGame game;
  game.seed = seed;
  for (auto& player : game.payoffs) {
    for (auto& row : player) {
      for (double& v : row) v = rng.Uniform();
    }
  }
  return game;
}

ActionDistribution RandomBehaviourDist(const RandomBehaviourDescriptor& desc,
                                       std::int64_t t) {
  // Counter-based: the draws for step t depend only on (seed, t).
  const std::uint64_t base =
      DeriveSeed(desc.seed, static_cast<std::uint64_t>(t));
  std::vector<double> probs(desc.num_actions);
  double sum = 0.0;
  for (int k = 0; k < desc.num_actions; ++k) {
    probs[k] = UnitFromBits(DeriveSeed(base, static_cast<std::uint64_t>(k)));
    sum += probs[k];
  }
  for (double& p : probs) p /= sum;
  return ActionDistribution(std::move(probs));
}

ActionDistribution LftDist(const LftDescriptor& desc,
                           const InteractionHistory& history,
                           Agent perspective) {
  const Agent other = Other(perspective);
  const std::int64_t t = history.t();
  const auto len = static_cast<std::int64_t>(desc.target_cycle.size());
  bool punishing = false;
  for (std::int64_t tau = std::max<std::int64_t>(0, t - desc.punish_len);
       tau < t; ++tau) {
    if (history.at(tau).of(other) != desc.target_cycle[tau % len].of(other)) {
      punishing = true;
      break;
    }
  }
  const ActionId intended =
      punishing ? desc.punish_action[static_cast<int>(perspective)]
                : desc.target_cycle[t % len].of(perspective);
  std::vector<double> probs(2, desc.noise / 2.0);
  probs[intended.index] += 1.0 - desc.noise;
  return ActionDistribution(std::move(probs));
}

ActionDistribution TreeDist(const CdtDescriptor& desc,
                            const InteractionHistory& history,
                            Agent perspective) {
  const std::int64_t t = history.t();
  const Agent other = Other(perspective);
  // Steps before the start of the history read as action 0.
  std::size_t leaf = 0, radix = 1;
  for (int k = 0; k < desc.depth && k < t; ++k) {
    leaf += static_cast<std::size_t>(history.at(t - 1 - k).of(other).index) * radix;
    radix *= static_cast<std::size_t>(desc.opponent_actions);
  }
  return ActionDistribution::PointMass(desc.num_actions, desc.leaves[leaf]);
}

ActionDistribution NetDist(const CnnDescriptor& desc,
                           const InteractionHistory& history,
                           Agent perspective) {
  constexpr int kH = CnnDescriptor::kHidden;
  const Agent other = Other(perspective);
  const int per_step = desc.num_actions * desc.opponent_actions;
  const int n_in = desc.inputs();
  const std::int64_t t = history.t();

  // The input is one-hot per window slot, so the first layer is a sum of
  // weight columns.
  std::array<double, kH> hidden;
  for (int h = 0; h < kH; ++h) hidden[h] = desc.b_hidden[h];
  for (int k = 0; k < desc.window && k < t; ++k) {
    const JointAction& ja = history.at(t - 1 - k);
    const int col = k * per_step + ja.of(perspective).index * desc.opponent_actions +
                    ja.of(other).index;
    for (int h = 0; h < kH; ++h) hidden[h] += desc.w_hidden[h * n_in + col];
  }
  for (double& v : hidden) v = std::tanh(v);

  std::vector<double> logits(desc.num_actions);
  for (int a = 0; a < desc.num_actions; ++a) {
    double z = desc.b_out[a];
    for (int h = 0; h < kH; ++h) z += desc.w_out[a * kH + h] * hidden[h];
    logits[a] = z;
  }
  const double top = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (double& z : logits) {
    z = std::exp(z - top);
    sum += z;
  }
  for (double& z : logits) z /= sum;
  return ActionDistribution(std::move(logits));
}

LftDescriptor GenerateLft(std::uint64_t seed, const MatrixGame& game) {
  RandomSource rng(seed, kStructureStream);
  LftDescriptor desc;
  desc.seed = seed;
  desc.game = game;
  const int len = 1 + rng.UniformInt(3);
  for (int k = 0; k < len; ++k) {
    desc.target_cycle.push_back(
        {ActionId(rng.UniformInt(2)), ActionId(rng.UniformInt(2))});
  }
  desc.punish_action = {game.Maximin(Agent::kI), game.Maximin(Agent::kJ)};
  desc.punish_len = 1 + rng.UniformInt(5);
  desc.noise = 0.1 * rng.Uniform();
  return desc;
}

CdtDescriptor GenerateCdt(std::uint64_t seed, const MatrixGame& game) {
  RandomSource rng(seed, kStructureStream);
  CdtDescriptor desc;
  desc.seed = seed;
  // Trees evolved for the same game share their shape.
  desc.depth = 3 + RandomSource(game.seed, kStructureStream).UniformInt(2);
  desc.num_actions = 2;
  desc.opponent_actions = 2;
  desc.leaves.resize(std::size_t{1} << desc.depth);
  for (auto& leaf : desc.leaves) leaf = ActionId(rng.UniformInt(2));
  return desc;
}

CnnDescriptor GenerateCnn(std::uint64_t seed, const MatrixGame& game) {
  (void)game;
  constexpr int kH = CnnDescriptor::kHidden;
  constexpr double kWeightRange = 1.5;
  RandomSource rng(seed, kStructureStream);
  CnnDescriptor desc;
  desc.seed = seed;
  desc.window = 1 + rng.UniformInt(4);
  desc.num_actions = 2;
  desc.opponent_actions = 2;
  auto weight = [&] { return kWeightRange * (2.0 * rng.Uniform() - 1.0); };
  desc.w_hidden.resize(static_cast<std::size_t>(kH) * desc.inputs());
  for (double& w : desc.w_hidden) w = weight();
  desc.b_hidden.resize(kH);
  for (double& w : desc.b_hidden) w = weight();
  desc.w_out.resize(static_cast<std::size_t>(desc.num_actions) * kH);
  for (double& w : desc.w_out) w = weight();
  desc.b_out.resize(desc.num_actions);
  for (double& w : desc.b_out) w = weight();
  return desc;
}

BehaviourDescriptor GenerateBehaviour(BehaviourClass c, std::uint64_t seed,
                                      int num_actions, const MatrixGame& game) {
  switch (c) {
    case BehaviourClass::kRandom:
      if (num_actions < 2) {
        throw Error(ErrorCode::kTooFewActions, "random behaviour needs >= 2");
      }
      return RandomBehaviourDescriptor{seed, num_actions};
    case BehaviourClass::kLft: return GenerateLft(seed, game);
    case BehaviourClass::kCdt: return GenerateCdt(seed, game);
    case BehaviourClass::kCnn: return GenerateCnn(seed, game);
  }
  throw Error(ErrorCode::kInvalidConfig, "unknown behaviour class");
}

BehaviourClass ClassOf(const BehaviourDescriptor& desc) {
  return std::visit(
      Overloaded{
          [](const RandomBehaviourDescriptor&) { return BehaviourClass::kRandom; },
          [](const LftDescriptor&) { return BehaviourClass::kLft; },
          [](const CdtDescriptor&) { return BehaviourClass::kCdt; },
          [](const CnnDescriptor&) { return BehaviourClass::kCnn; }},
      desc);
}

std::string DescribeDescriptor(const BehaviourDescriptor& desc) {
  using nlohmann::json;
  json j;
  j["class"] = BehaviourClassName(ClassOf(desc));
  std::visit(
      Overloaded{
          [&](const RandomBehaviourDescriptor& d) {
            j["seed"] = d.seed;
            j["actions"] = d.num_actions;
          },
          [&](const LftDescriptor& d) {
            j["seed"] = d.seed;
            json cycle = json::array();
            for (const auto& ja : d.target_cycle) {
              cycle.push_back({ja.i.index, ja.j.index});
            }
            j["target_cycle"] = cycle;
            j["punish_action"] = {d.punish_action[0].index,
                                  d.punish_action[1].index};
            j["punish_len"] = d.punish_len;
            j["noise"] = d.noise;
          },
          [&](const CdtDescriptor& d) {
            j["seed"] = d.seed;
            j["depth"] = d.depth;
            json leaves = json::array();
            for (auto leaf : d.leaves) leaves.push_back(leaf.index);
            j["leaves"] = leaves;
          },
          [&](const CnnDescriptor& d) {
            j["seed"] = d.seed;
            j["window"] = d.window;
            j["hidden"] = CnnDescriptor::kHidden;
          }},
      desc);
  return j.dump();
}

ActionDistribution DescribedBehaviour::Distribution(
    const InteractionHistory& history, Agent perspective) const {
  return std::visit(
      Overloaded{
          [&](const RandomBehaviourDescriptor& d) {
            return RandomBehaviourDist(d, history.t());
          },
          [&](const LftDescriptor& d) { return LftDist(d, history, perspective); },
          [&](const CdtDescriptor& d) { return TreeDist(d, history, perspective); },
          [&](const CnnDescriptor& d) { return NetDist(d, history, perspective); }},
      desc_);
}

int DescribedBehaviour::num_actions() const {
  return std::visit(
      Overloaded{[](const RandomBehaviourDescriptor& d) { return d.num_actions; },
                 [](const LftDescriptor&) { return 2; },
                 [](const CdtDescriptor& d) { return d.num_actions; },
                 [](const CnnDescriptor& d) { return d.num_actions; }},
      desc_);
}

}  // namespace bhtest
