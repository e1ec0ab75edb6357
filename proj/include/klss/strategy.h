// Copyright 2026 The klss Authors
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

#ifndef KLSS_STRATEGY_H_
#define KLSS_STRATEGY_H_

#include <vector>

#include "klss/game.h"

namespace klss {

// Realization plan: probability that the player plays every action of a
// sequence. Index 0 is the empty sequence.
struct SequenceFormStrategy {
  Player player = Player::kPlus;
  std::vector<double> values;

  double operator[](int seq) const { return values[seq]; }
  int size() const { return static_cast<int>(values.size()); }
};

// Local action probabilities stored at the sequence index of each action;
// entry 0 is unused and kept at 1.
struct BehaviorStrategy {
  Player player = Player::kPlus;
  std::vector<double> probs;

  double operator[](int seq) const { return probs[seq]; }
  int size() const { return static_cast<int>(probs.size()); }
};

BehaviorStrategy UniformBehavior(const Game& game, Player player);

SequenceFormStrategy BehaviorToSequence(const Game& game,
                                        const BehaviorStrategy& behavior);

// Unreached infosets get the uniform distribution.
BehaviorStrategy SequenceToBehavior(const Game& game,
                                    const SequenceFormStrategy& strategy);

SequenceFormStrategy UniformStrategy(const Game& game, Player player);

// Throws kDimensionMismatch or kNonDistribution.
void ValidateStrategy(const Game& game, const SequenceFormStrategy& strategy,
                      double tolerance = 1e-9);

// Reach probability contributed by the strategy's owner at `node`.
inline double NodeReach(const Game& game, const SequenceFormStrategy& s,
                        NodeId node) {
  return s.values[game.view(s.player).node_sequence(node)];
}

}  // namespace klss

#endif  // KLSS_STRATEGY_H_
