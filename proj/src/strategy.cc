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

#include "klss/strategy.h"

#include <cmath>
#include <string>

#include "klss/error.h"

namespace klss {

BehaviorStrategy UniformBehavior(const Game& game, Player player) {
  const PlayerView& v = game.view(player);
  BehaviorStrategy b{player, std::vector<double>(v.num_sequences(), 1.0)};
  for (const DecisionInfoset& info : v.infosets()) {
    for (int a = 0; a < info.num_actions(); ++a) {
      b.probs[info.first_sequence + a] = 1.0 / info.num_actions();
    }
  }
  return b;
}

SequenceFormStrategy BehaviorToSequence(const Game& game,
                                        const BehaviorStrategy& behavior) {
  const PlayerView& v = game.view(behavior.player);
  Check(behavior.size() == v.num_sequences(), ErrorCode::kDimensionMismatch,
        "behavior has " + std::to_string(behavior.size()) +
            " entries, expected " + std::to_string(v.num_sequences()));
  SequenceFormStrategy s{behavior.player,
                         std::vector<double>(v.num_sequences(), 0.0)};
  s.values[0] = 1.0;
  for (const DecisionInfoset& info : v.infosets()) {
    double total = 0;
    for (int a = 0; a < info.num_actions(); ++a) {
      double p = behavior.probs[info.first_sequence + a];
      Check(p >= -1e-12 && std::isfinite(p), ErrorCode::kNonDistribution,
            "negative probability at " + v.PathString(info.entry));
      total += p;
    }
    Check(std::abs(total - 1.0) <= 1e-9, ErrorCode::kNonDistribution,
          "row at " + v.PathString(info.entry) + " sums to " +
              std::to_string(total));
    const double base = s.values[info.parent_sequence];
    for (int a = 0; a < info.num_actions(); ++a) {
      s.values[info.first_sequence + a] =
          base * behavior.probs[info.first_sequence + a];
    }
  }
  return s;
}

BehaviorStrategy SequenceToBehavior(const Game& game,
                                    const SequenceFormStrategy& strategy) {
  const PlayerView& v = game.view(strategy.player);
  Check(strategy.size() == v.num_sequences(), ErrorCode::kDimensionMismatch,
        "strategy size mismatch");
  BehaviorStrategy b{strategy.player,
                     std::vector<double>(v.num_sequences(), 1.0)};
  for (const DecisionInfoset& info : v.infosets()) {
    double total = 0;
    for (int a = 0; a < info.num_actions(); ++a) {
      total += std::max(0.0, strategy.values[info.first_sequence + a]);
    }
    for (int a = 0; a < info.num_actions(); ++a) {
      b.probs[info.first_sequence + a] =
          total > 0 ? std::max(0.0, strategy.values[info.first_sequence + a]) /
                          total
                    : 1.0 / info.num_actions();
    }
  }
  return b;
}

SequenceFormStrategy UniformStrategy(const Game& game, Player player) {
  return BehaviorToSequence(game, UniformBehavior(game, player));
}

void ValidateStrategy(const Game& game, const SequenceFormStrategy& strategy,
                      double tolerance) {
  const PlayerView& v = game.view(strategy.player);
  Check(strategy.size() == v.num_sequences(), ErrorCode::kDimensionMismatch,
        "strategy size mismatch");
  Check(std::abs(strategy.values[0] - 1.0) <= tolerance,
        ErrorCode::kNonDistribution, "empty sequence is not 1");
  for (const DecisionInfoset& info : v.infosets()) {
    double total = 0;
    for (int a = 0; a < info.num_actions(); ++a) {
      double x = strategy.values[info.first_sequence + a];
      Check(x >= -tolerance && x <= 1 + tolerance, ErrorCode::kNonDistribution,
            "value out of [0,1] at " + v.PathString(info.entry));
      total += x;
    }
    Check(std::abs(total - strategy.values[info.parent_sequence]) <= tolerance,
          ErrorCode::kNonDistribution,
          "flow conservation broken at " + v.PathString(info.entry));
  }
}

}  // namespace klss
