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

#include "klss/payoff.h"

#include <algorithm>
#include <string>

#include "klss/error.h"

namespace klss {

std::vector<BilinearEntry> PayoffMatrix(const Game& game,
                                        const PayoffAddends& addends) {
  const PlayerView& pv = game.view(Player::kPlus);
  const PlayerView& mv = game.view(Player::kMinus);
  std::vector<BilinearEntry> raw;
  raw.reserve(game.terminals().size() + addends.size());
  for (NodeId z : game.terminals()) {
    double w = game.node(z).utility * game.chance_reach(z);
    if (w == 0.0) continue;
    raw.push_back({pv.node_sequence(z), mv.node_sequence(z), w});
  }
  for (const auto& [key, value] : addends.entries()) {
    Check(key.first >= 0 && key.first < pv.num_sequences() && key.second >= 0 &&
              key.second < mv.num_entries(),
          ErrorCode::kDimensionMismatch, "addend key outside the game");
    if (value == 0.0) continue;
    raw.push_back({key.first, mv.entry(key.second).prefix_sequence, value});
  }
  std::sort(raw.begin(), raw.end(), [](const auto& a, const auto& b) {
    return std::pair(a.plus_sequence, a.minus_sequence) <
           std::pair(b.plus_sequence, b.minus_sequence);
  });
  std::vector<BilinearEntry> merged;
  merged.reserve(raw.size());
  for (const BilinearEntry& e : raw) {
    if (!merged.empty() && merged.back().plus_sequence == e.plus_sequence &&
        merged.back().minus_sequence == e.minus_sequence) {
      merged.back().value += e.value;
    } else {
      merged.push_back(e);
    }
  }
  return merged;
}

double ExpectedValue(const Game& game, const PayoffAddends& addends,
                     const SequenceFormStrategy& x,
                     const SequenceFormStrategy& y) {
  Check(x.player == Player::kPlus && y.player == Player::kMinus,
        ErrorCode::kDimensionMismatch, "strategies given for the wrong players");
  Check(x.size() == game.view(Player::kPlus).num_sequences() &&
            y.size() == game.view(Player::kMinus).num_sequences(),
        ErrorCode::kDimensionMismatch, "strategy size does not match the game");
  const PlayerView& pv = game.view(Player::kPlus);
  const PlayerView& mv = game.view(Player::kMinus);
  double total = 0;
  for (NodeId z : game.terminals()) {
    total += game.node(z).utility * game.chance_reach(z) *
             x[pv.node_sequence(z)] * y[mv.node_sequence(z)];
  }
  for (const auto& [key, value] : addends.entries()) {
    total += value * x[key.first] * y[mv.entry(key.second).prefix_sequence];
  }
  return total;
}

double ExpectedValue(const Game& game, const SequenceFormStrategy& x,
                     const SequenceFormStrategy& y) {
  return ExpectedValue(game, PayoffAddends{}, x, y);
}

}  // namespace klss
