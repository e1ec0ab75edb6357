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

#ifndef KLSS_STATS_H_
#define KLSS_STATS_H_

#include <array>

#include "klss/game.h"

namespace klss {

enum class SamplingConvention {
  // Decision nodes, each with the infoset of the player to move.
  kDecisionNodes,
  // Every node; nature and terminal nodes use the observation class of the
  // most recent mover (plus at the top of the tree).
  kAllNodesLastMover,
};

struct GameStats {
  int nodes = 0;
  int infosets = 0;  // decision infosets of both players
  // Largest hypergraph distance between two decision nodes.
  int diameter = 0;
  // Average |I^k| for k = 1..4 and infinity.
  std::array<double, 5> avg_knowledge{};
};

GameStats ComputeStats(const Game& game, SamplingConvention convention =
                                             SamplingConvention::kDecisionNodes);

}  // namespace klss

#endif  // KLSS_STATS_H_
